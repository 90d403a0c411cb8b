#pragma once

#include <span>
#include <string>

#include "cubep/cube.hpp"
#include "cubep/optimize.hpp"

namespace cubep {

// Pluggable finite-dimensional norm with a value and subgradient oracle.
// Descriptor mini-language: "scalar", "ellq:d=8,q=1" (q may be "inf"),
// "l1cube:k=3", "linfcube:k=3".  L1Cube/LInfCube use the normalized counting
// measure on a k-dimensional sub-cube, so d = 2^k.
class NormSpace {
  public:
    enum class Kind { Scalar, EllQ, L1Cube, LInfCube };

    static NormSpace scalar();
    static NormSpace ellq(int d, double q);  // q in [1, inf]
    static NormSpace l1cube(int k);
    static NormSpace linfcube(int k);
    static NormSpace parse(const std::string& descriptor);

    Kind kind() const { return kind_; }
    int dim() const { return d_; }
    double q() const { return q_; }
    std::string descriptor() const;
    bool smooth() const;  // differentiable away from 0

    double eval(std::span<const double> v) const;
    // Subgradient g with <g, v> = eval(v) and dual norm at most 1.
    // Tie-breaking is deterministic (lowest max-attaining index for sup
    // norms, 0 at zero coordinates for q = 1).
    void subgradient(std::span<const double> v, std::span<double> g) const;

  private:
    NormSpace(Kind kind, int d, double q) : kind_(kind), d_(d), q_(q) {}
    Kind kind_;
    int d_;
    double q_;  // exponent for EllQ, unused otherwise
};

double lp_moment(const CubeFunction& f, double p, const NormSpace& X);

// (mean over rows of eval^p)^{1/p} on a flat array of vectors, with exact
// partial derivatives w.r.t. the stored entries when requested.
double moment_with_partials(const std::vector<double>& values, int d, double p,
                            const NormSpace& X, std::vector<double>* partials);
double two_cube_moment(const TwoCubeFunction& F, double p, const NormSpace& X);

// Exact average over all 2^m sign patterns of || sum_i delta_i x_i ||^p,
// to the power 1/p.  Caps m at 20.
double rademacher_moment(const std::vector<std::vector<double>>& xs, double p,
                         const NormSpace& X);

// Ratio evaluated by the moduli estimators at an explicit witness (an
// m-tuple of vectors, flattened row-major).
double cotype_ratio(const NormSpace& X, double q, std::span<const double> xs, int m);
double type_ratio(const NormSpace& X, double s, std::span<const double> xs, int m);
double k_convexity_ratio(const NormSpace& X, int n, double s, const CubeFunction& g);

struct ModulusEstimate {
    double value = 0.0;
    std::vector<double> witness;
    int restarts_used = 0;
    bool converged = false;
};

// Empirical lower bounds on the cotype-q / type-s / K-convexity moduli,
// by multi-restart subgradient ascent.  Normalization fixes the second
// moment of the Rademacher sum for cotype and type.
ModulusEstimate cotype_estimate(const NormSpace& X, double q, int m,
                                const OptimizerConfig& config);
ModulusEstimate type_estimate(const NormSpace& X, double s, int m,
                              const OptimizerConfig& config);
ModulusEstimate k_convexity_estimate(const NormSpace& X, int n, double s,
                                     const OptimizerConfig& config);

}  // namespace cubep
