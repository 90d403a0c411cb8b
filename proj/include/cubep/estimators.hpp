#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cubep/norms.hpp"
#include "cubep/optimize.hpp"

namespace cubep {

enum class InequalityKind { Pisier, Deltafi, F1, Df };

std::string kind_name(InequalityKind kind);
InequalityKind parse_kind(const std::string& name);

// Ratio functionals for the four inequalities, evaluated at explicit
// witnesses.  All are reported in (1/p)-powered form and are invariant under
// scaling of the witness.  Rademacher averages over delta are exact
// enumerations over 2^n sign patterns.
double ratio_pisier(const CubeFunction& f, double p, const NormSpace& X);
double ratio_deltafi(const std::vector<CubeFunction>& f_list, double p, const NormSpace& X);
double ratio_f1(const TwoCubeFunction& F, double p, const NormSpace& X);
double ratio_df(const CubeFunction& g, double p, const NormSpace& X);

// Estimated inequality constant with its witness and provenance.  The value
// always equals the ratio recomputed from the stored witness; it is a lower
// bound on the true constant, not a certificate of optimality.
struct ConstantEstimate {
    InequalityKind kind = InequalityKind::Pisier;
    int n = 0;
    double p = 2.0;
    std::string norm;
    double value = 0.0;
    std::vector<double> witness;   // flat parameter vector, layout per kind
    std::string witness_json;      // serialized witness function(s)
    int restarts = 0;
    std::uint64_t seed = 0;
    int iterations = 0;
    bool converged = false;
};

// Multi-restart projected subgradient ascent on log(num) - log(den).
// Caps: n <= 7 for Pisier/F1/Df, n <= 10 for Deltafi.
ConstantEstimate maximize(InequalityKind kind, const NormSpace& X, int n, double p,
                          const OptimizerConfig& config,
                          const std::vector<double>* warm_start = nullptr);

// Recompute the ratio of a stored witness (layouts as produced by maximize).
double witness_ratio(InequalityKind kind, const NormSpace& X, int n, double p,
                     const std::vector<double>& witness);

// Closed-form Rayleigh-quotient suprema at p = 2, scalar target: the exact
// value and the Walsh degree attaining it.
struct ScalarOracle {
    double value = 0.0;
    int degree = 0;
};
ScalarOracle exact_p2_scalar(InequalityKind kind, int n);

// n * (min_{0<r<1} r^{-pn} log((1+r)/(1-r)))^{1/p}, by grid pre-scan plus
// golden-section refinement to 1e-10 in r.
struct BoundResult {
    int n = 0;
    double p = 0.0;
    double r_star = 0.0;
    double bound = 0.0;
};
BoundResult f1log_bound_detail(int n, double p);
double f1log_bound(int n, double p);

// ||f||_p <= e^{tau n} ||P_tau f||_p (plus 1e-9 slack); holds for all input.
bool heat_lower_bound_check(const CubeFunction& f, double tau, double p,
                            const NormSpace& X);

// Growth scan over n.  The norm family descriptor may use "n" as a value
// (e.g. "l1cube:k=n").  Each row is seeded from the previous row's witness
// embedded one dimension up, which preserves the ratio, so estimates never
// decrease.  Per-row errors are recorded and the scan continues.
struct ScanRow {
    int n = 0;
    double estimate = 0.0;
    int restarts = 0;
    bool converged = false;
    std::string error;
};
std::vector<ScanRow> scan(InequalityKind kind, const std::string& norm_family, int n_lo,
                          int n_hi, double p, const OptimizerConfig& config);

// Witness embedding used by scan: extends a flat witness from dimension n to
// n+1 as a function independent of the new coordinate, duplicating codomain
// entries when the target dimension doubles with n.
std::vector<double> embed_witness(InequalityKind kind, const std::vector<double>& witness,
                                  int n, int d_old, int d_new);

}  // namespace cubep
