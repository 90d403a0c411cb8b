#pragma once

#include <cstdint>
#include <vector>

#include "cubep/errors.hpp"

namespace cubep {

struct OptimizerConfig {
    int restarts = 32;
    int max_iters = 500;
    double init_step = 1.0;
    double step_shrink = 0.5;
    double min_step = 1e-10;
    double tol = 1e-8;  // convergence threshold on log-ratio improvement
    std::uint64_t seed = 0;
    int threads = 0;
};

// A scale-invariant ratio objective.  value() and denominator() must be
// 0- and 1-homogeneous respectively; grad_log is the gradient of
// log(numerator) - log(denominator) at x.
class RatioProblem {
  public:
    virtual ~RatioProblem() = default;
    virtual std::size_t dim() const = 0;
    virtual double value(const std::vector<double>& x) const = 0;
    virtual void grad_log(const std::vector<double>& x, std::vector<double>& g) const = 0;
    virtual double denominator(const std::vector<double>& x) const = 0;
    virtual bool smooth() const { return true; }
};

struct AscentResult {
    std::vector<double> witness;
    double value = 0.0;
    int iterations = 0;
    int restarts_used = 0;
    int best_restart = -1;
    bool converged = false;
    int degenerate_restarts = 0;
};

// Multi-restart projected subgradient ascent.  Restart k draws an
// independent generator from (seed, k); results are reduced by value with
// ties to the lowest restart index, so the outcome is deterministic
// regardless of thread count.  A warm start, when given, runs as restart 0
// and its starting ratio is never lost (steps only accept improvements).
AscentResult ascend(const RatioProblem& problem, const OptimizerConfig& config,
                    const std::vector<double>* warm_start = nullptr);

}  // namespace cubep
