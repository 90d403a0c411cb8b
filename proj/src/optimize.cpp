#include "cubep/optimize.hpp"

#include <cmath>
#include <random>

#include "cubep/parallel.hpp"

namespace cubep {

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t k) {
    // splitmix64 step
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (k + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

struct RestartOutcome {
    std::vector<double> witness;
    double value = -1.0;
    int iterations = 0;
    bool converged = false;
    bool degenerate = true;
};

RestartOutcome run_restart(const RatioProblem& problem, const OptimizerConfig& cfg,
                           int restart, const std::vector<double>* warm) {
    std::mt19937_64 rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(restart)));
    std::normal_distribution<double> gauss(0.0, 1.0);
    const std::size_t dim = problem.dim();

    RestartOutcome out;
    std::vector<double> x(dim);

    // starting point: warm start for restart 0, otherwise normal draws
    bool started = false;
    for (int attempt = 0; attempt < 16 && !started; ++attempt) {
        if (warm != nullptr && restart == 0 && attempt == 0) {
            x = *warm;
        } else {
            for (auto& xi : x) xi = gauss(rng);
        }
        try {
            const double den = problem.denominator(x);
            if (!(den > 1e-300)) continue;
            for (auto& xi : x) xi /= den;
            const double v = problem.value(x);
            if (!(v > 0.0) || !std::isfinite(v)) continue;
            out.value = v;
            started = true;
        } catch (const DegenerateRatio&) {
        }
    }
    if (!started) return out;
    out.degenerate = false;

    // Polak-Ribiere conjugate ascent on log(ratio) with Armijo backtracking.
    std::vector<double> g(dim), g_prev, dir(dim), xc(dim);
    double log_v = std::log(out.value);
    double step_start = cfg.init_step;
    for (int it = 0; it < cfg.max_iters; ++it) {
        out.iterations = it + 1;
        std::vector<double> x_eval = x;
        if (!problem.smooth()) {
            // nudge off potential kinks before the line search
            for (auto& xi : x_eval) xi += 1e-12 * gauss(rng);
        }
        try {
            problem.grad_log(x_eval, g);
        } catch (const DegenerateRatio&) {
            out.converged = true;
            break;
        }
        double gnorm = 0.0;
        for (double gi : g) gnorm += gi * gi;
        if (!(gnorm > 0.0) || !std::isfinite(gnorm)) {
            out.converged = true;
            break;
        }

        double beta = 0.0;
        if (!g_prev.empty()) {
            double num = 0.0, den = 0.0;
            for (std::size_t i = 0; i < dim; ++i) {
                num += g[i] * (g[i] - g_prev[i]);
                den += g_prev[i] * g_prev[i];
            }
            if (den > 0.0) beta = std::max(0.0, num / den);
        }
        double slope = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            dir[i] = g[i] + beta * dir[i];
            slope += g[i] * dir[i];
        }
        if (!(slope > 0.0)) {  // not an ascent direction: restart with the gradient
            dir = g;
            slope = gnorm;
        }

        bool improved = false;
        double step = step_start;
        double best_log = log_v;
        while (step >= cfg.min_step) {
            for (std::size_t i = 0; i < dim; ++i) xc[i] = x[i] + step * dir[i];
            try {
                const double den = problem.denominator(xc);
                if (den > 1e-300) {
                    for (auto& v : xc) v /= den;
                    const double v = problem.value(xc);
                    if (std::isfinite(v) && std::log(v) > log_v + 1e-4 * step * slope &&
                        std::log(v) > best_log) {
                        x = xc;
                        out.value = v;
                        best_log = std::log(v);
                        improved = true;
                        // normalization rescaled x; keep the CG history consistent
                        for (std::size_t i = 0; i < dim; ++i) {
                            g[i] *= den;
                            dir[i] *= den;
                        }
                        // let the next search start a bit above the accepted step
                        step_start = std::min(step / (cfg.step_shrink * cfg.step_shrink),
                                              1e6 * cfg.init_step);
                        break;
                    }
                }
            } catch (const DegenerateRatio&) {
            }
            step *= cfg.step_shrink;
        }
        g_prev = g;
        if (!improved || best_log - log_v < cfg.tol) {
            out.converged = true;
            log_v = best_log;
            break;
        }
        log_v = best_log;
    }
    out.witness = std::move(x);
    return out;
}

}  // namespace

AscentResult ascend(const RatioProblem& problem, const OptimizerConfig& config,
                    const std::vector<double>* warm_start) {
    if (config.restarts < 1 || config.max_iters < 1)
        throw ConfigError("optimizer needs positive restart and iteration budgets");
    if (config.threads > 0) set_threads(config.threads);

    const int R = config.restarts;
    std::vector<RestartOutcome> outcomes(R);
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < R; ++k)
        outcomes[k] = run_restart(problem, config, k, warm_start);

    AscentResult best;
    best.restarts_used = R;
    for (int k = 0; k < R; ++k) {
        const auto& o = outcomes[k];
        if (o.degenerate) {
            ++best.degenerate_restarts;
            continue;
        }
        if (o.value > best.value || best.best_restart < 0) {
            best.value = o.value;
            best.witness = o.witness;
            best.iterations = o.iterations;
            best.converged = o.converged;
            best.best_restart = k;
        }
    }
    if (best.best_restart < 0) throw AllRestartsDegenerate("all optimizer restarts degenerate");
    return best;
}

}  // namespace cubep
