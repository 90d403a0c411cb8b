#include "cubep/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>

#include <nlohmann/json.hpp>

#include "cubep/operators.hpp"

namespace cubep {

namespace {

// sum_{i in S} delta_i with the usual bit-set = -1 encoding
double sign_sum(std::uint32_t delta, std::uint32_t s) {
    return __builtin_popcount(s) - 2.0 * __builtin_popcount(s & delta);
}

constexpr double kDenFloor = 1e-300;

// Moment of a spectrum-parametrized function: value and gradient of
// (E_eps ||U a||^p)^{1/p}, with an optional mask applied to the spectrum
// first (used to drop the mean term).
double plain_moment(const std::vector<double>& a, int n, int d, double p, const NormSpace& X,
                    bool drop_mean, std::vector<double>* grad) {
    std::vector<double> b = a;
    if (drop_mean)
        for (int c = 0; c < d; ++c) b[c] = 0.0;
    std::vector<double> vals = walsh_u(std::move(b), n, d);
    std::vector<double> partials;
    const double val = moment_with_partials(vals, d, p, X, grad ? &partials : nullptr);
    if (grad) {
        *grad = walsh_u(std::move(partials), n, d);
        if (drop_mean)
            for (int c = 0; c < d; ++c) (*grad)[c] = 0.0;
    }
    return val;
}

// (E_delta E_eps || U(coef(delta, .) . a) ||^p)^{1/p} over all 2^n delta
// sign patterns, with gradient w.r.t. the spectrum a.
double delta_mixture_moment(const std::vector<double>& a, int n, int d, double p,
                            const NormSpace& X,
                            const std::function<double(std::uint32_t, std::uint32_t)>& coef,
                            std::vector<double>* grad) {
    const std::size_t size = std::size_t{1} << n;
    const double dw = 1.0 / static_cast<double>(size);
    if (grad) grad->assign(a.size(), 0.0);

    double mean_pow = 0.0;
    std::vector<double> b(a.size()), partials;
    for (std::size_t delta = 0; delta < size; ++delta) {
        for (std::size_t s = 0; s < size; ++s) {
            const double c =
                coef(static_cast<std::uint32_t>(delta), static_cast<std::uint32_t>(s));
            for (int k = 0; k < d; ++k) b[s * d + k] = c * a[s * d + k];
        }
        std::vector<double> vals = walsh_u(b, n, d);
        const double ld = moment_with_partials(vals, d, p, X, grad ? &partials : nullptr);
        mean_pow += dw * std::pow(ld, p);
        if (grad && ld > 0) {
            std::vector<double> t = walsh_u(std::move(partials), n, d);
            const double outer = dw * std::pow(ld, p - 1.0);
            for (std::size_t s = 0; s < size; ++s) {
                const double c =
                    coef(static_cast<std::uint32_t>(delta), static_cast<std::uint32_t>(s));
                if (c == 0.0) continue;
                for (int k = 0; k < d; ++k) (*grad)[s * d + k] += outer * c * t[s * d + k];
            }
        }
    }
    const double val = std::pow(mean_pow, 1.0 / p);
    if (grad && val > 0) {
        const double scale = std::pow(val, 1.0 - p);
        for (auto& g : *grad) g *= scale;
    }
    return val;
}

class PisierProblem final : public RatioProblem {
  public:
    PisierProblem(const NormSpace& X, int n, double p) : X_(X), n_(n), p_(p) {}
    std::size_t dim() const override {
        return (std::size_t{1} << n_) * static_cast<std::size_t>(X_.dim());
    }
    double value(const std::vector<double>& a) const override {
        const double den = denominator(a);
        if (den < kDenFloor) throw DegenerateRatio("pisier ratio: constant witness");
        return plain_moment(a, n_, X_.dim(), p_, X_, true, nullptr) / den;
    }
    void grad_log(const std::vector<double>& a, std::vector<double>& g) const override {
        std::vector<double> gn, gd;
        const double num = plain_moment(a, n_, X_.dim(), p_, X_, true, &gn);
        const double den = delta_mixture_moment(a, n_, X_.dim(), p_, X_, sign_sum, &gd);
        if (num < kDenFloor || den < kDenFloor) throw DegenerateRatio("pisier ratio degenerate");
        g.resize(dim());
        for (std::size_t i = 0; i < dim(); ++i) g[i] = gn[i] / num - gd[i] / den;
    }
    double denominator(const std::vector<double>& a) const override {
        return delta_mixture_moment(a, n_, X_.dim(), p_, X_, sign_sum, nullptr);
    }
    bool smooth() const override { return X_.smooth(); }

  private:
    const NormSpace& X_;
    int n_;
    double p_;
};

double riesz_mix_coef(std::uint32_t delta, std::uint32_t s) {
    const int k = __builtin_popcount(s);
    return k == 0 ? 0.0 : sign_sum(delta, s) / k;
}

class DfProblem final : public RatioProblem {
  public:
    DfProblem(const NormSpace& X, int n, double p) : X_(X), n_(n), p_(p) {}
    std::size_t dim() const override {
        return (std::size_t{1} << n_) * static_cast<std::size_t>(X_.dim());
    }
    double value(const std::vector<double>& a) const override {
        const double den = denominator(a);
        if (den < kDenFloor) throw DegenerateRatio("df ratio: zero witness");
        return delta_mixture_moment(a, n_, X_.dim(), p_, X_, riesz_mix_coef, nullptr) / den;
    }
    void grad_log(const std::vector<double>& a, std::vector<double>& g) const override {
        std::vector<double> gn, gd;
        const double num = delta_mixture_moment(a, n_, X_.dim(), p_, X_, riesz_mix_coef, &gn);
        const double den = plain_moment(a, n_, X_.dim(), p_, X_, false, &gd);
        if (num < kDenFloor || den < kDenFloor) throw DegenerateRatio("df ratio degenerate");
        g.resize(dim());
        for (std::size_t i = 0; i < dim(); ++i) g[i] = gn[i] / num - gd[i] / den;
    }
    double denominator(const std::vector<double>& a) const override {
        return plain_moment(a, n_, X_.dim(), p_, X_, false, nullptr);
    }
    bool smooth() const override { return X_.smooth(); }

  private:
    const NormSpace& X_;
    int n_;
    double p_;
};

// Witness layout: n concatenated spectra a_i, each 2^n * d.
class DeltafiProblem final : public RatioProblem {
  public:
    DeltafiProblem(const NormSpace& X, int n, double p) : X_(X), n_(n), p_(p) {}
    std::size_t dim() const override {
        return static_cast<std::size_t>(n_) * (std::size_t{1} << n_) * X_.dim();
    }
    double value(const std::vector<double>& a) const override {
        const double den = denominator(a);
        if (den < kDenFloor) throw DegenerateRatio("deltafi ratio: constant witnesses");
        return numerator(a, nullptr) / den;
    }
    void grad_log(const std::vector<double>& a, std::vector<double>& g) const override {
        std::vector<double> gn, gd;
        const double num = numerator(a, &gn);
        const double den = den_impl(a, &gd);
        if (num < kDenFloor || den < kDenFloor) throw DegenerateRatio("deltafi ratio degenerate");
        g.resize(dim());
        for (std::size_t i = 0; i < dim(); ++i) g[i] = gn[i] / num - gd[i] / den;
    }
    double denominator(const std::vector<double>& a) const override {
        return den_impl(a, nullptr);
    }
    bool smooth() const override { return X_.smooth(); }

  private:
    // E || sum_i D_i f_i ||^p)^{1/p}: spectrum of the sum is
    // u(S) = sum_{i in S} a_i(S).
    double numerator(const std::vector<double>& a, std::vector<double>* grad) const {
        const int d = X_.dim();
        const std::size_t size = std::size_t{1} << n_;
        const std::size_t block = size * d;
        std::vector<double> u(block, 0.0);
        for (int i = 0; i < n_; ++i)
            for (std::size_t s = 0; s < size; ++s) {
                if (!((s >> i) & 1)) continue;
                for (int k = 0; k < d; ++k) u[s * d + k] += a[i * block + s * d + k];
            }
        std::vector<double> vals = walsh_u(std::move(u), n_, d);
        std::vector<double> partials;
        const double val = moment_with_partials(vals, d, p_, X_, grad ? &partials : nullptr);
        if (grad) {
            std::vector<double> t = walsh_u(std::move(partials), n_, d);
            grad->assign(dim(), 0.0);
            for (int i = 0; i < n_; ++i)
                for (std::size_t s = 0; s < size; ++s) {
                    if (!((s >> i) & 1)) continue;
                    for (int k = 0; k < d; ++k) (*grad)[i * block + s * d + k] = t[s * d + k];
                }
        }
        return val;
    }

    // (E_delta E_eps || sum_i delta_i Delta f_i ||^p)^{1/p}: per delta the
    // spectrum is |S| * sum_i delta_i a_i(S).
    double den_impl(const std::vector<double>& a, std::vector<double>* grad) const {
        const int d = X_.dim();
        const std::size_t size = std::size_t{1} << n_;
        const std::size_t block = size * d;
        const double dw = 1.0 / static_cast<double>(size);
        if (grad) grad->assign(dim(), 0.0);

        double mean_pow = 0.0;
        std::vector<double> b(block), partials;
        for (std::size_t delta = 0; delta < size; ++delta) {
            std::fill(b.begin(), b.end(), 0.0);
            for (int i = 0; i < n_; ++i) {
                const double sgn = (delta >> i) & 1 ? -1.0 : 1.0;
                for (std::size_t s = 0; s < size; ++s) {
                    const double c = sgn * __builtin_popcount(static_cast<std::uint32_t>(s));
                    if (c == 0.0) continue;
                    for (int k = 0; k < d; ++k) b[s * d + k] += c * a[i * block + s * d + k];
                }
            }
            std::vector<double> vals = walsh_u(b, n_, d);
            const double ld = moment_with_partials(vals, d, p_, X_, grad ? &partials : nullptr);
            mean_pow += dw * std::pow(ld, p_);
            if (grad && ld > 0) {
                std::vector<double> t = walsh_u(std::move(partials), n_, d);
                const double outer = dw * std::pow(ld, p_ - 1.0);
                for (int i = 0; i < n_; ++i) {
                    const double sgn = (delta >> i) & 1 ? -1.0 : 1.0;
                    for (std::size_t s = 0; s < size; ++s) {
                        const double c =
                            outer * sgn * __builtin_popcount(static_cast<std::uint32_t>(s));
                        if (c == 0.0) continue;
                        for (int k = 0; k < d; ++k)
                            (*grad)[i * block + s * d + k] += c * t[s * d + k];
                    }
                }
            }
        }
        const double val = std::pow(mean_pow, 1.0 / p_);
        if (grad && val > 0) {
            const double scale = std::pow(val, 1.0 - p_);
            for (auto& g : *grad) g *= scale;
        }
        return val;
    }

    const NormSpace& X_;
    int n_;
    double p_;
};

// Witness layout: raw two-cube values, index (delta << n | eps) * d + c.
class F1Problem final : public RatioProblem {
  public:
    F1Problem(const NormSpace& X, int n, double p) : X_(X), n_(n), p_(p) {}
    std::size_t dim() const override {
        return (std::size_t{1} << (2 * n_)) * static_cast<std::size_t>(X_.dim());
    }
    double value(const std::vector<double>& F) const override {
        const double den = denominator(F);
        if (den < kDenFloor) throw DegenerateRatio("f1 ratio: zero witness");
        return numerator(F, nullptr) / den;
    }
    void grad_log(const std::vector<double>& F, std::vector<double>& g) const override {
        std::vector<double> gn, gd;
        const double num = numerator(F, &gn);
        const double den = moment_with_partials(F, X_.dim(), p_, X_, &gd);
        if (num < kDenFloor || den < kDenFloor) throw DegenerateRatio("f1 ratio degenerate");
        g.resize(dim());
        for (std::size_t i = 0; i < dim(); ++i) g[i] = gn[i] / num - gd[i] / den;
    }
    double denominator(const std::vector<double>& F) const override {
        return moment_with_partials(F, X_.dim(), p_, X_, nullptr);
    }
    bool smooth() const override { return X_.smooth(); }

  private:
    // lp moment of u = sum_j Delta^{-1} D_j F_j with F_j = E_delta delta_j F.
    double numerator(const std::vector<double>& F, std::vector<double>* grad) const {
        const int d = X_.dim();
        const std::size_t size = std::size_t{1} << n_;
        const double inv_size = 1.0 / static_cast<double>(size);

        // spectrum of u: u_hat(S) = sum_j m_j(S) fhat_j(S)
        std::vector<double> u_hat(size * d, 0.0);
        std::vector<double> fj(size * d);
        for (int j = 0; j < n_; ++j) {
            std::fill(fj.begin(), fj.end(), 0.0);
            for (std::size_t delta = 0; delta < size; ++delta) {
                const double sgn = ((delta >> j) & 1 ? -1.0 : 1.0) * inv_size;
                const double* src = F.data() + (delta << n_) * d;
                for (std::size_t i = 0; i < size * static_cast<std::size_t>(d); ++i)
                    fj[i] += sgn * src[i];
            }
            std::vector<double> fhat = walsh_u(fj, n_, d);
            for (std::size_t s = 0; s < size; ++s) {
                const int k = __builtin_popcount(static_cast<std::uint32_t>(s));
                if (k == 0 || !((s >> j) & 1)) continue;
                const double m = inv_size / k;  // forward-transform scale folded in
                for (int c = 0; c < d; ++c) u_hat[s * d + c] += m * fhat[s * d + c];
            }
        }
        std::vector<double> uvals = walsh_u(std::move(u_hat), n_, d);
        std::vector<double> partials;
        const double val = moment_with_partials(uvals, d, p_, X_, grad ? &partials : nullptr);

        if (grad) {
            grad->assign(dim(), 0.0);
            std::vector<double> t = walsh_u(std::move(partials), n_, d);
            for (int j = 0; j < n_; ++j) {
                // A_j = M_j applied to the numerator partial field
                std::vector<double> aj(size * d, 0.0);
                for (std::size_t s = 0; s < size; ++s) {
                    const int k = __builtin_popcount(static_cast<std::uint32_t>(s));
                    if (k == 0 || !((s >> j) & 1)) continue;
                    const double m = inv_size / k;
                    for (int c = 0; c < d; ++c) aj[s * d + c] = m * t[s * d + c];
                }
                aj = walsh_u(std::move(aj), n_, d);
                for (std::size_t delta = 0; delta < size; ++delta) {
                    const double sgn = ((delta >> j) & 1 ? -1.0 : 1.0) * inv_size;
                    double* dst = grad->data() + (delta << n_) * d;
                    for (std::size_t i = 0; i < size * static_cast<std::size_t>(d); ++i)
                        dst[i] += sgn * aj[i];
                }
            }
        }
        return val;
    }

    const NormSpace& X_;
    int n_;
    double p_;
};

std::unique_ptr<RatioProblem> make_problem(InequalityKind kind, const NormSpace& X, int n,
                                           double p) {
    if (!(p >= 1.0) || std::isinf(p)) throw InvalidExponent("ratio exponent must be in [1, inf)");
    const int cap = kind == InequalityKind::Deltafi ? 10 : kMaxTwoCubeDim;
    if (n < 1 || n > cap)
        throw CapExceeded("maximize: n " + std::to_string(n) + " outside [1, " +
                          std::to_string(cap) + "] for " + kind_name(kind));
    switch (kind) {
        case InequalityKind::Pisier:
            return std::make_unique<PisierProblem>(X, n, p);
        case InequalityKind::Deltafi:
            return std::make_unique<DeltafiProblem>(X, n, p);
        case InequalityKind::F1:
            return std::make_unique<F1Problem>(X, n, p);
        case InequalityKind::Df:
            return std::make_unique<DfProblem>(X, n, p);
    }
    throw ConfigError("unknown inequality kind");
}

nlohmann::json witness_to_json(InequalityKind kind, int n, int d,
                               const std::vector<double>& w) {
    nlohmann::json j;
    j["n"] = n;
    j["d"] = d;
    switch (kind) {
        case InequalityKind::Pisier:
        case InequalityKind::Df:
            j["type"] = "cube";
            j["spectrum"] = w;
            break;
        case InequalityKind::Deltafi: {
            j["type"] = "cube_list";
            const std::size_t block = (std::size_t{1} << n) * d;
            nlohmann::json spectra = nlohmann::json::array();
            for (int i = 0; i < n; ++i)
                spectra.push_back(std::vector<double>(w.begin() + i * block,
                                                      w.begin() + (i + 1) * block));
            j["spectra"] = spectra;
            break;
        }
        case InequalityKind::F1:
            j["type"] = "two_cube";
            j["values"] = w;
            break;
    }
    return j;
}

}  // namespace

std::string kind_name(InequalityKind kind) {
    switch (kind) {
        case InequalityKind::Pisier:
            return "pisier";
        case InequalityKind::Deltafi:
            return "deltafi";
        case InequalityKind::F1:
            return "f1";
        case InequalityKind::Df:
            return "df";
    }
    return "?";
}

InequalityKind parse_kind(const std::string& name) {
    if (name == "pisier") return InequalityKind::Pisier;
    if (name == "deltafi") return InequalityKind::Deltafi;
    if (name == "f1") return InequalityKind::F1;
    if (name == "df") return InequalityKind::Df;
    throw ConfigError("unknown inequality kind: " + name);
}

double ratio_pisier(const CubeFunction& f, double p, const NormSpace& X) {
    if (f.d() != X.dim()) throw DimensionMismatch("ratio_pisier: codomain mismatch");
    return PisierProblem(X, f.n(), p).value(f.spectrum());
}

double ratio_deltafi(const std::vector<CubeFunction>& f_list, double p, const NormSpace& X) {
    const int n = static_cast<int>(f_list.size());
    if (n < 1) throw ConfigError("ratio_deltafi: empty function list");
    for (const auto& f : f_list)
        if (f.n() != n || f.d() != X.dim())
            throw DimensionMismatch("ratio_deltafi: expects n functions on the n-cube");
    std::vector<double> a;
    a.reserve(static_cast<std::size_t>(n) * (std::size_t{1} << n) * X.dim());
    for (const auto& f : f_list) {
        const auto& s = f.spectrum();
        a.insert(a.end(), s.begin(), s.end());
    }
    return DeltafiProblem(X, n, p).value(a);
}

double ratio_f1(const TwoCubeFunction& F, double p, const NormSpace& X) {
    if (F.d() != X.dim()) throw DimensionMismatch("ratio_f1: codomain mismatch");
    return F1Problem(X, F.n(), p).value(F.values());
}

double ratio_df(const CubeFunction& g, double p, const NormSpace& X) {
    if (g.d() != X.dim()) throw DimensionMismatch("ratio_df: codomain mismatch");
    return DfProblem(X, g.n(), p).value(g.spectrum());
}

ConstantEstimate maximize(InequalityKind kind, const NormSpace& X, int n, double p,
                          const OptimizerConfig& config,
                          const std::vector<double>* warm_start) {
    auto problem = make_problem(kind, X, n, p);
    if (warm_start && warm_start->size() != problem->dim())
        throw DimensionMismatch("maximize: warm start has wrong size");
    AscentResult r = ascend(*problem, config, warm_start);

    ConstantEstimate ce;
    ce.kind = kind;
    ce.n = n;
    ce.p = p;
    ce.norm = X.descriptor();
    ce.value = r.value;
    ce.witness = std::move(r.witness);
    ce.witness_json = witness_to_json(kind, n, X.dim(), ce.witness).dump();
    ce.restarts = r.restarts_used;
    ce.seed = config.seed;
    ce.iterations = r.iterations;
    ce.converged = r.converged;
    return ce;
}

double witness_ratio(InequalityKind kind, const NormSpace& X, int n, double p,
                     const std::vector<double>& witness) {
    auto problem = make_problem(kind, X, n, p);
    if (witness.size() != problem->dim())
        throw DimensionMismatch("witness_ratio: wrong witness size");
    return problem->value(witness);
}

ScalarOracle exact_p2_scalar(InequalityKind kind, int n) {
    if (n < 1 || n > kMaxCubeDim) throw CapExceeded("exact_p2_scalar: n out of range");
    // Diagonal Rayleigh quotients: Pisier and dF maximize 1/sqrt(|S|),
    // Deltafi maximizes 1/|S| (Cauchy-Schwarz per mode); all peak at |S| = 1.
    switch (kind) {
        case InequalityKind::Pisier:
        case InequalityKind::Df:
        case InequalityKind::Deltafi:
            return {1.0, 1};
        case InequalityKind::F1:
            throw UnsupportedKind("exact_p2_scalar: F1 is handled via the Deltafi reduction");
    }
    throw ConfigError("unknown inequality kind");
}

BoundResult f1log_bound_detail(int n, double p) {
    if (n < 1) throw ConfigError("f1log_bound: n must be >= 1");
    if (!(p >= 1.0) || std::isinf(p)) throw InvalidExponent("f1log_bound: p in [1, inf)");
    // minimize psi(r) = -p n log r + log log((1+r)/(1-r)) on (0,1)
    const auto psi = [&](double r) {
        return -p * n * std::log(r) + std::log(std::log((1.0 + r) / (1.0 - r)));
    };
    const int grid = 512;
    int best = 1;
    double best_v = std::numeric_limits<double>::infinity();
    for (int i = 1; i < grid; ++i) {
        const double r = static_cast<double>(i) / grid;
        const double v = psi(r);
        if (v < best_v) {
            best_v = v;
            best = i;
        }
    }
    double lo = std::max(1e-12, (best - 1.0) / grid);
    double hi = std::min(1.0 - 1e-12, (best + 1.0) / grid);
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
    double fc = psi(c), fd = psi(d);
    while (hi - lo > 1e-10) {
        if (fc < fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - gr * (hi - lo);
            fc = psi(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + gr * (hi - lo);
            fd = psi(d);
        }
    }
    const double r_star = 0.5 * (lo + hi);
    return {n, p, r_star, n * std::exp(psi(r_star) / p)};
}

double f1log_bound(int n, double p) { return f1log_bound_detail(n, p).bound; }

bool heat_lower_bound_check(const CubeFunction& f, double tau, double p, const NormSpace& X) {
    if (!(tau > 0)) throw NegativeTime("heat_lower_bound_check requires tau > 0");
    return lp_moment(f, p, X) <=
           std::exp(tau * f.n()) * lp_moment(heat(f, tau), p, X) + 1e-9;
}

namespace {

std::vector<double> embed_block(const std::vector<double>& v, int d_old, int d_new) {
    if (d_new == d_old) return v;
    if (d_new != 2 * d_old) throw DimensionMismatch("embed: codomain must stay or double");
    std::vector<double> out(v.size() * 2);
    const std::size_t rows = v.size() / d_old;
    for (std::size_t r = 0; r < rows; ++r)
        for (int c = 0; c < d_old; ++c) {
            out[r * d_new + c] = v[r * d_old + c];
            out[r * d_new + d_old + c] = v[r * d_old + c];
        }
    return out;
}

std::vector<double> embed_cube_spectrum(const std::vector<double>& a, int n, int d_old,
                                        int d_new) {
    const std::vector<double> dup = embed_block(a, d_old, d_new);
    std::vector<double> out((std::size_t{1} << (n + 1)) * d_new, 0.0);
    // spectrum supported on subsets of the first n coordinates
    std::copy(dup.begin(), dup.end(), out.begin());
    return out;
}

std::vector<double> embed_two_cube_values(const std::vector<double>& v, int n, int d_old,
                                          int d_new) {
    const std::vector<double> dup = embed_block(v, d_old, d_new);
    const std::size_t side = std::size_t{1} << n;
    const std::size_t new_side = side << 1;
    std::vector<double> out(new_side * new_side * d_new);
    for (std::size_t delta = 0; delta < new_side; ++delta)
        for (std::size_t eps = 0; eps < new_side; ++eps) {
            const std::size_t src = (((delta & (side - 1)) << n) | (eps & (side - 1))) * d_new;
            const std::size_t dst = ((delta << (n + 1)) | eps) * d_new;
            std::copy(dup.begin() + src, dup.begin() + src + d_new, out.begin() + dst);
        }
    return out;
}

}  // namespace

std::vector<double> embed_witness(InequalityKind kind, const std::vector<double>& witness,
                                  int n, int d_old, int d_new) {
    switch (kind) {
        case InequalityKind::Pisier:
        case InequalityKind::Df:
            return embed_cube_spectrum(witness, n, d_old, d_new);
        case InequalityKind::Deltafi: {
            const std::size_t block = (std::size_t{1} << n) * d_old;
            const std::size_t new_block = (std::size_t{1} << (n + 1)) * d_new;
            std::vector<double> out(static_cast<std::size_t>(n + 1) * new_block, 0.0);
            for (int i = 0; i < n; ++i) {
                std::vector<double> ai(witness.begin() + i * block,
                                       witness.begin() + (i + 1) * block);
                std::vector<double> e = embed_cube_spectrum(ai, n, d_old, d_new);
                std::copy(e.begin(), e.end(), out.begin() + i * new_block);
            }
            return out;  // f_{n+1} = 0
        }
        case InequalityKind::F1:
            return embed_two_cube_values(witness, n, d_old, d_new);
    }
    throw ConfigError("unknown inequality kind");
}

std::vector<ScanRow> scan(InequalityKind kind, const std::string& norm_family, int n_lo,
                          int n_hi, double p, const OptimizerConfig& config) {
    if (n_lo < 1 || n_hi < n_lo) throw ConfigError("scan: bad n range");

    const auto resolve = [&](int n) {
        std::string desc = norm_family;
        // token-level substitution of the literal value "n"
        std::string out;
        for (std::size_t i = 0; i < desc.size();) {
            if (desc[i] == '=' && i + 1 < desc.size() && desc[i + 1] == 'n' &&
                (i + 2 == desc.size() || desc[i + 2] == ',')) {
                out += "=" + std::to_string(n);
                i += 2;
            } else {
                out += desc[i];
                ++i;
            }
        }
        return NormSpace::parse(out);
    };

    std::vector<ScanRow> rows;
    std::vector<double> prev_witness;
    double prev_estimate = 0.0;
    int prev_d = 0;
    bool have_prev = false;

    for (int n = n_lo; n <= n_hi; ++n) {
        ScanRow row;
        row.n = n;
        try {
            const NormSpace X = resolve(n);
            std::vector<double> warm;
            const std::vector<double>* warm_ptr = nullptr;
            if (have_prev) {
                warm = embed_witness(kind, prev_witness, n - 1, prev_d, X.dim());
                warm_ptr = &warm;
            }
            ConstantEstimate ce = maximize(kind, X, n, p, config, warm_ptr);
            row.restarts = ce.restarts;
            row.converged = ce.converged;
            // monotone record keeping: never report below the embedded witness
            if (have_prev && ce.value < prev_estimate) {
                row.estimate = prev_estimate;
                prev_witness = warm;
            } else {
                row.estimate = ce.value;
                prev_witness = ce.witness;
            }
            prev_estimate = row.estimate;
            prev_d = X.dim();
            have_prev = true;
        } catch (const Error& e) {
            row.error = e.what();
            have_prev = false;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace cubep
