#include "cubep/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace cubep {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int parse_int(const std::string& s) {
    std::size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw ConfigError("bad integer in norm descriptor: " + s);
    return v;
}

double pow_signed(double x, double e) { return x == 0.0 ? 0.0 : std::pow(x, e); }

}  // namespace

NormSpace NormSpace::scalar() { return NormSpace(Kind::Scalar, 1, 2.0); }

NormSpace NormSpace::ellq(int d, double q) {
    if (d < 1) throw ConfigError("ellq: d must be >= 1");
    if (!(q >= 1.0)) throw InvalidExponent("ellq: q must be in [1, inf]");
    return NormSpace(Kind::EllQ, d, q);
}

NormSpace NormSpace::l1cube(int k) {
    if (k < 0 || k > kMaxCubeDim) throw CapExceeded("l1cube: k out of range");
    return NormSpace(Kind::L1Cube, 1 << k, 1.0);
}

NormSpace NormSpace::linfcube(int k) {
    if (k < 0 || k > kMaxCubeDim) throw CapExceeded("linfcube: k out of range");
    return NormSpace(Kind::LInfCube, 1 << k, kInf);
}

NormSpace NormSpace::parse(const std::string& descriptor) {
    const auto colon = descriptor.find(':');
    const std::string head = descriptor.substr(0, colon);
    std::string args = colon == std::string::npos ? "" : descriptor.substr(colon + 1);

    std::map<std::string, std::string> kv;
    std::stringstream ss(args);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ConfigError("bad norm descriptor: " + descriptor);
        kv[item.substr(0, eq)] = item.substr(eq + 1);
    }

    if (head == "scalar") return scalar();
    if (head == "ellq") {
        if (!kv.count("d") || !kv.count("q"))
            throw ConfigError("ellq descriptor needs d= and q=");
        const double q = kv["q"] == "inf" ? kInf : std::stod(kv["q"]);
        return ellq(parse_int(kv["d"]), q);
    }
    if (head == "l1cube") {
        if (!kv.count("k")) throw ConfigError("l1cube descriptor needs k=");
        return l1cube(parse_int(kv["k"]));
    }
    if (head == "linfcube") {
        if (!kv.count("k")) throw ConfigError("linfcube descriptor needs k=");
        return linfcube(parse_int(kv["k"]));
    }
    throw ConfigError("unknown norm kind: " + head);
}

std::string NormSpace::descriptor() const {
    switch (kind_) {
        case Kind::Scalar:
            return "scalar";
        case Kind::EllQ: {
            std::ostringstream os;
            os << "ellq:d=" << d_ << ",q=";
            if (q_ == kInf)
                os << "inf";
            else
                os << q_;
            return os.str();
        }
        case Kind::L1Cube: {
            int k = 0;
            while ((1 << k) < d_) ++k;
            return "l1cube:k=" + std::to_string(k);
        }
        case Kind::LInfCube: {
            int k = 0;
            while ((1 << k) < d_) ++k;
            return "linfcube:k=" + std::to_string(k);
        }
    }
    return "?";
}

bool NormSpace::smooth() const {
    switch (kind_) {
        case Kind::Scalar:
            return true;
        case Kind::EllQ:
            return q_ > 1.0 && q_ != kInf;
        case Kind::L1Cube:
        case Kind::LInfCube:
            return false;
    }
    return false;
}

double NormSpace::eval(std::span<const double> v) const {
    if (static_cast<int>(v.size()) != d_) throw DimensionMismatch("norm eval: wrong dimension");
    switch (kind_) {
        case Kind::Scalar:
            return std::abs(v[0]);
        case Kind::EllQ: {
            if (q_ == kInf) {
                double m = 0.0;
                for (double x : v) m = std::max(m, std::abs(x));
                return m;
            }
            if (q_ == 1.0) {
                double s = 0.0;
                for (double x : v) s += std::abs(x);
                return s;
            }
            if (q_ == 2.0) {
                double s = 0.0;
                for (double x : v) s += x * x;
                return std::sqrt(s);
            }
            double s = 0.0;
            for (double x : v) s += std::pow(std::abs(x), q_);
            return std::pow(s, 1.0 / q_);
        }
        case Kind::L1Cube: {
            double s = 0.0;
            for (double x : v) s += std::abs(x);
            return s / d_;
        }
        case Kind::LInfCube: {
            double m = 0.0;
            for (double x : v) m = std::max(m, std::abs(x));
            return m;
        }
    }
    return 0.0;
}

void NormSpace::subgradient(std::span<const double> v, std::span<double> g) const {
    if (static_cast<int>(v.size()) != d_ || static_cast<int>(g.size()) != d_)
        throw DimensionMismatch("norm subgradient: wrong dimension");
    switch (kind_) {
        case Kind::Scalar:
            g[0] = v[0] > 0 ? 1.0 : (v[0] < 0 ? -1.0 : 0.0);
            return;
        case Kind::EllQ: {
            if (q_ == kInf) {
                int arg = 0;
                double m = -1.0;
                for (int i = 0; i < d_; ++i) {
                    if (std::abs(v[i]) > m) {
                        m = std::abs(v[i]);
                        arg = i;
                    }
                }
                std::fill(g.begin(), g.end(), 0.0);
                if (m > 0) g[arg] = v[arg] > 0 ? 1.0 : -1.0;
                return;
            }
            if (q_ == 1.0) {
                for (int i = 0; i < d_; ++i)
                    g[i] = v[i] > 0 ? 1.0 : (v[i] < 0 ? -1.0 : 0.0);
                return;
            }
            const double nv = eval(v);
            if (nv == 0.0) {
                std::fill(g.begin(), g.end(), 0.0);
                return;
            }
            for (int i = 0; i < d_; ++i) {
                const double s = v[i] >= 0 ? 1.0 : -1.0;
                g[i] = s * std::pow(std::abs(v[i]) / nv, q_ - 1.0);
            }
            return;
        }
        case Kind::L1Cube: {
            const double w = 1.0 / d_;
            for (int i = 0; i < d_; ++i)
                g[i] = v[i] > 0 ? w : (v[i] < 0 ? -w : 0.0);
            return;
        }
        case Kind::LInfCube: {
            int arg = 0;
            double m = -1.0;
            for (int i = 0; i < d_; ++i) {
                if (std::abs(v[i]) > m) {
                    m = std::abs(v[i]);
                    arg = i;
                }
            }
            std::fill(g.begin(), g.end(), 0.0);
            if (m > 0) g[arg] = v[arg] > 0 ? 1.0 : -1.0;
            return;
        }
    }
}

namespace {

void check_exponent(double p) {
    if (!(p >= 1.0) || p == kInf) throw InvalidExponent("moment exponent must be in [1, inf)");
}

double weighted_moment(const double* data, std::size_t count, int d, double p,
                       const NormSpace& X) {
    const double w = 1.0 / static_cast<double>(count);
    double s = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        const double nv = X.eval({data + i * d, static_cast<std::size_t>(d)});
        s += w * std::pow(nv, p);
    }
    return std::pow(s, 1.0 / p);
}

}  // namespace

double lp_moment(const CubeFunction& f, double p, const NormSpace& X) {
    check_exponent(p);
    if (f.d() != X.dim()) throw DimensionMismatch("lp_moment: codomain mismatch");
    return weighted_moment(f.values().data(), f.points(), f.d(), p, X);
}

double two_cube_moment(const TwoCubeFunction& F, double p, const NormSpace& X) {
    check_exponent(p);
    if (F.d() != X.dim()) throw DimensionMismatch("two_cube_moment: codomain mismatch");
    return weighted_moment(F.values().data(), F.points(), F.d(), p, X);
}

double rademacher_moment(const std::vector<std::vector<double>>& xs, double p,
                         const NormSpace& X) {
    check_exponent(p);
    const int m = static_cast<int>(xs.size());
    if (m < 1) throw ConfigError("rademacher_moment: empty tuple");
    if (m > 20) throw TooManyVectors("rademacher_moment caps m at 20");
    const int d = X.dim();
    for (const auto& x : xs)
        if (static_cast<int>(x.size()) != d)
            throw DimensionMismatch("rademacher_moment: vector dimension mismatch");

    const std::size_t patterns = std::size_t{1} << m;
    const double w = 1.0 / static_cast<double>(patterns);
    std::vector<double> sum(d);
    double acc = 0.0;
    for (std::size_t delta = 0; delta < patterns; ++delta) {
        std::fill(sum.begin(), sum.end(), 0.0);
        for (int i = 0; i < m; ++i) {
            const double sgn = (delta >> i) & 1 ? -1.0 : 1.0;
            for (int c = 0; c < d; ++c) sum[c] += sgn * xs[i][c];
        }
        acc += w * std::pow(X.eval(sum), p);
    }
    return std::pow(acc, 1.0 / p);
}

// ---------------------------------------------------------------------------
// Moduli estimators

namespace {

// Second moment of the Rademacher sum of an m-tuple (flattened) plus its
// gradient contribution helpers.
double rademacher_l2(const NormSpace& X, std::span<const double> xs, int m,
                     std::vector<double>* grad) {
    const int d = X.dim();
    const std::size_t patterns = std::size_t{1} << m;
    const double w = 1.0 / static_cast<double>(patterns);
    std::vector<double> sum(d), sg(d);
    double acc = 0.0;
    if (grad) std::fill(grad->begin(), grad->end(), 0.0);
    for (std::size_t delta = 0; delta < patterns; ++delta) {
        std::fill(sum.begin(), sum.end(), 0.0);
        for (int i = 0; i < m; ++i) {
            const double sgn = (delta >> i) & 1 ? -1.0 : 1.0;
            for (int c = 0; c < d; ++c) sum[c] += sgn * xs[i * d + c];
        }
        const double nv = X.eval(sum);
        acc += w * nv * nv;
        if (grad && nv > 0) {
            X.subgradient(sum, sg);
            for (int i = 0; i < m; ++i) {
                const double sgn = (delta >> i) & 1 ? -1.0 : 1.0;
                for (int c = 0; c < d; ++c)
                    (*grad)[i * d + c] += w * nv * sgn * sg[c];  // d(acc)/dx / 2
            }
        }
    }
    const double l2 = std::sqrt(acc);
    if (grad && l2 > 0)
        for (auto& g : *grad) g /= l2;  // gradient of sqrt(acc)
    return l2;
}

// (sum_i eval(x_i)^e)^{1/e} over a flattened m-tuple, with gradient.
double tuple_le(const NormSpace& X, double e, std::span<const double> xs, int m,
                std::vector<double>* grad) {
    const int d = X.dim();
    std::vector<double> sg(d);
    double acc = 0.0;
    for (int i = 0; i < m; ++i) acc += std::pow(X.eval(xs.subspan(i * d, d)), e);
    const double val = std::pow(acc, 1.0 / e);
    if (grad) {
        std::fill(grad->begin(), grad->end(), 0.0);
        if (val > 0) {
            const double outer = std::pow(val, 1.0 - e);
            for (int i = 0; i < m; ++i) {
                const auto xi = xs.subspan(i * d, d);
                const double nv = X.eval(xi);
                if (nv == 0) continue;
                X.subgradient(xi, sg);
                const double c = outer * pow_signed(nv, e - 1.0);
                for (int cc = 0; cc < d; ++cc) (*grad)[i * d + cc] = c * sg[cc];
            }
        }
    }
    return val;
}

class CotypeProblem final : public RatioProblem {
  public:
    CotypeProblem(const NormSpace& X, double q, int m) : X_(X), q_(q), m_(m) {}
    std::size_t dim() const override { return static_cast<std::size_t>(m_) * X_.dim(); }
    double value(const std::vector<double>& x) const override {
        const double den = rademacher_l2(X_, x, m_, nullptr);
        if (den < 1e-300) throw DegenerateRatio("cotype ratio: zero Rademacher sum");
        return tuple_le(X_, q_, x, m_, nullptr) / den;
    }
    void grad_log(const std::vector<double>& x, std::vector<double>& g) const override {
        g.resize(dim());
        std::vector<double> gn(dim()), gd(dim());
        const double num = tuple_le(X_, q_, x, m_, &gn);
        const double den = rademacher_l2(X_, x, m_, &gd);
        if (num < 1e-300 || den < 1e-300) throw DegenerateRatio("cotype ratio degenerate");
        for (std::size_t i = 0; i < dim(); ++i) g[i] = gn[i] / num - gd[i] / den;
    }
    double denominator(const std::vector<double>& x) const override {
        return rademacher_l2(X_, x, m_, nullptr);
    }
    bool smooth() const override { return X_.smooth(); }

  private:
    const NormSpace& X_;
    double q_;
    int m_;
};

class TypeProblem final : public RatioProblem {
  public:
    TypeProblem(const NormSpace& X, double s, int m) : X_(X), s_(s), m_(m) {}
    std::size_t dim() const override { return static_cast<std::size_t>(m_) * X_.dim(); }
    double value(const std::vector<double>& x) const override {
        const double den = tuple_le(X_, s_, x, m_, nullptr);
        if (den < 1e-300) throw DegenerateRatio("type ratio: zero tuple");
        return rademacher_l2(X_, x, m_, nullptr) / den;
    }
    void grad_log(const std::vector<double>& x, std::vector<double>& g) const override {
        g.resize(dim());
        std::vector<double> gn(dim()), gd(dim());
        const double num = rademacher_l2(X_, x, m_, &gn);
        const double den = tuple_le(X_, s_, x, m_, &gd);
        if (num < 1e-300 || den < 1e-300) throw DegenerateRatio("type ratio degenerate");
        for (std::size_t i = 0; i < dim(); ++i) g[i] = gn[i] / num - gd[i] / den;
    }
    double denominator(const std::vector<double>& x) const override {
        return tuple_le(X_, s_, x, m_, nullptr);
    }
    bool smooth() const override { return X_.smooth(); }

  private:
    const NormSpace& X_;
    double s_;
    int m_;
};

}  // namespace

double moment_with_partials(const std::vector<double>& values, int d, double p,
                            const NormSpace& X, std::vector<double>* partials) {
    const std::size_t count = values.size() / d;
    const double w = 1.0 / static_cast<double>(count);
    std::vector<double> sg(d);
    double acc = 0.0;
    for (std::size_t i = 0; i < count; ++i)
        acc += w * std::pow(X.eval({values.data() + i * d, static_cast<std::size_t>(d)}), p);
    const double val = std::pow(acc, 1.0 / p);
    if (partials) {
        partials->assign(values.size(), 0.0);
        if (val > 0) {
            const double outer = std::pow(val, 1.0 - p);
            for (std::size_t i = 0; i < count; ++i) {
                std::span<const double> vi{values.data() + i * d, static_cast<std::size_t>(d)};
                const double nv = X.eval(vi);
                if (nv == 0) continue;
                X.subgradient(vi, sg);
                const double c = outer * w * pow_signed(nv, p - 1.0);
                for (int cc = 0; cc < d; ++cc) (*partials)[i * d + cc] = c * sg[cc];
            }
        }
    }
    return val;
}

namespace {

class KConvexityProblem final : public RatioProblem {
  public:
    KConvexityProblem(const NormSpace& X, int n, double s) : X_(X), n_(n), s_(s) {}
    std::size_t dim() const override {
        return (std::size_t{1} << n_) * static_cast<std::size_t>(X_.dim());
    }
    double value(const std::vector<double>& a) const override {
        const double den = moment_with_partials(walsh_u(a, n_, X_.dim()), X_.dim(), s_, X_, nullptr);
        if (den < 1e-300) throw DegenerateRatio("k-convexity ratio: zero function");
        return moment_with_partials(walsh_u(degree_one(a), n_, X_.dim()), X_.dim(), s_, X_,
                                    nullptr) /
               den;
    }
    void grad_log(const std::vector<double>& a, std::vector<double>& g) const override {
        const int d = X_.dim();
        std::vector<double> pn, pd;
        const double num = moment_with_partials(walsh_u(degree_one(a), n_, d), d, s_, X_, &pn);
        const double den = moment_with_partials(walsh_u(a, n_, d), d, s_, X_, &pd);
        if (num < 1e-300 || den < 1e-300) throw DegenerateRatio("k-convexity ratio degenerate");
        std::vector<double> gn = walsh_u(std::move(pn), n_, d);
        std::vector<double> gd = walsh_u(std::move(pd), n_, d);
        g.resize(dim());
        for (std::size_t s = 0; s < (std::size_t{1} << n_); ++s) {
            const bool deg1 = __builtin_popcount(static_cast<std::uint32_t>(s)) == 1;
            for (int c = 0; c < d; ++c) {
                const std::size_t i = s * d + c;
                g[i] = (deg1 ? gn[i] / num : 0.0) - gd[i] / den;
            }
        }
    }
    double denominator(const std::vector<double>& a) const override {
        return moment_with_partials(walsh_u(a, n_, X_.dim()), X_.dim(), s_, X_, nullptr);
    }
    bool smooth() const override { return X_.smooth(); }

  private:
    std::vector<double> degree_one(const std::vector<double>& a) const {
        const int d = X_.dim();
        std::vector<double> out(a.size(), 0.0);
        for (int j = 0; j < n_; ++j) {
            const std::size_t s = std::size_t{1} << j;
            for (int c = 0; c < d; ++c) out[s * d + c] = a[s * d + c];
        }
        return out;
    }
    const NormSpace& X_;
    int n_;
    double s_;
};

ModulusEstimate to_modulus(const AscentResult& r) {
    return ModulusEstimate{r.value, r.witness, r.restarts_used, r.converged};
}

}  // namespace

double cotype_ratio(const NormSpace& X, double q, std::span<const double> xs, int m) {
    std::vector<double> x(xs.begin(), xs.end());
    return CotypeProblem(X, q, m).value(x);
}

double type_ratio(const NormSpace& X, double s, std::span<const double> xs, int m) {
    std::vector<double> x(xs.begin(), xs.end());
    return TypeProblem(X, s, m).value(x);
}

double k_convexity_ratio(const NormSpace& X, int n, double s, const CubeFunction& g) {
    if (g.n() != n || g.d() != X.dim()) throw DimensionMismatch("k_convexity_ratio shape");
    return KConvexityProblem(X, n, s).value(g.spectrum());
}

ModulusEstimate cotype_estimate(const NormSpace& X, double q, int m,
                                const OptimizerConfig& config) {
    if (!(q >= 2.0) || q == kInf) throw InvalidExponent("cotype exponent q must be in [2, inf)");
    if (m < 1 || m > 12) throw TooManyVectors("cotype estimate caps m at 12");
    return to_modulus(ascend(CotypeProblem(X, q, m), config));
}

ModulusEstimate type_estimate(const NormSpace& X, double s, int m,
                              const OptimizerConfig& config) {
    if (!(s > 1.0 && s <= 2.0)) throw InvalidExponent("type exponent s must be in (1, 2]");
    if (m < 1 || m > 12) throw TooManyVectors("type estimate caps m at 12");
    return to_modulus(ascend(TypeProblem(X, s, m), config));
}

ModulusEstimate k_convexity_estimate(const NormSpace& X, int n, double s,
                                     const OptimizerConfig& config) {
    if (!(s > 1.0) || s == kInf) throw InvalidExponent("K-convexity exponent s must be in (1, inf)");
    if (n < 1 || n > kMaxTwoCubeDim) throw CapExceeded("k_convexity_estimate caps n at 7");
    return to_modulus(ascend(KConvexityProblem(X, n, s), config));
}

}  // namespace cubep
