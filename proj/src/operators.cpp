#include "cubep/operators.hpp"

#include <cmath>

namespace cubep {

namespace {

void check_index(const CubeFunction& f, int j) {
    if (j < 0 || j >= f.n()) throw IndexOutOfRange("coordinate index");
}

double l2_norm_values(const CubeFunction& f) {
    const auto& v = f.values();
    double s = 0.0;
    const double w = 1.0 / static_cast<double>(f.points());
    for (double x : v) s += w * x * x;
    return std::sqrt(s);
}

}  // namespace

Multiplier Multiplier::compose(const Multiplier& other) const {
    if (n != other.n) throw DimensionMismatch("multiplier composition: dimension mismatch");
    auto a = fn, b = other.fn;
    return {n, [a, b](std::uint32_t s) { return a(s) * b(s); }};
}

Multiplier Multiplier::identity(int n) {
    return {n, [](std::uint32_t) { return 1.0; }};
}

Multiplier Multiplier::laplacian(int n) {
    return {n, [](std::uint32_t s) { return static_cast<double>(__builtin_popcount(s)); }};
}

Multiplier Multiplier::heat(int n, double t) {
    if (t < 0) throw NegativeTime("heat: t must be >= 0");
    return {n, [t](std::uint32_t s) { return std::exp(-t * __builtin_popcount(s)); }};
}

Multiplier Multiplier::inv_laplacian(int n) {
    return {n, [](std::uint32_t s) {
                int k = __builtin_popcount(s);
                return k == 0 ? 0.0 : 1.0 / k;
            }};
}

Multiplier Multiplier::coordinate(int n, int j) {
    if (j < 0 || j >= n) throw IndexOutOfRange("coordinate index");
    const std::uint32_t bit = std::uint32_t{1} << j;
    return {n, [bit](std::uint32_t s) { return (s & bit) ? 1.0 : 0.0; }};
}

Multiplier Multiplier::riesz(int n, int j) {
    if (j < 0 || j >= n) throw IndexOutOfRange("coordinate index");
    const std::uint32_t bit = std::uint32_t{1} << j;
    return {n, [bit](std::uint32_t s) {
                return (s & bit) ? 1.0 / __builtin_popcount(s) : 0.0;
            }};
}

CubeFunction apply_multiplier(const CubeFunction& f, const Multiplier& m) {
    if (f.n() != m.n) throw DimensionMismatch("apply_multiplier: dimension mismatch");
    const int d = f.d();
    std::vector<double> out = f.spectrum();
    for (std::size_t s = 0; s < f.points(); ++s) {
        const double c = m.fn(static_cast<std::uint32_t>(s));
        for (int k = 0; k < d; ++k) out[s * d + k] *= c;
    }
    return CubeFunction::from_spectrum(f.n(), d, std::move(out));
}

CubeFunction partial_j(const CubeFunction& f, int j) {
    check_index(f, j);
    const int d = f.d();
    const auto& v = f.values();
    const std::uint32_t bit = std::uint32_t{1} << j;
    std::vector<double> out(v.size());
    for (std::size_t eps = 0; eps < f.points(); ++eps) {
        const std::size_t plus = eps & ~std::size_t{bit};   // eps_j = +1 (bit clear)
        const std::size_t minus = eps | bit;                // eps_j = -1
        for (int k = 0; k < d; ++k)
            out[eps * d + k] = 0.5 * (v[plus * d + k] - v[minus * d + k]);
    }
    return CubeFunction::from_values(f.n(), d, std::move(out));
}

CubeFunction d_j(const CubeFunction& f, int j) {
    check_index(f, j);
    return apply_multiplier(f, Multiplier::coordinate(f.n(), j));
}

CubeFunction laplacian(const CubeFunction& f) {
    return apply_multiplier(f, Multiplier::laplacian(f.n()));
}

CubeFunction heat(const CubeFunction& f, double t) {
    return apply_multiplier(f, Multiplier::heat(f.n(), t));
}

CubeFunction inv_laplacian(const CubeFunction& f, bool strip_mean) {
    const int d = f.d();
    if (!strip_mean) {
        double mean_sq = 0.0;
        const auto& spec = f.spectrum();
        for (int k = 0; k < d; ++k) mean_sq += spec[k] * spec[k];
        const double tol = std::max(1e-9 * l2_norm_values(f), 1e-12);
        if (std::sqrt(mean_sq) > tol)
            throw NotMeanZero("inv_laplacian: input has nonzero mean (use strip_mean)");
    }
    return apply_multiplier(f, Multiplier::inv_laplacian(f.n()));
}

CubeFunction riesz(const CubeFunction& f, int j) {
    check_index(f, j);
    return apply_multiplier(f, Multiplier::riesz(f.n(), j));
}

CubeFunction extract_fj(const TwoCubeFunction& F, int j) {
    if (j < 0 || j >= F.n()) throw IndexOutOfRange("coordinate index");
    const int n = F.n(), d = F.d();
    const std::size_t side = std::size_t{1} << n;
    const std::uint32_t bit = std::uint32_t{1} << j;
    const auto& v = F.values();
    std::vector<double> out(side * d, 0.0);
    const double w = 1.0 / static_cast<double>(side);
    for (std::size_t delta = 0; delta < side; ++delta) {
        const double sgn = (delta & bit) ? -w : w;
        for (std::size_t eps = 0; eps < side; ++eps) {
            const double* src = v.data() + ((delta << n) | eps) * d;
            double* dst = out.data() + eps * d;
            for (int k = 0; k < d; ++k) dst[k] += sgn * src[k];
        }
    }
    return CubeFunction::from_values(n, d, std::move(out));
}

TwoCubeFunction rademacher_projection(const TwoCubeFunction& F) {
    const int n = F.n(), d = F.d();
    const std::size_t side = std::size_t{1} << n;
    std::vector<std::vector<double>> fj(n);
    for (int j = 0; j < n; ++j) fj[j] = extract_fj(F, j).values();

    std::vector<double> out(F.points() * d, 0.0);
    for (std::size_t delta = 0; delta < side; ++delta)
        for (std::size_t eps = 0; eps < side; ++eps) {
            double* dst = out.data() + ((delta << n) | eps) * d;
            for (int j = 0; j < n; ++j) {
                const double sgn = (delta >> j) & 1 ? -1.0 : 1.0;
                const double* src = fj[j].data() + eps * d;
                for (int k = 0; k < d; ++k) dst[k] += sgn * src[k];
            }
        }
    return TwoCubeFunction::from_values(n, d, std::move(out));
}

}  // namespace cubep
