#include "cubep/semigroup.hpp"

#include <cmath>
#include <numbers>

#include "cubep/operators.hpp"

namespace cubep {

BiasedBitLaw::BiasedBitLaw(double t_, int n_) : t(t_), r(std::exp(-t_)), n(n_) {
    if (t < 0) throw NegativeTime("BiasedBitLaw: t must be >= 0");
    if (n < 1 || n > kMaxCubeDim) throw CapExceeded("BiasedBitLaw: dimension out of range");
}

double xi_weight(std::uint32_t xi_index, const BiasedBitLaw& law) {
    if (xi_index >= (std::uint32_t{1} << law.n)) throw DimensionMismatch("xi index exceeds 2^n");
    const double p_plus = 0.5 * (1.0 + law.r);
    const double p_minus = 0.5 * (1.0 - law.r);
    const int minus_count = __builtin_popcount(xi_index);
    return std::pow(p_minus, minus_count) * std::pow(p_plus, law.n - minus_count);
}

double delta_weight(int xi_sign, const BiasedBitLaw& law) {
    if (xi_sign != 1 && xi_sign != -1) throw Error("xi sign must be +1 or -1");
    const double denom_sq = 1.0 - law.r * law.r;
    if (denom_sq <= 0.0) throw DegenerateTime("delta_weight undefined at t = 0");
    return (xi_sign - law.r) / std::sqrt(denom_sq);
}

namespace {

CubeFunction smoothed_derivative_impl(const CubeFunction& f, int j, double t, bool parallel) {
    if (j < 0 || j >= f.n()) throw IndexOutOfRange("coordinate index");
    if (t <= 0) throw DegenerateTime("smoothed_derivative requires t > 0");
    const int n = f.n(), d = f.d();
    const std::size_t size = f.points();
    const BiasedBitLaw law(t, n);
    const double prefactor = law.r / std::sqrt(1.0 - law.r * law.r);
    const std::uint32_t bit = std::uint32_t{1} << j;

    // per-xi coefficient prefactor * P(xi) * delta_j(xi_j)
    std::vector<double> coeff(size);
    for (std::size_t xi = 0; xi < size; ++xi) {
        const int sgn = (xi & bit) ? -1 : 1;
        coeff[xi] = prefactor * xi_weight(static_cast<std::uint32_t>(xi), law) *
                    delta_weight(sgn, law);
    }

    const auto& v = f.values();
    std::vector<double> out(size * d, 0.0);
#pragma omp parallel for schedule(static) if (parallel)
    for (std::ptrdiff_t e = 0; e < static_cast<std::ptrdiff_t>(size); ++e) {
        double* dst = out.data() + static_cast<std::size_t>(e) * d;
        for (std::size_t xi = 0; xi < size; ++xi) {
            const double c = coeff[xi];
            const double* src = v.data() + (static_cast<std::size_t>(e) ^ xi) * d;
            for (int k = 0; k < d; ++k) dst[k] += c * src[k];
        }
    }
    return CubeFunction::from_values(n, d, std::move(out));
}

double sup_gap(const CubeFunction& a, const CubeFunction& b) {
    const auto& va = a.values();
    const auto& vb = b.values();
    double m = 0.0;
    for (std::size_t i = 0; i < va.size(); ++i) m = std::max(m, std::abs(va[i] - vb[i]));
    return m;
}

}  // namespace

CubeFunction smoothed_derivative(const CubeFunction& f, int j, double t) {
    return smoothed_derivative_impl(f, j, t, true);
}

CubeFunction smoothed_derivative_serial(const CubeFunction& f, int j, double t) {
    return smoothed_derivative_impl(f, j, t, false);
}

double verify_main_identity(const CubeFunction& f, std::span<const double> t_grid) {
    for (double t : t_grid)
        if (t <= 0) throw DegenerateTime("verify_main_identity requires t > 0");
    f.values();
    f.spectrum();
    double worst = 0.0;
    for (double t : t_grid)
        for (int j = 0; j < f.n(); ++j) {
            CubeFunction lhs = smoothed_derivative(f, j, t);
            CubeFunction rhs = heat(d_j(f, j), t);
            worst = std::max(worst, sup_gap(lhs, rhs));
        }
    return worst;
}

QuadratureScheme QuadratureScheme::gauss_legendre(int node_count) {
    if (node_count < 1) throw ConfigError("quadrature needs at least one node");
    // Nodes of P_N on (-1, 1) by Newton iteration, then mapped to (0, pi/2).
    QuadratureScheme q;
    q.theta.resize(node_count);
    q.w.resize(node_count);
    const int N = node_count;
    for (int i = 0; i < N; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (N + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= N; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = N * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w_std = 2.0 / ((1.0 - x * x) * dp * dp);
        // map [-1,1] -> [0, pi/2]
        q.theta[N - 1 - i] = (x + 1.0) * std::numbers::pi / 4.0;
        q.w[N - 1 - i] = w_std * std::numbers::pi / 4.0;
    }
    return q;
}

IntegralRepresentation integral_representation(const std::vector<CubeFunction>& f_list,
                                               const QuadratureScheme& quad) {
    if (f_list.empty()) throw ConfigError("integral_representation: empty function list");
    const int n = f_list.front().n();
    const int d = f_list.front().d();
    if (static_cast<int>(f_list.size()) != n)
        throw DimensionMismatch("integral_representation expects n functions");
    for (const auto& f : f_list)
        if (f.n() != n || f.d() != d)
            throw DimensionMismatch("integral_representation: mixed shapes");

    const std::size_t size = std::size_t{1} << n;

    std::vector<std::vector<double>> lap(n);
    for (int j = 0; j < n; ++j) lap[j] = laplacian(f_list[j]).values();

    // accumulate node contributions in fixed node order
    std::vector<double> acc(size * d, 0.0);
    for (std::size_t k = 0; k < quad.size(); ++k) {
        const double t = -std::log(std::sin(quad.theta[k]));
        const BiasedBitLaw law(t, n);
        std::vector<double> node(size * d, 0.0);
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t e = 0; e < static_cast<std::ptrdiff_t>(size); ++e) {
            double* dst = node.data() + static_cast<std::size_t>(e) * d;
            for (std::size_t xi = 0; xi < size; ++xi) {
                const double pw = xi_weight(static_cast<std::uint32_t>(xi), law);
                const std::size_t src_idx = (static_cast<std::size_t>(e) ^ xi) * d;
                for (int j = 0; j < n; ++j) {
                    const int sgn = (xi >> j) & 1 ? -1 : 1;
                    const double c = pw * delta_weight(sgn, law);
                    const double* src = lap[j].data() + src_idx;
                    for (int cd = 0; cd < d; ++cd) dst[cd] += c * src[cd];
                }
            }
        }
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += quad.w[k] * node[i];
    }

    // reference: sum_j D_j f_j
    std::vector<double> exact(size * d, 0.0);
    for (int j = 0; j < n; ++j) {
        const CubeFunction dj = d_j(f_list[j], j);
        const auto& v = dj.values();
        for (std::size_t i = 0; i < exact.size(); ++i) exact[i] += v[i];
    }

    double norm_exact = 0.0, res_plus = 0.0, res_minus = 0.0;
    for (std::size_t i = 0; i < acc.size(); ++i) {
        norm_exact += exact[i] * exact[i];
        const double dp = acc[i] - exact[i];
        const double dm = acc[i] + exact[i];
        res_plus += dp * dp;
        res_minus += dm * dm;
    }
    norm_exact = std::sqrt(norm_exact);
    res_plus = std::sqrt(res_plus);
    res_minus = std::sqrt(res_minus);

    IntegralRepresentation out{CubeFunction::from_values(n, d, std::move(acc)), 1, 0.0};
    if (norm_exact < 1e-14) {
        out.residual = std::min(res_plus, res_minus);
        return out;
    }
    if (res_minus < res_plus) {
        out.sign = -1;
        out.residual = res_minus / norm_exact;
    } else {
        out.sign = 1;
        out.residual = res_plus / norm_exact;
    }
    if (out.residual > 1e-6)
        throw QuadratureUnderresolved("integral_representation residual " +
                                      std::to_string(out.residual));
    return out;
}

}  // namespace cubep
