#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cubep/operators.hpp"
#include "test_common.hpp"

using namespace cubep;
using cubep::testing::random_function;
using cubep::testing::random_two_cube;

namespace {

double sup_gap(const CubeFunction& a, const CubeFunction& b) {
    return cubep::testing::sup_gap(a.values(), b.values());
}

}  // namespace

TEST_CASE("apply_multiplier scales each Walsh coefficient") {
    const CubeFunction f = random_function(5, 2, 1);
    Multiplier m{5, [](std::uint32_t s) { return 0.5 * s + 1.0; }};
    const CubeFunction g = apply_multiplier(f, m);
    for (std::size_t s = 0; s < f.points(); ++s)
        for (int k = 0; k < 2; ++k)
            CHECK(g.spectrum()[s * 2 + k] ==
                  doctest::Approx((0.5 * s + 1.0) * f.spectrum()[s * 2 + k]).epsilon(1e-12));
    CHECK_THROWS_AS(apply_multiplier(random_function(3, 1, 2), m), DimensionMismatch);
}

TEST_CASE("multiplier composition multiplies symbols") {
    const auto m = Multiplier::laplacian(4).compose(Multiplier::heat(4, 0.3));
    for (std::uint32_t s = 0; s < 16; ++s) {
        const int k = __builtin_popcount(s);
        CHECK(m(s) == doctest::Approx(k * std::exp(-0.3 * k)));
    }
}

TEST_CASE("partial_j matches the difference quotient") {
    const int n = 5;
    const CubeFunction f = random_function(n, 3, 4, false);
    for (int j = 0; j < n; ++j) {
        const CubeFunction g = partial_j(f, j);
        const std::uint32_t bit = 1u << j;
        for (std::uint32_t e = 0; e < f.points(); ++e)
            for (int k = 0; k < 3; ++k) {
                const double plus = f.value_at(e & ~bit)[k];
                const double minus = f.value_at(e | bit)[k];
                CHECK(g.value_at(e)[k] == doctest::Approx(0.5 * (plus - minus)).epsilon(1e-12));
            }
    }
    CHECK_THROWS_AS(partial_j(f, -1), IndexOutOfRange);
    CHECK_THROWS_AS(partial_j(f, n), IndexOutOfRange);
}

TEST_CASE("d_j: membership multiplier, pointwise path, idempotence") {
    const int n = 5;
    const CubeFunction f = random_function(n, 2, 6);
    for (int j = 0; j < n; ++j) {
        const CubeFunction g = d_j(f, j);
        // spectrum keeps exactly the coefficients with j in S
        for (std::size_t s = 0; s < f.points(); ++s)
            for (int k = 0; k < 2; ++k) {
                const double want = (s >> j) & 1 ? f.spectrum()[s * 2 + k] : 0.0;
                CHECK(g.spectrum()[s * 2 + k] == doctest::Approx(want).epsilon(1e-12));
            }
        // D_j f = eps_j * partial_j f
        const CubeFunction pj = partial_j(f, j);
        for (std::uint32_t e = 0; e < f.points(); ++e) {
            const double sgn = (e >> j) & 1 ? -1.0 : 1.0;
            for (int k = 0; k < 2; ++k)
                CHECK(g.value_at(e)[k] == doctest::Approx(sgn * pj.value_at(e)[k]).epsilon(1e-12));
        }
        CHECK(sup_gap(d_j(g, j), g) < 1e-13);
    }
}

TEST_CASE("laplacian is the sum of the D_j") {
    const int n = 6;
    const CubeFunction f = random_function(n, 1, 8);
    std::vector<double> acc(f.points(), 0.0);
    for (int j = 0; j < n; ++j) {
        const CubeFunction dj = d_j(f, j);
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += dj.values()[i];
    }
    CHECK(cubep::testing::sup_gap(acc, laplacian(f).values()) < 1e-11);
}

TEST_CASE("heat semigroup") {
    const CubeFunction f = random_function(5, 2, 10);
    CHECK(sup_gap(heat(f, 0.0), f) < 1e-14);
    CHECK(sup_gap(heat(heat(f, 0.4), 0.9), heat(f, 1.3)) < 1e-12);
    // mean preserved, L2 contracted
    const CubeFunction g = heat(f, 0.7);
    CHECK(std::abs(g.expectation()[0] - f.expectation()[0]) < 1e-13);
    double nf = 0, ng = 0;
    for (std::size_t i = 0; i < f.points(); ++i) {
        nf += f.values()[i * 2] * f.values()[i * 2];
        ng += g.values()[i * 2] * g.values()[i * 2];
    }
    CHECK(ng <= nf + 1e-12);
    CHECK_THROWS_AS(heat(f, -0.1), NegativeTime);
}

TEST_CASE("inv_laplacian inverts on mean-zero functions") {
    CubeFunction f = random_function(5, 2, 12);
    // strip the mean first
    auto spec = f.spectrum();
    spec[0] = spec[1] = 0.0;
    f = CubeFunction::from_spectrum(5, 2, spec);
    CHECK(sup_gap(laplacian(inv_laplacian(f)), f) < 1e-11);
    CHECK(sup_gap(inv_laplacian(laplacian(f)), f) < 1e-11);
}

TEST_CASE("inv_laplacian rejects a nonzero mean unless asked to strip it") {
    const CubeFunction f = random_function(4, 1, 14);  // generic, nonzero mean
    CHECK_THROWS_AS(inv_laplacian(f), NotMeanZero);
    const CubeFunction g = inv_laplacian(f, true);
    CHECK(std::abs(g.expectation()[0]) < 1e-13);
    // stripping first gives the same answer
    auto spec = f.spectrum();
    spec[0] = 0.0;
    CHECK(sup_gap(g, inv_laplacian(CubeFunction::from_spectrum(4, 1, spec))) < 1e-12);
}

TEST_CASE("inv_laplacian tolerates roundoff-sized means") {
    auto spec = random_function(4, 1, 15).spectrum();
    spec[0] = 1e-13;  // below 1e-9 * ||f||_2 for this unit-scale function
    const CubeFunction f = CubeFunction::from_spectrum(4, 1, spec);
    CHECK_NOTHROW(inv_laplacian(f));
}

TEST_CASE("riesz transforms sum to Id minus expectation") {
    const int n = 5;
    const CubeFunction f = random_function(n, 2, 16);
    std::vector<double> acc(f.points() * 2, 0.0);
    for (int j = 0; j < n; ++j) {
        const CubeFunction rj = riesz(f, j);
        // same as inv_laplacian(d_j f)
        CHECK(sup_gap(rj, inv_laplacian(d_j(f, j))) < 1e-12);
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += rj.values()[i];
    }
    const auto mean = f.expectation();
    std::vector<double> centered = f.values();
    for (std::size_t e = 0; e < f.points(); ++e)
        for (int k = 0; k < 2; ++k) centered[e * 2 + k] -= mean[k];
    CHECK(cubep::testing::sup_gap(acc, centered) < 1e-11);
}

TEST_CASE("extract_fj recovers the degree-1 slice coefficients") {
    const int n = 3, d = 2;
    // F(eps, delta) = sum_j delta_j g_j(eps) with known g_j
    std::vector<CubeFunction> gs;
    for (int j = 0; j < n; ++j) gs.push_back(random_function(n, d, 20 + j, false));
    const std::size_t size = std::size_t{1} << n;
    std::vector<double> vals(size * size * d, 0.0);
    for (std::uint32_t dl = 0; dl < size; ++dl)
        for (std::uint32_t e = 0; e < size; ++e)
            for (int k = 0; k < d; ++k) {
                double v = 0;
                for (int j = 0; j < n; ++j) {
                    const double s = (dl >> j) & 1 ? -1.0 : 1.0;
                    v += s * gs[j].value_at(e)[k];
                }
                vals[((std::size_t{dl} << n | e)) * d + k] = v;
            }
    const TwoCubeFunction F = TwoCubeFunction::from_values(n, d, vals);
    for (int j = 0; j < n; ++j)
        CHECK(cubep::testing::sup_gap(extract_fj(F, j).values(), gs[j].values()) < 1e-12);
    // delta-independent input has no degree-1 part
    std::vector<double> flat(size * size, 0.0);
    const CubeFunction h = random_function(n, 1, 30, false);
    for (std::uint32_t dl = 0; dl < size; ++dl)
        for (std::uint32_t e = 0; e < size; ++e) flat[(std::size_t{dl} << n | e)] = h.value_at(e)[0];
    const TwoCubeFunction G = TwoCubeFunction::from_values(n, 1, flat);
    for (int j = 0; j < n; ++j) {
        const CubeFunction gj = extract_fj(G, j);
        for (double v : gj.values()) CHECK(std::abs(v) < 1e-13);
    }
}

TEST_CASE("rademacher_projection is idempotent and matches extract_fj") {
    const int n = 3, d = 2;
    const TwoCubeFunction F = random_two_cube(n, d, 31);
    const TwoCubeFunction P = rademacher_projection(F);
    const TwoCubeFunction PP = rademacher_projection(P);
    CHECK(cubep::testing::sup_gap(P.values(), PP.values()) < 1e-12);

    const std::size_t size = std::size_t{1} << n;
    for (std::uint32_t dl = 0; dl < size; ++dl)
        for (std::uint32_t e = 0; e < size; ++e)
            for (int k = 0; k < d; ++k) {
                double want = 0;
                for (int j = 0; j < n; ++j) {
                    const double s = (dl >> j) & 1 ? -1.0 : 1.0;
                    want += s * extract_fj(F, j).value_at(e)[k];
                }
                CHECK(P.value_at(e, dl)[k] == doctest::Approx(want).epsilon(1e-10));
            }
}
