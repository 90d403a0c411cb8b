#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cubep/cube.hpp"
#include "test_common.hpp"

using namespace cubep;
using cubep::testing::random_function;
using cubep::testing::sup_gap;

namespace {

// O(4^n) reference transform: spectrum[S] = E_eps f(eps) w_S(eps)
std::vector<double> naive_forward(const CubeFunction& f) {
    const std::size_t size = f.points();
    const int d = f.d();
    const auto& v = f.values();
    std::vector<double> spec(size * d, 0.0);
    const double w = 1.0 / static_cast<double>(size);
    for (std::size_t s = 0; s < size; ++s)
        for (std::size_t e = 0; e < size; ++e) {
            const double c = w * walsh_sign(static_cast<std::uint32_t>(s),
                                            static_cast<std::uint32_t>(e));
            for (int k = 0; k < d; ++k) spec[s * d + k] += c * v[e * d + k];
        }
    return spec;
}

}  // namespace

TEST_CASE("point encoding round-trips") {
    for (int n = 1; n <= 6; ++n)
        for (std::uint32_t idx = 0; idx < (std::uint32_t{1} << n); ++idx) {
            const Point p(n, idx);
            const auto s = p.signs();
            const Point q = Point::from_signs(s);
            CHECK(q.index == idx);
            for (int i = 0; i < n; ++i) CHECK(((idx >> i) & 1 ? -1 : 1) == p.sign(i));
        }
    CHECK_THROWS_AS(Point(15, 0), CapExceeded);
    CHECK_THROWS_AS(Point(3, 8), IndexOutOfRange);
}

TEST_CASE("walsh_forward: constants and characters") {
    const int n = 4;
    CubeFunction c(n, 2);
    auto& v = c.mutable_values();
    for (std::size_t e = 0; e < c.points(); ++e) {
        v[e * 2] = 3.5;
        v[e * 2 + 1] = -1.25;
    }
    const auto& spec = c.spectrum();
    CHECK(spec[0] == doctest::Approx(3.5).epsilon(1e-14));
    CHECK(spec[1] == doctest::Approx(-1.25).epsilon(1e-14));
    for (std::size_t i = 2; i < spec.size(); ++i) CHECK(std::abs(spec[i]) < 1e-14);

    // f = w_S e_1 has spectrum = indicator at S in coordinate 1
    const std::uint32_t s_mask = 0b0101;
    std::vector<double> vals(c.points() * 2, 0.0);
    for (std::size_t e = 0; e < c.points(); ++e)
        vals[e * 2] = walsh_sign(s_mask, static_cast<std::uint32_t>(e));
    const CubeFunction w = CubeFunction::from_values(n, 2, vals);
    const auto& ws = w.spectrum();
    for (std::size_t s = 0; s < w.points(); ++s) {
        CHECK(ws[s * 2] == doctest::Approx(s == s_mask ? 1.0 : 0.0).epsilon(1e-13));
        CHECK(std::abs(ws[s * 2 + 1]) < 1e-14);
    }
}

TEST_CASE("walsh_inverse on spectral indicators") {
    const int n = 3;
    std::vector<double> spec(std::size_t{1} << n, 0.0);
    spec[0] = 2.0;
    CubeFunction f = CubeFunction::from_spectrum(n, 1, spec);
    for (double x : f.values()) CHECK(x == doctest::Approx(2.0));

    std::fill(spec.begin(), spec.end(), 0.0);
    spec[1] = 1.0;  // S = {0}
    CubeFunction g = CubeFunction::from_spectrum(n, 1, spec);
    for (std::size_t e = 0; e < g.points(); ++e)
        CHECK(g.values()[e] == doctest::Approx((e & 1) ? -1.0 : 1.0));
}

TEST_CASE("round trip against the naive transform oracle") {
    const CubeFunction f = random_function(6, 3, 42, false);
    const auto naive = naive_forward(f);
    CHECK(sup_gap(f.spectrum(), naive) < 1e-12);

    // inverse(forward(f)) = f
    const CubeFunction back = CubeFunction::from_spectrum(6, 3, f.spectrum());
    CHECK(sup_gap(back.values(), f.values()) < 1e-12);

    // forward(inverse(spectrum)) = spectrum
    const CubeFunction g = random_function(5, 1, 7, true);
    const CubeFunction round = CubeFunction::from_values(5, 1, g.values());
    CHECK(sup_gap(round.spectrum(), g.spectrum()) < 1e-12);
}

TEST_CASE("round trip at the dimension cap") {
    const CubeFunction f = random_function(14, 1, 3, false);
    const CubeFunction back = CubeFunction::from_spectrum(14, 1, f.spectrum());
    double scale = 0.0;
    for (double x : f.values()) scale = std::max(scale, std::abs(x));
    CHECK(sup_gap(back.values(), f.values()) / scale < 1e-12);
    CHECK_THROWS_AS(CubeFunction(15, 1), CapExceeded);
    CHECK_THROWS_AS(TwoCubeFunction(8, 1), CapExceeded);
}

TEST_CASE("parallel butterfly matches the serial reference bitwise") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> gauss;
    std::vector<double> a((std::size_t{1} << 11) * 2);
    for (auto& x : a) x = gauss(rng);
    auto b = a;
    fwht_inplace_serial(a.data(), 11, 2);
    fwht_inplace(b.data(), 11, 2);
    CHECK(a == b);
}

TEST_CASE("Parseval for scalar functions") {
    const CubeFunction f = random_function(7, 1, 5, false);
    double lhs = 0.0;
    for (double x : f.values()) lhs += x * x / static_cast<double>(f.points());
    double rhs = 0.0;
    for (double s : f.spectrum()) rhs += s * s;
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("expectation agrees between the two representations") {
    const CubeFunction f = random_function(4, 2, 9, false);
    const auto mean = f.expectation();
    CHECK(std::abs(mean[0] - f.spectrum()[0]) < 1e-13);
    CHECK(std::abs(mean[1] - f.spectrum()[1]) < 1e-13);

    // odd function has zero mean
    std::vector<double> vals(std::size_t{1} << 3);
    for (std::size_t e = 0; e < vals.size(); ++e) vals[e] = (e & 1) ? -1.0 : 1.0;
    CHECK(CubeFunction::from_values(3, 1, vals).expectation()[0] == doctest::Approx(0.0));
}

TEST_CASE("translate: identity, sign flip, two-path agreement") {
    const int n = 6;
    const CubeFunction f = random_function(n, 2, 13, false);

    CHECK(sup_gap(translate(f, Point(n, 0)).values(), f.values()) == 0.0);

    // f = eps_0 under xi with xi_0 = -1 becomes -eps_0
    std::vector<double> vals(std::size_t{1} << n);
    for (std::size_t e = 0; e < vals.size(); ++e) vals[e] = (e & 1) ? -1.0 : 1.0;
    const CubeFunction chi = CubeFunction::from_values(n, 1, vals);
    const CubeFunction flipped = translate(chi, Point(n, 1));
    for (std::size_t e = 0; e < flipped.points(); ++e)
        CHECK(flipped.values()[e] == doctest::Approx(-chi.values()[e]));

    // spectrum side: translate multiplies coefficient S by w_S(xi)
    const Point xi(n, 0b101001);
    const CubeFunction t = translate(f, xi);
    const auto& spec = f.spectrum();
    std::vector<double> expect(spec.size());
    for (std::size_t s = 0; s < f.points(); ++s) {
        const double c = walsh_sign(static_cast<std::uint32_t>(s), xi.index);
        for (int k = 0; k < 2; ++k) expect[s * 2 + k] = c * spec[s * 2 + k];
    }
    CHECK(sup_gap(t.spectrum(), expect) < 1e-12);

    // measure preserving + involution
    CHECK(std::abs(expectation(t)[0] - expectation(f)[0]) < 1e-13);
    CHECK(sup_gap(translate(t, xi).values(), f.values()) == 0.0);
    CHECK_THROWS_AS(translate(f, Point(3, 0)), DimensionMismatch);
}

TEST_CASE("two-cube storage and slices") {
    const int n = 3, d = 2;
    const TwoCubeFunction F = cubep::testing::random_two_cube(n, d, 17);
    CHECK(F.values().size() == (std::size_t{1} << (2 * n)) * d);
    const CubeFunction row = F.slice_eps(5);
    const CubeFunction col = F.slice_delta(2);
    for (std::uint32_t e = 0; e < (1u << n); ++e)
        CHECK(row.value_at(e)[0] == F.value_at(e, 5)[0]);
    for (std::uint32_t dl = 0; dl < (1u << n); ++dl)
        CHECK(col.value_at(dl)[1] == F.value_at(2, dl)[1]);
}

TEST_CASE("json round trip") {
    const CubeFunction f = random_function(4, 2, 21, false);
    const CubeFunction g = cube_function_from_json(to_json(f));
    CHECK(sup_gap(f.values(), g.values()) == 0.0);
    const CubeFunction h = cube_function_from_json(to_json(f, true));
    CHECK(sup_gap(f.spectrum(), h.spectrum()) == 0.0);

    const TwoCubeFunction F = cubep::testing::random_two_cube(3, 1, 23);
    const TwoCubeFunction G = two_cube_from_json(to_json(F));
    CHECK(F.values() == G.values());
}
