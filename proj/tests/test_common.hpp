#pragma once

#include <random>
#include <vector>

#include "cubep/cube.hpp"

namespace cubep::testing {

inline CubeFunction random_function(int n, int d, std::uint64_t seed, bool spectrum_side = true) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> data((std::size_t{1} << n) * d);
    for (auto& x : data) x = gauss(rng);
    return spectrum_side ? CubeFunction::from_spectrum(n, d, std::move(data))
                         : CubeFunction::from_values(n, d, std::move(data));
}

inline TwoCubeFunction random_two_cube(int n, int d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> data((std::size_t{1} << (2 * n)) * d);
    for (auto& x : data) x = gauss(rng);
    return TwoCubeFunction::from_values(n, d, std::move(data));
}

inline double sup_gap(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace cubep::testing
