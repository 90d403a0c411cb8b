// Timing harness comparing the serial reference kernels against the
// OpenMP-parallel ones.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <vector>

#include "cubep/cube.hpp"
#include "cubep/parallel.hpp"
#include "cubep/semigroup.hpp"

namespace {

using clock_type = std::chrono::steady_clock;

double time_ms(const std::function<void()>& fn, int reps) {
    const auto start = clock_type::now();
    for (int i = 0; i < reps; ++i) fn();
    const auto stop = clock_type::now();
    return std::chrono::duration<double, std::milli>(stop - start).count() / reps;
}

}  // namespace

int main() {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::printf("threads: %d\n\n", cubep::max_threads());
    std::printf("%-34s %12s %12s %8s\n", "kernel", "serial ms", "parallel ms", "speedup");

    {
        const int n = 14, d = 4;
        std::vector<double> base((std::size_t{1} << n) * d);
        for (auto& x : base) x = gauss(rng);
        auto serial = base, parallel = base;
        const double ts = time_ms([&] { cubep::fwht_inplace_serial(serial.data(), n, d); }, 20);
        const double tp = time_ms([&] { cubep::fwht_inplace(parallel.data(), n, d); }, 20);
        std::printf("%-34s %12.3f %12.3f %8.2f\n", "fwht n=14 d=4", ts, tp, ts / tp);
    }

    {
        const int n = 10, d = 2;
        std::vector<double> spec((std::size_t{1} << n) * d);
        for (auto& x : spec) x = gauss(rng);
        const cubep::CubeFunction f = cubep::CubeFunction::from_spectrum(n, d, spec);
        f.values();
        const double ts =
            time_ms([&] { cubep::smoothed_derivative_serial(f, 0, 0.3); }, 5);
        const double tp = time_ms([&] { cubep::smoothed_derivative(f, 0, 0.3); }, 5);
        std::printf("%-34s %12.3f %12.3f %8.2f\n", "smoothed_derivative n=10 d=2", ts, tp,
                    ts / tp);
    }

    return 0;
}
