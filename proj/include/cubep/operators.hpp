#pragma once

#include <functional>

#include "cubep/cube.hpp"

namespace cubep {

// Walsh-Fourier multiplier S -> m(S), stored symbolically as a function of
// the subset mask.  All coordinate indices below are 0-based.
struct Multiplier {
    int n = 0;
    std::function<double(std::uint32_t)> fn;

    double operator()(std::uint32_t mask) const { return fn(mask); }
    Multiplier compose(const Multiplier& other) const;

    static Multiplier identity(int n);
    static Multiplier laplacian(int n);                 // |S|
    static Multiplier heat(int n, double t);            // e^{-t|S|}
    static Multiplier inv_laplacian(int n);             // 1/|S|, 0 at empty set
    static Multiplier coordinate(int n, int j);         // 1_{j in S}
    static Multiplier riesz(int n, int j);              // 1_{j in S} / |S|
};

CubeFunction apply_multiplier(const CubeFunction& f, const Multiplier& m);

// Pointwise partial derivative (f(eps_j=+1) - f(eps_j=-1)) / 2.
CubeFunction partial_j(const CubeFunction& f, int j);

// D_j = eps_j * partial_j, realized as the membership multiplier.
CubeFunction d_j(const CubeFunction& f, int j);

CubeFunction laplacian(const CubeFunction& f);
CubeFunction heat(const CubeFunction& f, double t);

// Strict by default: throws NotMeanZero unless |Ef| <= 1e-9 * L2 norm
// (absolute floor 1e-12).  strip_mean drops the mean instead.
CubeFunction inv_laplacian(const CubeFunction& f, bool strip_mean = false);

CubeFunction riesz(const CubeFunction& f, int j);

// F_j(eps) = E_delta delta_j F(eps, delta).
CubeFunction extract_fj(const TwoCubeFunction& F, int j);

// (eps, delta) -> sum_j delta_j F_j(eps): degree-1-in-delta Walsh part of
// each slice delta -> F(eps0, delta).
TwoCubeFunction rademacher_projection(const TwoCubeFunction& F);

}  // namespace cubep
