#pragma once

#include <span>

#include "cubep/cube.hpp"

namespace cubep {

// Law of the biased bits xi(t): independent coordinates with
// P(xi_i = +1) = (1 + e^{-t})/2.
struct BiasedBitLaw {
    double t = 0.0;
    double r = 1.0;  // e^{-t}
    int n = 0;

    BiasedBitLaw(double t_, int n_);
};

// prod_i (1 + xi_i r)/2 for the point encoded by xi_index.
double xi_weight(std::uint32_t xi_index, const BiasedBitLaw& law);

// (xi_j - r) / sqrt(1 - r^2); throws DegenerateTime at t = 0.
double delta_weight(int xi_sign, const BiasedBitLaw& law);

// Exact enumeration over xi of
//   (r / sqrt(1 - r^2)) * E_xi[ delta_j(t) f(eps xi) ],
// the probabilistic form of e^{-t Delta} D_j f.
CubeFunction smoothed_derivative(const CubeFunction& f, int j, double t);
CubeFunction smoothed_derivative_serial(const CubeFunction& f, int j, double t);

// Max over j and the grid of the sup-norm gap between the enumeration path
// and the multiplier path heat(d_j f, t).
double verify_main_identity(const CubeFunction& f, std::span<const double> t_grid);

// Gauss-Legendre nodes on theta in (0, pi/2); under e^{-t} = sin(theta) the
// weight e^{-t}/sqrt(1-e^{-2t}) dt becomes exactly d(theta).
struct QuadratureScheme {
    std::vector<double> theta;
    std::vector<double> w;

    static QuadratureScheme gauss_legendre(int node_count);
    std::size_t size() const { return theta.size(); }
};

struct IntegralRepresentation {
    CubeFunction value;
    int sign = 1;          // empirically determined
    double residual = 0.0; // relative, against sign * sum_j D_j f_j
};

// Quadrature evaluation of the integrated identity
//   sum_k w_k E_xi[ sum_j delta_j(t_k) (Delta f_j)(eps xi(t_k)) ],
// t_k = -log(sin theta_k).  Throws QuadratureUnderresolved when neither sign
// brings the relative residual under 1e-6.
IntegralRepresentation integral_representation(const std::vector<CubeFunction>& f_list,
                                               const QuadratureScheme& quad);

}  // namespace cubep
