#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cubep/errors.hpp"

namespace cubep {

// Sign convention used everywhere: a point of the cube {-1,+1}^n is encoded
// as an n-bit index, bit i set <=> eps_i = -1.  A subset S of coordinates is
// an n-bit mask, bit j set <=> j in S.  The Walsh character is then
// w_S(eps) = prod_{i in S} eps_i = (-1)^popcount(mask & eps_index).

inline constexpr int kMaxCubeDim = 14;     // CubeFunction cap
inline constexpr int kMaxTwoCubeDim = 7;   // TwoCubeFunction cap

struct Point {
    int n = 0;
    std::uint32_t index = 0;

    Point(int n_, std::uint32_t index_);
    static Point from_signs(std::span<const int> signs);

    int sign(int i) const;               // +1 or -1
    std::vector<int> signs() const;
};

// w_S(eps), both arguments in index encoding.
inline double walsh_sign(std::uint32_t mask, std::uint32_t eps_index) {
    return (__builtin_popcount(mask & eps_index) & 1) ? -1.0 : 1.0;
}

// Unnormalized Walsh-Hadamard butterfly applied in place to 2^n rows of
// length d.  The transform is its own inverse up to a factor 2^n.
void fwht_inplace_serial(double* data, int n, int d);
void fwht_inplace(double* data, int n, int d);  // OpenMP for large n

// Value-returning unnormalized transform (the matrix is symmetric, so this
// is also the transpose action used by gradient code).
std::vector<double> walsh_u(std::vector<double> data, int n, int d);

// X-valued function on the cube, kept in up to two representations: point
// values and Walsh coefficients.  Conversion is lazy and cached; call
// values()/spectrum() once before sharing across threads.
class CubeFunction {
  public:
    CubeFunction(int n, int d);  // zero function, values valid
    static CubeFunction from_values(int n, int d, std::vector<double> values);
    static CubeFunction from_spectrum(int n, int d, std::vector<double> spectrum);

    int n() const { return n_; }
    int d() const { return d_; }
    std::size_t points() const { return std::size_t{1} << n_; }

    const std::vector<double>& values() const;
    const std::vector<double>& spectrum() const;
    bool has_values() const { return has_values_; }
    bool has_spectrum() const { return has_spectrum_; }

    std::span<const double> value_at(std::uint32_t eps) const;
    std::span<const double> coeff_at(std::uint32_t mask) const;

    // Mutable access drops the other representation.
    std::vector<double>& mutable_values();
    std::vector<double>& mutable_spectrum();

    std::vector<double> expectation() const;

  private:
    int n_;
    int d_;
    mutable std::vector<double> values_;
    mutable std::vector<double> spectrum_;
    mutable bool has_values_ = false;
    mutable bool has_spectrum_ = false;
};

// Populate the missing representation explicitly (spec names for the two
// conversion directions).
CubeFunction walsh_forward(const CubeFunction& f);   // spectrum from values
CubeFunction walsh_inverse(const CubeFunction& f);   // values from spectrum

std::vector<double> expectation(const CubeFunction& f);

// result(eps) = f(eps * xi), coordinatewise product = XOR of indices.
CubeFunction translate(const CubeFunction& f, const Point& xi);

// X-valued function on the product cube, value storage only.
// Index layout: values[(delta << n | eps) * d + c].
class TwoCubeFunction {
  public:
    TwoCubeFunction(int n, int d);
    static TwoCubeFunction from_values(int n, int d, std::vector<double> values);

    int n() const { return n_; }
    int d() const { return d_; }
    std::size_t points() const { return std::size_t{1} << (2 * n_); }

    const std::vector<double>& values() const { return values_; }
    std::vector<double>& mutable_values() { return values_; }

    std::span<const double> value_at(std::uint32_t eps, std::uint32_t delta) const;

    CubeFunction slice_eps(std::uint32_t delta) const;   // eps -> F(eps, delta)
    CubeFunction slice_delta(std::uint32_t eps) const;   // delta -> F(eps, delta)

  private:
    int n_;
    int d_;
    std::vector<double> values_;
};

// JSON (de)serialization, schema {"n":..,"d":..,"values":[...]} or "spectrum".
std::string to_json(const CubeFunction& f, bool prefer_spectrum = false);
CubeFunction cube_function_from_json(const std::string& text);
std::string to_json(const TwoCubeFunction& f);
TwoCubeFunction two_cube_from_json(const std::string& text);

}  // namespace cubep
