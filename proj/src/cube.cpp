#include "cubep/cube.hpp"

#include <cmath>
#include <cstring>
#include <utility>

#include <nlohmann/json.hpp>

namespace cubep {

namespace {

void check_dim(int n, int cap, const char* what) {
    if (n < 1 || n > cap)
        throw CapExceeded(std::string(what) + " dimension " + std::to_string(n) +
                          " outside [1, " + std::to_string(cap) + "]");
}

void check_codomain(int d) {
    if (d < 1) throw DimensionMismatch("codomain dimension must be >= 1");
}

}  // namespace

Point::Point(int n_, std::uint32_t index_) : n(n_), index(index_) {
    check_dim(n, kMaxCubeDim, "Point");
    if (index >= (std::uint32_t{1} << n)) throw IndexOutOfRange("point index exceeds 2^n");
}

Point Point::from_signs(std::span<const int> signs) {
    int n = static_cast<int>(signs.size());
    check_dim(n, kMaxCubeDim, "Point");
    std::uint32_t idx = 0;
    for (int i = 0; i < n; ++i) {
        if (signs[i] != 1 && signs[i] != -1) throw Error("point entries must be +1 or -1");
        if (signs[i] == -1) idx |= std::uint32_t{1} << i;
    }
    return Point(n, idx);
}

int Point::sign(int i) const {
    if (i < 0 || i >= n) throw IndexOutOfRange("coordinate index");
    return (index >> i) & 1 ? -1 : 1;
}

std::vector<int> Point::signs() const {
    std::vector<int> s(n);
    for (int i = 0; i < n; ++i) s[i] = sign(i);
    return s;
}

void fwht_inplace_serial(double* data, int n, int d) {
    const std::size_t size = std::size_t{1} << n;
    for (std::size_t h = 1; h < size; h <<= 1) {
        for (std::size_t i = 0; i < size; i += h << 1) {
            for (std::size_t j = i; j < i + h; ++j) {
                double* a = data + j * d;
                double* b = data + (j + h) * d;
                for (int c = 0; c < d; ++c) {
                    double x = a[c], y = b[c];
                    a[c] = x + y;
                    b[c] = x - y;
                }
            }
        }
    }
}

void fwht_inplace(double* data, int n, int d) {
    const std::size_t size = std::size_t{1} << n;
    if (n < 10) {
        fwht_inplace_serial(data, n, d);
        return;
    }
    for (std::size_t h = 1; h < size; h <<= 1) {
        const std::size_t pairs = size >> 1;
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(pairs); ++k) {
            const std::size_t block = static_cast<std::size_t>(k) / h;
            const std::size_t j = block * (h << 1) + static_cast<std::size_t>(k) % h;
            double* a = data + j * d;
            double* b = data + (j + h) * d;
            for (int c = 0; c < d; ++c) {
                double x = a[c], y = b[c];
                a[c] = x + y;
                b[c] = x - y;
            }
        }
    }
}

std::vector<double> walsh_u(std::vector<double> data, int n, int d) {
    fwht_inplace_serial(data.data(), n, d);
    return data;
}

CubeFunction::CubeFunction(int n, int d) : n_(n), d_(d) {
    check_dim(n_, kMaxCubeDim, "CubeFunction");
    check_codomain(d_);
    values_.assign(points() * d_, 0.0);
    has_values_ = true;
}

CubeFunction CubeFunction::from_values(int n, int d, std::vector<double> values) {
    CubeFunction f(n, d);
    if (values.size() != f.points() * static_cast<std::size_t>(d))
        throw DimensionMismatch("values array has wrong size");
    f.values_ = std::move(values);
    f.has_values_ = true;
    f.has_spectrum_ = false;
    return f;
}

CubeFunction CubeFunction::from_spectrum(int n, int d, std::vector<double> spectrum) {
    CubeFunction f(n, d);
    if (spectrum.size() != f.points() * static_cast<std::size_t>(d))
        throw DimensionMismatch("spectrum array has wrong size");
    f.spectrum_ = std::move(spectrum);
    f.values_.clear();
    f.has_values_ = false;
    f.has_spectrum_ = true;
    return f;
}

const std::vector<double>& CubeFunction::values() const {
    if (!has_values_) {
        values_ = spectrum_;
        fwht_inplace(values_.data(), n_, d_);
        has_values_ = true;
    }
    return values_;
}

const std::vector<double>& CubeFunction::spectrum() const {
    if (!has_spectrum_) {
        spectrum_ = values_;
        fwht_inplace(spectrum_.data(), n_, d_);
        const double scale = 1.0 / static_cast<double>(points());
        for (double& x : spectrum_) x *= scale;
        has_spectrum_ = true;
    }
    return spectrum_;
}

std::span<const double> CubeFunction::value_at(std::uint32_t eps) const {
    if (eps >= points()) throw IndexOutOfRange("point index");
    return {values().data() + std::size_t{eps} * d_, static_cast<std::size_t>(d_)};
}

std::span<const double> CubeFunction::coeff_at(std::uint32_t mask) const {
    if (mask >= points()) throw IndexOutOfRange("subset mask");
    return {spectrum().data() + std::size_t{mask} * d_, static_cast<std::size_t>(d_)};
}

std::vector<double>& CubeFunction::mutable_values() {
    values();  // materialize first
    has_spectrum_ = false;
    spectrum_.clear();
    return values_;
}

std::vector<double>& CubeFunction::mutable_spectrum() {
    spectrum();
    has_values_ = false;
    values_.clear();
    return spectrum_;
}

std::vector<double> CubeFunction::expectation() const {
    std::vector<double> e(d_, 0.0);
    if (has_spectrum_) {
        for (int c = 0; c < d_; ++c) e[c] = spectrum_[c];
        return e;
    }
    const double w = 1.0 / static_cast<double>(points());
    for (std::size_t eps = 0; eps < points(); ++eps)
        for (int c = 0; c < d_; ++c) e[c] += w * values_[eps * d_ + c];
    return e;
}

CubeFunction walsh_forward(const CubeFunction& f) {
    CubeFunction g = f;
    g.spectrum();
    return g;
}

CubeFunction walsh_inverse(const CubeFunction& f) {
    CubeFunction g = f;
    g.values();
    return g;
}

std::vector<double> expectation(const CubeFunction& f) { return f.expectation(); }

CubeFunction translate(const CubeFunction& f, const Point& xi) {
    if (xi.n != f.n()) throw DimensionMismatch("translate: dimension mismatch");
    const int d = f.d();
    const auto& v = f.values();
    std::vector<double> out(v.size());
    for (std::size_t eps = 0; eps < f.points(); ++eps) {
        const std::size_t src = eps ^ xi.index;
        std::memcpy(out.data() + eps * d, v.data() + src * d, sizeof(double) * d);
    }
    return CubeFunction::from_values(f.n(), d, std::move(out));
}

TwoCubeFunction::TwoCubeFunction(int n, int d) : n_(n), d_(d) {
    check_dim(n_, kMaxTwoCubeDim, "TwoCubeFunction");
    check_codomain(d_);
    values_.assign(points() * d_, 0.0);
}

TwoCubeFunction TwoCubeFunction::from_values(int n, int d, std::vector<double> values) {
    TwoCubeFunction f(n, d);
    if (values.size() != f.points() * static_cast<std::size_t>(d))
        throw DimensionMismatch("values array has wrong size");
    f.values_ = std::move(values);
    return f;
}

std::span<const double> TwoCubeFunction::value_at(std::uint32_t eps, std::uint32_t delta) const {
    const std::size_t side = std::size_t{1} << n_;
    if (eps >= side || delta >= side) throw IndexOutOfRange("two-cube point index");
    const std::size_t idx = (std::size_t{delta} << n_) | eps;
    return {values_.data() + idx * d_, static_cast<std::size_t>(d_)};
}

CubeFunction TwoCubeFunction::slice_eps(std::uint32_t delta) const {
    const std::size_t side = std::size_t{1} << n_;
    if (delta >= side) throw IndexOutOfRange("delta index");
    std::vector<double> v(side * d_);
    std::memcpy(v.data(), values_.data() + (std::size_t{delta} << n_) * d_,
                sizeof(double) * v.size());
    return CubeFunction::from_values(n_, d_, std::move(v));
}

CubeFunction TwoCubeFunction::slice_delta(std::uint32_t eps) const {
    const std::size_t side = std::size_t{1} << n_;
    if (eps >= side) throw IndexOutOfRange("eps index");
    std::vector<double> v(side * d_);
    for (std::size_t delta = 0; delta < side; ++delta)
        std::memcpy(v.data() + delta * d_,
                    values_.data() + ((delta << n_) | eps) * d_, sizeof(double) * d_);
    return CubeFunction::from_values(n_, d_, std::move(v));
}

std::string to_json(const CubeFunction& f, bool prefer_spectrum) {
    nlohmann::json j;
    j["n"] = f.n();
    j["d"] = f.d();
    if (prefer_spectrum)
        j["spectrum"] = f.spectrum();
    else
        j["values"] = f.values();
    return j.dump();
}

CubeFunction cube_function_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    const int n = j.at("n").get<int>();
    const int d = j.at("d").get<int>();
    if (j.contains("values"))
        return CubeFunction::from_values(n, d, j.at("values").get<std::vector<double>>());
    if (j.contains("spectrum"))
        return CubeFunction::from_spectrum(n, d, j.at("spectrum").get<std::vector<double>>());
    throw ConfigError("cube function JSON needs \"values\" or \"spectrum\"");
}

std::string to_json(const TwoCubeFunction& f) {
    nlohmann::json j;
    j["n"] = f.n();
    j["d"] = f.d();
    j["values"] = f.values();
    return j.dump();
}

TwoCubeFunction two_cube_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    return TwoCubeFunction::from_values(j.at("n").get<int>(), j.at("d").get<int>(),
                                        j.at("values").get<std::vector<double>>());
}

}  // namespace cubep
