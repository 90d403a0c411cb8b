#pragma once

#include <stdexcept>
#include <string>

namespace cubep {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};
struct IndexOutOfRange : Error {
    using Error::Error;
};
struct CapExceeded : Error {
    using Error::Error;
};
struct NegativeTime : Error {
    using Error::Error;
};
struct DegenerateTime : Error {
    using Error::Error;
};
struct NotMeanZero : Error {
    using Error::Error;
};
struct InvalidExponent : Error {
    using Error::Error;
};
struct TooManyVectors : Error {
    using Error::Error;
};
struct DegenerateRatio : Error {
    using Error::Error;
};
struct QuadratureUnderresolved : Error {
    using Error::Error;
};
struct AllRestartsDegenerate : Error {
    using Error::Error;
};
struct UnsupportedKind : Error {
    using Error::Error;
};
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace cubep
