#pragma once

#include <stdexcept>
#include <string>

namespace specproj {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ShapeError : Error {
    using Error::Error;
};

struct NotSkewSymmetric : Error {
    NotSkewSymmetric(int beta, int row, int col)
        : Error("B^" + std::to_string(beta + 1) + " is not skew-symmetric at (" +
                std::to_string(row) + "," + std::to_string(col) + ")"),
          beta(beta), row(row), col(col) {}
    int beta, row, col;
};

struct Degenerate : Error {
    Degenerate(std::string msg, std::vector<double> tau, double sigma_min)
        : Error(std::move(msg)), tau(std::move(tau)), sigma_min(sigma_min) {}
    std::vector<double> tau;
    double sigma_min;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct NonPositiveLambda : Error {
    using Error::Error;
};

struct ZeroTau : Error {
    using Error::Error;
};

struct DegenerateTau : Error {
    using Error::Error;
};

struct SpectrumEscapedContour : Error {
    using Error::Error;
};

struct NegativeDegree : Error {
    using Error::Error;
};

struct NegativeArgument : Error {
    using Error::Error;
};

struct YZero : Error {
    using Error::Error;
};

struct OriginPoint : Error {
    using Error::Error;
};

struct RNotInRange : Error {
    using Error::Error;
};

struct QuadratureNotConverged : Error {
    using Error::Error;
};

struct WrongSpace : Error {
    using Error::Error;
};

struct GridMismatch : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

} // namespace specproj
