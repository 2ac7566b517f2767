#pragma once

#include <stdexcept>
#include <string>

namespace spinpoint {

// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A physical parameter outside its admissible domain (mu <= 0, k <= 0, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// API misuse, e.g. composing an empty list of matrices.
class UsageError : public Error {
public:
    using Error::Error;
};

// Transfer matrix that does not conserve the probability current.
class InvalidTransferError : public Error {
public:
    InvalidTransferError(const std::string& what, double residual)
        : Error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

// The scattering problem has no unique solution at this momentum.
class SpectralSingularityError : public Error {
public:
    explicit SpectralSingularityError(double k)
        : Error("spectral singularity at k = " + std::to_string(k)), k_(k) {}
    double k() const noexcept { return k_; }

private:
    double k_;
};

// Not enough data for a least-squares fit.
class FitError : public Error {
public:
    using Error::Error;
};

}  // namespace spinpoint
