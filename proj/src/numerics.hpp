#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace rauc {

struct Tolerance {
    double quad_abs_tol = 1e-11;
    double root_abs_tol = 1e-12;
    double series_term_tol = 1e-15;
    int max_iter = 200;

    void validate() const;
};

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Raised when an iterative kernel gives up; carries whatever estimate it had.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what,
                            double partial = std::numeric_limits<double>::quiet_NaN())
        : std::runtime_error(what), partial_(partial) {}
    double partial() const noexcept { return partial_; }

private:
    double partial_;
};

class BracketError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

using ScalarFn = std::function<double(double)>;

double integrate(const ScalarFn& f, double lo, double hi, const Tolerance& tol = {});

double find_root(const ScalarFn& f, double lo, double hi, const Tolerance& tol = {});

// sum_{k>=s} x^(k-s) / k for 0 <= x < 1, where om = 1 - x is passed separately
// so callers holding 1 - x exactly (e.g. c/v) lose nothing to cancellation.
double log_tail_scaled(int s, double x, double om, const Tolerance& tol = {});

// sum_{k>=s} x^k / k
double log_tail(int s, double x, double om, const Tolerance& tol = {});

// int_a^v (t-a)^(n-1) / (t-phi0)^n dt
double iso_integral(int n, double phi0, double a, double v, const Tolerance& tol = {});

// int_a^v [(t-a)^(n-1)/(t-phi0)^n - (1-lambda)(t-a)^n/(t-phi0)^(n+1)] dt
double iso_integral_mixed(int n, double phi0, double a, double v, double lambda,
                          const Tolerance& tol = {});

// Deterministic 64-bit stream seeding: (seed, stream) -> generator seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace rauc
