#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace cfpp {

inline constexpr double pi = 3.141592653589793238462643383279502884;

/// Evaluation of a grid-sampled characteristic function outside its grid,
/// or a quadrature that would need samples beyond the grid half-width.
/// Extrapolation is never attempted silently.
struct GridDomainError : std::runtime_error {
    explicit GridDomainError(const std::string& what) : std::runtime_error(what) {}
};

/// Dynamic-programming state space exceeded the configured cap.
struct StateCapError : std::runtime_error {
    explicit StateCapError(const std::string& what) : std::runtime_error(what) {}
};

// z^k for integer k >= 0 by repeated squaring (single-valued, no branch issues).
inline std::complex<double> pow_int(std::complex<double> base, int k) {
    std::complex<double> r{1.0, 0.0};
    while (k > 0) {
        if (k & 1) r *= base;
        base *= base;
        k >>= 1;
    }
    return r;
}

// e^{i*theta}
inline std::complex<double> unit_phase(double theta) { return std::polar(1.0, theta); }

inline double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

}  // namespace cfpp
