#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "cfpp/common.hpp"

namespace cfpp {

enum class InterpRule { piecewise_cubic };

/// Uniform symmetric grid of complex samples at t_k = -T + k*delta,
/// k = 0..2m (odd count, t = 0 on-grid). Values between nodes come from
/// piecewise-cubic Hermite interpolation with fourth-order finite-difference
/// slopes, applied to real and imaginary parts separately.
///
/// When `periodic` is set the grid is read as one (or several) full periods
/// of a periodic function and evaluation wraps instead of failing; this is
/// how lattice-distribution c.f.s are carried through the walk recurrences.
struct GridCf {
    double half_width = 0.0;  // T
    double step = 0.0;        // delta
    std::vector<std::complex<double>> samples;
    InterpRule interpolation = InterpRule::piecewise_cubic;
    double tolerance = 1e-9;
    bool periodic = false;

    std::size_t size() const { return samples.size(); }
    std::size_t zero_index() const { return (samples.size() - 1) / 2; }
    double node(std::size_t k) const { return -half_width + step * static_cast<double>(k); }

    void validate_shape() const {
        if (!(half_width > 0.0) || !(step > 0.0))
            throw std::invalid_argument("grid requires positive half-width and step");
        const double ratio = half_width / step;
        if (std::abs(ratio - std::round(ratio)) > 1e-9)
            throw std::invalid_argument("grid half-width must be an integer multiple of the step");
        if (samples.size() != 2 * static_cast<std::size_t>(std::llround(ratio)) + 1)
            throw std::invalid_argument("grid sample count does not match half-width/step");
        if (samples.size() < 5)
            throw std::invalid_argument("grid needs at least five samples for cubic interpolation");
    }

    /// Checks the c.f. invariants the grid is supposed to carry: value 1 at
    /// the origin, modulus <= 1, Hermitian symmetry -- all within `tol`.
    bool check_cf_invariants(double tol) const {
        const std::size_t n = samples.size();
        if (std::abs(std::abs(samples[zero_index()]) - 1.0) > tol) return false;
        for (std::size_t k = 0; k < n; ++k) {
            if (std::abs(samples[k]) > 1.0 + tol) return false;
            if (std::abs(samples[k] - std::conj(samples[n - 1 - k])) > 2.0 * tol) return false;
        }
        return true;
    }

    std::complex<double> value(double t) const {
        const std::size_t n = samples.size();
        double x = t;
        if (periodic) {
            const double period = 2.0 * half_width;
            x = t - period * std::floor((t + half_width) / period);
            // Guard against rounding placing x at exactly +T.
            if (x >= half_width) x -= period;
        } else {
            const double slack = 1e-9 * step;
            if (t < -half_width - slack || t > half_width + slack)
                throw GridDomainError("grid evaluation at t=" + std::to_string(t) +
                                      " outside [-T, T] with T=" + std::to_string(half_width));
            x = std::clamp(t, -half_width, half_width);
        }

        double pos = (x + half_width) / step;
        long j = static_cast<long>(std::floor(pos));
        j = std::clamp<long>(j, 0, static_cast<long>(n) - 2);
        const double th = pos - static_cast<double>(j);

        const auto s0 = slope(j);
        const auto s1 = slope(j + 1);
        const auto f0 = samples[static_cast<std::size_t>(j)];
        const auto f1 = samples[static_cast<std::size_t>(j) + 1];

        const double h00 = (2.0 * th - 3.0) * th * th + 1.0;
        const double h10 = ((th - 2.0) * th + 1.0) * th;
        const double h01 = (3.0 - 2.0 * th) * th * th;
        const double h11 = (th - 1.0) * th * th;
        return h00 * f0 + h01 * f1 + step * (h10 * s0 + h11 * s1);
    }

  private:
    std::complex<double> at_wrapped(long idx) const {
        const long m2 = static_cast<long>(samples.size()) - 1;  // one full period
        idx = ((idx % m2) + m2) % m2;
        return samples[static_cast<std::size_t>(idx)];
    }

    // Fourth-order finite-difference slope at node j.
    std::complex<double> slope(long j) const {
        const long n = static_cast<long>(samples.size());
        const double d12 = 12.0 * step;
        if (periodic) {
            return (at_wrapped(j - 2) - 8.0 * at_wrapped(j - 1) + 8.0 * at_wrapped(j + 1) -
                    at_wrapped(j + 2)) /
                   d12;
        }
        auto f = [&](long k) { return samples[static_cast<std::size_t>(k)]; };
        if (j >= 2 && j <= n - 3)
            return (f(j - 2) - 8.0 * f(j - 1) + 8.0 * f(j + 1) - f(j + 2)) / d12;
        if (j == 0)
            return (-25.0 * f(0) + 48.0 * f(1) - 36.0 * f(2) + 16.0 * f(3) - 3.0 * f(4)) / d12;
        if (j == 1) return (-3.0 * f(0) - 10.0 * f(1) + 18.0 * f(2) - 6.0 * f(3) + f(4)) / d12;
        if (j == n - 1)
            return (25.0 * f(n - 1) - 48.0 * f(n - 2) + 36.0 * f(n - 3) - 16.0 * f(n - 4) +
                    3.0 * f(n - 5)) /
                   d12;
        // j == n - 2
        return (3.0 * f(n - 1) + 10.0 * f(n - 2) - 18.0 * f(n - 3) + 6.0 * f(n - 4) - f(n - 5)) /
               d12;
    }
};

}  // namespace cfpp
