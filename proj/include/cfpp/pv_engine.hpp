#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <limits>
#include <stdexcept>
#include <string>

#include "cfpp/cf_function.hpp"
#include "cfpp/quadrature.hpp"

namespace cfpp {

// ---------------------------------------------------------------------------
// The sign-kernel transform
//
//   (J_a f)(t) = (1/2pi i) PV \int e^{-iua} f(t+u) du/u
//              = (1/2pi i) \int_0^inf [e^{-iua} f(t+u) - e^{iua} f(t-u)] du/u,
//
// equal to (1/2) E e^{itX} sign(X - a) when f is the c.f. of X. The symmetric
// one-sided form extends continuously to u = 0 (the limit is f'(t) - ia f(t)),
// so no explicit epsilon excision is needed; Gauss-Kronrod nodes never touch
// the endpoint.
// ---------------------------------------------------------------------------

namespace detail {

inline const std::complex<double> inv_2pi_i{0.0, -1.0 / (2.0 * pi)};  // 1/(2*pi*i)

/// Rounding scale of a principal-value integral of unit-modulus inputs: the
/// 1/u kernel turns per-evaluation rounding into roughly eps * log(A). Keeps
/// error budgets honest when the integrand cancels to zero exactly.
inline double pv_rounding_floor(const QuadratureConfig& cfg) {
    return 2e-15 * (1.0 + std::log2(std::max(2.0, cfg.outer_cutoff)));
}

/// Tail oscillation frequency for integrands built from f shifted by `a`:
/// the fundamental of the feature frequencies |x_j - a|, else min of them,
/// else max(|a|, 1).
inline double omega_for(const DistributionSpec& spec, double a) {
    std::vector<double> freqs;
    double scale = std::max(1.0, std::abs(a));
    for (double x : oscillation_features(spec)) {
        scale = std::max(scale, std::abs(x));
        const double w = std::abs(x - a);
        if (w > 1e-12 * scale) freqs.push_back(w);
    }
    if (freqs.empty()) return std::max(std::abs(a), 1.0);
    if (auto g = fundamental_step(freqs); g && *g > 0.0) return *g;
    return *std::min_element(freqs.begin(), freqs.end());
}

/// PvOptions for a CfFunction evaluated at the shifted arguments
/// {anchor_i +- u, u in [0, reach]}.
inline PvOptions pv_options_for(const CfFunction& f, double a,
                                std::initializer_list<double> anchors,
                                const std::string& context) {
    PvOptions opt;
    opt.omega = f.analytic() ? omega_for(*f.spec(), a) : std::max(std::abs(a), 1.0);
    double amax = 0.0;
    for (double t : anchors) amax = std::max(amax, std::abs(t));
    const double reach = f.domain_half_width();
    if (std::isfinite(reach)) {
        opt.u_cap = std::max(0.0, reach - amax);
        opt.throw_on_cap = true;
        opt.cap_context = context;
    }
    return opt;
}

}  // namespace detail

/// (J_a f)(t) for an arbitrary evaluatable function f (complex-valued,
/// continuous, with an existing principal value). Options control the tail.
template <class F>
JResult j_transform_fn(F&& f, double a, double t, const QuadratureConfig& cfg,
                       detail::PvOptions opt = {}) {
    auto g = [&f, a, t](double u) {
        const std::complex<double> e = unit_phase(-u * a);
        return (e * f(t + u) - std::conj(e) * f(t - u)) / u;
    };
    const detail::PvOut r = detail::pv_tail_integral(g, cfg, opt);
    return {r.integral * detail::inv_2pi_i,
            r.err / (2.0 * pi) + detail::pv_rounding_floor(cfg), r.converged};
}

/// (J f)(t1) - (J f)(t2) as a single principal-value integral
/// (1/2pi i) PV \int [f(t1+u) - f(t2+u)] du/u.
template <class F>
JResult j_point_diff_fn(F&& f, double t1, double t2, const QuadratureConfig& cfg,
                        detail::PvOptions opt = {}) {
    auto g = [&f, t1, t2](double u) {
        return ((f(t1 + u) - f(t2 + u)) - (f(t1 - u) - f(t2 - u))) / u;
    };
    const detail::PvOut r = detail::pv_tail_integral(g, cfg, opt);
    return {r.integral * detail::inv_2pi_i,
            r.err / (2.0 * pi) + detail::pv_rounding_floor(cfg), r.converged};
}

/// (J_c f)(t) - e^{itc} (J_c f)(0) as a single principal-value integral.
/// One such term per barrier is what the clamp identities consume.
template <class F>
JResult j_anchor_diff_fn(F&& f, double c, double t, const QuadratureConfig& cfg,
                         detail::PvOptions opt = {}) {
    const std::complex<double> phase = unit_phase(t * c);
    auto g = [&f, c, t, phase](double u) {
        const std::complex<double> e = unit_phase(-u * c);
        const std::complex<double> at_t = e * f(t + u) - std::conj(e) * f(t - u);
        const std::complex<double> at_0 = e * f(u) - std::conj(e) * f(-u);
        return (at_t - phase * at_0) / u;
    };
    const detail::PvOut r = detail::pv_tail_integral(g, cfg, opt);
    return {r.integral * detail::inv_2pi_i,
            r.err / (2.0 * pi) + detail::pv_rounding_floor(cfg), r.converged};
}

/// (J_a f)(t) for a characteristic function. For grid-sampled inputs the
/// quadrature refuses to run past the grid (GridDomainError) rather than
/// truncate silently.
inline JResult j_transform(const CfFunction& f, double a, double t,
                           const QuadratureConfig& cfg = {}) {
    const auto opt = detail::pv_options_for(f, a, {t}, "j_transform at t=" + std::to_string(t));
    return j_transform_fn([&f](double u) { return f(u); }, a, t, cfg, opt);
}

/// (J f)(t) - (J f)(0) -- the one-integral form of the centered transform.
inline JResult j_diff(const CfFunction& f, double t, const QuadratureConfig& cfg = {}) {
    const auto opt = detail::pv_options_for(f, 0.0, {t, 0.0}, "j_diff at t=" + std::to_string(t));
    return j_point_diff_fn([&f](double u) { return f(u); }, t, 0.0, cfg, opt);
}

/// Truncated two-sided transform (J_{a;eps,A} f)(t) =
/// (1/2pi i) [\int_eps^A + \int_{-A}^{-eps}] e^{-iua} f(t+u) du/u, evaluated
/// exactly as the finite integral it is (no tail machinery).
inline std::complex<double> j_truncated(const CfFunction& f, double a, double t, double eps,
                                        double A) {
    if (!(eps > 0.0) || !(eps < A))
        throw std::invalid_argument("j_truncated requires 0 < eps < A");
    const double reach = f.domain_half_width();
    if (std::isfinite(reach) && std::abs(t) + A > reach)
        throw GridDomainError("j_truncated range exceeds the grid half-width");
    auto g = [&f, a, t](double u) {
        const std::complex<double> e = unit_phase(-u * a);
        return (e * f(t + u) - std::conj(e) * f(t - u)) / u;
    };
    // Depth beyond the default config: this is a one-off reference integral.
    const detail::AdaptiveOut r = detail::adaptive_gk(g, eps, A, 1e-10, 24);
    return r.value * detail::inv_2pi_i;
}

/// Hilbert transform of f: H = (2/i) J_0, i.e. (Hf)(t) = -2i (Jf)(t).
inline JResult hilbert_transform(const CfFunction& f, double t,
                                 const QuadratureConfig& cfg = {}) {
    const JResult j = j_transform(f, 0.0, t, cfg);
    return {j.value * std::complex<double>(0.0, -2.0), 2.0 * j.err_estimate, j.converged};
}

}  // namespace cfpp
