#pragma once

#include <cassert>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cfpp/pv_engine.hpp"
#include "cfpp/transforms.hpp"

namespace cfpp {

// ===========================================================================
// Generating-function identities for random-walk maxima
// ===========================================================================

/// Parameters of the power-series comparisons: series variable z (|z| < 1),
/// frequency arguments (s, t), and truncation order for series sides.
struct SpitzerParams {
    std::complex<double> z{0.0, 0.0};
    double s = 0.0;
    double t = 0.0;
    int order = 40;  // N: series truncated at z^N

    void validate() const {
        if (!(std::abs(z) <= 1.0 - 1e-6))
            throw std::invalid_argument("series variable requires |z| <= 1 - 1e-6");
        if (order < 0) throw std::invalid_argument("truncation order must be >= 0");
    }
};

/// Geometric bound on the discarded series tail: |z|^{N+1} / (1 - |z|),
/// valid because every coefficient is a c.f. value of modulus <= 1.
inline double spitzer_truncation_bound(std::complex<double> z, int order) {
    const double r = std::abs(z);
    if (r == 0.0) return 0.0;
    return std::pow(r, order + 1) / (1.0 - r);
}

namespace detail {

// 1 - z f(x) lies in the right half-plane whenever |z| < 1 and |f| <= 1, so
// principal logs and square roots below never cross the branch cut.
inline std::complex<double> one_minus_zf(std::complex<double> z, std::complex<double> fx) {
    const std::complex<double> w = 1.0 - z * fx;
    assert(w.real() > 0.0);
    return w;
}

}  // namespace detail

/// psi_k(s) = E e^{is (S_k)+} = (1/2)[1 + f(s)^k] + (Jf^k)(s) - (Jf^k)(0),
/// with f^k the pointwise k-th power of the step c.f.
inline JResult psi_k(const CfFunction& f, int k, double s, const QuadratureConfig& cfg = {}) {
    if (k < 1) throw std::invalid_argument("psi_k requires k >= 1");
    auto fk = [&f, k](double u) { return pow_int(f(u), k); };
    const auto opt = detail::pv_options_for(f, 0.0, {s, 0.0}, "psi_k");
    const JResult d = j_point_diff_fn(fk, s, 0.0, cfg, opt);
    return {0.5 * (1.0 + pow_int(f(s), k)) + d.value, d.err_estimate, d.converged};
}

/// theta_k(t) = E e^{it (S_k)-}; identical to psi_k with f replaced by its
/// reflection (the c.f. of -X).
inline JResult theta_k(const CfFunction& f, int k, double t, const QuadratureConfig& cfg = {}) {
    return psi_k(reflect_cf(f), k, t, cfg);
}

/// (J ln 1/(1 - z f))(s) = sum_{k>=1} (z^k / k) (J f^k)(s), evaluated as a
/// single transform of the principal-branch logarithm.
inline JResult log_series_j(const CfFunction& f, std::complex<double> z, double s,
                            const QuadratureConfig& cfg = {}) {
    if (!(std::abs(z) <= 1.0 - 1e-6))
        throw std::invalid_argument("log_series_j requires |z| <= 1 - 1e-6");
    auto lf = [&f, z](double u) { return -std::log(detail::one_minus_zf(z, f(u))); };
    const auto opt = detail::pv_options_for(f, 0.0, {s}, "log_series_j");
    return j_transform_fn(lf, 0.0, s, cfg, opt);
}

/// Truncated power series sum_{n<=N} phi_n(s,t) z^n, with
/// phi_n(s,t) = E exp{i [s M_n + t (M_n - S_n)]} supplied by an oracle
/// (exact DP or Monte Carlo). err_estimate is the geometric truncation bound.
inline JResult spitzer_lhs(const SpitzerParams& p,
                           const std::function<std::complex<double>(int)>& phi_n) {
    p.validate();
    std::complex<double> acc{0.0, 0.0};
    std::complex<double> zn{1.0, 0.0};
    for (int n = 0; n <= p.order; ++n) {
        acc += zn * phi_n(n);
        zn *= p.z;
    }
    return {acc, spitzer_truncation_bound(p.z, p.order), true};
}

/// Product form of the same generating function, evaluated directly from the
/// step c.f.:
///
///   sum_n phi_n(s,t) z^n = [(1 - z f(s)) (1 - z f(-t))]^{-1/2} * exp(V),
///   V = (1/4pi i) PV \int du/u [ ln((1-z f(s-u))/(1-z f(s+u)))
///                              + ln((1-z f(-t+u))/(1-z f(-t-u))) ].
///
/// The two logarithms are kept separate; each ratio's argument stays in
/// (-pi, pi) because both factors lie in the right half-plane.
inline JResult spitzer_rhs(const CfFunction& f, const SpitzerParams& p,
                           const QuadratureConfig& cfg = {}) {
    p.validate();
    const std::complex<double> z = p.z;
    const double s = p.s, t = p.t;

    auto g = [&f, z, s, t](double u) {
        const std::complex<double> l1 = std::log(detail::one_minus_zf(z, f(s - u))) -
                                        std::log(detail::one_minus_zf(z, f(s + u)));
        const std::complex<double> l2 = std::log(detail::one_minus_zf(z, f(-t + u))) -
                                        std::log(detail::one_minus_zf(z, f(-t - u)));
        return (l1 + l2) / u;
    };
    // The integrand is even, so the two-sided 1/(4 pi i) integral equals the
    // one-sided 1/(2 pi i) form the tail engine computes.
    auto opt = detail::pv_options_for(f, 0.0, {s, -t}, "spitzer_rhs");
    const detail::PvOut r = detail::pv_tail_integral(g, cfg, opt);
    const std::complex<double> v = r.integral * detail::inv_2pi_i;

    const std::complex<double> pref =
        1.0 / std::sqrt(detail::one_minus_zf(z, f(s)) * detail::one_minus_zf(z, f(-t)));
    const std::complex<double> value = pref * std::exp(v);
    // First-order propagation of the exponent's quadrature error.
    const double err = std::abs(value) * (r.err / (2.0 * pi)) + 1e-15 * std::abs(value);
    return {value, err, r.converged};
}

/// t = 0 slice: sum_n E e^{is M_n} z^n.
inline JResult spitzer_rhs_max(const CfFunction& f, double s, std::complex<double> z,
                               const QuadratureConfig& cfg = {}) {
    return spitzer_rhs(f, SpitzerParams{z, s, 0.0, 0}, cfg);
}

/// Classic exponential form, term-computed:
///   exp{ sum_{k<=N} (z^k/k) [psi_k(s) + theta_k(t) - 1] }.
/// Cross-validates the per-k positive-part identities against the product
/// form. err_estimate carries quadrature errors plus the series tail bound.
inline JResult spitzer_classic_rhs(const CfFunction& f, const SpitzerParams& p,
                                   const QuadratureConfig& cfg = {}) {
    p.validate();
    const CfFunction fr = reflect_cf(f);
    std::complex<double> expo{0.0, 0.0};
    double term_err = 0.0;
    std::complex<double> zk{1.0, 0.0};
    bool converged = true;
    for (int k = 1; k <= p.order; ++k) {
        zk *= p.z;
        const JResult ps = psi_k(f, k, p.s, cfg);
        const JResult th = psi_k(fr, k, p.t, cfg);
        expo += zk / static_cast<double>(k) * (ps.value + th.value - 1.0);
        term_err += std::abs(zk) / static_cast<double>(k) * (ps.err_estimate + th.err_estimate);
        converged = converged && ps.converged && th.converged;
    }
    const double r = std::abs(p.z);
    const double trunc =
        r == 0.0 ? 0.0
                 : 3.0 * std::pow(r, p.order + 1) / ((p.order + 1) * (1.0 - r));
    const std::complex<double> value = std::exp(expo);
    return {value, std::abs(value) * (term_err + trunc), converged};
}

// ===========================================================================
// Walk recurrences carried as grid c.f.s
// ===========================================================================

struct WalkRecurrenceConfig {
    double grid_half_width = pi;  // T
    double grid_step = pi / 64.0;
    QuadratureConfig quad{};
    int n_max = 8;

    /// lattice: the step law lives on g*Z, the grid spans whole periods of
    ///          the (periodic) c.f.s, and products are evaluated by wrapping.
    /// decay:   the step c.f. has an integrable envelope; products are
    ///          truncated at the grid edge with an explicit tail-error bound.
    enum class Mode { automatic, lattice, decay };
    Mode mode = Mode::automatic;
};

/// One step of a recurrence: the grid c.f. plus per-node error budgets and
/// per-node quadrature convergence flags.
struct WalkStep {
    GridCf cf;
    std::vector<double> node_err;
    std::vector<std::uint8_t> node_converged;

    double max_err() const {
        double m = 0.0;
        for (double e : node_err) m = std::max(m, e);
        return m;
    }
    bool all_converged() const {
        for (auto c : node_converged)
            if (!c) return false;
        return true;
    }
};

namespace detail {

struct WalkModeInfo {
    WalkRecurrenceConfig::Mode mode;
    double omega = 1.0;       // lattice: fundamental frequency of the step law
    CfEnvelope envelope;      // decay: envelope of the step c.f.
};

inline WalkModeInfo resolve_walk_mode(const DistributionSpec& spec,
                                      const WalkRecurrenceConfig& w,
                                      const std::vector<double>& extra_lattice_points) {
    const auto lat = lattice_structure(spec);
    const auto env = cf_envelope(spec);

    auto lattice_fits = [&]() -> std::optional<double> {
        if (!lat) return std::nullopt;
        std::vector<double> pts;
        for (auto& [x, p] : lat->atoms) pts.push_back(x);
        for (double v : extra_lattice_points) pts.push_back(v);
        const auto g = fundamental_step(pts);
        if (!g) return std::nullopt;
        if (*g == 0.0) return pi / w.grid_half_width;  // constant c.f.: any period fits
        // The grid must span an integer number of half-periods pi/g.
        const double k = w.grid_half_width * *g / pi;
        if (std::abs(k - std::round(k)) > 1e-9 || std::round(k) < 1.0) return std::nullopt;
        return *g;
    };

    switch (w.mode) {
        case WalkRecurrenceConfig::Mode::lattice: {
            const auto g = lattice_fits();
            if (!g)
                throw std::invalid_argument(
                    "lattice mode requires commensurate atoms (and barriers) with the grid "
                    "half-width a multiple of pi/step");
            return {WalkRecurrenceConfig::Mode::lattice, *g, env};
        }
        case WalkRecurrenceConfig::Mode::decay: {
            if (!env.decays)
                throw std::invalid_argument(
                    "decay mode requires a c.f. envelope that decays (lattice-type "
                    "distributions never qualify)");
            return {WalkRecurrenceConfig::Mode::decay, 1.0, env};
        }
        case WalkRecurrenceConfig::Mode::automatic:
        default: {
            if (const auto g = lattice_fits())
                return {WalkRecurrenceConfig::Mode::lattice, *g, env};
            if (env.decays) return {WalkRecurrenceConfig::Mode::decay, 1.0, env};
            throw std::invalid_argument(
                "distribution supports neither lattice nor decay walk mode");
        }
    }
}

/// (1/2pi) int_{u0}^inf env(max(0, u - shift)) / u du, the discarded-tail
/// bound for one evaluation stream. Capped at 1/2 (a transform of a c.f.
/// never exceeds 1/2 in modulus).
inline double envelope_stream_bound(const CfEnvelope& env, double u0, double shift) {
    if (u0 <= 0.0) return 0.5;
    double total = 0.0;
    double lo = u0;
    for (int k = 0; k < 60; ++k) {
        const double hi = 2.0 * lo;
        const auto seg = adaptive_gk(
            [&](double u) {
                return std::complex<double>(env.bound(std::max(0.0, u - shift)) / u, 0.0);
            },
            lo, hi, 1e-12, 10);
        total += seg.value.real();
        if (seg.value.real() < 1e-18) break;
        lo = hi;
        if (total > pi) break;  // bound already useless; the cap applies
    }
    return std::min(0.5, total / (2.0 * pi));
}

struct NodeEval {
    std::complex<double> value;
    double err;
    bool converged;
};

}  // namespace detail

/// Queueing-maximum recurrence: with f the step c.f., M_n the running maximum
/// of the walk (equal in law to the waiting-time chain T_n = (T_{n-1}+X_n)+),
/// the c.f. f_n of M_n satisfies
///
///   f_0 = 1,   f_n = (1/2)(1 + f_{n-1} f) + J(f_{n-1} f) - J(f_{n-1} f)(0).
///
/// Returns f_0..f_{n_max} on the configured grid. The step spec must be
/// analytic; each node carries its own error budget and convergence flag.
inline std::vector<WalkStep> lindley_cf_recurrence(const CfFunction& f,
                                                   const WalkRecurrenceConfig& w) {
    if (!f.analytic())
        throw std::invalid_argument("recurrences require an analytic step distribution");
    const DistributionSpec& spec = *f.spec();
    const auto mode = detail::resolve_walk_mode(spec, w, {});
    if (w.n_max < 0) throw std::invalid_argument("n_max must be >= 0");

    const double T = w.grid_half_width;
    const double d = w.grid_step;
    const bool lattice = mode.mode == WalkRecurrenceConfig::Mode::lattice;

    GridCf zero_step;
    zero_step.half_width = T;
    zero_step.step = d;
    zero_step.periodic = lattice;
    {
        const double ratio = T / d;
        if (std::abs(ratio - std::round(ratio)) > 1e-9)
            throw std::invalid_argument("grid half-width must be an integer multiple of the step");
        zero_step.samples.assign(2 * static_cast<std::size_t>(std::llround(ratio)) + 1,
                                 {1.0, 0.0});
        zero_step.validate_shape();
    }

    std::vector<WalkStep> steps;
    steps.reserve(static_cast<std::size_t>(w.n_max) + 1);
    steps.push_back({zero_step, std::vector<double>(zero_step.size(), 0.0),
                     std::vector<std::uint8_t>(zero_step.size(), 1)});

    const std::size_t n_nodes = zero_step.size();
    const std::size_t mid = zero_step.zero_index();

    for (int n = 1; n <= w.n_max; ++n) {
        const GridCf& prev = steps.back().cf;
        auto product = [&prev, &f, T, lattice](double x) -> std::complex<double> {
            if (!lattice && std::abs(x) > T) return {0.0, 0.0};
            return prev.value(x) * f(x);
        };

        GridCf cur = zero_step;
        std::vector<double> errs(n_nodes, 0.0);
        std::vector<std::uint8_t> conv(n_nodes, 1);

        for (std::size_t k = mid; k < n_nodes; ++k) {
            const double t = cur.node(k);
            detail::PvOptions opt;
            opt.omega = lattice ? mode.omega : 1.0;
            double bound = 0.0;
            if (!lattice) {
                opt.u_cap = std::max(0.0, T - t);
                opt.tail = false;
                // Four evaluation streams: t +- u and 0 +- u.
                bound = 2.0 * detail::envelope_stream_bound(mode.envelope, opt.u_cap, t) +
                        2.0 * detail::envelope_stream_bound(mode.envelope, opt.u_cap, 0.0);
            }
            const JResult jr = j_point_diff_fn(product, t, 0.0, w.quad, opt);
            const std::complex<double> val = 0.5 * (1.0 + product(t)) + jr.value;
            cur.samples[k] = val;
            errs[k] = jr.err_estimate + bound;
            conv[k] = jr.converged ? 1 : 0;
            // The law of M_n is real-valued, so its c.f. is Hermitian.
            cur.samples[n_nodes - 1 - k] = std::conj(val);
            errs[n_nodes - 1 - k] = errs[k];
            conv[n_nodes - 1 - k] = conv[k];
        }
        double max_err = 0.0;
        for (double e : errs) max_err = std::max(max_err, e);
        cur.tolerance = max_err + 1e-9;
        steps.push_back({std::move(cur), std::move(errs), std::move(conv)});
    }
    return steps;
}

/// Two-barrier walk recurrence: U_0 = x, U_n = a v (b ^ (U_{n-1} + X_n)),
/// carried as the c.f. sequence
///
///   g_0 = e^{ix.},
///   g_n = (1/2)(e^{ia.} + e^{ib.}) + I_a[g_{n-1} f] - I_b[g_{n-1} f],
///
/// where I_c[h](t) = (J_c h)(t) - e^{itc} (J_c h)(0).
inline std::vector<WalkStep> barrier_cf_recurrence(const CfFunction& f, double a, double b,
                                                   double x, const WalkRecurrenceConfig& w) {
    if (!f.analytic())
        throw std::invalid_argument("recurrences require an analytic step distribution");
    if (!(a <= x && x <= b)) throw std::invalid_argument("barrier walk requires a <= x <= b");
    if (w.n_max < 0) throw std::invalid_argument("n_max must be >= 0");
    const DistributionSpec& spec = *f.spec();
    const auto mode = detail::resolve_walk_mode(spec, w, {a, b, x});
    const bool lattice = mode.mode == WalkRecurrenceConfig::Mode::lattice;

    const double T = w.grid_half_width;
    const double d = w.grid_step;

    GridCf start;
    start.half_width = T;
    start.step = d;
    start.periodic = lattice;
    {
        const double ratio = T / d;
        if (std::abs(ratio - std::round(ratio)) > 1e-9)
            throw std::invalid_argument("grid half-width must be an integer multiple of the step");
        start.samples.resize(2 * static_cast<std::size_t>(std::llround(ratio)) + 1);
        for (std::size_t k = 0; k < start.samples.size(); ++k)
            start.samples[k] = unit_phase(start.node(k) * x);
        start.validate_shape();
    }

    std::vector<WalkStep> steps;
    steps.reserve(static_cast<std::size_t>(w.n_max) + 1);
    steps.push_back({start, std::vector<double>(start.size(), 0.0),
                     std::vector<std::uint8_t>(start.size(), 1)});

    const std::size_t n_nodes = start.size();
    const std::size_t mid = start.zero_index();

    for (int n = 1; n <= w.n_max; ++n) {
        const GridCf& prev = steps.back().cf;
        auto product = [&prev, &f, T, lattice](double u) -> std::complex<double> {
            if (!lattice && std::abs(u) > T) return {0.0, 0.0};
            return prev.value(u) * f(u);
        };

        GridCf cur = start;
        std::vector<double> errs(n_nodes, 0.0);
        std::vector<std::uint8_t> conv(n_nodes, 1);

        for (std::size_t k = mid; k < n_nodes; ++k) {
            const double t = cur.node(k);
            std::complex<double> val;
            double err = 0.0;
            bool ok = true;
            if (a == b) {
                val = unit_phase(t * a);  // the two anchor terms cancel exactly
            } else {
                auto eval_anchor = [&](double c) {
                    detail::PvOptions opt;
                    // In lattice mode the barriers sit on the same lattice, so
                    // the fundamental frequency covers both anchors.
                    opt.omega = lattice ? mode.omega : std::max(std::abs(c), 1.0);
                    double bound = 0.0;
                    if (!lattice) {
                        opt.u_cap = std::max(0.0, T - t);
                        opt.tail = false;
                        bound = 2.0 * detail::envelope_stream_bound(mode.envelope, opt.u_cap, t) +
                                2.0 * detail::envelope_stream_bound(mode.envelope, opt.u_cap, 0.0);
                    }
                    JResult r = j_anchor_diff_fn(product, c, t, w.quad, opt);
                    r.err_estimate += bound;
                    return r;
                };
                const JResult ia = eval_anchor(a);
                const JResult ib = eval_anchor(b);
                val = 0.5 * (unit_phase(t * a) + unit_phase(t * b)) + ia.value - ib.value;
                err = ia.err_estimate + ib.err_estimate;
                ok = ia.converged && ib.converged;
            }
            cur.samples[k] = val;
            errs[k] = err;
            conv[k] = ok ? 1 : 0;
            cur.samples[n_nodes - 1 - k] = std::conj(val);
            errs[n_nodes - 1 - k] = err;
            conv[n_nodes - 1 - k] = conv[k];
        }
        double max_err = 0.0;
        for (double e : errs) max_err = std::max(max_err, e);
        cur.tolerance = max_err + 1e-9;
        steps.push_back({std::move(cur), std::move(errs), std::move(conv)});
    }
    return steps;
}

}  // namespace cfpp
