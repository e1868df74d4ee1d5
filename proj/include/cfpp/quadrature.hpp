#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "cfpp/common.hpp"

namespace cfpp {

/// Controls for the principal-value integrals.
struct QuadratureConfig {
    double outer_cutoff = 50.0;  // A: end of the adaptively integrated range [0, A]
    double panel_tol = 1e-9;     // per-panel absolute error target
    int max_depth = 15;          // adaptive bisection limit
    int tail_periods = 64;       // half-period chunks summed beyond the cutoff
    int accel_terms = 14;        // averaging depth on the alternating chunk series

    void validate() const {
        if (!(outer_cutoff >= 1.0)) throw std::invalid_argument("outer cutoff A must be >= 1");
        if (!(panel_tol > 0.0 && panel_tol < 1.0))
            throw std::invalid_argument("panel tolerance must lie in (0, 1)");
        if (max_depth < 1) throw std::invalid_argument("max depth must be >= 1");
        if (tail_periods < 1 || accel_terms < 1)
            throw std::invalid_argument("tail parameters must be >= 1");
    }
};

/// Value + error budget of one transform evaluation. `converged` is false when
/// the bisection depth or the tail budget ran out before meeting panel_tol.
struct JResult {
    std::complex<double> value{0.0, 0.0};
    double err_estimate = 0.0;
    bool converged = true;
};

namespace detail {

// 15-point Gauss-Kronrod pair on [-1, 1] (QUADPACK abscissae/weights).
inline constexpr double gk15_x[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double gk15_wk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double gk15_wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelResult {
    std::complex<double> integral;
    double err;
    double abs_integral;
};

template <class F>
PanelResult gk15(F&& f, double lo, double hi) {
    const double c = 0.5 * (lo + hi);
    const double h = 0.5 * (hi - lo);
    const std::complex<double> fc = f(c);
    std::complex<double> kron = gk15_wk[7] * fc;
    std::complex<double> gauss = gk15_wg[3] * fc;
    double resabs = gk15_wk[7] * std::abs(fc);
    for (int i = 0; i < 7; ++i) {
        const std::complex<double> f1 = f(c - h * gk15_x[i]);
        const std::complex<double> f2 = f(c + h * gk15_x[i]);
        kron += gk15_wk[i] * (f1 + f2);
        resabs += gk15_wk[i] * (std::abs(f1) + std::abs(f2));
        if (i % 2 == 1) gauss += gk15_wg[i / 2] * (f1 + f2);
    }
    return {kron * h, std::abs((kron - gauss) * h), resabs * h};
}

struct AdaptiveOut {
    std::complex<double> value{0.0, 0.0};
    double err = 0.0;
    double abs_sum = 0.0;
    bool converged = true;
};

/// Depth-capped adaptive bisection with a per-panel absolute error target.
/// Panels that still miss the target at max_depth are accepted with
/// converged=false; their estimated error stays in the budget.
template <class F>
AdaptiveOut adaptive_gk(F&& f, double lo, double hi, double tol, int max_depth) {
    AdaptiveOut out;
    if (!(hi > lo)) return out;
    struct Seg {
        double lo, hi;
        int depth;
    };
    std::vector<Seg> stack{{lo, hi, 0}};
    while (!stack.empty()) {
        const Seg s = stack.back();
        stack.pop_back();
        const PanelResult p = gk15(f, s.lo, s.hi);
        if (p.err <= tol || s.depth >= max_depth) {
            out.value += p.integral;
            out.err += p.err;
            out.abs_sum += p.abs_integral;
            if (p.err > tol) out.converged = false;
        } else {
            const double mid = 0.5 * (s.lo + s.hi);
            stack.push_back({mid, s.hi, s.depth + 1});
            stack.push_back({s.lo, mid, s.depth + 1});
        }
    }
    out.err += 1e-15 * out.abs_sum;  // accumulated rounding
    return out;
}

struct PvOptions {
    double omega = 1.0;  // dominant tail oscillation frequency
    double u_cap = std::numeric_limits<double>::infinity();  // largest reachable u
    bool tail = true;            // run the beyond-cutoff tail machinery
    bool throw_on_cap = false;   // grid-backed input: refuse instead of degrading
    std::string cap_context;     // message detail for cap errors
};

struct PvOut {
    std::complex<double> integral{0.0, 0.0};
    double err = 0.0;
    bool converged = true;
};

/// Integrates \int_0^inf g(u) du where g is continuous at 0 (the caller has
/// already symmetrized away the 1/u singularity) and, past the cutoff A,
/// either decays or oscillates without decay.
///
/// Tail scheme: the range past A is summed in chunks of one half-period
/// pi/omega of the dominant oscillation. The chunk series is then condensed
/// in two stages:
///   1. repeated pairwise averaging of its partial sums (the Euler
///      transformation), `accel_terms` deep -- this collapses the
///      alternating components (odd harmonics of the lattice fundamental);
///   2. polynomial extrapolation in 1/u to u = infinity on the averaged
///      sums -- this removes the algebraically decaying remainder that
///      even harmonics and smooth rational-decay c.f.s leave behind.
/// Chunks that fall below the panel tolerance terminate the tail early.
///
/// The returned err is: panel error sum + chunk error sum + modulus of the
/// last accelerated correction.
template <class G>
PvOut pv_tail_integral(G&& g, const QuadratureConfig& cfg, const PvOptions& opt) {
    cfg.validate();
    PvOut out;

    if (opt.throw_on_cap && opt.u_cap < cfg.outer_cutoff)
        throw GridDomainError("grid reach " + std::to_string(opt.u_cap) +
                              " is smaller than the quadrature cutoff A=" +
                              std::to_string(cfg.outer_cutoff) +
                              (opt.cap_context.empty() ? "" : " (" + opt.cap_context + ")"));

    const double A = std::min(cfg.outer_cutoff, opt.u_cap);
    if (A > 0.0) {
        const AdaptiveOut head = adaptive_gk(g, 0.0, A, cfg.panel_tol, cfg.max_depth);
        out.integral = head.value;
        out.err = head.err;
        out.converged = head.converged;
    }
    if (!opt.tail) return out;

    const double omega = std::clamp(opt.omega, 1.0 / 32.0, 1e9);
    const double h = pi / omega;
    const int n_chunks = std::max(cfg.tail_periods, cfg.accel_terms + 2);

    std::vector<std::complex<double>> chunks;
    chunks.reserve(static_cast<std::size_t>(n_chunks));
    double pos = A;
    double chunk_err_sum = 0.0;
    bool decayed = false;
    bool capped = false;
    for (int m = 0; m < n_chunks; ++m) {
        const double next = A + static_cast<double>(m + 1) * h;
        if (next > opt.u_cap) {
            capped = true;
            break;
        }
        const AdaptiveOut r = adaptive_gk(g, pos, next, cfg.panel_tol, cfg.max_depth);
        out.err += r.err;
        chunk_err_sum += r.err;
        if (!r.converged) out.converged = false;
        chunks.push_back(r.value);
        pos = next;
        const std::size_t k = chunks.size();
        if (k >= 2 && std::abs(chunks[k - 1]) < 0.01 * cfg.panel_tol &&
            std::abs(chunks[k - 2]) < 0.01 * cfg.panel_tol) {
            decayed = true;
            break;
        }
    }

    auto plain_sum = [&]() {
        return std::accumulate(chunks.begin(), chunks.end(), std::complex<double>{0.0, 0.0});
    };

    if (decayed) {
        out.integral += plain_sum();
        out.err += chunks.empty() ? 0.0 : std::abs(chunks.back());
        return out;
    }
    if (capped) {
        if (opt.throw_on_cap)
            throw GridDomainError(
                "grid reach exhausted before the oscillatory tail settled" +
                (opt.cap_context.empty() ? std::string() : " (" + opt.cap_context + ")"));
        out.integral += plain_sum();
        out.err += chunks.empty() ? 0.0 : 2.0 * std::abs(chunks.back());
        out.converged = false;
        return out;
    }

    // Stage 1: Euler transformation by iterated averaging of partial sums.
    std::vector<std::complex<double>> row(chunks.size());
    std::partial_sum(chunks.begin(), chunks.end(), row.begin());
    const int rounds =
        std::clamp<int>(cfg.accel_terms, 0, std::max(0, static_cast<int>(row.size()) - 8));
    for (int k = 1; k <= rounds; ++k)
        for (std::size_t j = 0; j + static_cast<std::size_t>(k) < row.size(); ++j)
            row[j] = 0.5 * (row[j] + row[j + 1]);
    const std::size_t row_size = row.size() - static_cast<std::size_t>(rounds);

    std::complex<double> est = row[row_size - 1];
    double tail_err = row_size >= 2 ? std::abs(est - row[row_size - 2]) : std::abs(est);

    // Stage 2: extrapolate the averaged sums to u = infinity. Entry j sits
    // at effective abscissa u_j = A + (j + rounds/2 + 1) h; the remainder is
    // asymptotically a polynomial in x = 1/u with no constant term left to
    // resolve beyond the limit itself. Points are spread at an even index
    // stride (consecutive entries share the residual alternation phase), and
    // the Neville tableau is walked order by order, keeping the estimate
    // with the smallest correction: clean data earns the high orders, noisy
    // data stops before extrapolation flutter sets in.
    if (row_size >= 3) {
        const std::size_t n_pts = std::min<std::size_t>(8, row_size);
        std::size_t stride = (row_size - 1) / (n_pts - 1);
        if (stride >= 3 && stride % 2 == 1) --stride;
        const std::size_t base = row_size - 1 - stride * (n_pts - 1);
        std::vector<double> xs(n_pts);
        std::vector<std::complex<double>> ys(n_pts);
        for (std::size_t i = 0; i < n_pts; ++i) {
            const std::size_t j = base + i * stride;
            xs[i] = 1.0 / (A + (static_cast<double>(j) + 0.5 * rounds + 1.0) * h);
            ys[i] = row[j];
        }
        std::complex<double> cand = ys[n_pts - 1];
        est = cand;
        tail_err = std::abs(est - row[row_size - 2]);
        for (std::size_t k = 1; k < n_pts; ++k) {
            for (std::size_t j = 0; j + k < n_pts; ++j)
                ys[j] = (xs[j] * ys[j + 1] - xs[j + k] * ys[j]) / (xs[j] - xs[j + k]);
            const std::complex<double> next = ys[n_pts - 1 - k];
            const double corr = std::abs(next - cand);
            if (corr < tail_err) {
                tail_err = corr;
                est = next;
            }
            cand = next;
        }
        tail_err += 1e-15 * std::abs(est);
    }

    out.integral += est;
    out.err += tail_err;
    // The extrapolation cannot resolve below the noise of the chunk values it
    // consumes; the flag only reports genuine budget exhaustion. The full
    // tail error stays in the estimate either way.
    if (tail_err > std::max(cfg.panel_tol, 2.0 * chunk_err_sum)) out.converged = false;
    return out;
}

}  // namespace detail
}  // namespace cfpp
