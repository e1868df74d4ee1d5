#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cfpp/distribution.hpp"
#include "cfpp/parallel.hpp"

namespace cfpp {

// ===========================================================================
// Monte Carlo functional-c.f. estimators
// ===========================================================================

struct McEstimate {
    std::complex<double> value{0.0, 0.0};
    /// Combined standard error: sqrt((var_re + var_im)/n). Bounds the
    /// standard error of each component.
    double std_err = 0.0;
    std::int64_t n_samples = 0;
    std::uint64_t seed = 0;
};

/// phi(X) applied before taking E e^{it phi(X)}. `signed_tail` instead
/// estimates E e^{itX} sign(X - a).
struct McFunctional {
    enum class Kind { identity, positive_part, negative_part, abs_value, clamp, signed_tail };
    Kind kind = Kind::identity;
    double a = 0.0;  // clamp lower barrier / sign anchor
    double b = 0.0;  // clamp upper barrier

    static McFunctional identity() { return {Kind::identity, 0.0, 0.0}; }
    static McFunctional positive_part() { return {Kind::positive_part, 0.0, 0.0}; }
    static McFunctional negative_part() { return {Kind::negative_part, 0.0, 0.0}; }
    static McFunctional abs_value() { return {Kind::abs_value, 0.0, 0.0}; }
    static McFunctional clamp(double a, double b) { return {Kind::clamp, a, b}; }
    static McFunctional signed_tail(double a) { return {Kind::signed_tail, a, 0.0}; }
};

namespace detail {

inline constexpr int mc_shards = 128;

/// Per-shard moments, accumulated relative to the shard's first summand so a
/// degenerate sampler yields exactly zero variance. Shards combine with the
/// usual parallel mean/M2 update.
struct McAccum {
    std::int64_t n = 0;
    double c_re = 0.0, c_im = 0.0;    // shift (first summand)
    double d_re = 0.0, d_im = 0.0;    // sum of shifted values
    double d2_re = 0.0, d2_im = 0.0;  // sum of squared shifted values

    void add(double re, double im) {
        if (n == 0) {
            c_re = re;
            c_im = im;
        }
        const double sr = re - c_re;
        const double si = im - c_im;
        d_re += sr;
        d_im += si;
        d2_re += sr * sr;
        d2_im += si * si;
        ++n;
    }

    double mean_re() const { return c_re + d_re / static_cast<double>(n); }
    double mean_im() const { return c_im + d_im / static_cast<double>(n); }
    double m2_re() const {
        return std::max(0.0, d2_re - d_re * d_re / static_cast<double>(n));
    }
    double m2_im() const {
        return std::max(0.0, d2_im - d_im * d_im / static_cast<double>(n));
    }
};

struct McCombined {
    std::int64_t n = 0;
    double mean_re = 0.0, mean_im = 0.0;
    double m2_re = 0.0, m2_im = 0.0;

    void merge(const McAccum& s) {
        if (s.n == 0) return;
        if (n == 0) {
            n = s.n;
            mean_re = s.mean_re();
            mean_im = s.mean_im();
            m2_re = s.m2_re();
            m2_im = s.m2_im();
            return;
        }
        const double nb = static_cast<double>(s.n);
        const double na = static_cast<double>(n);
        const double dr = s.mean_re() - mean_re;
        const double di = s.mean_im() - mean_im;
        const double tot = na + nb;
        m2_re += s.m2_re() + dr * dr * na * nb / tot;
        m2_im += s.m2_im() + di * di * na * nb / tot;
        mean_re += dr * nb / tot;
        mean_im += di * nb / tot;
        n += s.n;
    }

    McEstimate estimate(std::uint64_t seed) const {
        const double dn = static_cast<double>(n);
        const double var_re = m2_re / std::max(1.0, dn - 1.0);
        const double var_im = m2_im / std::max(1.0, dn - 1.0);
        return {std::complex<double>(mean_re, mean_im), std::sqrt((var_re + var_im) / dn), n,
                seed};
    }
};

}  // namespace detail

/// Unbiased estimate of E e^{it phi(X)} at every frequency in `ts`, sharing
/// one sample stream across frequencies. Deterministic for a given seed: the
/// run is split into a fixed number of shards with SplitMix64-derived
/// sub-streams and recombined in shard order, independent of thread count.
inline std::vector<McEstimate> mc_functional_cf_batch(const DistributionSpec& spec,
                                                      const McFunctional& fun,
                                                      const std::vector<double>& ts,
                                                      std::int64_t n, std::uint64_t seed) {
    if (n <= 0) throw std::invalid_argument("sample count must be positive");
    if (fun.kind == McFunctional::Kind::clamp && fun.a > fun.b)
        throw std::invalid_argument("clamp functional requires a <= b");
    const std::size_t nt = ts.size();
    const std::int64_t per = n / detail::mc_shards;
    const std::int64_t rem = n % detail::mc_shards;

    std::vector<std::vector<detail::McAccum>> shard_acc(detail::mc_shards,
                                                        std::vector<detail::McAccum>(nt));
    parallel_for(detail::mc_shards, [&](std::size_t shard) {
        Rng rng = Rng::for_stream(seed, shard);
        const std::int64_t count = per + (static_cast<std::int64_t>(shard) < rem ? 1 : 0);
        auto& acc = shard_acc[shard];
        for (std::int64_t i = 0; i < count; ++i) {
            const double x = sample(spec, rng);
            double y = x;      // phi(x)
            double w = 1.0;    // sign weight
            switch (fun.kind) {
                case McFunctional::Kind::identity: break;
                case McFunctional::Kind::positive_part: y = std::max(0.0, x); break;
                case McFunctional::Kind::negative_part: y = std::max(0.0, -x); break;
                case McFunctional::Kind::abs_value: y = std::abs(x); break;
                case McFunctional::Kind::clamp: y = std::clamp(x, fun.a, fun.b); break;
                case McFunctional::Kind::signed_tail:
                    y = x;
                    w = sign(x - fun.a);
                    break;
            }
            for (std::size_t j = 0; j < nt; ++j)
                acc[j].add(w * std::cos(ts[j] * y), w * std::sin(ts[j] * y));
        }
    });

    std::vector<McEstimate> out(nt);
    for (std::size_t j = 0; j < nt; ++j) {
        detail::McCombined total;
        for (const auto& acc : shard_acc) total.merge(acc[j]);
        out[j] = total.estimate(seed);
    }
    return out;
}

inline McEstimate mc_functional_cf(const DistributionSpec& spec, const McFunctional& fun, double t,
                                   std::int64_t n, std::uint64_t seed) {
    return mc_functional_cf_batch(spec, fun, {t}, n, seed)[0];
}

/// Path-sampled estimates of phi_n(s,t) = E exp{i [s M_n + t (M_n - S_n)]}
/// for n = 0..n_max. Used as the Monte Carlo provider for the generating-
/// function identities when the step law is not lattice.
inline std::vector<McEstimate> mc_walk_phi(const DistributionSpec& spec, int n_max, double s,
                                           double t, std::int64_t n_paths, std::uint64_t seed) {
    if (n_paths <= 0) throw std::invalid_argument("path count must be positive");
    if (n_max < 0) throw std::invalid_argument("n_max must be >= 0");
    const std::size_t levels = static_cast<std::size_t>(n_max) + 1;
    const std::int64_t per = n_paths / detail::mc_shards;
    const std::int64_t rem = n_paths % detail::mc_shards;

    std::vector<std::vector<detail::McAccum>> shard_acc(detail::mc_shards,
                                                        std::vector<detail::McAccum>(levels));
    parallel_for(detail::mc_shards, [&](std::size_t shard) {
        Rng rng = Rng::for_stream(seed, shard);
        const std::int64_t count = per + (static_cast<std::int64_t>(shard) < rem ? 1 : 0);
        auto& acc = shard_acc[shard];
        for (std::int64_t i = 0; i < count; ++i) {
            double sum = 0.0, max = 0.0;
            for (std::size_t lev = 0; lev < levels; ++lev) {
                if (lev > 0) {
                    sum += sample(spec, rng);
                    max = std::max(max, sum);
                }
                const double phase = s * max + t * (max - sum);
                acc[lev].add(std::cos(phase), std::sin(phase));
            }
        }
    });

    std::vector<McEstimate> out(levels);
    for (std::size_t lev = 0; lev < levels; ++lev) {
        detail::McCombined total;
        for (const auto& acc : shard_acc) total.merge(acc[lev]);
        out[lev] = total.estimate(seed);
    }
    return out;
}

// ===========================================================================
// Exact dynamic programming for lattice walks
// ===========================================================================

/// Finite law on step * (offset_min + j), j = 0..probs.size()-1.
struct LatticeLaw {
    double step = 1.0;
    long offset_min = 0;
    std::vector<double> probs;

    double point(std::size_t j) const {
        return step * static_cast<double>(offset_min + static_cast<long>(j));
    }

    void validate() const {
        if (!(step > 0.0)) throw std::invalid_argument("lattice law requires step > 0");
        detail::check_prob_vector(probs, "lattice law probabilities must lie in [0,1]");
    }
};

/// Exact c.f. of a finite lattice law: sum_j p_j e^{it x_j}.
inline std::complex<double> law_to_cf(const LatticeLaw& law, double t) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t j = 0; j < law.probs.size(); ++j)
        acc += law.probs[j] * unit_phase(t * law.point(j));
    return acc;
}

/// Derives the lattice law of a purely discrete spec (atoms must be
/// commensurate). Duplicated atoms are merged.
inline LatticeLaw lattice_law_from_spec(const DistributionSpec& spec) {
    auto ls = lattice_structure(spec);
    if (!ls)
        throw std::invalid_argument(
            "distribution has no lattice structure (continuous mass or incommensurate atoms)");
    LatticeLaw law;
    if (ls->step == 0.0) {  // all mass at the origin
        law.step = 1.0;
        law.offset_min = 0;
        law.probs = {1.0};
        return law;
    }
    law.step = ls->step;
    long lo = 0, hi = 0;
    bool first = true;
    for (auto& [x, p] : ls->atoms) {
        const long k = std::lround(x / ls->step);
        lo = first ? k : std::min(lo, k);
        hi = first ? k : std::max(hi, k);
        first = false;
    }
    law.offset_min = lo;
    law.probs.assign(static_cast<std::size_t>(hi - lo + 1), 0.0);
    for (auto& [x, p] : ls->atoms)
        law.probs[static_cast<std::size_t>(std::lround(x / ls->step) - lo)] += p;
    return law;
}

/// Joint law of (M_n, M_n - S_n) for the walk S_k with iid lattice steps,
/// M_n = max(S_0..S_n). Both coordinates are nonnegative lattice multiples.
struct WalkJointLaw {
    double step = 1.0;
    int n = 0;
    std::size_t max_count = 1;  // i ranges over [0, max_count)
    std::size_t gap_count = 1;  // j ranges over [0, gap_count)
    std::vector<double> mass;   // mass[i * gap_count + j]

    double at(std::size_t i, std::size_t j) const { return mass[i * gap_count + j]; }

    /// phi_n(s,t) = sum_{i,j} mass(i,j) e^{i (s * i + t * j) step}, exact.
    std::complex<double> phi(double s, double t) const {
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t i = 0; i < max_count; ++i) {
            std::complex<double> row{0.0, 0.0};
            for (std::size_t j = 0; j < gap_count; ++j) {
                const double m = mass[i * gap_count + j];
                if (m != 0.0) row += m * unit_phase(t * step * static_cast<double>(j));
            }
            acc += row * unit_phase(s * step * static_cast<double>(i));
        }
        return acc;
    }

    LatticeLaw max_marginal() const {
        LatticeLaw law;
        law.step = step;
        law.offset_min = 0;
        law.probs.assign(max_count, 0.0);
        for (std::size_t i = 0; i < max_count; ++i)
            for (std::size_t j = 0; j < gap_count; ++j) law.probs[i] += mass[i * gap_count + j];
        return law;
    }

    /// Marginal of S_n = M_n - gap, supported on [-(gap_count-1), max_count-1].
    LatticeLaw sum_marginal() const {
        LatticeLaw law;
        law.step = step;
        law.offset_min = -static_cast<long>(gap_count - 1);
        law.probs.assign(max_count + gap_count - 1, 0.0);
        for (std::size_t i = 0; i < max_count; ++i)
            for (std::size_t j = 0; j < gap_count; ++j) {
                const long s_idx = static_cast<long>(i) - static_cast<long>(j) - law.offset_min;
                law.probs[static_cast<std::size_t>(s_idx)] += mass[i * gap_count + j];
            }
        return law;
    }
};

namespace detail {

inline constexpr std::size_t dp_state_cap = 20'000'000;

}  // namespace detail

/// Joint laws of (M_k, M_k - S_k) for k = 0..n, by exact forward DP over the
/// state (running max, running max - position). The gap coordinate is what
/// the generating-function identities pair with the max, so it is tracked
/// exactly rather than reconstructed.
inline std::vector<WalkJointLaw> dp_lattice_max_sequence(const LatticeLaw& steps, int n) {
    steps.validate();
    if (n < 0) throw std::invalid_argument("walk length must be >= 0");

    long v_lo = steps.offset_min;
    long v_hi = steps.offset_min + static_cast<long>(steps.probs.size()) - 1;
    const long up = std::max(0L, v_hi);     // max positive step, lattice units
    const long down = std::max(0L, -v_lo);  // max negative step, lattice units

    const std::size_t max_count = static_cast<std::size_t>(up) * n + 1;
    const std::size_t gap_count = static_cast<std::size_t>(down) * n + 1;
    if (max_count * gap_count > detail::dp_state_cap)
        throw StateCapError("walk DP state space exceeds cap: " +
                            std::to_string(max_count * gap_count));

    std::vector<WalkJointLaw> out;
    out.reserve(static_cast<std::size_t>(n) + 1);

    WalkJointLaw cur;
    cur.step = steps.step;
    cur.n = 0;
    cur.max_count = max_count;
    cur.gap_count = gap_count;
    cur.mass.assign(max_count * gap_count, 0.0);
    cur.mass[0] = 1.0;  // S_0 = 0: max 0, gap 0
    out.push_back(cur);

    for (int k = 1; k <= n; ++k) {
        WalkJointLaw next = cur;
        next.n = k;
        std::fill(next.mass.begin(), next.mass.end(), 0.0);
        const std::size_t i_extent = static_cast<std::size_t>(up) * (k - 1) + 1;
        const std::size_t j_extent = static_cast<std::size_t>(down) * (k - 1) + 1;
        for (std::size_t i = 0; i < i_extent; ++i)
            for (std::size_t j = 0; j < j_extent; ++j) {
                const double m = cur.mass[i * gap_count + j];
                if (m == 0.0) continue;
                for (std::size_t vi = 0; vi < steps.probs.size(); ++vi) {
                    const double p = steps.probs[vi];
                    if (p == 0.0) continue;
                    const long v = steps.offset_min + static_cast<long>(vi);
                    const long jn = static_cast<long>(j) - v;
                    if (jn >= 0) {
                        next.mass[i * gap_count + static_cast<std::size_t>(jn)] += m * p;
                    } else {
                        // New running maximum: the walk moved above it by -jn.
                        const std::size_t in = i + static_cast<std::size_t>(-jn);
                        next.mass[in * gap_count] += m * p;
                    }
                }
            }
        out.push_back(next);
        cur = std::move(next);
    }
    return out;
}

inline WalkJointLaw dp_lattice_max(const LatticeLaw& steps, int n) {
    return dp_lattice_max_sequence(steps, n).back();
}

/// Exact law of the two-barrier walk U_n: U_0 = x, U_k = a v (b ^ (U_{k-1} + X_k)).
/// a, b, x must sit on the step lattice.
inline LatticeLaw dp_clamped_walk(const LatticeLaw& steps, double a, double b, double x, int n) {
    steps.validate();
    if (n < 0) throw std::invalid_argument("walk length must be >= 0");
    if (!(a <= x && x <= b)) throw std::invalid_argument("barrier walk requires a <= x <= b");
    auto to_index = [&](double v, const char* what) {
        const double q = v / steps.step;
        if (std::abs(q - std::round(q)) > 1e-9)
            throw std::invalid_argument(std::string(what) + " is not on the step lattice");
        return std::lround(q);
    };
    const long ia = to_index(a, "lower barrier");
    const long ib = to_index(b, "upper barrier");
    const long ix = to_index(x, "start point");

    const std::size_t width = static_cast<std::size_t>(ib - ia) + 1;
    if (width > detail::dp_state_cap)
        throw StateCapError("barrier DP state space exceeds cap");
    std::vector<double> cur(width, 0.0), next(width);
    cur[static_cast<std::size_t>(ix - ia)] = 1.0;

    for (int k = 0; k < n; ++k) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t pos = 0; pos < width; ++pos) {
            const double m = cur[pos];
            if (m == 0.0) continue;
            for (std::size_t vi = 0; vi < steps.probs.size(); ++vi) {
                const double p = steps.probs[vi];
                if (p == 0.0) continue;
                const long v = steps.offset_min + static_cast<long>(vi);
                long dst = static_cast<long>(pos) + v;
                dst = std::clamp(dst, 0L, static_cast<long>(width) - 1);
                next[static_cast<std::size_t>(dst)] += m * p;
            }
        }
        std::swap(cur, next);
    }
    LatticeLaw law;
    law.step = steps.step;
    law.offset_min = ia;
    law.probs = std::move(cur);
    return law;
}

/// phi_n provider backed by the exact DP, for the generating-function
/// comparisons. Precomputes the whole sequence once.
inline std::function<std::complex<double>(int)> dp_phi_provider(const LatticeLaw& steps, int n_max,
                                                                double s, double t) {
    auto seq = std::make_shared<std::vector<WalkJointLaw>>(dp_lattice_max_sequence(steps, n_max));
    return [seq, s, t](int n) -> std::complex<double> {
        if (n < 0 || static_cast<std::size_t>(n) >= seq->size())
            throw std::out_of_range("phi provider queried beyond the precomputed range");
        return (*seq)[static_cast<std::size_t>(n)].phi(s, t);
    };
}

}  // namespace cfpp
