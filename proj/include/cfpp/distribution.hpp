#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "cfpp/common.hpp"

namespace cfpp {

class DistributionSpec;

// ---------------------------------------------------------------------------
// Distribution variants. Every variant has a closed-form characteristic
// function and an exact sampler; parameters are validated on construction of
// DistributionSpec.
// ---------------------------------------------------------------------------

struct PointMass {
    double x = 0.0;
    bool operator==(const PointMass&) const = default;
};

struct Normal {
    double mu = 0.0;
    double sigma = 1.0;  // > 0
    bool operator==(const Normal&) const = default;
};

struct Exponential {
    double rate = 1.0;  // > 0
    bool operator==(const Exponential&) const = default;
};

struct Uniform {
    double lo = 0.0;
    double hi = 1.0;  // lo < hi
    bool operator==(const Uniform&) const = default;
};

struct Cauchy {
    double location = 0.0;
    double scale = 1.0;  // > 0
    bool operator==(const Cauchy&) const = default;
};

struct TwoPoint {
    double x1 = 0.0;
    double p = 0.5;  // P(X = x1), in [0,1]
    double x2 = 1.0;
    bool operator==(const TwoPoint&) const = default;
};

/// Masses on step * offsets[i] with probabilities probs[i].
struct Lattice {
    double step = 1.0;  // > 0
    std::vector<long> offsets;
    std::vector<double> probs;  // sums to 1 within 1e-12
    bool operator==(const Lattice&) const = default;
};

struct Mixture {
    std::vector<double> weights;  // sums to 1 within 1e-12
    std::vector<DistributionSpec> components;
    bool operator==(const Mixture&) const;
};

/// shift + scale * X_base. scale may be negative (reflection) or zero.
struct ShiftScale {
    std::shared_ptr<const DistributionSpec> base;
    double shift = 0.0;
    double scale = 1.0;
    bool operator==(const ShiftScale& o) const;
};

class DistributionSpec {
  public:
    using Variant = std::variant<PointMass, Normal, Exponential, Uniform, Cauchy, TwoPoint,
                                 Lattice, Mixture, ShiftScale>;

    DistributionSpec(Variant v) : v_(std::move(v)) { validate(); }
    DistributionSpec(PointMass v) : DistributionSpec(Variant(std::move(v))) {}
    DistributionSpec(Normal v) : DistributionSpec(Variant(std::move(v))) {}
    DistributionSpec(Exponential v) : DistributionSpec(Variant(std::move(v))) {}
    DistributionSpec(Uniform v) : DistributionSpec(Variant(std::move(v))) {}
    DistributionSpec(Cauchy v) : DistributionSpec(Variant(std::move(v))) {}
    DistributionSpec(TwoPoint v) : DistributionSpec(Variant(std::move(v))) {}
    DistributionSpec(Lattice v) : DistributionSpec(Variant(std::move(v))) {}
    DistributionSpec(Mixture v) : DistributionSpec(Variant(std::move(v))) {}
    DistributionSpec(ShiftScale v) : DistributionSpec(Variant(std::move(v))) {}

    const Variant& value() const { return v_; }

    template <class T>
    const T* get_if() const {
        return std::get_if<T>(&v_);
    }

    bool operator==(const DistributionSpec& o) const { return v_ == o.v_; }

  private:
    void validate() const;
    Variant v_;
};

inline bool Mixture::operator==(const Mixture& o) const {
    return weights == o.weights && components == o.components;
}

inline bool ShiftScale::operator==(const ShiftScale& o) const {
    return shift == o.shift && scale == o.scale && *base == *o.base;
}

inline ShiftScale make_shift_scale(DistributionSpec base, double shift, double scale) {
    return ShiftScale{std::make_shared<const DistributionSpec>(std::move(base)), shift, scale};
}

namespace detail {

inline void check(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

inline void check_prob_vector(const std::vector<double>& p, const char* what) {
    check(!p.empty(), "probability list must be non-empty");
    double s = 0.0;
    for (double v : p) {
        check(std::isfinite(v) && v >= 0.0 && v <= 1.0, what);
        s += v;
    }
    check(std::abs(s - 1.0) <= 1e-12, "probabilities must sum to 1 within 1e-12");
}

}  // namespace detail

inline void DistributionSpec::validate() const {
    using detail::check;
    std::visit(
        [](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, PointMass>) {
                check(std::isfinite(d.x), "point mass location must be finite");
            } else if constexpr (std::is_same_v<T, Normal>) {
                check(std::isfinite(d.mu) && std::isfinite(d.sigma) && d.sigma > 0.0,
                      "normal requires finite mu and sigma > 0");
            } else if constexpr (std::is_same_v<T, Exponential>) {
                check(std::isfinite(d.rate) && d.rate > 0.0, "exponential requires rate > 0");
            } else if constexpr (std::is_same_v<T, Uniform>) {
                check(std::isfinite(d.lo) && std::isfinite(d.hi) && d.lo < d.hi,
                      "uniform requires lo < hi");
            } else if constexpr (std::is_same_v<T, Cauchy>) {
                check(std::isfinite(d.location) && std::isfinite(d.scale) && d.scale > 0.0,
                      "cauchy requires scale > 0");
            } else if constexpr (std::is_same_v<T, TwoPoint>) {
                check(std::isfinite(d.x1) && std::isfinite(d.x2), "two-point values must be finite");
                check(d.p >= 0.0 && d.p <= 1.0, "two-point probability must lie in [0,1]");
            } else if constexpr (std::is_same_v<T, Lattice>) {
                check(std::isfinite(d.step) && d.step > 0.0, "lattice requires step > 0");
                check(d.offsets.size() == d.probs.size(),
                      "lattice offsets and probs must have equal length");
                detail::check_prob_vector(d.probs, "lattice probabilities must lie in [0,1]");
            } else if constexpr (std::is_same_v<T, Mixture>) {
                check(d.weights.size() == d.components.size(),
                      "mixture weights and components must have equal length");
                detail::check_prob_vector(d.weights, "mixture weights must lie in [0,1]");
            } else if constexpr (std::is_same_v<T, ShiftScale>) {
                check(d.base != nullptr, "shift-scale requires a base distribution");
                check(std::isfinite(d.shift) && std::isfinite(d.scale),
                      "shift-scale parameters must be finite");
            }
        },
        v_);
}

// ---------------------------------------------------------------------------
// Closed-form characteristic functions, f(t) = E exp(itX).
// ---------------------------------------------------------------------------

inline std::complex<double> cf_value(const DistributionSpec& spec, double t);

namespace detail {

// (e^{it*hi} - e^{it*lo}) / (it(hi-lo)), with a series branch near the
// removable singularity at t = 0 to avoid cancellation.
inline std::complex<double> uniform_cf(double lo, double hi, double t) {
    const double width = hi - lo;
    if (std::abs(t * width) < 1e-4) {
        const double x = 0.5 * t * width;  // half-width phase
        const double sinc = 1.0 - x * x / 6.0 + x * x * x * x / 120.0;
        return unit_phase(0.5 * t * (lo + hi)) * sinc;
    }
    const std::complex<double> num = unit_phase(t * hi) - unit_phase(t * lo);
    return num / std::complex<double>(0.0, t * width);
}

}  // namespace detail

inline std::complex<double> cf_value(const DistributionSpec& spec, double t) {
    return std::visit(
        [t](const auto& d) -> std::complex<double> {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, PointMass>) {
                return unit_phase(t * d.x);
            } else if constexpr (std::is_same_v<T, Normal>) {
                return std::exp(std::complex<double>(-0.5 * d.sigma * d.sigma * t * t, d.mu * t));
            } else if constexpr (std::is_same_v<T, Exponential>) {
                return d.rate / std::complex<double>(d.rate, -t);
            } else if constexpr (std::is_same_v<T, Uniform>) {
                return detail::uniform_cf(d.lo, d.hi, t);
            } else if constexpr (std::is_same_v<T, Cauchy>) {
                return std::exp(std::complex<double>(-d.scale * std::abs(t), d.location * t));
            } else if constexpr (std::is_same_v<T, TwoPoint>) {
                return d.p * unit_phase(t * d.x1) + (1.0 - d.p) * unit_phase(t * d.x2);
            } else if constexpr (std::is_same_v<T, Lattice>) {
                std::complex<double> acc{0.0, 0.0};
                for (std::size_t i = 0; i < d.probs.size(); ++i)
                    acc += d.probs[i] * unit_phase(t * d.step * static_cast<double>(d.offsets[i]));
                return acc;
            } else if constexpr (std::is_same_v<T, Mixture>) {
                std::complex<double> acc{0.0, 0.0};
                for (std::size_t i = 0; i < d.weights.size(); ++i)
                    acc += d.weights[i] * cf_value(d.components[i], t);
                return acc;
            } else {  // ShiftScale
                return unit_phase(t * d.shift) * cf_value(*d.base, d.scale * t);
            }
        },
        spec.value());
}

// ---------------------------------------------------------------------------
// Sampling. The generator is std::mt19937_64 (a named, portable engine whose
// output sequence is fixed by the standard). Distinct streams are derived from
// (seed, stream index) with the SplitMix64 finalizer, so sharded runs are
// reproducible regardless of thread count. All variate transforms are written
// out explicitly instead of using std::*_distribution, whose sequences are
// implementation-defined.
// ---------------------------------------------------------------------------

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(splitmix64(seed)) {}

    /// Independent stream for shard `stream` of a run seeded with `seed`.
    static Rng for_stream(std::uint64_t seed, std::uint64_t stream) {
        Rng r(0);
        r.gen_.seed(splitmix64(seed ^ splitmix64(stream + 0x51ED270B7A63D5CBull)));
        return r;
    }

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller; the spare value is cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform01();  // (0, 1]
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * pi * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

  private:
    std::mt19937_64 gen_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

namespace detail {

inline std::size_t categorical(const std::vector<double>& probs, double u) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
        acc += probs[i];
        if (u < acc) return i;
    }
    return probs.size() - 1;
}

}  // namespace detail

inline double sample(const DistributionSpec& spec, Rng& rng) {
    return std::visit(
        [&rng](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, PointMass>) {
                return d.x;
            } else if constexpr (std::is_same_v<T, Normal>) {
                return d.mu + d.sigma * rng.normal();
            } else if constexpr (std::is_same_v<T, Exponential>) {
                return -std::log1p(-rng.uniform01()) / d.rate;
            } else if constexpr (std::is_same_v<T, Uniform>) {
                return d.lo + (d.hi - d.lo) * rng.uniform01();
            } else if constexpr (std::is_same_v<T, Cauchy>) {
                return d.location + d.scale * std::tan(pi * (rng.uniform01() - 0.5));
            } else if constexpr (std::is_same_v<T, TwoPoint>) {
                return rng.uniform01() < d.p ? d.x1 : d.x2;
            } else if constexpr (std::is_same_v<T, Lattice>) {
                const std::size_t i = detail::categorical(d.probs, rng.uniform01());
                return d.step * static_cast<double>(d.offsets[i]);
            } else if constexpr (std::is_same_v<T, Mixture>) {
                // Categorical draw for the component, then a component draw.
                const std::size_t i = detail::categorical(d.weights, rng.uniform01());
                return sample(d.components[i], rng);
            } else {  // ShiftScale
                return d.shift + d.scale * sample(*d.base, rng);
            }
        },
        spec.value());
}

// ---------------------------------------------------------------------------
// Structure queries used by the quadrature engine and the walk recurrences.
// ---------------------------------------------------------------------------

/// Atoms of a purely discrete distribution as (location, mass) pairs, or
/// nullopt when any component carries continuous mass.
inline std::optional<std::vector<std::pair<double, double>>> atom_list(
    const DistributionSpec& spec) {
    using Atoms = std::vector<std::pair<double, double>>;
    return std::visit(
        [](const auto& d) -> std::optional<Atoms> {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, PointMass>) {
                return Atoms{{d.x, 1.0}};
            } else if constexpr (std::is_same_v<T, TwoPoint>) {
                return Atoms{{d.x1, d.p}, {d.x2, 1.0 - d.p}};
            } else if constexpr (std::is_same_v<T, Lattice>) {
                Atoms a;
                for (std::size_t i = 0; i < d.probs.size(); ++i)
                    a.emplace_back(d.step * static_cast<double>(d.offsets[i]), d.probs[i]);
                return a;
            } else if constexpr (std::is_same_v<T, Mixture>) {
                Atoms all;
                for (std::size_t i = 0; i < d.weights.size(); ++i) {
                    auto sub = atom_list(d.components[i]);
                    if (!sub) return std::nullopt;
                    for (auto& [x, p] : *sub) all.emplace_back(x, d.weights[i] * p);
                }
                return all;
            } else if constexpr (std::is_same_v<T, ShiftScale>) {
                auto sub = atom_list(*d.base);
                if (!sub) return std::nullopt;
                for (auto& [x, p] : *sub) x = d.shift + d.scale * x;
                return sub;
            } else {
                return std::nullopt;
            }
        },
        spec.value());
}

/// Support features that radiate non-decaying or slowly decaying oscillation
/// in the c.f.: atom locations and uniform endpoints. Used only to pick the
/// half-period for tail summation; an imperfect set degrades speed, not
/// correctness.
inline std::vector<double> oscillation_features(const DistributionSpec& spec) {
    std::vector<double> out;
    std::visit(
        [&out](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, PointMass>) {
                out.push_back(d.x);
            } else if constexpr (std::is_same_v<T, TwoPoint>) {
                out.push_back(d.x1);
                out.push_back(d.x2);
            } else if constexpr (std::is_same_v<T, Lattice>) {
                for (long o : d.offsets) out.push_back(d.step * static_cast<double>(o));
            } else if constexpr (std::is_same_v<T, Uniform>) {
                out.push_back(d.lo);
                out.push_back(d.hi);
            } else if constexpr (std::is_same_v<T, Mixture>) {
                for (const auto& c : d.components) {
                    auto sub = oscillation_features(c);
                    out.insert(out.end(), sub.begin(), sub.end());
                }
            } else if constexpr (std::is_same_v<T, ShiftScale>) {
                for (double x : oscillation_features(*d.base))
                    out.push_back(d.shift + d.scale * x);
            }
            // Normal / Exponential / Cauchy: smooth decay, no features.
        },
        spec.value());
    return out;
}

/// Euclid on reals with an absolute tolerance; returns 0 when no usable
/// common divisor is found.
inline double real_gcd(double a, double b, double tol) {
    a = std::abs(a);
    b = std::abs(b);
    if (a < b) std::swap(a, b);
    while (b > tol) {
        double r = std::fmod(a, b);
        r = std::min(r, b - r);
        a = b;
        b = r;
    }
    return a;
}

/// Fundamental step g > 0 such that every value in `xs` is an integer
/// multiple of g (within tolerance); nullopt for incommensurate sets.
/// All-zero sets return 0 (a degenerate lattice at the origin).
inline std::optional<double> fundamental_step(const std::vector<double>& xs) {
    double scale = 0.0;
    for (double x : xs) scale = std::max(scale, std::abs(x));
    if (scale == 0.0) return 0.0;
    const double tol = 1e-9 * scale;
    double g = 0.0;
    for (double x : xs) {
        if (std::abs(x) <= tol) continue;
        g = (g == 0.0) ? std::abs(x) : real_gcd(g, x, tol);
    }
    if (g <= tol) return std::nullopt;
    for (double x : xs) {
        const double m = x / g;
        if (std::abs(m - std::round(m)) > 1e-6) return std::nullopt;
    }
    return g;
}

struct LatticeStructure {
    double step = 0.0;  // 0 means all mass at the origin (constant c.f.)
    std::vector<std::pair<double, double>> atoms;
};

/// Lattice structure of a purely discrete spec whose atoms all sit on g*Z.
inline std::optional<LatticeStructure> lattice_structure(const DistributionSpec& spec) {
    auto atoms = atom_list(spec);
    if (!atoms) return std::nullopt;
    std::vector<double> xs;
    xs.reserve(atoms->size());
    for (auto& [x, p] : *atoms) xs.push_back(x);
    auto g = fundamental_step(xs);
    if (!g) return std::nullopt;
    return LatticeStructure{*g, std::move(*atoms)};
}

/// Monotone envelope bound on |f| as a function of |t|, with a flag telling
/// whether the bound decays fast enough for tail truncation (env(u)/u
/// integrable at infinity).
struct CfEnvelope {
    std::function<double(double)> bound;  // |f(t)| <= bound(|t|), non-increasing
    bool decays = false;
};

inline CfEnvelope cf_envelope(const DistributionSpec& spec) {
    return std::visit(
        [](const auto& d) -> CfEnvelope {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Normal>) {
                const double s2 = 0.5 * d.sigma * d.sigma;
                return {[s2](double u) { return std::exp(-s2 * u * u); }, true};
            } else if constexpr (std::is_same_v<T, Exponential>) {
                const double r = d.rate;
                return {[r](double u) { return r / std::hypot(r, u); }, true};
            } else if constexpr (std::is_same_v<T, Uniform>) {
                const double w = d.hi - d.lo;
                return {[w](double u) { return std::min(1.0, 2.0 / (w * std::max(u, 1e-300))); },
                        true};
            } else if constexpr (std::is_same_v<T, Cauchy>) {
                const double s = d.scale;
                return {[s](double u) { return std::exp(-s * u); }, true};
            } else if constexpr (std::is_same_v<T, Mixture>) {
                std::vector<CfEnvelope> parts;
                std::vector<double> ws = d.weights;
                bool decays = true;
                for (const auto& c : d.components) {
                    parts.push_back(cf_envelope(c));
                    decays = decays && parts.back().decays;
                }
                auto fn = [parts, ws](double u) {
                    double acc = 0.0;
                    for (std::size_t i = 0; i < parts.size(); ++i)
                        acc += ws[i] * parts[i].bound(u);
                    return acc;
                };
                return {fn, decays};
            } else if constexpr (std::is_same_v<T, ShiftScale>) {
                CfEnvelope base = cf_envelope(*d.base);
                if (d.scale == 0.0) return {[](double) { return 1.0; }, false};
                const double sc = std::abs(d.scale);
                auto b = base.bound;
                return {[b, sc](double u) { return b(sc * u); }, base.decays};
            } else {
                return {[](double) { return 1.0; }, false};
            }
        },
        spec.value());
}

}  // namespace cfpp
