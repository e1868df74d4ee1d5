#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <utility>
#include <variant>

#include "cfpp/distribution.hpp"
#include "cfpp/grid.hpp"

namespace cfpp {

/// An evaluatable characteristic function: either analytic (closed form from
/// a DistributionSpec) or sampled on a grid. Immutable after construction and
/// safe to evaluate concurrently.
class CfFunction {
  public:
    explicit CfFunction(DistributionSpec spec) : v_(std::move(spec)) {}
    explicit CfFunction(GridCf grid) : v_(std::move(grid)) {
        std::get<GridCf>(v_).validate_shape();
    }

    bool analytic() const { return std::holds_alternative<DistributionSpec>(v_); }

    const DistributionSpec* spec() const { return std::get_if<DistributionSpec>(&v_); }
    const GridCf* grid() const { return std::get_if<GridCf>(&v_); }

    std::complex<double> operator()(double t) const {
        if (const auto* s = std::get_if<DistributionSpec>(&v_)) return cf_value(*s, t);
        return std::get<GridCf>(v_).value(t);
    }

    /// Largest |t| at which evaluation is defined.
    double domain_half_width() const {
        if (analytic()) return std::numeric_limits<double>::infinity();
        const GridCf& g = std::get<GridCf>(v_);
        return g.periodic ? std::numeric_limits<double>::infinity() : g.half_width;
    }

  private:
    std::variant<DistributionSpec, GridCf> v_;
};

inline std::complex<double> eval_cf(const CfFunction& f, double t) { return f(t); }

/// u -> f(-u). For a characteristic function this is the complex conjugate,
/// i.e. the c.f. of -X.
inline CfFunction reflect_cf(const CfFunction& f) {
    if (const auto* s = f.spec())
        return CfFunction(DistributionSpec(make_shift_scale(*s, 0.0, -1.0)));
    GridCf g = *f.grid();
    std::reverse(g.samples.begin(), g.samples.end());
    return CfFunction(std::move(g));
}

/// Samples f on the symmetric grid [-T, T] with spacing delta.
/// T must be an integer multiple of delta.
inline GridCf sample_to_grid(const CfFunction& f, double T, double delta) {
    GridCf g;
    g.half_width = T;
    g.step = delta;
    if (!(T > 0.0) || !(delta > 0.0))
        throw std::invalid_argument("sample_to_grid requires T > 0 and delta > 0");
    const double ratio = T / delta;
    if (std::abs(ratio - std::round(ratio)) > 1e-9)
        throw std::invalid_argument("sample_to_grid: T/delta must be an integer");
    const std::size_t m = static_cast<std::size_t>(std::llround(ratio));
    g.samples.resize(2 * m + 1);
    for (std::size_t k = 0; k < g.samples.size(); ++k) g.samples[k] = f(g.node(k));
    g.validate_shape();
    return g;
}

}  // namespace cfpp
