#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include "cfpp/pv_engine.hpp"

namespace cfpp {

// Closed-form transform identities: from the c.f. of X to the c.f.s of
// max(0,X), |X|, the two-barrier clamp, the joint law of (X, X+, X-), and
// option payoffs. Every routine returns a JResult so downstream comparisons
// can carry explicit error budgets.

/// E e^{it max(0,X)} = (1/2)[1 + f(t)] + (Jf)(t) - (Jf)(0), with the
/// difference of transforms evaluated as a single integral.
inline JResult cf_positive_part(const CfFunction& f, double t, const QuadratureConfig& cfg = {}) {
    const JResult d = j_diff(f, t, cfg);
    return {0.5 * (1.0 + f(t)) + d.value, d.err_estimate, d.converged};
}

/// E e^{i(alpha X + beta X+ + gamma X-)} =
///   (1/2)[f(alpha+beta) + f(alpha-gamma)] + (Jf)(alpha+beta) - (Jf)(alpha-gamma).
inline JResult cf_joint(const CfFunction& f, double alpha, double beta, double gamma,
                        const QuadratureConfig& cfg = {}) {
    const double t1 = alpha + beta;
    const double t2 = alpha - gamma;
    const auto opt = detail::pv_options_for(f, 0.0, {t1, t2}, "cf_joint");
    const JResult d = j_point_diff_fn([&f](double u) { return f(u); }, t1, t2, cfg, opt);
    return {0.5 * (f(t1) + f(t2)) + d.value, d.err_estimate, d.converged};
}

struct AbsCfForms {
    JResult via_j_of_re;   // Re f(t) + 2 (J Re f)(t)
    JResult via_parity;    // Re f(t) + (Jf)(t) - conj((Jf)(t))
};

/// Both routes to E e^{it|X|}. The first applies J to the real part of f;
/// the second uses the reflection identity (J conj f)(t) = -conj((Jf)(t)),
/// so (J Re f)(t) = i Im (Jf)(t). Agreement of the two is a free self-test.
inline AbsCfForms cf_abs_forms(const CfFunction& f, double t, const QuadratureConfig& cfg = {}) {
    const double re_ft = f(t).real();

    const auto opt = detail::pv_options_for(f, 0.0, {t}, "cf_abs");
    auto re_f = [&f](double u) { return std::complex<double>(f(u).real(), 0.0); };
    const JResult ja = j_transform_fn(re_f, 0.0, t, cfg, opt);
    const JResult jb = j_transform(f, 0.0, t, cfg);

    AbsCfForms out;
    out.via_j_of_re = {re_ft + 2.0 * ja.value, 2.0 * ja.err_estimate, ja.converged};
    out.via_parity = {re_ft + jb.value - std::conj(jb.value), 2.0 * jb.err_estimate, jb.converged};
    return out;
}

/// E e^{it|X|}; the mismatch between the two routes is folded into the
/// error estimate.
inline JResult cf_abs(const CfFunction& f, double t, const QuadratureConfig& cfg = {}) {
    const AbsCfForms forms = cf_abs_forms(f, t, cfg);
    const double gap = std::abs(forms.via_j_of_re.value - forms.via_parity.value);
    return {forms.via_j_of_re.value,
            forms.via_j_of_re.err_estimate + forms.via_parity.err_estimate + gap,
            forms.via_j_of_re.converged && forms.via_parity.converged};
}

/// E e^{it X_{a,b}} for the clamp X_{a,b} = a v (b ^ X):
///   (1/2)(e^{ita} + e^{itb}) + I_a(t) - I_b(t),
/// where I_c(t) = (J_c f)(t) - e^{itc} (J_c f)(0) is computed as one integral.
inline JResult cf_clamped(const CfFunction& f, double a, double b, double t,
                          const QuadratureConfig& cfg = {}) {
    if (a > b) throw std::invalid_argument("cf_clamped requires a <= b");
    if (a == b) return {unit_phase(t * a), 0.0, true};  // X_{a,a} == a
    auto fv = [&f](double u) { return f(u); };
    const JResult ia = j_anchor_diff_fn(
        fv, a, t, cfg, detail::pv_options_for(f, a, {t, 0.0}, "cf_clamped lower barrier"));
    const JResult ib = j_anchor_diff_fn(
        fv, b, t, cfg, detail::pv_options_for(f, b, {t, 0.0}, "cf_clamped upper barrier"));
    return {0.5 * (unit_phase(t * a) + unit_phase(t * b)) + ia.value - ib.value,
            ia.err_estimate + ib.err_estimate, ia.converged && ib.converged};
}

/// Joint c.f. of (S, C, P) with C = (S-K)+ and P = (K-S)+:
///   E e^{i(alpha S + beta C + gamma P)} = e^{i alpha K} *
///     { (1/2)[f_K(a+b) + f_K(a-g)] + (Jf_K)(a+b) - (Jf_K)(a-g) },
/// where f_K(t) = e^{-itK} E e^{itS} is the c.f. of S - K.
inline JResult option_joint_cf(const CfFunction& f_stock, double strike, double alpha, double beta,
                               double gamma, const QuadratureConfig& cfg = {}) {
    CfFunction f_k = [&]() {
        if (const auto* s = f_stock.spec())
            return CfFunction(DistributionSpec(make_shift_scale(*s, -strike, 1.0)));
        GridCf g = *f_stock.grid();
        for (std::size_t k = 0; k < g.samples.size(); ++k)
            g.samples[k] *= unit_phase(-g.node(k) * strike);
        return CfFunction(std::move(g));
    }();
    const JResult r = cf_joint(f_k, alpha, beta, gamma, cfg);
    return {unit_phase(alpha * strike) * r.value, r.err_estimate, r.converged};
}

/// (1/2) E sign(X - a) = (1/2)[P(X > a) - P(X < a)], the t = 0 slice of J_a.
inline JResult signed_tail(const CfFunction& f, double a, const QuadratureConfig& cfg = {}) {
    return j_transform(f, a, 0.0, cfg);
}

}  // namespace cfpp
