#include <catch2/catch_amalgamated.hpp>

#include "test_util.hpp"

#include <cmath>
#include <complex>

using namespace cfpp;
using testutil::catalog;

TEST_CASE("positive part") {
    SECTION("nonnegative variable is a fixed point") {
        CfFunction f{DistributionSpec(Exponential{1.0})};
        for (int i = 0; i <= 100; ++i) {
            const double t = -10.0 + 0.2 * i;
            const auto r = cf_positive_part(f, t);
            const auto exact = 1.0 / std::complex<double>(1.0, -t);
            INFO("t=" << t);
            CHECK(std::abs(r.value - exact) <= 1e-6 + r.err_estimate);
        }
    }
    SECTION("nonpositive variable collapses to zero") {
        CfFunction f{DistributionSpec(PointMass{-2.0})};
        for (double t : {-3.0, 0.4, 2.0}) {
            const auto r = cf_positive_part(f, t);
            CHECK(std::abs(r.value - 1.0) <= r.err_estimate + 1e-9);
        }
    }
    SECTION("standard normal against Monte Carlo") {
        CfFunction f{DistributionSpec(Normal{0.0, 1.0})};
        const auto r = cf_positive_part(f, 1.0);
        const auto mc = mc_functional_cf(DistributionSpec(Normal{0.0, 1.0}),
                                         McFunctional::positive_part(), 1.0, 10000000, 555);
        CHECK(std::abs(r.value - mc.value) <= 4.0 * mc.std_err + r.err_estimate);
    }
    SECTION("sign identity for discrete laws") {
        // 2 e^{itX+} = 1 + e^{itX} + e^{itX} sign X - sign X, term by term.
        for (const auto& entry : catalog()) {
            const auto atoms = atom_list(entry.spec);
            if (!atoms) continue;
            CfFunction f{entry.spec};
            for (double t : {-1.3, 0.8, 2.1}) {
                std::complex<double> rhs{1.0, 0.0};
                for (const auto& [x, p] : *atoms)
                    rhs += p * (unit_phase(t * x) + unit_phase(t * x) * sign(x) - sign(x));
                rhs *= 0.5;
                const auto r = cf_positive_part(f, t);
                INFO(entry.name << " t=" << t);
                CHECK(std::abs(r.value - rhs) <= r.err_estimate + 1e-9);
            }
        }
    }
}

TEST_CASE("joint transform") {
    CfFunction f{DistributionSpec(Normal{0.3, 1.2})};
    SECTION("reduces to the plain c.f.") {
        for (double t : {-2.0, 0.5, 3.0}) {
            const auto r = cf_joint(f, t, 0.0, 0.0);
            CHECK(std::abs(r.value - f(t)) <= r.err_estimate + 1e-12);
        }
    }
    SECTION("reduces to the positive part") {
        for (double t : {-1.0, 0.7}) {
            const auto joint = cf_joint(f, 0.0, t, 0.0);
            const auto pos = cf_positive_part(f, t);
            CHECK(std::abs(joint.value - pos.value) <=
                  joint.err_estimate + pos.err_estimate + 1e-12);
        }
    }
    SECTION("two-atom law has an exact expectation") {
        CfFunction tp{DistributionSpec(TwoPoint{-1.0, 0.5, 1.0})};
        const auto r = cf_joint(tp, 1.0, 2.0, 3.0);
        // X = -1: X+ = 0, X- = 1; X = 1: X+ = 1, X- = 0.
        const std::complex<double> exact = 0.5 * unit_phase(-1.0 + 3.0) + 0.5 * unit_phase(1.0 + 2.0);
        CHECK(std::abs(r.value - exact) <= r.err_estimate + 1e-9);
    }
}

TEST_CASE("absolute value transform") {
    SECTION("symmetric two-point law has constant modulus one") {
        CfFunction f{DistributionSpec(TwoPoint{-1.0, 0.5, 1.0})};
        for (double t : {-2.0, 0.5, 1.3}) {
            const auto r = cf_abs(f, t);
            CHECK(std::abs(r.value - unit_phase(t)) <= r.err_estimate + 1e-9);
        }
    }
    SECTION("negative point mass reflects") {
        CfFunction f{DistributionSpec(PointMass{-3.0})};
        for (double t : {-1.0, 0.4}) {
            const auto r = cf_abs(f, t);
            CHECK(std::abs(r.value - unit_phase(3.0 * t)) <= r.err_estimate + 1e-9);
        }
    }
    SECTION("standard normal against Monte Carlo") {
        const auto r = cf_abs(CfFunction{DistributionSpec(Normal{0.0, 1.0})}, 1.0);
        const auto mc = mc_functional_cf(DistributionSpec(Normal{0.0, 1.0}),
                                         McFunctional::abs_value(), 1.0, 10000000, 556);
        CHECK(std::abs(r.value - mc.value) <= 4.0 * mc.std_err + r.err_estimate);
    }
    SECTION("the two evaluation routes agree across the catalog") {
        for (const auto& entry : catalog()) {
            CfFunction f{entry.spec};
            for (double t : {-3.0, -0.7, 1.1, 2.5}) {
                const auto forms = cf_abs_forms(f, t);
                INFO(entry.name << " t=" << t);
                CHECK(std::abs(forms.via_j_of_re.value - forms.via_parity.value) <=
                      forms.via_j_of_re.err_estimate + forms.via_parity.err_estimate + 1e-12);
            }
        }
    }
    SECTION("reduction chain: joint at (0, t, t) is the absolute value") {
        for (const auto& entry : catalog()) {
            CfFunction f{entry.spec};
            const auto joint = cf_joint(f, 0.0, 1.3, 1.3);
            const auto abs_r = cf_abs(f, 1.3);
            INFO(entry.name);
            CHECK(std::abs(joint.value - abs_r.value) <=
                  joint.err_estimate + abs_r.err_estimate + 1e-9);
        }
    }
}

TEST_CASE("clamp transform") {
    SECTION("degenerate interval pins the value") {
        CfFunction f{DistributionSpec(Normal{0.0, 1.0})};
        for (double c : {-1.0, 0.0, 2.0})
            for (double t : {-2.0, 0.8}) {
                const auto r = cf_clamped(f, c, c, t);
                CHECK(std::abs(r.value - unit_phase(t * c)) <= 1e-15);
                CHECK(r.err_estimate == 0.0);
            }
    }
    SECTION("support inside the barriers leaves the c.f. unchanged") {
        CfFunction f{DistributionSpec(Uniform{0.0, 1.0})};
        for (double t : {-3.0, 0.6, 2.2}) {
            const auto r = cf_clamped(f, -1.0, 2.0, t);
            CHECK(std::abs(r.value - f(t)) <= r.err_estimate + 1e-9);
        }
    }
    SECTION("clamp sandwich across bounded-support catalog entries") {
        for (const auto& entry : catalog()) {
            const auto atoms = atom_list(entry.spec);
            double lo = -1.0, hi = 1.0;
            bool bounded = false;
            if (atoms) {
                lo = atoms->front().first;
                hi = lo;
                for (const auto& [x, p] : *atoms) {
                    lo = std::min(lo, x);
                    hi = std::max(hi, x);
                }
                bounded = true;
            } else if (const auto* u = entry.spec.get_if<Uniform>()) {
                lo = u->lo;
                hi = u->hi;
                bounded = true;
            }
            if (!bounded) continue;
            CfFunction f{entry.spec};
            const auto r = cf_clamped(f, lo - 1.0, hi + 1.0, 1.4);
            INFO(entry.name);
            CHECK(std::abs(r.value - f(1.4)) <= r.err_estimate + 1e-8);
        }
    }
    SECTION("standard normal against Monte Carlo") {
        const auto r = cf_clamped(CfFunction{DistributionSpec(Normal{0.0, 1.0})}, -1.0, 1.0, 2.0);
        const auto mc = mc_functional_cf(DistributionSpec(Normal{0.0, 1.0}),
                                         McFunctional::clamp(-1.0, 1.0), 2.0, 10000000, 557);
        CHECK(std::abs(r.value - mc.value) <= 4.0 * mc.std_err + r.err_estimate);
    }
    SECTION("inverted barriers are rejected") {
        CHECK_THROWS_AS(cf_clamped(CfFunction{DistributionSpec(Normal{0.0, 1.0})}, 1.0, -1.0, 0.5),
                        std::invalid_argument);
    }
}

TEST_CASE("option payoff joint transform") {
    DistributionSpec stock(make_shift_scale(DistributionSpec(Normal{0.0, 1.0}), 100.0, 10.0));
    CfFunction fs{stock};
    SECTION("reduces to the stock c.f.") {
        for (double t : {-0.5, 0.3}) {
            const auto r = option_joint_cf(fs, 100.0, t, 0.0, 0.0);
            CHECK(std::abs(r.value - fs(t)) <= r.err_estimate + 1e-12);
        }
    }
    SECTION("degenerate stock at the strike") {
        CfFunction pm{DistributionSpec(PointMass{100.0})};
        for (double alpha : {0.0, 0.7})
            for (double beta : {0.0, 1.3}) {
                const auto r = option_joint_cf(pm, 100.0, alpha, beta, 2.0);
                CHECK(std::abs(r.value - unit_phase(alpha * 100.0)) <= r.err_estimate + 1e-9);
            }
    }
    SECTION("call leg against Monte Carlo") {
        const auto r = option_joint_cf(fs, 100.0, 0.0, 1.0, 0.0);
        const auto mc = mc_functional_cf(DistributionSpec(make_shift_scale(stock, -100.0, 1.0)),
                                         McFunctional::positive_part(), 1.0, 10000000, 558);
        CHECK(std::abs(r.value - mc.value) <= 4.0 * mc.std_err + r.err_estimate);
    }
    SECTION("call minus put is stock minus strike") {
        for (double t : {-0.8, 0.4}) {
            const auto r = option_joint_cf(fs, 100.0, 0.0, t, -t);
            const auto exact = unit_phase(-t * 100.0) * fs(t);
            CHECK(std::abs(r.value - exact) <= r.err_estimate + 1e-9);
        }
    }
}

TEST_CASE("signed tail weight") {
    SECTION("point mass above the anchor") {
        const auto r = signed_tail(CfFunction{DistributionSpec(PointMass{1.0})}, 0.0);
        CHECK(std::abs(r.value - 0.5) <= r.err_estimate + 1e-9);
    }
    SECTION("symmetric law balances") {
        const auto r = signed_tail(CfFunction{DistributionSpec(Normal{0.0, 1.0})}, 0.0);
        CHECK(std::abs(r.value) <= r.err_estimate + 1e-9);
    }
    SECTION("exponential at its median") {
        const auto r = signed_tail(CfFunction{DistributionSpec(Exponential{1.0})}, std::log(2.0));
        CHECK(std::abs(r.value) <= r.err_estimate + 1e-6);
    }
}

TEST_CASE("transform outputs behave like characteristic functions") {
    for (const auto& entry : catalog()) {
        CfFunction f{entry.spec};
        SECTION(entry.name) {
            const auto at0_pos = cf_positive_part(f, 0.0);
            CHECK(std::abs(at0_pos.value - 1.0) <= at0_pos.err_estimate + 1e-12);
            const auto at0_abs = cf_abs(f, 0.0);
            CHECK(std::abs(at0_abs.value - 1.0) <= at0_abs.err_estimate + 1e-12);
            const auto at0_cl = cf_clamped(f, -1.0, 1.0, 0.0);
            CHECK(std::abs(at0_cl.value - 1.0) <= at0_cl.err_estimate + 1e-12);

            for (double t : {0.9, 2.7}) {
                const auto pos_p = cf_positive_part(f, t);
                const auto pos_m = cf_positive_part(f, -t);
                CHECK(std::abs(pos_p.value) <= 1.0 + pos_p.err_estimate + 1e-9);
                CHECK(std::abs(pos_m.value - std::conj(pos_p.value)) <=
                      pos_m.err_estimate + pos_p.err_estimate + 1e-12);

                const auto abs_p = cf_abs(f, t);
                const auto abs_m = cf_abs(f, -t);
                CHECK(std::abs(abs_p.value) <= 1.0 + abs_p.err_estimate + 1e-9);
                CHECK(std::abs(abs_m.value - std::conj(abs_p.value)) <=
                      abs_m.err_estimate + abs_p.err_estimate + 1e-12);

                const auto cl_p = cf_clamped(f, -1.0, 1.0, t);
                const auto cl_m = cf_clamped(f, -1.0, 1.0, -t);
                CHECK(std::abs(cl_p.value) <= 1.0 + cl_p.err_estimate + 1e-9);
                CHECK(std::abs(cl_m.value - std::conj(cl_p.value)) <=
                      cl_m.err_estimate + cl_p.err_estimate + 1e-12);
            }
        }
    }
}
