#include <catch2/catch_amalgamated.hpp>

#include "test_util.hpp"

#include <cmath>
#include <complex>

using namespace cfpp;
using testutil::catalog;
using testutil::discrete_sign_kernel;

TEST_CASE("point-mass sign kernel is exact") {
    SECTION("unit mass above the anchor") {
        const auto r = j_transform(CfFunction{DistributionSpec(PointMass{1.0})}, 0.0, 0.0);
        CHECK(std::abs(r.value - 0.5) <= std::max(1e-9, r.err_estimate));
        CHECK(r.converged);
    }
    SECTION("anchor on the atom gives zero") {
        for (double c : {-1.0, 0.0, 2.5}) {
            const auto r = j_transform(CfFunction{DistributionSpec(PointMass{c})}, c, 1.3);
            CHECK(std::abs(r.value) <= std::max(1e-9, r.err_estimate));
        }
    }
    SECTION("general grid of atoms, anchors, frequencies") {
        for (double x : {-2.0, 0.5, 3.0})
            for (double a : {-1.0, 0.0, 2.0})
                for (double t : {-3.0, -1.0, 0.0, 1.0, 3.0}) {
                    const auto r = j_transform(CfFunction{DistributionSpec(PointMass{x})}, a, t);
                    const auto exact = 0.5 * unit_phase(t * x) * sign(x - a);
                    INFO("x=" << x << " a=" << a << " t=" << t);
                    CHECK(std::abs(r.value - exact) <= std::max(1e-6, r.err_estimate));
                }
    }
}

TEST_CASE("sign-kernel oracle identity") {
    // Exact expectation for discrete laws; Monte Carlo otherwise.
    for (const auto& entry : catalog()) {
        CfFunction f{entry.spec};
        const bool discrete = atom_list(entry.spec).has_value();
        for (double a : {-0.5, 1.0})
            for (double t : {-2.0, 0.7}) {
                const auto r = j_transform(f, a, t);
                INFO(entry.name << " a=" << a << " t=" << t);
                if (discrete) {
                    CHECK(std::abs(r.value - discrete_sign_kernel(entry.spec, a, t)) <=
                          r.err_estimate + 1e-9);
                } else {
                    const auto mc = mc_functional_cf(entry.spec, McFunctional::signed_tail(a), t,
                                                     1000000, 77);
                    CHECK(std::abs(r.value - 0.5 * mc.value) <=
                          2.0 * mc.std_err + r.err_estimate);
                }
            }
    }
}

TEST_CASE("standard normal sign kernel against heavy Monte Carlo") {
    const auto r = j_transform(CfFunction{DistributionSpec(Normal{0.0, 1.0})}, 0.0, 1.0);
    const auto mc = mc_functional_cf(DistributionSpec(Normal{0.0, 1.0}),
                                     McFunctional::signed_tail(0.0), 1.0, 10000000, 2024);
    CHECK(std::abs(r.value - 0.5 * mc.value) <= 2.0 * mc.std_err + r.err_estimate);
    CHECK(r.converged);
}

TEST_CASE("transform modulus never exceeds one half") {
    for (const auto& entry : catalog()) {
        CfFunction f{entry.spec};
        for (double a : {-2.0, 0.0, 1.5})
            for (int ti = -5; ti <= 5; ++ti) {
                const auto r = j_transform(f, a, static_cast<double>(ti));
                INFO(entry.name << " a=" << a << " t=" << ti);
                CHECK(std::abs(r.value) <= 0.5 + r.err_estimate + 1e-9);
            }
    }
}

TEST_CASE("truncated transform") {
    SECTION("strict unit bound on random truncations") {
        Rng rng(31337);
        const auto& specs = catalog();
        for (int i = 0; i < 50; ++i) {
            const auto& entry = specs[static_cast<std::size_t>(rng.next_u64() % specs.size())];
            const double eps = std::pow(10.0, -4.0 + 3.0 * rng.uniform01());
            const double A = 2.0 + 198.0 * rng.uniform01();
            const double a = -3.0 + 6.0 * rng.uniform01();
            const double t = -5.0 + 10.0 * rng.uniform01();
            const auto v = j_truncated(CfFunction{entry.spec}, a, t, eps, A);
            INFO(entry.name << " eps=" << eps << " A=" << A << " a=" << a << " t=" << t);
            CHECK(std::abs(v) < 1.0);
        }
    }
    SECTION("point mass stays strictly inside the unit disc") {
        const auto v = j_truncated(CfFunction{DistributionSpec(PointMass{1.0})}, 0.0, 0.0, 0.01,
                                   100.0);
        CHECK(std::abs(v.imag()) < 1e-10);
        CHECK(v.real() > -1.0);
        CHECK(v.real() < 1.0);
    }
    SECTION("constant c.f. integrates to zero") {
        for (double A : {5.0, 40.0})
            for (double t : {0.0, 2.0}) {
                const auto v = j_truncated(CfFunction{DistributionSpec(PointMass{0.0})}, 0.0, t,
                                           1e-3, A);
                CHECK(std::abs(v) < 1e-14);
            }
    }
    SECTION("truncations converge to the full transform as A grows") {
        // The excised [0, eps) hole contributes at most eps * max|g| / 2pi,
        // about 1.8e-4 here; past that the truncations must sit on the full
        // principal value.
        CfFunction f{DistributionSpec(Normal{0.0, 1.0})};
        const auto full = j_transform(f, 0.0, 0.7);
        std::vector<double> gaps;
        for (double A : {10.0, 20.0, 40.0, 80.0})
            gaps.push_back(std::abs(j_truncated(f, 0.0, 0.7, 1e-3, A) - full.value));
        for (double g : gaps) CHECK(g <= 2e-4 + full.err_estimate);
        CHECK(std::abs(gaps.back() - gaps.front()) <= 1e-6);  // tail already settled by A = 10

        // Shrinking eps removes the hole.
        const double tight = std::abs(j_truncated(f, 0.0, 0.7, 1e-7, 80.0) - full.value);
        CHECK(tight <= 1e-7 + full.err_estimate + 1e-9);
    }
    SECTION("invalid truncation range is rejected") {
        CfFunction f{DistributionSpec(Normal{0.0, 1.0})};
        CHECK_THROWS_AS(j_truncated(f, 0.0, 0.0, 1.0, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(j_truncated(f, 0.0, 0.0, 0.0, 1.0), std::invalid_argument);
    }
}

TEST_CASE("centered transform difference") {
    SECTION("vanishes at zero") {
        for (const auto& entry : catalog()) {
            const auto r = j_diff(CfFunction{entry.spec}, 0.0);
            INFO(entry.name);
            CHECK(std::abs(r.value) <= r.err_estimate + 1e-12);
        }
    }
    SECTION("point mass closed form") {
        const auto r = j_diff(CfFunction{DistributionSpec(PointMass{1.0})}, 2.0);
        const std::complex<double> exact = 0.5 * (unit_phase(2.0) - 1.0);
        CHECK(std::abs(r.value - exact) <= std::max(1e-8, r.err_estimate));
    }
    SECTION("agrees with the difference of two transforms") {
        for (const auto& entry : catalog()) {
            CfFunction f{entry.spec};
            for (double t : {-1.5, 1.0, 3.0}) {
                const auto one = j_diff(f, t);
                const auto at_t = j_transform(f, 0.0, t);
                const auto at_0 = j_transform(f, 0.0, 0.0);
                INFO(entry.name << " t=" << t);
                CHECK(std::abs(one.value - (at_t.value - at_0.value)) <=
                      one.err_estimate + at_t.err_estimate + at_0.err_estimate + 1e-12);
            }
        }
    }
}

TEST_CASE("reflection parity of the transform") {
    for (const auto& entry : catalog()) {
        CfFunction f{entry.spec};
        CfFunction fr = reflect_cf(f);
        for (double a : {-1.0, 0.0, 1.5})
            for (double t : {-2.0, 0.5, 3.0}) {
                const auto lhs = j_transform(f, a, -t);
                const auto rhs = j_transform(fr, -a, t);
                INFO(entry.name << " a=" << a << " t=" << t);
                CHECK(std::abs(lhs.value + rhs.value) <= lhs.err_estimate + rhs.err_estimate);
            }
    }
}

TEST_CASE("transform is linear over mixtures") {
    Mixture m{{0.5, 0.3, 0.2},
              {DistributionSpec(Normal{0.0, 1.0}), DistributionSpec(PointMass{1.0}),
               DistributionSpec(Uniform{-2.0, -1.0})}};
    CfFunction whole{DistributionSpec(m)};
    for (double a : {-0.5, 0.0})
        for (double t : {-1.0, 2.0}) {
            const auto r = j_transform(whole, a, t);
            std::complex<double> sum{0.0, 0.0};
            double errs = r.err_estimate;
            for (std::size_t i = 0; i < m.weights.size(); ++i) {
                const auto part = j_transform(CfFunction{m.components[i]}, a, t);
                sum += m.weights[i] * part.value;
                errs += m.weights[i] * part.err_estimate;
            }
            CHECK(std::abs(r.value - sum) <= errs + 1e-12);
        }
}

TEST_CASE("Hilbert transform wiring") {
    SECTION("constant c.f. has zero transform") {
        const auto r = hilbert_transform(CfFunction{DistributionSpec(PointMass{0.0})}, 1.0);
        CHECK(std::abs(r.value) <= r.err_estimate + 1e-12);
    }
    SECTION("(i/2) H equals J at anchor zero") {
        for (const auto& entry : catalog()) {
            CfFunction f{entry.spec};
            for (double t : {-2.0, 0.3, 1.7}) {
                const auto h = hilbert_transform(f, t);
                const auto j = j_transform(f, 0.0, t);
                INFO(entry.name << " t=" << t);
                CHECK(std::abs(std::complex<double>(0.0, 0.5) * h.value - j.value) <=
                      h.err_estimate + j.err_estimate + 1e-12);
            }
        }
    }
}

TEST_CASE("grid-backed transforms refuse to run off the grid") {
    // A decaying c.f. sampled on a wide grid works...
    CfFunction n01{DistributionSpec(Normal{0.0, 1.0})};
    CfFunction sampled{sample_to_grid(n01, 60.0, 0.05)};
    const auto rs = j_transform(sampled, 0.0, 1.0);
    const auto ra = j_transform(n01, 0.0, 1.0);
    CHECK(std::abs(rs.value - ra.value) <= 1e-6);
    CHECK(rs.converged);

    // ... a non-decaying one cannot bound its tail and must say so.
    CfFunction lat{sample_to_grid(CfFunction{DistributionSpec(TwoPoint{-1.0, 0.5, 1.0})}, 60.0,
                                  0.05)};
    CHECK_THROWS_AS(j_transform(lat, 0.0, 1.0), GridDomainError);

    // A grid narrower than the cutoff is refused outright.
    CfFunction narrow{sample_to_grid(n01, 10.0, 0.05)};
    CHECK_THROWS_AS(j_transform(narrow, 0.0, 1.0), GridDomainError);
}

TEST_CASE("quadrature configuration validation") {
    QuadratureConfig q;
    q.outer_cutoff = 0.5;
    CHECK_THROWS_AS(q.validate(), std::invalid_argument);
    q = {};
    q.panel_tol = 0.0;
    CHECK_THROWS_AS(q.validate(), std::invalid_argument);
    q = {};
    q.tail_periods = 0;
    CHECK_THROWS_AS(q.validate(), std::invalid_argument);
}
