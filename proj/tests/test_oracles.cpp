#include <catch2/catch_amalgamated.hpp>

#include "test_util.hpp"

#include <cmath>
#include <complex>
#include <numeric>

using namespace cfpp;

namespace {

std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

LatticeLaw two_point_law() {
    return lattice_law_from_spec(DistributionSpec(TwoPoint{-1.0, 0.5, 1.0}));
}

}  // namespace

TEST_CASE("Monte Carlo estimator basics") {
    SECTION("degenerate law has zero standard error") {
        const auto est = mc_functional_cf(DistributionSpec(PointMass{2.0}),
                                          McFunctional::positive_part(), 1.0, 10000, 1);
        CHECK(est.std_err == 0.0);
        CHECK(std::abs(est.value - unit_phase(2.0)) < 1e-12);
    }
    SECTION("symmetric signed weight balances") {
        const auto est = mc_functional_cf(DistributionSpec(Normal{0.0, 1.0}),
                                          McFunctional::signed_tail(0.0), 0.0, 500000, 2);
        CHECK(std::abs(est.value) <= 4.0 * est.std_err);
    }
    SECTION("identity functional recovers the closed form") {
        const auto est = mc_functional_cf(DistributionSpec(Exponential{1.0}),
                                          McFunctional::identity(), 1.0, 1000000, 3);
        CHECK(std::abs(est.value - std::complex<double>(0.5, 0.5)) <= 4.0 * est.std_err);
    }
    SECTION("two seeds agree within combined uncertainty") {
        for (const auto& entry : testutil::catalog()) {
            const auto a = mc_functional_cf(entry.spec, McFunctional::abs_value(), 0.9, 200000, 100);
            const auto b = mc_functional_cf(entry.spec, McFunctional::abs_value(), 0.9, 200000, 200);
            INFO(entry.name);
            CHECK(std::abs(a.value - b.value) <= 6.0 * (a.std_err + b.std_err) + 1e-12);
        }
    }
    SECTION("a batch shares its samples with the single-point call") {
        const std::vector<double> ts{-1.0, 0.3, 2.0};
        const auto batch = mc_functional_cf_batch(DistributionSpec(Normal{0.2, 1.0}),
                                                  McFunctional::clamp(-1.0, 1.0), ts, 50000, 9);
        for (std::size_t j = 0; j < ts.size(); ++j) {
            const auto single = mc_functional_cf(DistributionSpec(Normal{0.2, 1.0}),
                                                 McFunctional::clamp(-1.0, 1.0), ts[j], 50000, 9);
            CHECK(batch[j].value == single.value);
            CHECK(batch[j].std_err == single.std_err);
        }
    }
    SECTION("estimates are deterministic given the seed") {
        const auto a = mc_functional_cf(DistributionSpec(Cauchy{0.0, 1.0}),
                                        McFunctional::identity(), 0.7, 100000, 42);
        const auto b = mc_functional_cf(DistributionSpec(Cauchy{0.0, 1.0}),
                                        McFunctional::identity(), 0.7, 100000, 42);
        CHECK(a.value == b.value);
        CHECK(a.std_err == b.std_err);
    }
}

TEST_CASE("walk maximum dynamic programming") {
    const auto law = two_point_law();

    SECTION("zero steps is the unit mass at the origin") {
        const auto j = dp_lattice_max(law, 0);
        CHECK(std::abs(j.phi(0.7, 0.4) - 1.0) < 1e-15);
        const auto m = j.max_marginal();
        CHECK(m.probs.size() >= 1);
        CHECK(std::abs(m.probs[0] - 1.0) < 1e-15);
    }

    SECTION("deterministic upward walk") {
        LatticeLaw up;
        up.step = 1.0;
        up.offset_min = 1;
        up.probs = {1.0};
        const auto j = dp_lattice_max(up, 3);
        const auto m = j.max_marginal();
        REQUIRE(m.probs.size() == 4);
        CHECK(std::abs(m.probs[3] - 1.0) < 1e-15);  // M_3 = 3
        CHECK(std::abs(j.phi(0.5, 0.9) - unit_phase(0.5 * 3.0)) < 1e-14);  // gap is zero
    }

    SECTION("two-step symmetric walk maximum law") {
        const auto m2 = dp_lattice_max(law, 2).max_marginal();
        REQUIRE(m2.probs.size() == 3);
        CHECK(std::abs(m2.probs[0] - 0.5) < 1e-15);
        CHECK(std::abs(m2.probs[1] - 0.25) < 1e-15);
        CHECK(std::abs(m2.probs[2] - 0.25) < 1e-15);
    }

    SECTION("joint masses are a probability law and phi(0,0) = 1") {
        for (int n : {1, 4, 9}) {
            const auto j = dp_lattice_max(law, n);
            const double total = std::accumulate(j.mass.begin(), j.mass.end(), 0.0);
            CHECK(std::abs(total - 1.0) <= 1e-12);
            CHECK(std::abs(j.phi(0.0, 0.0) - 1.0) <= 1e-12);
        }
    }

    SECTION("sum marginal equals the n-fold convolution of the step law") {
        LatticeLaw asym;
        asym.step = 0.5;
        asym.offset_min = -2;
        asym.probs = {0.2, 0.5, 0.0, 0.3};
        for (int n : {1, 2, 5}) {
            const auto got = dp_lattice_max(asym, n).sum_marginal();
            std::vector<double> conv{1.0};
            for (int k = 0; k < n; ++k) conv = convolve(conv, asym.probs);
            // got spans [-(down)n, (up)n]; conv spans the same range offset by n*offset_min.
            REQUIRE(got.probs.size() >= conv.size());
            const long shift = static_cast<long>(n) * asym.offset_min - got.offset_min;
            for (std::size_t i = 0; i < conv.size(); ++i) {
                const long idx = static_cast<long>(i) + shift;
                REQUIRE(idx >= 0);
                CHECK(std::abs(got.probs[static_cast<std::size_t>(idx)] - conv[i]) <= 1e-13);
            }
        }
    }

    SECTION("the state cap rejects runaway walks") {
        LatticeLaw wide;
        wide.step = 1.0;
        wide.offset_min = -4000;
        wide.probs.assign(8001, 1.0 / 8001.0);
        CHECK_THROWS_AS(dp_lattice_max(wide, 50), StateCapError);
    }
}

TEST_CASE("clamped walk dynamic programming") {
    const auto law = two_point_law();

    SECTION("degenerate barriers pin the walk") {
        const auto u = dp_clamped_walk(law, 0.0, 0.0, 0.0, 5);
        REQUIRE(u.probs.size() == 1);
        CHECK(std::abs(u.probs[0] - 1.0) < 1e-15);
    }

    SECTION("two steps with a floor at zero") {
        const auto u = dp_clamped_walk(law, 0.0, 2.0, 0.0, 2);
        REQUIRE(u.probs.size() == 3);
        CHECK(std::abs(u.probs[0] - 0.5) < 1e-15);
        CHECK(std::abs(u.probs[1] - 0.25) < 1e-15);
        CHECK(std::abs(u.probs[2] - 0.25) < 1e-15);
    }

    SECTION("barriers beyond reach reduce to the free walk") {
        const int n = 3;
        const auto u = dp_clamped_walk(law, -10.0, 10.0, 1.0, n);
        std::vector<double> conv{1.0};
        for (int k = 0; k < n; ++k) conv = convolve(conv, law.probs);
        // Free walk from x = 1: S_n + 1 on offsets [-n + 1, n + 1].
        for (std::size_t i = 0; i < conv.size(); ++i) {
            const long off = static_cast<long>(i) - n + 1;
            const long idx = off - u.offset_min;
            REQUIRE(idx >= 0);
            CHECK(std::abs(u.probs[static_cast<std::size_t>(idx)] - conv[i]) <= 1e-13);
        }
    }

    SECTION("masses stay a probability law") {
        const auto u = dp_clamped_walk(law, -1.0, 3.0, 0.0, 9);
        CHECK(std::abs(std::accumulate(u.probs.begin(), u.probs.end(), 0.0) - 1.0) <= 1e-12);
    }

    SECTION("off-lattice barriers are rejected") {
        CHECK_THROWS_AS(dp_clamped_walk(law, -0.5, 2.0, 0.0, 3), std::invalid_argument);
        CHECK_THROWS_AS(dp_clamped_walk(law, 0.0, 2.0, 0.3, 3), std::invalid_argument);
        CHECK_THROWS_AS(dp_clamped_walk(law, 1.0, 0.0, 0.5, 3), std::invalid_argument);
    }
}

TEST_CASE("lattice law to characteristic function") {
    SECTION("unit mass at the origin") {
        LatticeLaw l;
        l.step = 1.0;
        l.offset_min = 0;
        l.probs = {1.0};
        CHECK(std::abs(law_to_cf(l, 1.7) - 1.0) < 1e-15);
    }
    SECTION("symmetric two-point law at t = pi") {
        CHECK(std::abs(law_to_cf(two_point_law(), pi) - std::complex<double>(-1.0, 0.0)) < 1e-13);
    }
    SECTION("two-step maximum law at t = 1") {
        const auto m2 = dp_lattice_max(two_point_law(), 2).max_marginal();
        const std::complex<double> exact =
            0.5 + 0.25 * unit_phase(1.0) + 0.25 * unit_phase(2.0);
        CHECK(std::abs(law_to_cf(m2, 1.0) - exact) < 1e-14);
    }
}

TEST_CASE("lattice law derivation from distribution specs") {
    SECTION("two-point") {
        const auto law = two_point_law();
        CHECK(law.step == 1.0);
        CHECK(law.offset_min == -1);
        REQUIRE(law.probs.size() == 3);
        CHECK(law.probs[1] == 0.0);
    }
    SECTION("mixture atoms merge") {
        Mixture m{{0.5, 0.5},
                  {DistributionSpec(PointMass{1.0}), DistributionSpec(TwoPoint{-1.0, 0.5, 1.0})}};
        const auto law = lattice_law_from_spec(DistributionSpec(m));
        REQUIRE(law.probs.size() == 3);
        CHECK(std::abs(law.probs[2] - 0.75) < 1e-15);
        CHECK(std::abs(law.probs[0] - 0.25) < 1e-15);
    }
    SECTION("continuous specs are rejected") {
        CHECK_THROWS_AS(lattice_law_from_spec(DistributionSpec(Normal{0.0, 1.0})),
                        std::invalid_argument);
    }
    SECTION("incommensurate atoms are rejected") {
        CHECK_THROWS_AS(lattice_law_from_spec(DistributionSpec(TwoPoint{1.0, 0.5, std::sqrt(2.0)})),
                        std::invalid_argument);
    }
}

TEST_CASE("path-sampled joint walk estimates match the exact DP") {
    const auto law = two_point_law();
    const double s = 0.7, t = 0.4;
    const auto mc = mc_walk_phi(DistributionSpec(TwoPoint{-1.0, 0.5, 1.0}), 4, s, t, 400000, 31);
    const auto seq = dp_lattice_max_sequence(law, 4);
    for (int n = 0; n <= 4; ++n) {
        const auto exact = seq[static_cast<std::size_t>(n)].phi(s, t);
        INFO("n=" << n);
        CHECK(std::abs(mc[static_cast<std::size_t>(n)].value - exact) <=
              4.0 * mc[static_cast<std::size_t>(n)].std_err + 1e-12);
    }
}
