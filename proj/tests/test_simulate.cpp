#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hawkes/core.hpp"
#include "hawkes/simulate.hpp"
#include "oracles.hpp"

using namespace hawkes;

namespace {

bool identical(const EventSequence& a, const EventSequence& b) {
    if (a.horizon != b.horizon || a.size() != b.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a.events[i].time != b.events[i].time ||
            a.events[i].dim != b.events[i].dim) {
            return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("zero intensity yields an empty sequence") {
    const HawkesParams p({0.0}, {{0.0}}, ExpKernel(1.0));
    SimConfig cfg;
    cfg.horizon = 50.0;
    CHECK(simulate(p, cfg).empty());
}

TEST_CASE("Poisson mean count over seeded runs") {
    const HawkesParams p({2.0}, {{0.0}}, ExpKernel(1.0));
    SimConfig cfg;
    cfg.horizon = 1000.0;
    cfg.seed = 1001;
    double total = 0.0;
    for (std::size_t k = 0; k < 100; ++k) {
        SimConfig run = cfg;
        run.seed = derive_seed(cfg.seed, k);
        total += static_cast<double>(simulate(p, run).size());
    }
    const double mean = total / 100.0;
    const double se = std::sqrt(2000.0 / 100.0);
    CHECK(std::abs(mean - 2000.0) < 3.0 * se);
}

TEST_CASE("subcritical stationary rate") {
    // mu / (1 - a) = 0.5 / 0.2 = 2.5 events per unit time
    const HawkesParams p({0.5}, {{0.8}}, ExpKernel(1.0));
    SimConfig cfg;
    cfg.horizon = 5000.0;
    cfg.seed = 7;
    double total = 0.0;
    for (const auto& seq : simulate_batch(p, cfg, 10)) {
        total += static_cast<double>(seq.size());
    }
    const double rate = total / (10.0 * cfg.horizon);
    CHECK(rate == doctest::Approx(2.5).epsilon(0.05));
}

TEST_CASE("timestamps lie in [0, T] strictly increasing") {
    const HawkesParams p({0.3, 0.1}, {{0.2, 0.4}, {0.1, 0.3}}, ExpKernel(2.0));
    SimConfig cfg;
    cfg.horizon = 200.0;
    cfg.seed = 99;
    for (const auto& seq : simulate_batch(p, cfg, 20)) {
        CHECK_NOTHROW(seq.validate(2));
    }
}

TEST_CASE("determinism") {
    const HawkesParams p({0.3, 0.1}, {{0.2, 0.4}, {0.1, 0.3}}, ExpKernel(2.0));
    SimConfig cfg;
    cfg.horizon = 100.0;
    cfg.seed = 5150;
    CHECK(identical(simulate(p, cfg), simulate(p, cfg)));

    const auto batch_a = simulate_batch(p, cfg, 5);
    const auto batch_b = simulate_batch(p, cfg, 5);
    REQUIRE(batch_a.size() == 5);
    for (std::size_t k = 0; k < 5; ++k) {
        CHECK(identical(batch_a[k], batch_b[k]));
    }

    SUBCASE("count=1 equals simulate with the derived seed") {
        SimConfig derived = cfg;
        derived.seed = derive_seed(cfg.seed, 0);
        CHECK(identical(batch_a[0], simulate(p, derived)));
    }
}

TEST_CASE("pooled residuals of batch simulation pass KS") {
    const HawkesParams p({0.4, 0.2}, {{0.3, 0.2}, {0.1, 0.4}}, ExpKernel(1.5));
    SimConfig cfg;
    cfg.horizon = 60.0;
    cfg.seed = 2024;
    std::vector<double> pooled;
    for (const auto& seq : simulate_batch(p, cfg, 200)) {
        for (std::size_t u = 0; u < 2; ++u) {
            const auto res = rescaled_residuals(p, seq, u);
            pooled.insert(pooled.end(), res.begin(), res.end());
        }
    }
    REQUIRE(pooled.size() > 1000);
    CHECK(oracles::ks_test_exp1(pooled, 0.01));
}

TEST_CASE("Poisson counts chi-square goodness of fit") {
    const HawkesParams p({1.0}, {{0.0}}, ExpKernel(1.0));
    SimConfig cfg;
    cfg.horizon = 5.0;
    cfg.seed = 31337;
    // bins {<=2, 3, 4, 5, 6, 7, >=8} for counts ~ Poisson(5)
    std::vector<double> observed(7, 0.0);
    for (const auto& seq : simulate_batch(p, cfg, 500)) {
        const std::size_t n = seq.size();
        observed[n <= 2 ? 0 : n >= 8 ? 6 : n - 2] += 1.0;
    }
    std::vector<double> pmf(8, std::exp(-5.0));
    for (int k = 1; k < 8; ++k) {
        pmf[k] = pmf[k - 1] * 5.0 / k;
    }
    std::vector<double> expected = {
        500.0 * (pmf[0] + pmf[1] + pmf[2]),
        500.0 * pmf[3],
        500.0 * pmf[4],
        500.0 * pmf[5],
        500.0 * pmf[6],
        500.0 * pmf[7],
        0.0};
    double head = 0.0;
    for (int k = 0; k < 8; ++k) {
        head += pmf[k];
    }
    expected[6] = 500.0 * (1.0 - head);
    CHECK(oracles::chi_square_pvalue(observed, expected) > 0.01);
}

TEST_CASE("subcritical event count matches branching magnitude") {
    const HawkesParams p({0.5, 0.5}, {{0.4, 0.2}, {0.2, 0.4}}, ExpKernel(1.0));
    const double rho = branching_spectral_radius(p.A);
    REQUIRE(rho == doctest::Approx(0.6));
    SimConfig cfg;
    cfg.horizon = 2000.0;
    cfg.seed = 314;
    const auto seq = simulate(p, cfg);
    const double expected = 1.0 * cfg.horizon / (1.0 - rho);
    CHECK(static_cast<double>(seq.size()) > 0.5 * expected);
    CHECK(static_cast<double>(seq.size()) < 2.0 * expected);
}

TEST_CASE("stability and truncation errors") {
    SUBCASE("supercritical parameters") {
        const HawkesParams p({0.5}, {{1.2}}, ExpKernel(1.0));
        SimConfig cfg;
        CHECK_THROWS_AS(simulate(p, cfg), StabilityError);
        try {
            simulate(p, cfg);
        } catch (const StabilityError& e) {
            CHECK(e.spectral_radius == doctest::Approx(1.2));
        }
    }
    SUBCASE("max_events truncation keeps the partial sequence") {
        const HawkesParams p({5.0}, {{0.0}}, ExpKernel(1.0));
        SimConfig cfg;
        cfg.horizon = 100.0;
        cfg.max_events = 20;
        cfg.seed = 1;
        try {
            simulate(p, cfg);
            FAIL("expected TruncationError");
        } catch (const TruncationError& e) {
            CHECK(e.partial.size() == 21);
            CHECK_NOTHROW(e.partial.validate(1));
        }
    }
}
