#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "treesic/cri.hpp"
#include "treesic/sim.hpp"

using namespace treesic;

namespace {

std::vector<ProtocolConfig> probe_configs() {
    std::vector<ProtocolConfig> configs;
    configs.push_back(ProtocolConfig::binary(1));
    configs.push_back(ProtocolConfig::binary(3));
    configs.push_back(ProtocolConfig::dary(1, 3));
    configs.push_back(ProtocolConfig::dary(2, 4));
    configs.push_back(ProtocolConfig::binary(1, 0.5, false));
    configs.push_back(ProtocolConfig::dary(1, 3, false));
    return configs;
}

}  // namespace

TEST_CASE("same seed, same outcome") {
    const ProtocolConfig config = ProtocolConfig::binary(2);
    for (std::uint64_t seed : {1ULL, 42ULL, 0xDEADBEEFULL}) {
        const TrialOutcome a = simulate_cri(config, 25, seed);
        const TrialOutcome b = simulate_cri(config, 25, seed);
        CHECK(a.slots == b.slots);
        CHECK(a.resolved == 25);
    }
}

TEST_CASE("aggregate statistics are independent of the thread count") {
    const ProtocolConfig config = ProtocolConfig::binary(1);
    const MonteCarloStats one = monte_carlo(config, 50, 2000, 7, 1);
    const MonteCarloStats four = monte_carlo(config, 50, 2000, 7, 4);
    CHECK(one.mean_slots == four.mean_slots);
    CHECK(one.std_dev == four.std_dev);
    CHECK(one.ci95_half_width == four.ci95_half_width);
    CHECK(one.throughput == four.throughput);
    CHECK(one.trials == 2000);
}

TEST_CASE("trace totals equal the counting path") {
    for (const ProtocolConfig& config : probe_configs()) {
        for (int n = 0; n <= 20; ++n) {
            for (std::uint64_t seed = 1; seed <= 25; ++seed) {
                const TrialOutcome plain = simulate_cri(config, n, seed);
                const auto [traced, events] = simulate_cri_trace(config, n, seed);
                CHECK(plain.slots == traced.slots);
                CHECK(plain.resolved == traced.resolved);
            }
        }
    }
}

TEST_CASE("trace invariants") {
    for (const ProtocolConfig& config : probe_configs()) {
        for (int n : {0, 1, 5, 12, 20}) {
            const auto [outcome, events] = simulate_cri_trace(config, n, 99 + n);
            REQUIRE(!events.empty());
            CHECK(events.front().depth == 0);

            std::uint64_t counted = 0;
            int resolved = 0;
            for (const SlotEvent& ev : events) {
                switch (ev.kind) {
                    case SlotKind::Idle:
                        ++counted;
                        CHECK(ev.index == counted);
                        CHECK(ev.count == 0);
                        break;
                    case SlotKind::Success:
                        ++counted;
                        CHECK(ev.index == counted);
                        CHECK(ev.count >= 1);
                        CHECK(ev.count <= config.K);
                        resolved += ev.count;
                        break;
                    case SlotKind::Collision:
                        ++counted;
                        CHECK(ev.index == counted);
                        CHECK(ev.count > config.K);
                        break;
                    case SlotKind::SkippedSicResolved:
                        CHECK(config.sic);
                        CHECK(ev.count >= 0);
                        CHECK(ev.count <= config.K);
                        resolved += ev.count;
                        break;
                    case SlotKind::SkippedKnownResidual:
                        CHECK(config.sic);
                        CHECK(ev.count > config.K);
                        break;
                }
            }
            CHECK(counted == outcome.slots);
            CHECK(resolved == n);
            CHECK(outcome.resolved == n);
        }
    }
}

TEST_CASE("cancellation saves exactly the internal slots of the same tree") {
    for (int K : {1, 2, 4}) {
        for (int n : {0, 1, K, K + 1, 10, 40}) {
            for (std::uint64_t seed = 1; seed <= 40; ++seed) {
                const auto [sic, no_sic] = coupled_sic_comparison(n, K, 0.5, seed);
                CHECK(no_sic == 2 * sic - 1);
                if (n > K) CHECK(no_sic > sic);
            }
        }
    }
    // Biased splits obey the same pathwise identity.
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto [sic, no_sic] = coupled_sic_comparison(15, 1, 0.3, seed);
        CHECK(no_sic == 2 * sic - 1);
    }
}

TEST_CASE("a fair two-way split is the d = 2 special case") {
    for (bool sic : {true, false}) {
        const ProtocolConfig dary = ProtocolConfig::dary(2, 2, sic);
        const ProtocolConfig binary = ProtocolConfig::binary(2, 0.5, sic);
        for (int n = 0; n <= 12; ++n) {
            for (std::uint64_t seed = 1; seed <= 50; ++seed) {
                CHECK(simulate_cri(dary, n, seed).slots ==
                      simulate_cri(binary, n, seed).slots);
            }
        }
    }
}

TEST_CASE("forced root splits have hand-computable lengths") {
    // Three-way split, K = 1, cancellation on: {1,0,1} resolves the first two
    // groups in 2 slots and infers the last; {0,1,1} needs all three minus
    // the inferred final group... which is nonempty, so only the skip at the
    // end is free.
    CHECK(cri_with_root_split(ProtocolConfig::dary(1, 3), {1, 0, 1}) == 2);
    CHECK(cri_with_root_split(ProtocolConfig::dary(1, 3), {0, 1, 1}) == 3);
    CHECK(cri_with_root_split(ProtocolConfig::binary(1), {1, 1}) == 2);
    CHECK(cri_with_root_split(ProtocolConfig::binary(1, 0.5, false), {1, 1}) == 3);

    CHECK_THROWS_AS(cri_with_root_split(ProtocolConfig::binary(1), {2, 1}),
                    std::invalid_argument);  // child exceeds K
    CHECK_THROWS_AS(cri_with_root_split(ProtocolConfig::binary(1), {1, 0}),
                    std::invalid_argument);  // root does not collide
    CHECK_THROWS_AS(cri_with_root_split(ProtocolConfig::dary(1, 3), {1, 1}),
                    std::invalid_argument);  // wrong arity
}

TEST_CASE("generator moments are sane") {
    Rng rng(2024);
    double sum = 0.0;
    const int trials = 100000;
    for (int i = 0; i < trials; ++i) sum += rng.binomial(10, 0.3);
    CHECK(std::fabs(sum / trials - 3.0) < 0.05);

    sum = 0.0;
    for (int i = 0; i < trials; ++i) sum += rng.poisson(7.0);
    CHECK(std::fabs(sum / trials - 7.0) < 0.1);

    sum = 0.0;
    for (int i = 0; i < trials; ++i) sum += rng.binomial_half(64);
    CHECK(std::fabs(sum / trials - 32.0) < 0.3);

    CHECK(rng.binomial(0, 0.4) == 0);
    CHECK(rng.binomial(5, 0.0) == 0);
    CHECK(rng.binomial(5, 1.0) == 5);
}

TEST_CASE("simulated means agree with the analytic expectation") {
    struct Probe {
        int n, K;
        double p;
    };
    const Probe probes[] = {{10, 1, 0.5}, {10, 2, 0.3}, {30, 4, 0.5}};
    for (const Probe& probe : probes) {
        const ProtocolConfig config = ProtocolConfig::binary(probe.K, probe.p);
        const MonteCarloStats stats = monte_carlo(config, probe.n, 50000, 1234);
        const double want =
            expected_cri_recursive(probe.n, probe.K, probe.p).value;
        const double se = stats.std_dev / std::sqrt(50000.0);
        CHECK(std::fabs(stats.mean_slots - want) < 4.0 * se + 1e-9);
        CHECK(stats.throughput ==
              doctest::Approx(probe.n / (probe.K * stats.mean_slots)));
    }
}

TEST_CASE("runaway recursion trips the node budget") {
    // A deterministic all-left split cannot happen, but a single trial with
    // n large enough to exceed the node budget must abort rather than hang.
    CHECK_THROWS_AS(simulate_cri(ProtocolConfig::binary(1), 1000000, 1),
                    convergence_error);
}

TEST_CASE("windowed simulation drifts with the offered load") {
    const ProtocolConfig config = ProtocolConfig::binary(1);
    const WindowedSimStats low = simulate_windowed(config, 0.3, 30.0, 2000, 5);
    CHECK(low.drift < 0.0);
    CHECK(low.mean_wait >= 0.0);
    CHECK(low.windows == 2000);
    const WindowedSimStats high = simulate_windowed(config, 0.9, 30.0, 2000, 5);
    CHECK(high.drift > 0.0);
    CHECK(low.mean_cri < high.mean_cri);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(simulate_cri(ProtocolConfig::binary(1), -1, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(monte_carlo(ProtocolConfig::binary(1), 10, 0, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(simulate_windowed(ProtocolConfig::binary(1), -0.5, 30.0, 10, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(simulate_windowed(ProtocolConfig::binary(1), 0.5, 0.0, 10, 1),
                    std::invalid_argument);
    CHECK(std::string(to_string(SlotKind::Idle)) == "idle");
    CHECK(std::string(to_string(SlotKind::SkippedKnownResidual)) == "skipped-residual");
}
