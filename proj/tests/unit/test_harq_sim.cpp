#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "oracles.hpp"
#include "urllc/error.hpp"
#include "urllc/harq_sim.hpp"

using namespace urllc;

TEST_SUITE("harq_sim") {

TEST_CASE("tti duration") {
    Numerology n;
    CHECK(tti_duration_ms(n) == doctest::Approx(1.0 / 7.0).epsilon(1e-15));
    n.symbols_per_tti = 14;
    CHECK(tti_duration_ms(n) == doctest::Approx(0.5).epsilon(1e-15));
    n.symbols_per_tti = 2;
    n.scs_khz = 60.0;
    CHECK(tti_duration_ms(n) == doctest::Approx(1.0 / 28.0).epsilon(1e-15));
    n.symbols_per_tti = 7;
    n.scs_khz = 15.0;
    CHECK(tti_duration_ms(n) == doctest::Approx(0.5).epsilon(1e-15));
    n.scs_khz = 0.0;
    CHECK_THROWS_AS(tti_duration_ms(n), ValidationError);
}

TEST_CASE("latency budget") {
    const Numerology n;
    const auto ok = latency_budget_check(n, 1.0);
    CHECK(ok.worst_case_ms == 1.0);
    CHECK(ok.fits);

    Numerology seven;
    seven.symbols_per_tti = 7;
    const auto over = latency_budget_check(seven, 1.0);
    CHECK(over.worst_case_ms == doctest::Approx(1.75).epsilon(1e-15));
    CHECK(!over.fits);

    CHECK(latency_budget_check(seven, std::numeric_limits<double>::infinity()).fits);
    CHECK_THROWS_AS(latency_budget_check(n, 0.0), DomainError);

    Numerology slow_bp;
    slow_bp.t_bp_initial_ttis = 1.0;
    CHECK(!latency_budget_check(slow_bp, 1.0).fits);
}

TEST_CASE("rng is keyed by seed and trial") {
    TrialRng a(1, 5);
    TrialRng b(1, 5);
    TrialRng c(1, 6);
    TrialRng d(2, 5);
    const auto va = a.next();
    CHECK(va == b.next());
    CHECK(va != c.next());
    CHECK(va != d.next());
    TrialRng e(3, 0);
    for (int i = 0; i < 10000; ++i) {
        const double u = e.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
    }
}

TEST_CASE("forced paths") {
    const Numerology n;
    TrialRng rng(1, 0);

    const auto first = simulate_sc_trial(LinkBlerProfile{}, n, rng);
    CHECK(first.success);
    CHECK(!first.used_retransmission);
    CHECK(first.path == PathOutcome::FirstTx);
    CHECK(first.channel_use_multiples == 1);
    CHECK(first.latency_ttis >= 2.0);
    CHECK(first.latency_ttis < 3.0);

    const auto timeout = simulate_sc_trial(LinkBlerProfile{1.0, 0.0, 0.0, 0.0, 0.0}, n, rng);
    CHECK(timeout.success);
    CHECK(timeout.path == PathOutcome::TimeoutRetx);
    CHECK(timeout.channel_use_multiples == 2);
    CHECK(timeout.latency_ttis >= 6.0);
    CHECK(timeout.latency_ttis < 7.0);

    const auto nack = simulate_sc_trial(LinkBlerProfile{0.0, 1.0, 0.0, 1.0, 0.0}, n, rng);
    CHECK(nack.success);
    CHECK(nack.path == PathOutcome::NackRetx);
    CHECK(nack.used_retransmission);

    const auto lost = simulate_sc_trial(LinkBlerProfile{0.0, 1.0, 0.0, 1.0, 1.0}, n, rng);
    CHECK(!lost.success);
    CHECK(lost.path == PathOutcome::Outage);
    CHECK(lost.channel_use_multiples == 2);

    // Duplicated: one sure node and one lost node still delivers on the first attempt.
    const std::vector<LinkBlerProfile> pair{LinkBlerProfile{1, 1, 1, 1, 1}, LinkBlerProfile{}};
    const auto dup = simulate_mc_trial(pair, n, rng);
    CHECK(dup.success);
    CHECK(dup.path == PathOutcome::FirstTx);
    CHECK(dup.channel_use_multiples == 3);
}

TEST_CASE("latency falls in the first-attempt or retransmission band") {
    const Numerology n;
    const std::vector<LinkBlerProfile> p{LinkBlerProfile::symmetric(0.2, 0.3, 0.05)};
    const auto tally = run_trials(Scheme::SC, p, n, 50000, 4);
    REQUIRE(tally.latencies_ttis.size() == tally.successes);
    for (double l : tally.latencies_ttis) {
        const bool first = l >= 2.0 && l < 3.0;
        const bool retx = l >= 6.0 && l < 7.0;
        REQUIRE((first || retx));
    }
    const auto worst = summarize(tally, Metric::latency_quantile(1.0), n, 4);
    CHECK(worst.mean <= latency_budget_check(n, 1.0).worst_case_ms);
}

TEST_CASE("determinism across thread counts") {
    const Numerology n;
    const std::vector<LinkBlerProfile> p(3, LinkBlerProfile::symmetric(0.1, 0.2, 0.02));
    SimulationOptions one;
    one.threads = 1;
    SimulationOptions many;
    many.threads = 7;
    const auto a = run_trials(Scheme::MC, p, n, 20001, 99, one);
    const auto b = run_trials(Scheme::MC, p, n, 20001, 99, many);
    CHECK(a.successes == b.successes);
    CHECK(a.usage_sum == b.usage_sum);
    CHECK(a.usage_sq_sum == b.usage_sq_sum);
    CHECK(a.usage_histogram == b.usage_histogram);
    CHECK(a.node_paths == b.node_paths);
    CHECK(a.latencies_ttis == b.latencies_ttis);

    const auto c = run_trials(Scheme::MC, p, n, 20001, 100, one);
    CHECK(a.latencies_ttis != c.latencies_ttis);
}

TEST_CASE("simulation agrees with the closed form") {
    const Numerology n;
    const LinkBlerProfile prof{0.05, 0.2, 0.1, 0.15, 0.04};
    const std::vector<LinkBlerProfile> p{prof};
    const std::uint64_t trials = 400000;
    const auto tally = run_trials(Scheme::SC, p, n, trials, 7);
    const double expected_out = static_cast<double>(oracle::tree_outage(prof));
    const auto out = summarize(tally, Metric::outage(), n, 7);
    const double sigma = std::sqrt(expected_out * (1 - expected_out) / static_cast<double>(trials));
    CHECK(std::abs(out.mean - expected_out) <= 4.5 * sigma);
    CHECK(out.ci_half_width_95 == doctest::Approx(1.96 * std::sqrt(out.mean * (1 - out.mean) / trials)));

    const double ps1 = (1 - prof.p_m1) * (1 - prof.p_d1);
    const auto usage = summarize(tally, Metric::mean_usage(), n, 7);
    const double usage_sigma = std::sqrt(ps1 * (1 - ps1) / static_cast<double>(trials));
    CHECK(std::abs(usage.mean - (2 - ps1)) <= 4.5 * usage_sigma);

    const double first_share = static_cast<double>(tally.node_paths[0][0]) / trials;
    CHECK(std::abs(first_share - ps1) <= 4.5 * usage_sigma);
}

TEST_CASE("duplicated outage is the product of link outages") {
    const Numerology n;
    const LinkBlerProfile a{0.1, 0.3, 0.1, 0.2, 0.1};
    const LinkBlerProfile b{0.2, 0.2, 0.05, 0.1, 0.0};
    const std::vector<LinkBlerProfile> p{a, b};
    const std::uint64_t trials = 400000;
    SimulationOptions opt;
    opt.threads = 4;
    const auto est = estimate(Metric::outage(), Scheme::MC, trials, 11, n, p, opt);
    const double expected = static_cast<double>(oracle::tree_outage(a) * oracle::tree_outage(b));
    const double sigma = std::sqrt(expected * (1 - expected) / static_cast<double>(trials));
    CHECK(std::abs(est.mean - expected) <= 4.5 * sigma);
    CHECK(est.trials == trials);
    CHECK(est.seed == 11);
}

TEST_CASE("independent frame alignment keeps the latency bands") {
    const Numerology n;
    const std::vector<LinkBlerProfile> p(2, LinkBlerProfile::symmetric(0.3, 0.3, 0.0));
    SimulationOptions opt;
    opt.shared_frame_alignment = false;
    const auto tally = run_trials(Scheme::MC, p, n, 20000, 5, opt);
    for (double l : tally.latencies_ttis) {
        REQUIRE(((l >= 2.0 && l < 3.0) || (l >= 6.0 && l < 7.0)));
    }
}

TEST_CASE("input errors") {
    const Numerology n;
    const std::vector<LinkBlerProfile> p{LinkBlerProfile{}};
    CHECK_THROWS_AS(run_trials(Scheme::SC, p, n, 0, 1), ValidationError);
    CHECK_THROWS_AS(estimate(Metric::outage(), Scheme::SC, 0, 1, n, p), ValidationError);
    const std::vector<LinkBlerProfile> two(2, LinkBlerProfile{});
    CHECK_THROWS_AS(run_trials(Scheme::SC, two, n, 10, 1), ValidationError);
    CHECK_THROWS_AS(run_trials(Scheme::MC, std::vector<LinkBlerProfile>{}, n, 10, 1), DomainError);
    const std::vector<LinkBlerProfile> bad{LinkBlerProfile{0.1, 0.1, 0.1, 0.1, 0.5}};
    CHECK_THROWS_AS(run_trials(Scheme::SC, bad, n, 10, 1), ValidationError);
    CHECK_THROWS_AS(estimate(Metric::latency_quantile(1.5), Scheme::SC, 10, 1, n, p), DomainError);
}

}
