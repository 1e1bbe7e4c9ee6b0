#include "urllc/harq_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include "urllc/error.hpp"

namespace urllc {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

struct NodeResult {
    PathOutcome path;
    double latency_ttis;
};

NodeResult run_node(const LinkBlerProfile& profile, const Numerology& numerology, TrialRng& rng,
                    double t_fa) {
    // Four draws per node whatever the path, so streams stay aligned.
    const double u_m1 = rng.uniform();
    const double u_d1 = rng.uniform();
    const double u_m2 = rng.uniform();
    const double u_last = rng.uniform();

    const double first_latency =
        t_fa + numerology.t_bp_initial_ttis + numerology.t_tx_ttis + numerology.t_up_ttis;
    const double retx_latency =
        t_fa + numerology.harq_rtt_ttis + numerology.t_tx_ttis + numerology.t_up_ttis;

    if (u_m1 < profile.p_m1) {
        // No metadata, no NACK: resend after the timeout, nothing to combine with.
        const bool ok = u_m2 >= profile.p_m2 && u_last >= profile.p_d2;
        return {ok ? PathOutcome::TimeoutRetx : PathOutcome::Outage, retx_latency};
    }
    if (u_d1 >= profile.p_d1) {
        return {PathOutcome::FirstTx, first_latency};
    }
    // NACK path. Given the first data attempt failed, combining fails with
    // probability p_c / p_d1 (p_d1 > 0 on this branch).
    const bool combined_fail = u_last < profile.p_c / profile.p_d1;
    const bool ok = u_m2 >= profile.p_m2 && !combined_fail;
    return {ok ? PathOutcome::NackRetx : PathOutcome::Outage, retx_latency};
}

template <typename OnNode>
TrialOutcome run_trial(std::span<const LinkBlerProfile> profiles, const Numerology& numerology,
                       TrialRng& rng, bool shared_frame_alignment, OnNode&& on_node) {
    TrialOutcome out;
    out.latency_ttis = std::numeric_limits<double>::infinity();
    const double shared_fa = shared_frame_alignment ? rng.uniform() : 0.0;
    for (std::size_t n = 0; n < profiles.size(); ++n) {
        const double t_fa = shared_frame_alignment ? shared_fa : rng.uniform();
        const NodeResult node = run_node(profiles[n], numerology, rng, t_fa);
        on_node(n, node.path);
        const bool retx = node.path != PathOutcome::FirstTx;
        out.channel_use_multiples += retx ? 2 : 1;
        out.used_retransmission = out.used_retransmission || retx;
        if (node.path != PathOutcome::Outage && node.latency_ttis < out.latency_ttis) {
            out.success = true;
            out.latency_ttis = node.latency_ttis;
            out.path = node.path;
        }
    }
    if (!out.success) {
        out.latency_ttis = 0.0;
    }
    return out;
}

void require_profiles(Scheme scheme, std::span<const LinkBlerProfile> profiles) {
    if (profiles.empty()) {
        throw DomainError("simulation needs at least one link profile");
    }
    if (scheme == Scheme::SC && profiles.size() != 1) {
        throw ValidationError("m_nodes", "single connectivity uses exactly one node");
    }
    for (const auto& p : profiles) {
        p.validate();
    }
}

} // namespace

void Numerology::validate() const {
    if (!(scs_khz > 0.0)) {
        throw ValidationError("numerology.scs_khz", "must be positive");
    }
    if (symbols_per_tti < 1) {
        throw ValidationError("numerology.symbols_per_tti", "must be positive");
    }
    if (harq_rtt_ttis < 1) {
        throw ValidationError("numerology.harq_rtt_ttis", "must be positive");
    }
    if (timeout_ttis < 1) {
        throw ValidationError("numerology.timeout_ttis", "must be positive");
    }
    if (!(t_up_ttis >= 0.0)) {
        throw ValidationError("numerology.t_up_ttis", "must be nonnegative");
    }
    if (!(t_tx_ttis > 0.0)) {
        throw ValidationError("numerology.t_tx_ttis", "must be positive");
    }
    if (!(t_bp_initial_ttis >= 0.0)) {
        throw ValidationError("numerology.t_bp_initial_ttis", "must be nonnegative");
    }
}

double tti_duration_ms(const Numerology& numerology) {
    numerology.validate();
    return numerology.symbols_per_tti * 15.0 / (numerology.scs_khz * 14.0);
}

LatencyBudget latency_budget_check(const Numerology& numerology, double budget_ms) {
    numerology.validate();
    if (!(budget_ms > 0.0)) {
        throw DomainError("latency_budget_check: budget must be positive");
    }
    const double worst_ttis = 1.0 + numerology.harq_rtt_ttis + numerology.t_tx_ttis +
                              numerology.t_up_ttis + numerology.t_bp_initial_ttis;
    // Multiply before dividing so integral cases (7 * 4 * 15 / 420) come out exact.
    const double worst_ms =
        worst_ttis * numerology.symbols_per_tti * 15.0 / (numerology.scs_khz * 14.0);
    return {worst_ms, worst_ms <= budget_ms};
}

TrialRng::TrialRng(std::uint64_t seed, std::uint64_t trial)
    : state_(mix64(seed + kGolden) ^ mix64(trial * kGolden + 0xD1B54A32D192ED03ULL)) {}

std::uint64_t TrialRng::next() noexcept {
    state_ += kGolden;
    return mix64(state_);
}

double TrialRng::uniform() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

TrialOutcome simulate_sc_trial(const LinkBlerProfile& profile, const Numerology& numerology,
                               TrialRng& rng) {
    const LinkBlerProfile single[] = {profile};
    return simulate_mc_trial(single, numerology, rng, true);
}

TrialOutcome simulate_mc_trial(std::span<const LinkBlerProfile> profiles,
                               const Numerology& numerology, TrialRng& rng,
                               bool shared_frame_alignment) {
    if (profiles.empty()) {
        throw DomainError("simulate_mc_trial: at least one link profile is required");
    }
    return run_trial(profiles, numerology, rng, shared_frame_alignment, [](std::size_t, PathOutcome) {});
}

SimulationTally run_trials(Scheme scheme, std::span<const LinkBlerProfile> profiles,
                           const Numerology& numerology, std::uint64_t trials, std::uint64_t seed,
                           const SimulationOptions& options) {
    if (trials < 1) {
        throw ValidationError("trials", "must be at least 1");
    }
    require_profiles(scheme, profiles);
    numerology.validate();

    const std::size_t m = profiles.size();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> latency_slots;
    if (options.collect_latencies) {
        latency_slots.assign(trials, nan);
    }

    auto fresh = [m] {
        SimulationTally t;
        t.usage_histogram.assign(m + 1, 0);
        t.node_paths.assign(m, {0, 0, 0, 0});
        return t;
    };

    auto worker = [&](std::uint64_t begin, std::uint64_t end, SimulationTally& tally) {
        for (std::uint64_t trial = begin; trial < end; ++trial) {
            TrialRng rng(seed, trial);
            const TrialOutcome outcome =
                run_trial(profiles, numerology, rng, options.shared_frame_alignment,
                          [&](std::size_t n, PathOutcome path) {
                              ++tally.node_paths[n][static_cast<std::size_t>(path)];
                          });
            const auto used = static_cast<std::uint64_t>(outcome.channel_use_multiples);
            ++tally.trials;
            tally.usage_sum += used;
            tally.usage_sq_sum += used * used;
            ++tally.usage_histogram[used - m];
            if (outcome.success) {
                ++tally.successes;
                if (options.collect_latencies) {
                    latency_slots[trial] = outcome.latency_ttis;
                }
            }
        }
    };

    const unsigned threads =
        static_cast<unsigned>(std::clamp<std::uint64_t>(options.threads, 1, trials));
    std::vector<SimulationTally> partial(threads, fresh());
    if (threads == 1) {
        worker(0, trials, partial[0]);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) {
            const std::uint64_t begin = trials * t / threads;
            const std::uint64_t end = trials * (t + 1) / threads;
            pool.emplace_back(worker, begin, end, std::ref(partial[t]));
        }
        for (auto& th : pool) {
            th.join();
        }
    }

    SimulationTally total = fresh();
    for (const auto& part : partial) {
        total.trials += part.trials;
        total.successes += part.successes;
        total.usage_sum += part.usage_sum;
        total.usage_sq_sum += part.usage_sq_sum;
        for (std::size_t k = 0; k <= m; ++k) {
            total.usage_histogram[k] += part.usage_histogram[k];
        }
        for (std::size_t n = 0; n < m; ++n) {
            for (std::size_t leaf = 0; leaf < 4; ++leaf) {
                total.node_paths[n][leaf] += part.node_paths[n][leaf];
            }
        }
    }
    if (options.collect_latencies) {
        total.latencies_ttis.reserve(total.successes);
        for (double v : latency_slots) {
            if (!std::isnan(v)) {
                total.latencies_ttis.push_back(v);
            }
        }
    }
    return total;
}

MonteCarloEstimate summarize(const SimulationTally& tally, const Metric& metric,
                             const Numerology& numerology, std::uint64_t seed) {
    if (tally.trials == 0) {
        throw ValidationError("trials", "must be at least 1");
    }
    MonteCarloEstimate est;
    est.trials = tally.trials;
    est.seed = seed;
    const double n = static_cast<double>(tally.trials);

    switch (metric.kind) {
    case MetricKind::Outage: {
        est.mean = static_cast<double>(tally.trials - tally.successes) / n;
        est.ci_half_width_95 = 1.96 * std::sqrt(est.mean * (1.0 - est.mean) / n);
        break;
    }
    case MetricKind::MeanUsage: {
        est.mean = static_cast<double>(tally.usage_sum) / n;
        const double second = static_cast<double>(tally.usage_sq_sum) / n;
        const double var = std::max(0.0, second - est.mean * est.mean);
        est.ci_half_width_95 = 1.96 * std::sqrt(var / n);
        break;
    }
    case MetricKind::LatencyQuantile: {
        const double q = metric.quantile;
        if (!(q >= 0.0 && q <= 1.0)) {
            throw DomainError("latency quantile must lie in [0, 1]");
        }
        if (tally.latencies_ttis.empty()) {
            throw DomainError("latency quantile needs at least one delivered packet "
                              "with latency collection enabled");
        }
        std::vector<double> sorted = tally.latencies_ttis;
        std::sort(sorted.begin(), sorted.end());
        const double count = static_cast<double>(sorted.size());
        auto at_rank = [&](double rank) {
            const double idx = std::clamp(std::ceil(rank) - 1.0, 0.0, count - 1.0);
            return sorted[static_cast<std::size_t>(idx)];
        };
        const double tti = tti_duration_ms(numerology);
        est.mean = at_rank(q * count) * tti;
        const double spread = 1.96 * std::sqrt(count * q * (1.0 - q));
        const double lo = at_rank(q * count - spread) * tti;
        const double hi = at_rank(q * count + spread) * tti;
        est.ci_half_width_95 = 0.5 * (hi - lo);
        break;
    }
    }
    return est;
}

MonteCarloEstimate estimate(const Metric& metric, Scheme scheme, std::uint64_t trials,
                            std::uint64_t seed, const Numerology& numerology,
                            std::span<const LinkBlerProfile> profiles,
                            const SimulationOptions& options) {
    SimulationOptions local = options;
    local.collect_latencies = metric.kind == MetricKind::LatencyQuantile;
    const SimulationTally tally = run_trials(scheme, profiles, numerology, trials, seed, local);
    return summarize(tally, metric, numerology, seed);
}

} // namespace urllc
