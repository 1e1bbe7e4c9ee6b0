#pragma once

// Monte Carlo reference for the closed-form outage and usage model. Each trial
// walks the HARQ event tree of every node (metadata/data decode, timeout or
// NACK retransmission, Chase combining) and records delivery, latency and
// the number of transmissions spent.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "urllc/outage_model.hpp"

namespace urllc {

/// Mini-slot timing. All durations are in TTIs.
struct Numerology {
    double scs_khz = 30.0;
    int symbols_per_tti = 4;
    int harq_rtt_ttis = 4;
    int timeout_ttis = 3;
    double t_up_ttis = 1.0;
    double t_tx_ttis = 1.0;
    double t_bp_initial_ttis = 0.0;

    void validate() const;
};

/// symbols_per_tti * (15 / scs_khz) / 14 ms; 4 symbols at 30 kHz is 1/7 ms.
double tti_duration_ms(const Numerology& numerology);

struct LatencyBudget {
    double worst_case_ms = 0.0;
    bool fits = false;
};

/// Worst case with one retransmission, frame alignment taken at its full TTI:
/// (1 + rtt + t_tx + t_up + t_bp_initial) TTIs.
LatencyBudget latency_budget_check(const Numerology& numerology, double budget_ms);

/// Leaf of the per-node HARQ event tree.
enum class PathOutcome { FirstTx = 0, TimeoutRetx = 1, NackRetx = 2, Outage = 3 };

struct TrialOutcome {
    bool success = false;
    bool used_retransmission = false;
    /// Meaningful only when `success`.
    double latency_ttis = 0.0;
    /// Transmissions spent, summed over nodes.
    int channel_use_multiples = 0;
    /// For a duplicated trial: the path of the node that delivered first.
    PathOutcome path = PathOutcome::Outage;
};

/// SplitMix64 stream keyed by (seed, trial index). Trials never share state,
/// so any partition of the trial range over threads yields the same draws.
class TrialRng {
public:
    TrialRng(std::uint64_t seed, std::uint64_t trial);

    std::uint64_t next() noexcept;
    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept;

private:
    std::uint64_t state_;
};

TrialOutcome simulate_sc_trial(const LinkBlerProfile& profile, const Numerology& numerology,
                               TrialRng& rng);

/// Independent trial per node; the packet is delivered if any node delivers
/// and the earliest delivery sets the latency. Every node finishes its own
/// retransmission even when another node already succeeded.
TrialOutcome simulate_mc_trial(std::span<const LinkBlerProfile> profiles,
                               const Numerology& numerology, TrialRng& rng,
                               bool shared_frame_alignment = true);

struct SimulationOptions {
    unsigned threads = 1;
    bool shared_frame_alignment = true;
    bool collect_latencies = true;
};

/// Integer counts accumulated over a batch of trials.
struct SimulationTally {
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    std::uint64_t usage_sum = 0;
    std::uint64_t usage_sq_sum = 0;
    /// Entry k counts trials that spent m + k transmissions.
    std::vector<std::uint64_t> usage_histogram;
    /// Per node, counts of each PathOutcome.
    std::vector<std::array<std::uint64_t, 4>> node_paths;
    /// Latencies of delivered packets in trial order, in TTIs.
    std::vector<double> latencies_ttis;
};

SimulationTally run_trials(Scheme scheme, std::span<const LinkBlerProfile> profiles,
                           const Numerology& numerology, std::uint64_t trials, std::uint64_t seed,
                           const SimulationOptions& options = {});

enum class MetricKind { Outage, MeanUsage, LatencyQuantile };

struct Metric {
    MetricKind kind = MetricKind::Outage;
    double quantile = 0.5;

    static Metric outage() { return {MetricKind::Outage, 0.0}; }
    static Metric mean_usage() { return {MetricKind::MeanUsage, 0.0}; }
    static Metric latency_quantile(double q) { return {MetricKind::LatencyQuantile, q}; }
};

struct MonteCarloEstimate {
    double mean = 0.0;
    double ci_half_width_95 = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
};

/// Outage: delivery-failure fraction with a normal-approximation binomial
/// interval. MeanUsage: transmissions per packet (multiples of one
/// transmission). LatencyQuantile: nearest-rank quantile of delivered-packet
/// latency in ms, interval from order-statistic ranks.
MonteCarloEstimate summarize(const SimulationTally& tally, const Metric& metric,
                             const Numerology& numerology, std::uint64_t seed);

MonteCarloEstimate estimate(const Metric& metric, Scheme scheme, std::uint64_t trials,
                            std::uint64_t seed, const Numerology& numerology,
                            std::span<const LinkBlerProfile> profiles,
                            const SimulationOptions& options = {});

} // namespace urllc
