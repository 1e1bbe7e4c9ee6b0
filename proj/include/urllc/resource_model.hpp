#pragma once

// Expected radio-resource usage, in channel uses, of single and duplicated
// transmission when every failed first attempt is retransmitted once at full
// size.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "urllc/bler_solver.hpp"
#include "urllc/fbl_math.hpp"
#include "urllc/outage_model.hpp"

namespace urllc {

struct UsagePoint {
    double channel_uses = 0.0;
    double probability = 0.0;
};

/// Discrete law of the channel uses spent on one packet.
struct UsageDistribution {
    std::vector<UsagePoint> support;

    double mean() const;
    void validate() const;
};

struct UsageReport {
    Scheme scheme = Scheme::SC;
    int m_nodes = 1;
    double bler_target = 0.0;
    double p_m = 0.0;
    double achieved_outage = 0.0;
    /// Channel uses of one transmission; the per-node mean when SINRs differ.
    double channel_use_single = 0.0;
    double total_usage = 0.0;
    std::vector<double> per_node_channel_use;
    /// Channel uses of the separately coded metadata on the first node, when
    /// requested. Never folded into `total_usage`.
    std::optional<double> metadata_channel_use;
};

/// (2 - p_succ_first) r
double usage_sc(double r, double p_succ_first);

/// m (2 - p_succ_first) r: each node retransmits on its own failure,
/// regardless of whether another node already delivered the packet.
double usage_mc(int m, double r, double p_succ_first);

/// Support (m + n) r for n = 0..m failed first attempts, binomially weighted.
UsageDistribution usage_distribution_mc(int m, double r, double p_succ_first);

/// Solve the BLER that meets `target_outage`, size each transmission for it
/// and return the expected total usage. `node_contexts` holds one context
/// (shared by all nodes) or one per node.
UsageReport usage_at_reliability(Scheme scheme, int m, double target_outage,
                                 std::span<const FblContext> node_contexts,
                                 const BlerPolicy& policy, const ChaseCombiningSpec& chase,
                                 std::optional<std::uint32_t> metadata_bits = std::nullopt);

/// Usage in multiples of one transmission (r = 1).
double normalized_usage(Scheme scheme, int m, const LinkBlerProfile& profile);

} // namespace urllc
