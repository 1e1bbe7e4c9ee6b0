#include "urllc/resource_model.hpp"

#include <cmath>
#include <string>

#include "urllc/error.hpp"

namespace urllc {

namespace {

void require_usage_args(int m, double r, double p_succ_first) {
    if (m < 1) {
        throw DomainError("usage: m must be at least 1");
    }
    if (!(r > 0.0) || !std::isfinite(r)) {
        throw DomainError("usage: channel uses must be positive and finite");
    }
    if (!(p_succ_first >= 0.0 && p_succ_first <= 1.0)) {
        throw DomainError("usage: p_succ_first must lie in [0, 1]");
    }
}

} // namespace

double UsageDistribution::mean() const {
    double acc = 0.0;
    for (const auto& point : support) {
        acc += point.channel_uses * point.probability;
    }
    return acc;
}

void UsageDistribution::validate() const {
    if (support.empty()) {
        throw ValidationError("support", "empty distribution");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < support.size(); ++i) {
        if (!(support[i].probability >= 0.0 && support[i].probability <= 1.0)) {
            throw ValidationError("support", "probability out of range");
        }
        if (i > 0 && !(support[i].channel_uses > support[i - 1].channel_uses)) {
            throw ValidationError("support", "channel uses must be strictly increasing");
        }
        total += support[i].probability;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw ValidationError("support", "probabilities sum to " + std::to_string(total));
    }
}

double usage_sc(double r, double p_succ_first) {
    require_usage_args(1, r, p_succ_first);
    return (2.0 - p_succ_first) * r;
}

double usage_mc(int m, double r, double p_succ_first) {
    require_usage_args(m, r, p_succ_first);
    return static_cast<double>(m) * (2.0 - p_succ_first) * r;
}

UsageDistribution usage_distribution_mc(int m, double r, double p_succ_first) {
    require_usage_args(m, r, p_succ_first);
    const double fail = 1.0 - p_succ_first;
    UsageDistribution dist;
    dist.support.reserve(static_cast<std::size_t>(m) + 1);
    double binom = 1.0;
    for (int n = 0; n <= m; ++n) {
        if (n > 0) {
            binom = binom * static_cast<double>(m - n + 1) / static_cast<double>(n);
        }
        const double prob = binom * std::pow(p_succ_first, m - n) * std::pow(fail, n);
        dist.support.push_back({static_cast<double>(m + n) * r, prob});
    }
    return dist;
}

UsageReport usage_at_reliability(Scheme scheme, int m, double target_outage,
                                 std::span<const FblContext> node_contexts,
                                 const BlerPolicy& policy, const ChaseCombiningSpec& chase,
                                 std::optional<std::uint32_t> metadata_bits) {
    if (node_contexts.empty()) {
        throw ValidationError("sinr_db_per_node", "at least one link context is required");
    }
    const SolveResult solved = solve_bler(scheme, m, target_outage, policy, chase, node_contexts);
    const auto profiles =
        build_node_profiles(solved.p_d, scheme, m, policy, chase, node_contexts);

    UsageReport report;
    report.scheme = scheme;
    report.m_nodes = m;
    report.bler_target = solved.p_d;
    report.p_m = solved.p_m;
    report.achieved_outage = solved.achieved_outage;
    double sum_r = 0.0;
    for (int n = 0; n < m; ++n) {
        const auto& ctx = node_contexts[node_contexts.size() == 1 ? 0 : static_cast<std::size_t>(n)];
        const double r = channel_use(ctx, solved.p_d);
        report.per_node_channel_use.push_back(r);
        report.total_usage += usage_sc(r, succ_first(profiles[static_cast<std::size_t>(n)]));
        sum_r += r;
    }
    report.channel_use_single = sum_r / static_cast<double>(m);
    if (metadata_bits) {
        const FblContext meta(*metadata_bits, node_contexts.front().sinr_linear());
        report.metadata_channel_use = channel_use(meta, solved.p_m);
    }
    return report;
}

double normalized_usage(Scheme scheme, int m, const LinkBlerProfile& profile) {
    if (scheme == Scheme::SC && m != 1) {
        throw ValidationError("m_nodes", "single connectivity uses exactly one node");
    }
    return usage_mc(m, 1.0, succ_first(profile));
}

} // namespace urllc
