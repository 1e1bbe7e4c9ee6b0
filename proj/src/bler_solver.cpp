#include "urllc/bler_solver.hpp"

#include <cmath>
#include <string>

#include "urllc/error.hpp"

namespace urllc {

namespace {

void require_node_count(Scheme scheme, int m, std::size_t contexts) {
    if (m < 1) {
        throw ValidationError("m_nodes", "must be at least 1");
    }
    if (scheme == Scheme::SC && m != 1) {
        throw ValidationError("m_nodes", "single connectivity uses exactly one node");
    }
    if (contexts > 1 && contexts != static_cast<std::size_t>(m)) {
        throw ValidationError("sinr_db_per_node", "expected 1 or " + std::to_string(m) +
                                                      " entries, got " + std::to_string(contexts));
    }
}

} // namespace

void BlerPolicy::validate() const {
    if (kind == PolicyKind::FixedMeta) {
        if (!fixed_meta || !(*fixed_meta > 0.0 && *fixed_meta < 1.0)) {
            throw ValidationError("policy.fixed_meta", "FIXED_META needs a value in (0, 1)");
        }
    }
}

double BlerPolicy::metadata_bler(double p_d) const {
    switch (kind) {
    case PolicyKind::Equal: return p_d;
    case PolicyKind::Half: return 0.5 * p_d;
    case PolicyKind::FixedMeta:
        validate();
        return *fixed_meta;
    }
    return p_d;
}

const char* to_string(PolicyKind kind) {
    switch (kind) {
    case PolicyKind::Equal: return "EQUAL";
    case PolicyKind::Half: return "HALF";
    case PolicyKind::FixedMeta: return "FIXED_META";
    }
    return "?";
}

LinkBlerProfile build_profile(double p_d, const BlerPolicy& policy, const ChaseCombiningSpec& chase,
                              const std::optional<FblContext>& ctx) {
    if (!(p_d > 0.0 && p_d < 1.0)) {
        throw DomainError("build_profile: p_d must lie in (0, 1), got " + std::to_string(p_d));
    }
    policy.validate();

    double p_c = 0.0;
    if (chase.model == ChaseModel::FiniteBlocklength) {
        ChaseCombiningSpec local = chase;
        if (ctx) {
            local.context = ctx;
        }
        local.validate();
        p_c = chase_bler(local, p_d, channel_use(*local.context, p_d));
    } else {
        p_c = chase_bler(chase, p_d);
    }
    return LinkBlerProfile::symmetric(policy.metadata_bler(p_d), p_d, p_c);
}

std::vector<LinkBlerProfile> build_node_profiles(double p_d, Scheme scheme, int m,
                                                 const BlerPolicy& policy,
                                                 const ChaseCombiningSpec& chase,
                                                 std::span<const FblContext> node_contexts) {
    require_node_count(scheme, m, node_contexts.size());
    std::vector<LinkBlerProfile> profiles;
    profiles.reserve(static_cast<std::size_t>(m));
    for (int n = 0; n < m; ++n) {
        std::optional<FblContext> ctx;
        if (!node_contexts.empty()) {
            ctx = node_contexts[node_contexts.size() == 1 ? 0 : static_cast<std::size_t>(n)];
        }
        // Without FBL combining the profile does not depend on the SINR.
        if (chase.model != ChaseModel::FiniteBlocklength && n > 0) {
            profiles.push_back(profiles.front());
            continue;
        }
        profiles.push_back(build_profile(p_d, policy, chase, ctx));
    }
    return profiles;
}

double scheme_outage(double p_d, Scheme scheme, int m, const BlerPolicy& policy,
                     const ChaseCombiningSpec& chase, std::span<const FblContext> node_contexts) {
    const auto profiles = build_node_profiles(p_d, scheme, m, policy, chase, node_contexts);
    return mc_outage(profiles);
}

SolveResult solve_bler(Scheme scheme, int m, double target, const BlerPolicy& policy,
                       const ChaseCombiningSpec& chase, std::span<const FblContext> node_contexts,
                       const SolverOptions& options) {
    if (!(target > 1e-12 && target < 0.25)) {
        throw DomainError("solve_bler: target outage must lie in (1e-12, 0.25), got " +
                          std::to_string(target));
    }
    if (!(options.lower > 0.0 && options.lower < options.upper && options.upper < 1.0)) {
        throw ValidationError("bracket", "need 0 < lower < upper < 1");
    }
    require_node_count(scheme, m, node_contexts.size());
    policy.validate();

    auto outage_at = [&](double log_p) {
        return scheme_outage(std::pow(10.0, log_p), scheme, m, policy, chase, node_contexts);
    };

    double lo = std::log10(options.lower);
    double hi = std::log10(options.upper);
    const double f_lo = outage_at(lo);
    const double f_hi = outage_at(hi);
    if (f_lo > f_hi) {
        throw SolverError(SolverFailure::NonMonotone,
                          "outage decreases across the BLER bracket");
    }
    if (target < f_lo || target > f_hi) {
        throw SolverError(SolverFailure::NoBracket,
                          "target " + std::to_string(target) + " outside reachable outage range [" +
                              std::to_string(f_lo) + ", " + std::to_string(f_hi) + "]");
    }

    SolveResult result;
    double mid = lo;
    double f_mid = f_lo;
    for (int it = 1; it <= options.max_iterations; ++it) {
        mid = 0.5 * (lo + hi);
        f_mid = outage_at(mid);
        result.iterations = it;
        if (f_mid < f_lo || f_mid > f_hi) {
            throw SolverError(SolverFailure::NonMonotone,
                              "outage left the bracket range at p_d = " +
                                  std::to_string(std::pow(10.0, mid)));
        }
        if (f_mid == target) {
            break;
        }
        if (f_mid < target) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo <= 1e-15 * std::max(1.0, std::abs(mid))) {
            break;
        }
    }

    if (std::abs(f_mid - target) > options.rel_tol * target) {
        throw SolverError(SolverFailure::NoBracket,
                          "bisection ended at outage " + std::to_string(f_mid) +
                              ", outside tolerance of target " + std::to_string(target));
    }
    result.p_d = std::pow(10.0, mid);
    result.p_m = policy.metadata_bler(result.p_d);
    result.achieved_outage = f_mid;
    return result;
}

} // namespace urllc
