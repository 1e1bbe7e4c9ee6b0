#include "urllc/outage_model.hpp"

#include <cmath>
#include <string>

#include "urllc/error.hpp"

namespace urllc {

namespace {

void require_probability(double p, const char* field) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ValidationError(field, "must lie in [0, 1], got " + std::to_string(p));
    }
}

} // namespace

void LinkBlerProfile::validate() const {
    require_probability(p_m1, "p_m1");
    require_probability(p_d1, "p_d1");
    require_probability(p_m2, "p_m2");
    require_probability(p_d2, "p_d2");
    require_probability(p_c, "p_c");
    // Combining can only help, so p_c may not exceed either single-shot BLER.
    if (p_c > p_d1) {
        throw ValidationError("p_c", "combined error " + std::to_string(p_c) +
                                         " exceeds first-transmission data BLER " +
                                         std::to_string(p_d1));
    }
    if (p_c > p_d2) {
        throw ValidationError("p_c", "combined error " + std::to_string(p_c) +
                                         " exceeds retransmission data BLER " +
                                         std::to_string(p_d2));
    }
}

void ChaseCombiningSpec::validate() const {
    if (model == ChaseModel::FiniteBlocklength && !context) {
        throw ValidationError("chase", "finite-blocklength combining needs a payload/SINR context");
    }
}

double succ_first(const LinkBlerProfile& profile) {
    profile.validate();
    return (1.0 - profile.p_m1) * (1.0 - profile.p_d1);
}

double succ_retx_timeout(const LinkBlerProfile& profile) {
    profile.validate();
    return profile.p_m1 * (1.0 - profile.p_m2) * (1.0 - profile.p_d2);
}

double succ_retx_nack(const LinkBlerProfile& profile) {
    profile.validate();
    return (1.0 - profile.p_m1) * (1.0 - profile.p_m2) * (profile.p_d1 - profile.p_c);
}

double succ_retx_total(const LinkBlerProfile& profile) {
    const double summed = succ_retx_timeout(profile) + succ_retx_nack(profile);
    const double factored = (1.0 - profile.p_m2) * (profile.p_m1 * (1.0 - profile.p_d2) +
                                                    (1.0 - profile.p_m1) * (profile.p_d1 - profile.p_c));
    // Both forms are sums of at most three products of numbers in [0, 1].
    if (std::abs(summed - factored) > 1e-15) {
        throw DomainError("succ_retx_total: summed and factored forms disagree");
    }
    return factored;
}

OutageBreakdown sc_outage(const LinkBlerProfile& profile) {
    OutageBreakdown out;
    out.p_succ_first = succ_first(profile);
    out.p_succ_timeout_retx = succ_retx_timeout(profile);
    out.p_succ_nack_retx = succ_retx_nack(profile);
    out.p_out = 1.0 - out.p_succ_first - succ_retx_total(profile);
    // Cancellation can leave a tiny negative residue when everything succeeds.
    if (out.p_out < 0.0) {
        out.p_out = 0.0;
    }
    return out;
}

double mc_outage(std::span<const LinkBlerProfile> profiles) {
    if (profiles.empty()) {
        throw DomainError("mc_outage: at least one link is required");
    }
    double product = 1.0;
    for (const auto& profile : profiles) {
        product *= sc_outage(profile).p_out;
    }
    return product;
}

double chase_bler(const ChaseCombiningSpec& spec, double p_d1, std::optional<double> channel_uses,
                  std::optional<double> p_d2) {
    spec.validate();
    if (!(p_d1 >= 0.0 && p_d1 <= 1.0)) {
        throw DomainError("chase_bler: p_d1 must lie in [0, 1]");
    }
    switch (spec.model) {
    case ChaseModel::Zero:
        return 0.0;
    case ChaseModel::Product:
        return p_d1 * p_d2.value_or(p_d1);
    case ChaseModel::FiniteBlocklength: {
        if (!channel_uses) {
            throw ValidationError("chase", "finite-blocklength combining needs the channel uses");
        }
        const FblContext combined = spec.context->with_sinr(2.0 * spec.context->sinr_linear());
        return achieved_bler(combined, *channel_uses);
    }
    }
    return 0.0;
}

const char* to_string(ChaseModel model) {
    switch (model) {
    case ChaseModel::Zero: return "ZERO";
    case ChaseModel::Product: return "PRODUCT";
    case ChaseModel::FiniteBlocklength: return "FINITE_BLOCKLENGTH";
    }
    return "?";
}

const char* to_string(Scheme scheme) {
    return scheme == Scheme::SC ? "SC" : "MC";
}

} // namespace urllc
