#pragma once

// Closed-form delivery/outage probabilities for one link with a single HARQ
// retransmission, and for PDCP duplication over several independent links.

#include <optional>
#include <span>

#include "urllc/fbl_math.hpp"

namespace urllc {

/// Error probabilities of one link. Index 1 is the first transmission,
/// index 2 the retransmission; `p_c` is the data error after Chase combining.
struct LinkBlerProfile {
    double p_m1 = 0.0;
    double p_d1 = 0.0;
    double p_m2 = 0.0;
    double p_d2 = 0.0;
    double p_c = 0.0;

    /// Same metadata/data BLER on both transmissions.
    static LinkBlerProfile symmetric(double p_m, double p_d, double p_c) {
        return LinkBlerProfile{p_m, p_d, p_m, p_d, p_c};
    }

    /// Throws ValidationError unless every field is in [0, 1] and
    /// p_c <= min(p_d1, p_d2).
    void validate() const;

    bool operator==(const LinkBlerProfile&) const = default;
};

/// Single connectivity or multi-connectivity with PDCP duplication.
enum class Scheme { SC, MC };

enum class ChaseModel { Zero, Product, FiniteBlocklength };

/// How the post-combining data error `p_c` is derived from the per-transmission
/// data BLER. FiniteBlocklength evaluates the coding bound at the combined
/// SINR (twice the per-transmission SINR) and needs a context for that.
struct ChaseCombiningSpec {
    ChaseModel model = ChaseModel::Zero;
    std::optional<FblContext> context;

    void validate() const;
};

struct OutageBreakdown {
    double p_succ_first = 0.0;
    double p_succ_timeout_retx = 0.0;
    double p_succ_nack_retx = 0.0;
    double p_out = 0.0;
};

/// (1 - p_m1)(1 - p_d1)
double succ_first(const LinkBlerProfile& profile);

/// Metadata lost on the first attempt, so no NACK is sent and the packet is
/// resent after the HARQ timeout without combining: p_m1 (1 - p_m2)(1 - p_d2).
double succ_retx_timeout(const LinkBlerProfile& profile);

/// NACKed retransmission decoded after Chase combining:
/// (1 - p_m1)(1 - p_m2)(p_d1 - p_c).
double succ_retx_nack(const LinkBlerProfile& profile);

/// Total retransmission success; evaluated in factored form and checked
/// against the sum of the timeout and NACK paths.
double succ_retx_total(const LinkBlerProfile& profile);

OutageBreakdown sc_outage(const LinkBlerProfile& profile);

/// Product of per-link outages. Throws DomainError on an empty list.
double mc_outage(std::span<const LinkBlerProfile> profiles);

/// Post-combining data error under the given model. `channel_uses` is required
/// by FiniteBlocklength; `p_d2` defaults to `p_d1` for the product model.
double chase_bler(const ChaseCombiningSpec& spec, double p_d1,
                  std::optional<double> channel_uses = std::nullopt,
                  std::optional<double> p_d2 = std::nullopt);

const char* to_string(ChaseModel model);
const char* to_string(Scheme scheme);

} // namespace urllc
