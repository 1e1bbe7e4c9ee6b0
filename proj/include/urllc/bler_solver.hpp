#pragma once

// Inverts the outage model: finds the per-transmission data BLER that meets
// an end-to-end outage target, with the metadata BLER tied to it by a policy.

#include <optional>
#include <span>
#include <vector>

#include "urllc/fbl_math.hpp"
#include "urllc/outage_model.hpp"

namespace urllc {

enum class PolicyKind { Equal, Half, FixedMeta };

/// How the metadata BLER follows the data BLER.
struct BlerPolicy {
    PolicyKind kind = PolicyKind::Equal;
    std::optional<double> fixed_meta;

    static BlerPolicy equal() { return {PolicyKind::Equal, std::nullopt}; }
    static BlerPolicy half() { return {PolicyKind::Half, std::nullopt}; }
    static BlerPolicy fixed(double p_m) { return {PolicyKind::FixedMeta, p_m}; }

    void validate() const;
    double metadata_bler(double p_d) const;
};

const char* to_string(PolicyKind kind);

struct SolveResult {
    double p_d = 0.0;
    double p_m = 0.0;
    double achieved_outage = 0.0;
    int iterations = 0;
};

struct SolverOptions {
    double lower = 1e-9;
    double upper = 0.4999;
    /// Acceptance band on the achieved outage, relative to the target.
    double rel_tol = 1e-3;
    int max_iterations = 200;
};

/// Profile with identical BLERs on both transmissions. For the
/// finite-blocklength combining model, `ctx` (or else the context stored in `chase`)
/// supplies the channel uses at `p_d` from which `p_c` is evaluated.
LinkBlerProfile build_profile(double p_d, const BlerPolicy& policy, const ChaseCombiningSpec& chase,
                              const std::optional<FblContext>& ctx = std::nullopt);

/// One profile per node. `node_contexts` may be empty, hold a single context
/// (shared by every node) or hold exactly `m` contexts.
std::vector<LinkBlerProfile> build_node_profiles(double p_d, Scheme scheme, int m,
                                                 const BlerPolicy& policy,
                                                 const ChaseCombiningSpec& chase,
                                                 std::span<const FblContext> node_contexts = {});

/// End-to-end outage of the scheme when every link runs at data BLER `p_d`.
double scheme_outage(double p_d, Scheme scheme, int m, const BlerPolicy& policy,
                     const ChaseCombiningSpec& chase,
                     std::span<const FblContext> node_contexts = {});

/// Bisection on log10(p_d) over [options.lower, options.upper]. Runs to
/// floating-point convergence so the answer does not depend on the bracket,
/// then checks the achieved outage against `options.rel_tol`.
/// Throws SolverError(NoBracket) if the target lies outside the outage range
/// of the bracket and SolverError(NonMonotone) if the outage is seen to
/// decrease with p_d.
SolveResult solve_bler(Scheme scheme, int m, double target, const BlerPolicy& policy,
                       const ChaseCombiningSpec& chase,
                       std::span<const FblContext> node_contexts = {},
                       const SolverOptions& options = {});

} // namespace urllc
