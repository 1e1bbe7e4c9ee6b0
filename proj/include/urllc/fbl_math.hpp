#pragma once

// Normal-approximation finite-blocklength coding over AWGN, and the
// special functions it relies on.

#include <cstdint>

namespace urllc {

/// Gaussian tail probability Q(x) = P[N(0,1) > x].
double q_func(double x);

/// Inverse of q_func on (0, 1).
double q_inv(double p);

/// log2(1 + sinr), bits per channel use.
double shannon_capacity(double sinr_linear);

/// (1 - 1/(1+sinr)^2) / ln(2)^2, squared bits per channel use.
double channel_dispersion(double sinr_linear);

double db_to_linear(double x_db);
double linear_to_db(double x);

/// Payload size and SINR of one link, with the capacity and dispersion
/// derived from the SINR. Immutable once built.
class FblContext {
public:
    FblContext(std::uint32_t payload_bits, double sinr_linear);

    static FblContext from_db(std::uint32_t payload_bits, double sinr_db) {
        return FblContext(payload_bits, db_to_linear(sinr_db));
    }

    std::uint32_t payload_bits() const noexcept { return payload_bits_; }
    double sinr_linear() const noexcept { return sinr_linear_; }
    double capacity() const noexcept { return capacity_; }
    double dispersion() const noexcept { return dispersion_; }

    /// Same payload at a different SINR (e.g. after Chase combining).
    FblContext with_sinr(double sinr_linear) const { return FblContext(payload_bits_, sinr_linear); }

private:
    std::uint32_t payload_bits_;
    double sinr_linear_;
    double capacity_;
    double dispersion_;
};

/// Channel uses R needed to carry the payload at block error rate `bler`,
/// i.e. the positive root of L = R*C - Qinv(bler)*sqrt(R*V).
/// Requires 0 < bler < 0.5. Real-valued; no rounding to resource blocks.
double channel_use(const FblContext& ctx, double bler);

/// Block error rate reached with `channel_uses` channel uses:
/// Q((R*C - L) / sqrt(R*V)).
double achieved_bler(const FblContext& ctx, double channel_uses);

} // namespace urllc
