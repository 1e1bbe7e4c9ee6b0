#include "urllc/fbl_math.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "urllc/error.hpp"

namespace urllc {

namespace {

constexpr double kLn2 = std::numbers::ln2;

// Lower-tail standard normal quantile, Acklam's rational approximation
// (relative error below 1.2e-9 before refinement). Valid for 0 < p <= 0.5.
double normal_quantile_lower(double p) {
    static constexpr std::array<double, 6> a = {-3.969683028665376e+01, 2.209460984245205e+02,
                                                -2.759285104469687e+02, 1.383577518672690e+02,
                                                -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr std::array<double, 5> b = {-5.447609879822406e+01, 1.615858368580409e+02,
                                                -1.556989798598866e+02, 6.680131188771972e+01,
                                                -1.328068155288572e+01};
    static constexpr std::array<double, 6> c = {-7.784894002430293e-03, -3.223964580411365e-01,
                                                -2.400758277161838e+00, -2.549732539343734e+00,
                                                4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr std::array<double, 4> d = {7.784695709041462e-03, 3.224671290700398e-01,
                                                2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

void require_positive_sinr(double sinr_linear, const char* what) {
    if (!(sinr_linear > 0.0) || !std::isfinite(sinr_linear)) {
        throw DomainError(std::string(what) + ": SINR must be positive and finite, got " +
                          std::to_string(sinr_linear));
    }
}

} // namespace

double q_func(double x) {
    if (!std::isfinite(x)) {
        throw DomainError("q_func: argument must be finite");
    }
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double q_inv(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError("q_inv: probability must lie in (0, 1), got " + std::to_string(p));
    }
    if (p > 0.5) {
        // 1 - p is exact here (Sterbenz), so the symmetry costs no accuracy.
        return -q_inv(1.0 - p);
    }
    if (p == 0.5) {
        return 0.0;
    }
    double x = -normal_quantile_lower(p);
    // One Newton step against the erfc-based tail brings the error to ~1 ulp.
    x += (q_func(x) - p) / normal_pdf(x);
    return x;
}

double shannon_capacity(double sinr_linear) {
    require_positive_sinr(sinr_linear, "shannon_capacity");
    return std::log2(1.0 + sinr_linear);
}

double channel_dispersion(double sinr_linear) {
    require_positive_sinr(sinr_linear, "channel_dispersion");
    const double inv = 1.0 / (1.0 + sinr_linear);
    // 1 - inv^2 written as (1-inv)(1+inv) keeps precision at small SINR.
    const double one_minus = sinr_linear * inv;
    return one_minus * (1.0 + inv) / (kLn2 * kLn2);
}

double db_to_linear(double x_db) {
    if (!std::isfinite(x_db)) {
        throw DomainError("db_to_linear: argument must be finite");
    }
    return std::pow(10.0, x_db / 10.0);
}

double linear_to_db(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw DomainError("linear_to_db: argument must be positive and finite, got " +
                          std::to_string(x));
    }
    return 10.0 * std::log10(x);
}

FblContext::FblContext(std::uint32_t payload_bits, double sinr_linear)
    : payload_bits_(payload_bits), sinr_linear_(sinr_linear) {
    if (payload_bits == 0) {
        throw DomainError("FblContext: payload_bits must be at least 1");
    }
    capacity_ = shannon_capacity(sinr_linear);
    dispersion_ = channel_dispersion(sinr_linear);
}

double channel_use(const FblContext& ctx, double bler) {
    if (!(bler > 0.0 && bler < 0.5)) {
        throw DomainError("channel_use: BLER must lie in (0, 0.5), got " + std::to_string(bler));
    }
    const double q = q_inv(bler);
    const double c = ctx.capacity();
    const double l = static_cast<double>(ctx.payload_bits());
    // sqrt(R) is the positive root of C*x^2 - q*sqrt(V)*x - L = 0. Squaring it
    // gives the usual closed form L/C + q^2 V/(2C^2) [1 + sqrt(1 + 4LC/(q^2 V))]
    // without the cancellation that form suffers as q -> 0.
    const double b = q * std::sqrt(ctx.dispersion());
    const double root = (b + std::sqrt(b * b + 4.0 * c * l)) / (2.0 * c);
    return root * root;
}

double achieved_bler(const FblContext& ctx, double channel_uses) {
    if (!(channel_uses > 0.0) || !std::isfinite(channel_uses)) {
        throw DomainError("achieved_bler: channel_uses must be positive and finite");
    }
    const double l = static_cast<double>(ctx.payload_bits());
    const double margin = channel_uses * ctx.capacity() - l;
    return q_func(margin / std::sqrt(channel_uses * ctx.dispersion()));
}

} // namespace urllc
