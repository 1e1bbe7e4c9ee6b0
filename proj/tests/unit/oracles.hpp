#pragma once

// Reference computations used only by the tests. None of these share code
// with the library paths they check.

#include <cmath>
#include <cstdint>
#include <vector>

#include "urllc/outage_model.hpp"

namespace oracle {

/// Gaussian tail in long double, without erfc: Marsaglia's Taylor series
/// below x = 3, the Laplace continued fraction for the Mills ratio above.
inline long double q_tail(long double x) {
    if (x < 0) {
        return 1.0L - q_tail(-x);
    }
    const long double pdf = std::exp(-0.5L * x * x) / std::sqrt(2.0L * 3.14159265358979323846264338327950288L);
    if (x < 3.0L) {
        long double term = x;
        long double sum = x;
        for (int n = 1; n < 500; ++n) {
            term *= x * x / static_cast<long double>(2 * n + 1);
            sum += term;
            if (term < 1e-22L * sum) {
                break;
            }
        }
        return 0.5L - pdf * sum;
    }
    // Evaluate x + 1/(x + 2/(x + 3/(x + ...))) from the tail up.
    long double frac = x;
    for (int k = 400; k >= 1; --k) {
        frac = x + static_cast<long double>(k) / frac;
    }
    return pdf / frac;
}

/// Quantile by bisection on q_tail.
inline long double q_tail_inverse(long double p) {
    long double lo = -40.0L;
    long double hi = 40.0L;
    for (int i = 0; i < 200; ++i) {
        const long double mid = 0.5L * (lo + hi);
        if (q_tail(mid) > p) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5L * (lo + hi);
}

/// Channel uses from the textbook closed form
/// L/C + q^2 V / (2 C^2) * [1 + sqrt(1 + 4 L C / (q^2 V))].
inline long double channel_use_closed_form(std::uint32_t payload_bits, long double sinr, long double p) {
    const long double ln2 = std::log(2.0L);
    const long double c = std::log(1.0L + sinr) / ln2;
    const long double v = (1.0L - 1.0L / ((1.0L + sinr) * (1.0L + sinr))) / (ln2 * ln2);
    const long double q = q_tail_inverse(p);
    const long double l = payload_bits;
    return l / c + q * q * v / (2.0L * c * c) * (1.0L + std::sqrt(1.0L + 4.0L * l * c / (q * q * v)));
}

/// Success probability by walking every leaf of the per-link HARQ event tree.
inline long double tree_success(const urllc::LinkBlerProfile& p) {
    const long double cond_combined_fail = p.p_d1 > 0 ? static_cast<long double>(p.p_c) / p.p_d1 : 0.0L;
    long double success = 0.0L;
    for (int m1 = 0; m1 < 2; ++m1) {
        for (int d1 = 0; d1 < 2; ++d1) {
            for (int m2 = 0; m2 < 2; ++m2) {
                for (int d2 = 0; d2 < 2; ++d2) {
                    for (int cf = 0; cf < 2; ++cf) {
                        // 1 marks a failure event.
                        long double w = 1.0L;
                        w *= m1 ? p.p_m1 : 1.0L - p.p_m1;
                        w *= d1 ? p.p_d1 : 1.0L - p.p_d1;
                        w *= m2 ? p.p_m2 : 1.0L - p.p_m2;
                        w *= d2 ? p.p_d2 : 1.0L - p.p_d2;
                        w *= cf ? cond_combined_fail : 1.0L - cond_combined_fail;
                        bool ok = false;
                        if (!m1 && !d1) {
                            ok = true;              // first attempt
                        } else if (m1) {
                            ok = !m2 && !d2;        // timeout, fresh decode
                        } else {
                            ok = !m2 && !cf;        // NACK, combined decode
                        }
                        if (ok) {
                            success += w;
                        }
                    }
                }
            }
        }
    }
    return success;
}

inline long double tree_outage(const urllc::LinkBlerProfile& p) {
    return 1.0L - tree_success(p);
}

/// Binomial pmf by direct enumeration of all 2^m first-attempt outcomes.
inline std::vector<long double> failure_count_pmf(int m, long double p_succ) {
    std::vector<long double> pmf(static_cast<std::size_t>(m) + 1, 0.0L);
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        long double w = 1.0L;
        int failures = 0;
        for (int n = 0; n < m; ++n) {
            if (mask & (1u << n)) {
                w *= 1.0L - p_succ;
                ++failures;
            } else {
                w *= p_succ;
            }
        }
        pmf[static_cast<std::size_t>(failures)] += w;
    }
    return pmf;
}

} // namespace oracle
