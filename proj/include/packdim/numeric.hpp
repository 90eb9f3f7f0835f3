#pragma once
/**
 * @file numeric.hpp
 * @brief Small shared numeric helpers.
 */

namespace packdim {

/// Compensated accumulator; the error stays O(eps) regardless of term count.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) {
        double y = x - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

}  // namespace packdim
