#pragma once
/**
 * @file dimension.hpp
 * @brief Similarity dimension of the n-branch system: the root h of
 *        sum_{k=1..n} (1/(k(k+1)))^h = 1.
 */

#include "packdim/ifs.hpp"

namespace packdim {

struct DimensionResult {
    double h = 0.0;
    double residual = 0.0;  ///< moran_residual at the returned h
    int iterations = 0;
    double tolerance = 0.0;
};

/// sum_k ratio_k^h - 1, compensated. Strictly decreasing in h; for n >= 2 it
/// is n - 1 at h = 0 and -1/(n+1) at h = 1, so the root lies in (0, 1).
double moran_residual(const IfsSystem&, double h);

/// Safeguarded Newton iteration on the Moran residual, bracketed in [0, 1].
/// Stops once |residual| <= tol. n = 1 returns h = 0 exactly. hint inside
/// (0, 1) seeds the iteration, which helps sweeps over consecutive n.
DimensionResult solve_dimension(const IfsSystem&, double tol = 1e-14, double hint = -1.0);

}  // namespace packdim
