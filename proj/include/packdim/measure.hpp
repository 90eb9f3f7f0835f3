#pragma once
/**
 * @file measure.hpp
 * @brief Enclosures for the self-conformal measure of the n-branch system.
 *
 * The measure m gives each cylinder the product of branch weights
 * (1/(k(k+1)))^h along its word. Intervals are resolved by walking the
 * cylinder tree; branch intervals fully covered are credited from cached
 * prefix sums, and at most two partial chains survive per level. Mass still
 * straddling interval endpoints at the recursion cutoff is reported as
 * unresolved and widens the enclosure. Every result satisfies
 * lower <= m(A) <= upper with a small outward slack on both ends.
 */

#include <vector>

#include "packdim/ifs.hpp"

namespace packdim {

inline constexpr int kDefaultMaxDepth = 64;
inline constexpr double kDefaultMeasureTol = 1e-11;

struct MeasureBound {
    double lower = 0.0;
    double upper = 0.0;
    int depth_used = 0;       ///< deepest recursion level visited
    double unresolved = 0.0;  ///< mass parked at the cutoff
};

struct DensityRecord {
    Interval interval;
    double h = 0.0;
    MeasureBound mass;
    double density_lower = 0.0;
    double density_upper = 0.0;
};

class MeasureEvaluator {
  public:
    /// Requires |moran_residual(system, h)| <= 1e-10 and h in (0, 1]. The
    /// single-branch system is the point mass at 2/3 and also accepts h = 0.
    MeasureEvaluator(const IfsSystem& system, double h);

    /// Mass enclosure of the interval clipped to [0, 1].
    MeasureBound measure(Interval a, int max_depth = kDefaultMaxDepth,
                         double tol = kDefaultMeasureTol) const;

    /// Mass and density enclosures; the interval must have positive length.
    DensityRecord density(Interval a, int max_depth = kDefaultMaxDepth,
                          double tol = kDefaultMeasureTol) const;

    /// Density upper bound for [lo, hi] with lo < hi, or +infinity as an
    /// escape once the accumulated mass already proves the density exceeds
    /// abort_above. Finite returns equal density(...).density_upper.
    double density_upper_pruned(double lo, double hi, double abort_above,
                                int max_depth = kDefaultMaxDepth,
                                double tol = kDefaultMeasureTol) const;

    int n() const { return n_; }
    double h() const { return h_; }
    double residual() const { return residual_; }
    /// Outward widening applied to each enclosure end.
    double slack() const { return slack_; }
    /// Cached branch weight (1/(k(k+1)))^h.
    double branch_weight(int k) const { return w_[static_cast<std::size_t>(k)]; }

  private:
    struct State;
    void eval(double a, double b, double wgt, int depth, State& st) const;
    void descend(int k, double aa, double bb, double wgt, int depth, State& st) const;
    int locate(double x) const;

    int n_ = 0;
    double h_ = 0.0;
    double base_left_ = 0.0;
    double residual_ = 0.0;
    double slack_ = 0.0;
    double collapse_mass_ = 0.0;
    std::vector<double> w_;       ///< w_[k], 1-based
    std::vector<double> prefix_;  ///< prefix_[k] = w_1 + .. + w_k
};

/// One-shot wrappers constructing an evaluator per call.
MeasureBound measure_interval(const IfsSystem&, double h, Interval,
                              int max_depth = kDefaultMaxDepth,
                              double tol = kDefaultMeasureTol);
DensityRecord density(const IfsSystem&, double h, Interval,
                      int max_depth = kDefaultMaxDepth,
                      double tol = kDefaultMeasureTol);

}  // namespace packdim
