#pragma once
/**
 * @file packing.hpp
 * @brief Two-sided estimation of the minimal ball density
 *        dmin = inf over centers c in the attractor and radii r in (0, |J|]
 *        of m([c-r, c+r]) / (2r)^h, and the induced enclosure of the packing
 *        measure of the attractor, P = 1/dmin.
 *
 * The upper side samples candidate centers read off the cylinder structure
 * and a radius grid per center; every sampled pair gives a certified density
 * upper bound, so the running minimum upper-bounds dmin. The lower side runs
 * branch and bound over (center, radius) boxes; balls may be restricted to
 * grid-touching ones because any other ball expands under the branch inverse
 * chain, density preserved, until it touches a grid point 1/j.
 */

#include <cstdint>
#include <limits>
#include <vector>

#include "packdim/ifs.hpp"
#include "packdim/measure.hpp"

namespace packdim {

struct SearchOptions {
    int generation = 3;        ///< cylinder depth for candidate centers
    int radii_per_center = 32; ///< geometric radius grid size per center
    int max_depth = kDefaultMaxDepth;
    double tol = kDefaultMeasureTol;
    std::uint64_t enumeration_cap = kDefaultEnumerationCap;
    std::uint64_t certify_budget = 0;  ///< branch-and-bound box budget; 0 skips
    int threads = 0;  ///< 0 reads PACKDIM_THREADS, else 1
    int n_stride = 1;          ///< sweep step between successive n
    bool n_geometric = false;  ///< sweep multiplies n by n_stride instead
};

struct Witness {
    double center = 0.0;
    double radius = 0.0;
    double density_upper = std::numeric_limits<double>::infinity();
};

struct DminSample {
    double dmin_upper = std::numeric_limits<double>::infinity();
    Witness witness;
    std::uint64_t pairs_evaluated = 0;
};

struct DminBound {
    double value = 0.0;
    bool partial = true;  ///< true when the box budget ran out first
    std::uint64_t boxes_processed = 0;
};

struct PackingEstimate {
    int n = 0;
    double h = 0.0;
    double dmin_upper = 0.0;
    double dmin_lower = 0.0;
    double packing_lower = 0.0;  ///< 1 / dmin_upper
    double packing_upper = 0.0;  ///< 1 / dmin_lower, +inf when dmin_lower = 0
    Witness witness;
};

/// Sorted, exactly deduplicated center candidates: for every word of length
/// at most generation, the two hull corner images and the word's periodic
/// point. Throws std::runtime_error when the word count exceeds cap.
std::vector<double> candidate_centers(const IfsSystem&, int generation,
                                      std::uint64_t cap = kDefaultEnumerationCap);

/// Minimum density upper bound over the sampled (center, radius) pairs.
/// Deterministic for fixed options, independent of the thread count.
DminSample dmin_sampled(const IfsSystem&, double h, const SearchOptions& = {});

/// Certified lower bound on dmin via branch and bound; value 0 with
/// partial = true when certify_budget is 0.
DminBound dmin_lower_bound(const IfsSystem&, double h, const SearchOptions& = {});

/// Closed-overlap test of the probe against the attractor, exact to the
/// stated cylinder depth; true is conservative at the depth cutoff.
bool intersects_limit_set(const IfsSystem&, Interval probe, int depth);

/// Dimension plus the two-sided dmin and packing measure enclosure for one n.
PackingEstimate packing_estimate(int n, const SearchOptions& = {});

/// packing_estimate over n = n_min..n_max stepped by n_stride (added, or
/// multiplied when n_geometric is set).
std::vector<PackingEstimate> sweep(int n_min, int n_max, const SearchOptions& = {});

}  // namespace packdim
