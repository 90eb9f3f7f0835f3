#pragma once
/**
 * @file verify.hpp
 * @brief Randomized and structural checks of the measure's density bounds.
 *
 * Each suite turns a proved inequality into margins: a margin is negative
 * only when the computed enclosure certifies a genuine violation, so enclosure
 * width can never fail a true statement. Sampling uses a fixed-layout
 * generator so reports are identical across platforms for the same seed.
 */

#include <cstdint>
#include <string>
#include <vector>

#include "packdim/ifs.hpp"

namespace packdim {

struct SuiteReport {
    std::string suite;
    int n = 0;
    int samples = 0;  ///< number of margins checked
    std::uint64_t seed = 0;
    std::uint64_t violations = 0;
    double worst_margin = 0.0;
    bool pass = false;
};

/// Runs one suite by name, or every suite for which = "all":
///   zero_r               density of [0, r] against the branch-tail bound
///   uniform_left         left-anchored intervals against 1 - 2/(n+2)
///   uniform_right        right-anchored intervals against 1 - 2/(n+2)
///   lower_bound_interval the extremal interval against its closed forms
///   regularity           balls around attractor points carry positive mass
///   gap_structure        first-level gaps carry no mass and miss the cover
/// Unknown names and samples < 1 raise std::invalid_argument. h must solve
/// the Moran equation for the system.
std::vector<SuiteReport> run_verify_suites(const IfsSystem&, double h,
                                           const std::string& which = "all",
                                           int samples = 200,
                                           std::uint64_t seed = 1);

/// One-line JSON rendering with a fixed key order.
std::string report_json_line(const SuiteReport&);

}  // namespace packdim
