#pragma once
/**
 * @file cli.hpp
 * @brief Command line front end: a parsed run configuration, the runner, and
 *        the argv entry point. Splitting run() from parsing keeps every
 *        output path exercisable from tests without a process boundary.
 */

#include <cstdint>
#include <string>

#include "packdim/ifs.hpp"
#include "packdim/measure.hpp"

namespace packdim {

struct RunConfig {
    std::string command;  ///< dimension, measure, density, dmin, sweep, verify
    int n = 2;
    int n_min = 2;
    int n_max = 8;
    int n_stride = 1;
    bool n_geometric = false;
    double interval_left = 0.0;
    double interval_right = 1.0;
    int generation = 3;
    int radii = 32;
    int max_depth = kDefaultMaxDepth;
    double tol = -1.0;  ///< negative selects the per-command default
    std::uint64_t seed = 1;
    int samples = 200;
    std::string suite = "all";
    std::string output_path;  ///< empty writes to stdout
    std::string format = "human";
    bool timestamp = true;
    std::uint64_t cap = kDefaultEnumerationCap;
    std::uint64_t budget = 0;
    int threads = 0;
};

/// Executes a parsed configuration. Returns 0 on success and 3 when a verify
/// suite reports violations; argument problems raise std::invalid_argument.
int run(const RunConfig&);

/// Parses argv and dispatches. Exit codes: 0 success, 1 usage or argument
/// error, 2 runtime failure, 3 verify violations.
int main_entry(int argc, const char* const* argv);

}  // namespace packdim
