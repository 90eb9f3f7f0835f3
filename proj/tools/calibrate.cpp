// Runs the doubling sweep once and prints every field at full precision.
// Used to record the regression pins baked into the acceptance battery:
// rerun after any change to the search and compare before updating them.
//
// Usage: calibrate [generation] [radii_per_center]
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "packdim/packing.hpp"

int main(int argc, char** argv) {
    packdim::SearchOptions o;
    o.generation = argc > 1 ? std::atoi(argv[1]) : 4;
    o.radii_per_center = argc > 2 ? std::atoi(argv[2]) : 64;
    o.enumeration_cap = 20'000'000;
    o.n_stride = 2;
    o.n_geometric = true;

    std::printf("generation=%d radii_per_center=%d\n", o.generation,
                o.radii_per_center);
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<packdim::PackingEstimate> rows = packdim::sweep(4, 64, o);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();

    for (const auto& r : rows) {
        std::printf(
            "n=%d h=%.17g dmin_upper=%.17g packing_lower=%.17g "
            "witness_center=%.17g witness_radius=%.17g\n",
            r.n, r.h, r.dmin_upper, r.packing_lower, r.witness.center,
            r.witness.radius);
    }
    std::printf("elapsed=%.2f s\n", elapsed);
    return 0;
}
