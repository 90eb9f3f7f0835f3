#include "packdim/dimension.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "packdim/numeric.hpp"

namespace packdim {

double moran_residual(const IfsSystem& s, double h) {
    KahanSum acc;
    for (int k = 1; k <= s.n; ++k) acc.add(std::pow(s.branch_ratio(k), h));
    return acc.value() - 1.0;
}

DimensionResult solve_dimension(const IfsSystem& s, double tol, double hint) {
    if (!(tol >= 1e-15)) throw std::invalid_argument("dimension: tolerance must be at least 1e-15");
    if (s.n == 1) return {0.0, 0.0, 0, tol};

    std::vector<double> logs(static_cast<std::size_t>(s.n) + 1, 0.0);
    for (int k = 1; k <= s.n; ++k)
        logs[static_cast<std::size_t>(k)] = std::log(static_cast<double>(k) * (k + 1));

    double lo = 0.0, hi = 1.0;
    double h = (hint > 0.0 && hint < 1.0) ? hint : 0.5;
    for (int it = 1; it <= 200; ++it) {
        KahanSum val, slope;
        for (int k = 1; k <= s.n; ++k) {
            double t = std::pow(s.branch_ratio(k), h);
            val.add(t);
            slope.add(t * logs[static_cast<std::size_t>(k)]);
        }
        double res = val.value() - 1.0;
        if (std::fabs(res) <= tol) return {h, res, it, tol};
        if (res > 0.0) lo = h; else hi = h;
        // residual decreases in h, derivative is -slope
        double next = h + res / slope.value();
        h = (next > lo && next < hi) ? next : 0.5 * (lo + hi);
    }
    throw std::runtime_error("dimension: solve did not converge");
}

}  // namespace packdim
