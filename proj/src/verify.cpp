/**
 * @file verify.cpp
 * @brief Margin-based verification suites for the density bounds.
 */

#include "packdim/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <stdexcept>

#include "packdim/measure.hpp"
#include "packdim/packing.hpp"

namespace packdim {

namespace {

/// 53-bit uniform in [0, 1). The engine layout is fully specified, so the
/// stream is identical on every platform, unlike the standard distributions.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct MarginTracker {
    int checks = 0;
    std::uint64_t violations = 0;
    double worst = std::numeric_limits<double>::infinity();

    void note(double margin) {
        ++checks;
        worst = std::min(worst, margin);
        if (margin < 0.0) ++violations;
    }
    SuiteReport finish(const char* name, int n, std::uint64_t seed) const {
        SuiteReport r;
        r.suite = name;
        r.n = n;
        r.samples = checks;
        r.seed = seed;
        r.violations = violations;
        r.worst_margin = worst;
        r.pass = (violations == 0);
        return r;
    }
};

/// Density of [0, r] is at least ((n-k)/(n+1) * k/(k+1))^h for the branch
/// index k with 1/(k+1) < r <= 1/k: the branches right of 1/(k+1) lie inside
/// [0, r] and their weights are superadditive under the power h <= 1.
SuiteReport suite_zero_r(const IfsSystem& s, const MeasureEvaluator& ev, double h,
                         int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    MarginTracker t;
    const int n = s.n;
    for (int i = 0; i < samples; ++i) {
        const double r = std::exp(std::log(2.0 / (n + 1)) * (1.0 - uniform01(rng)));
        int k = static_cast<int>(1.0 / r);
        if (k < 1) k = 1;
        if (k > n) k = n;
        while (k > 1 && 1.0 / k < r) --k;
        while (k < n && 1.0 / (k + 1) >= r) ++k;
        const double bound = std::pow((static_cast<double>(n - k) / (n + 1)) *
                                          (static_cast<double>(k) / (k + 1)),
                                      h);
        const DensityRecord d = ev.density({0.0, r});
        t.note(d.density_upper - bound + 1e-8);
    }
    return t.finish("zero_r", n, seed);
}

SuiteReport suite_uniform_left(const IfsSystem& s, const MeasureEvaluator& ev,
                               int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    MarginTracker t;
    const int n = s.n;
    const double bound = 1.0 - 2.0 / (n + 2);
    for (int i = 0; i < samples; ++i) {
        const double d = std::exp(std::log(1.0 / n) * (1.0 - uniform01(rng)));
        const DensityRecord rec = ev.density({s.base_left(), d});
        t.note(rec.density_lower - bound + 1e-8);
    }
    return t.finish("uniform_left", n, seed);
}

SuiteReport suite_uniform_right(const IfsSystem& s, const MeasureEvaluator& ev,
                                int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    MarginTracker t;
    const int n = s.n;
    const double bound = 1.0 - 2.0 / (n + 2);
    const double ld0 = std::log(1.0 / (2.0 * (n + 1)));
    const double ld1 = std::log(0.5);
    for (int i = 0; i < samples; ++i) {
        const double d = std::exp(ld0 + (ld1 - ld0) * uniform01(rng));
        const DensityRecord rec = ev.density({d, 1.0});
        t.note(rec.density_lower - bound + 1e-8);
    }
    return t.finish("uniform_right", n, seed);
}

/// The interval [2x - 1/n, 1/n] around the leftmost attractor point covers
/// exactly the last branch, so its mass and density have closed forms.
SuiteReport suite_lower_bound_interval(const IfsSystem& s, const MeasureEvaluator& ev,
                                       double h, std::uint64_t seed) {
    const int n = s.n;
    const double x = leftmost_point(s);
    const DensityRecord d = ev.density({2.0 * x - 1.0 / n, 1.0 / n});
    const double nn = static_cast<double>(n);
    const double cf_density =
        std::pow(0.5 * (2.0 * nn * nn + 2.0 * nn - 1.0) / (2.0 * nn * nn + nn - 1.0), h);
    const double cf_mass = std::pow(s.branch_ratio(n), h);
    MarginTracker t;
    t.note(cf_density + 1e-12 - d.density_lower);
    t.note(d.density_upper - (cf_density - 1e-12));
    t.note(1e-8 - (d.density_upper - d.density_lower));
    t.note(cf_mass + 1e-12 - d.mass.lower);
    t.note(d.mass.upper - (cf_mass - 1e-12));
    return t.finish("lower_bound_interval", n, seed);
}

SuiteReport suite_regularity(const IfsSystem& s, const MeasureEvaluator& ev,
                             int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const std::vector<double> centers = candidate_centers(s, 3);
    MarginTracker t;
    const double lr0 = std::log(1e-6);
    const double lr1 = std::log(0.25);
    for (int i = 0; i < samples; ++i) {
        const double c = centers[static_cast<std::size_t>(rng() % centers.size())];
        const double r = std::exp(lr0 + (lr1 - lr0) * uniform01(rng));
        const MeasureBound m = ev.measure({c - r, c + r});
        const double ratio = m.lower / std::pow(r, ev.h());
        t.note(std::isfinite(ratio) && ratio > 0.0 ? ratio : -1.0);
    }
    return t.finish("regularity", s.n, seed);
}

/// The zone between a branch image of [1/(n+1), 1] and the neighbouring grid
/// point holds no attractor point: its mass enclosure must sit at zero and
/// the cover recursion must miss it. Gap ends are cylinder endpoints, so the
/// cover probe is shrunk inward before testing.
SuiteReport suite_gap_structure(const IfsSystem& s, const MeasureEvaluator& ev,
                                std::uint64_t seed) {
    MarginTracker t;
    const int n = s.n;
    const double bl = s.base_left();
    const double yb = 1.0 - 0.5 * bl;
    auto check_gap = [&](double lo, double hi) {
        const MeasureBound m = ev.measure({lo, hi});
        t.note(1e-8 - m.upper);
        const double delta = 1e-9 * (hi - lo);
        t.note(intersects_limit_set(s, {lo + delta, hi - delta}, 12) ? -1.0 : 1.0);
    };
    for (int k = 1; k <= n; ++k) check_gap(s.branch(k)(bl), 1.0 / k);
    for (int k = 2; k <= n; ++k) check_gap(1.0 / k, s.branch(k - 1)(yb));
    return t.finish("gap_structure", n, seed);
}

}  // namespace

std::vector<SuiteReport> run_verify_suites(const IfsSystem& s, double h,
                                           const std::string& which, int samples,
                                           std::uint64_t seed) {
    if (s.n < 2) {
        throw std::invalid_argument("verify: n must be at least 2");
    }
    if (samples < 1) {
        throw std::invalid_argument("verify: samples must be positive");
    }
    const MeasureEvaluator ev(s, h);
    const bool all = (which == "all");
    bool matched = false;
    auto want = [&](const char* name) {
        if (!all && which != name) return false;
        matched = true;
        return true;
    };
    std::vector<SuiteReport> out;
    if (want("zero_r")) out.push_back(suite_zero_r(s, ev, h, samples, seed));
    if (want("uniform_left")) out.push_back(suite_uniform_left(s, ev, samples, seed));
    if (want("uniform_right")) out.push_back(suite_uniform_right(s, ev, samples, seed));
    if (want("lower_bound_interval")) out.push_back(suite_lower_bound_interval(s, ev, h, seed));
    if (want("regularity")) out.push_back(suite_regularity(s, ev, samples, seed));
    if (want("gap_structure")) out.push_back(suite_gap_structure(s, ev, seed));
    if (!matched) {
        throw std::invalid_argument("verify: unknown suite '" + which + "'");
    }
    return out;
}

std::string report_json_line(const SuiteReport& r) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "{\"suite\":\"%s\",\"n\":%d,\"samples\":%d,\"seed\":%llu,"
                  "\"violations\":%llu,\"worst_margin\":%.17g,\"pass\":%s}",
                  r.suite.c_str(), r.n, r.samples,
                  static_cast<unsigned long long>(r.seed),
                  static_cast<unsigned long long>(r.violations), r.worst_margin,
                  r.pass ? "true" : "false");
    return std::string(buf);
}

}  // namespace packdim
