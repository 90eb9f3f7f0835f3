// Acceptance battery for the packing-density toolkit.  Each criterion prints
// one [PASS]/[FAIL] line with its wall time; the process exits nonzero when
// any criterion fails.  Tolerances and time budgets are pinned here so a
// regression cannot pass by loosening them at the call site.
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "packdim/cli.hpp"
#include "packdim/dimension.hpp"
#include "packdim/measure.hpp"
#include "packdim/packing.hpp"
#include "packdim/verify.hpp"
#include "support/oracles.hpp"

using namespace packdim;

namespace {

int g_failures = 0;

void expect(bool ok, const char* what) {
    if (!ok) {
        ++g_failures;
        std::printf("       fail: %s\n", what);
    }
}

void expect_near(double got, double want, double tol, const char* what) {
    if (!(std::fabs(got - want) <= tol)) {
        ++g_failures;
        std::printf("       fail: %s (got %.17g, want %.17g +- %.3g)\n", what,
                    got, want, tol);
    }
}

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch())
        .count();
}

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.good()) return std::string();
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

// Reference exponents, solved independently to sixty decimal digits and
// rounded to the nearest double.
struct FrozenH {
    int n;
    double h;
};
constexpr FrozenH kFrozenH[] = {
    {2, 0.60096685161367549},  {3, 0.75839948400480778},
    {4, 0.82918167851305523},  {5, 0.86883123016993553},
    {8, 0.92383233753312816},  {10, 0.94082471635410578},
    {16, 0.96486020544622793}, {25, 0.97833107014546116},
    {32, 0.98334904794426440}, {64, 0.99195631400819552},
    {1024, 0.99952003261116590},
};

// Density and mass of the extremal interval around the leftmost point,
// evaluated from the closed forms at sixty decimal digits.
struct FrozenExtremal {
    int n;
    double density;
    double mass;
};
constexpr FrozenExtremal kFrozenExtremal[] = {
    {2, 0.74381566068655928, 0.34068804410789697},
    {5, 0.59138386158658402, 0.052075197191463933},
    {10, 0.54435252113886380, 0.012006247893776331},
    {25, 0.51730877522040064, 0.0017702698204388376},
};

// Hull-diameter reference (2 * rightmost)^h that every certified lower
// packing bound has to clear.
struct FrozenHullBound {
    int n;
    double bound;
};
constexpr FrozenHullBound kHullBound[] = {
    {4, 1.6242013546113190},  {8, 1.7988847495391385},
    {16, 1.8963525824065095}, {32, 1.9475753709393806},
    {64, 1.9737017996110464},
};

// Regression pins for the shared sweep, recorded from the calibration run
// (tools/calibrate with generation 4, 64 radii per center).
struct SweepPin {
    int n;
    double dmin_upper;
    double packing_lower;
};
constexpr SweepPin kSweepPins[] = {
    {4, 0.53281188406972235, 1.8768350141926313},
    {8, 0.51944125271192954, 1.9251455189189173},
    {16, 0.51039342060512405, 1.9592729052314131},
    {32, 0.50531825226953242, 1.97895087998248},
    {64, 0.50267373940101434, 1.9893619292537528},
};

constexpr double kDimensionBudget = 1.0;
constexpr double kOverlapBudget = 30.0;
constexpr double kExtremalBudget = 10.0;
constexpr double kHalfLineBudget = 60.0;
constexpr double kSweepBudget = 600.0;
constexpr double kBatteryBudget = 60.0;

void criterion_dimension() {
    const DimensionResult trivial = solve_dimension(make_gauss_linear_ifs(1));
    expect(trivial.h == 0.0, "single branch solves to exponent zero");
    expect(trivial.residual == 0.0, "single branch residual is zero");

    for (const auto& f : kFrozenH) {
        const IfsSystem s = make_gauss_linear_ifs(f.n);
        const DimensionResult r = solve_dimension(s);
        expect_near(r.h, f.h, 1e-13, "frozen exponent");
        expect(std::fabs(r.residual) <= 1e-14, "residual within tolerance");
    }

    for (int n : {2, 3, 7, 12, 33}) {
        const double oracle = testsupport::brute_dimension(n);
        const double h = solve_dimension(make_gauss_linear_ifs(n)).h;
        expect_near(h, oracle, 1e-12, "bisection oracle agreement");
    }

    double prev = 0.0;
    double h64 = 0.0;
    double h1024 = 0.0;
    bool monotone = true;
    bool converged = true;
    for (int n = 2; n <= 1024; ++n) {
        const double hint = prev > 0.0 ? prev : -1.0;
        const DimensionResult r =
            solve_dimension(make_gauss_linear_ifs(n), 1e-14, hint);
        if (!(r.h > prev && r.h < 1.0)) monotone = false;
        if (!(std::fabs(r.residual) <= 1e-14)) converged = false;
        if (n == 64) h64 = r.h;
        prev = r.h;
    }
    h1024 = prev;
    expect(monotone, "exponent increases strictly toward one");
    expect(converged, "every residual within tolerance");
    expect(1.0 - h1024 < 1.0 - h64, "gap to one shrinks along the sweep");
}

void criterion_exhaustive_overlap() {
    std::mt19937_64 rng(42);
    for (int n : {2, 3, 5}) {
        const IfsSystem s = make_gauss_linear_ifs(n);
        const double h = solve_dimension(s).h;
        const MeasureEvaluator ev(s, h);

        const MeasureBound whole = ev.measure({0.0, 1.0});
        expect(whole.lower == 1.0 && whole.upper == 1.0,
               "unit interval has exact unit mass");

        for (int k = 1; k <= n; ++k) {
            const MeasureBound b = ev.measure({1.0 / (k + 1), 1.0 / k});
            const double w = std::pow(s.branch_ratio(k), h);
            expect(b.upper - b.lower <= 1e-10, "branch interval resolves tightly");
            expect(b.lower - 1e-12 <= w && w <= b.upper + 1e-12,
                   "branch interval mass matches its weight");
        }

        for (int i = 0; i < 100; ++i) {
            const double u = -0.02 + 1.06 * uniform01(rng);
            const double v = -0.02 + 1.06 * uniform01(rng);
            const double a = std::min(u, v);
            const double b = std::max(u, v);
            if (!(b > a)) continue;
            const MeasureBound m = ev.measure({a, b});
            const testsupport::BruteBound bb = testsupport::brute_measure(n, h, a, b, 12);
            expect(m.lower <= bb.upper + 1e-9 && bb.lower <= m.upper + 1e-9,
                   "evaluator and exhaustive refinement enclosures overlap");
        }
    }
}

void criterion_conformal() {
    std::mt19937_64 rng(7);
    for (int n : {2, 5, 16}) {
        const IfsSystem s = make_gauss_linear_ifs(n);
        const double h = solve_dimension(s).h;
        const MeasureEvaluator ev(s, h);
        int done = 0;
        int attempts = 0;
        while (done < 200 && attempts < 500) {
            ++attempts;
            const double u = uniform01(rng);
            const double v = uniform01(rng);
            const double a = std::min(u, v);
            const double b = std::max(u, v);
            if (b - a < 1e-6) continue;
            const int k = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(n));
            const MeasureBound inner = ev.measure({a, b});
            const MeasureBound outer = ev.measure(s.branch(k).image({a, b}));
            const double w = ev.branch_weight(k);
            expect(outer.lower <= w * inner.upper + 1e-11,
                   "mapped mass no larger than scaled source");
            expect(w * inner.lower <= outer.upper + 1e-11,
                   "mapped mass no smaller than scaled source");
            ++done;
        }
        expect(done == 200, "conformal sample quota reached");
    }
}

void criterion_extremal_interval() {
    for (const auto& f : kFrozenExtremal) {
        const IfsSystem s = make_gauss_linear_ifs(f.n);
        const double h = solve_dimension(s).h;
        const MeasureEvaluator ev(s, h);
        const double x = leftmost_point(s);
        const Interval ival{2.0 * x - 1.0 / f.n, 1.0 / f.n};
        const DensityRecord rec = ev.density(ival);

        expect(rec.density_lower - 1e-12 <= f.density &&
                   f.density <= rec.density_upper + 1e-12,
               "closed-form density inside the enclosure");
        expect(rec.density_upper - rec.density_lower <= 1e-8,
               "density enclosure is tight");
        expect(rec.mass.lower - 1e-12 <= f.mass && f.mass <= rec.mass.upper + 1e-12,
               "closed-form mass inside the enclosure");

        const double nn = static_cast<double>(f.n);
        const double cf = std::pow(
            0.5 * (2 * nn * nn + 2 * nn - 1) / (2 * nn * nn + nn - 1), h);
        expect_near(cf, f.density, 1e-13, "closed-form density pin");
        expect_near(std::pow(s.branch_ratio(f.n), h), f.mass, 1e-13,
                    "closed-form mass pin");
    }
}

void criterion_hull_bound(const std::vector<PackingEstimate>& rows) {
    for (const auto& f : kHullBound) {
        const PackingEstimate* row = nullptr;
        for (const auto& r : rows) {
            if (r.n == f.n) row = &r;
        }
        expect(row != nullptr, "sweep row present for hull bound check");
        if (row == nullptr) continue;
        const IfsSystem s = make_gauss_linear_ifs(f.n);
        const double formula = std::pow(2.0 * rightmost_point(s), row->h);
        expect_near(formula, f.bound, 1e-12, "hull bound closed form");
        expect(row->packing_lower >= f.bound - 1e-6,
               "lower packing bound clears the hull reference");
    }

    SearchOptions quick;
    quick.generation = 3;
    quick.radii_per_center = 16;
    const PackingEstimate small = packing_estimate(2, quick);
    expect(small.packing_lower >= 1.3444191254012810 - 1e-6,
           "two-branch lower packing bound clears the hull reference");
}

void criterion_half_line() {
    const double t0 = now_seconds();
    for (int n : {8, 16, 64}) {
        const IfsSystem s = make_gauss_linear_ifs(n);
        const double h = solve_dimension(s).h;
        for (const char* suite : {"uniform_left", "uniform_right"}) {
            const auto reports = run_verify_suites(s, h, suite, 200, 1);
            expect(reports.size() == 1 && reports[0].pass,
                   "half-line density floor holds");
            expect(reports[0].violations == 0, "no half-line violations");
        }
    }
    expect(now_seconds() - t0 <= kHalfLineBudget, "half-line budget respected");
}

void criterion_sweep(const std::vector<PackingEstimate>& rows,
                     double sweep_seconds) {
    expect(rows.size() == 5, "sweep yields one row per doubling");
    if (rows.size() != 5) return;

    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        expect(r.n == 4 << i, "sweep row order");
        expect(r.dmin_upper <= 0.5 * (1.0 + 5.0 / r.n),
               "density dip below the sandwich envelope");
        expect(r.dmin_upper > 0.45, "density dip above the asymptotic floor");
        if (i > 0) {
            expect(r.dmin_upper < rows[i - 1].dmin_upper,
                   "density dip decreases with the alphabet");
            expect(r.packing_lower > rows[i - 1].packing_lower,
                   "lower packing bound increases with the alphabet");
        }
    }

    const PackingEstimate& last = rows.back();
    expect(last.dmin_upper >= 0.45 && last.dmin_upper <= 0.52,
           "largest alphabet dip near one half");
    expect(last.packing_lower >= 1.85 && last.packing_lower <= 2.15,
           "largest alphabet packing bound near two");
    expect(std::fabs(last.packing_lower - 2.0) <=
               std::fabs(rows[1].packing_lower - 2.0),
           "packing bound approaches two monotonically in the tail");

    for (std::size_t i = 0; i < rows.size(); ++i) {
        const SweepPin& pin = kSweepPins[i];
        expect(rows[i].n == pin.n, "pin row order");
        expect(std::fabs(rows[i].dmin_upper - pin.dmin_upper) <=
                   1e-6 * std::fabs(pin.dmin_upper),
               "density dip regression pin");
        expect(std::fabs(rows[i].packing_lower - pin.packing_lower) <=
                   1e-6 * std::fabs(pin.packing_lower),
               "packing bound regression pin");
    }

    expect(sweep_seconds <= kSweepBudget, "sweep budget respected");
}

void criterion_batteries() {
    const double t0 = now_seconds();
    for (int n : {2, 8}) {
        const IfsSystem s = make_gauss_linear_ifs(n);
        const double h = solve_dimension(s).h;
        for (std::uint64_t seed : {1, 2}) {
            for (const char* suite : {"zero_r", "gap_structure", "regularity"}) {
                const auto reports = run_verify_suites(s, h, suite, 200, seed);
                expect(reports.size() == 1 && reports[0].pass,
                       "randomized battery passes");
            }
        }
    }
    expect(now_seconds() - t0 <= kBatteryBudget, "battery budget respected");
}

void criterion_cli() {
    RunConfig cfg;
    cfg.command = "sweep";
    cfg.n_min = 4;
    cfg.n_max = 64;
    cfg.n_stride = 2;
    cfg.n_geometric = true;
    cfg.generation = 3;
    cfg.radii = 64;
    cfg.cap = 20'000'000;
    cfg.format = "csv";
    cfg.timestamp = false;

    cfg.output_path = "acceptance_sweep_a.csv";
    expect(run(cfg) == 0, "first sweep run succeeds");
    cfg.output_path = "acceptance_sweep_b.csv";
    expect(run(cfg) == 0, "second sweep run succeeds");

    const std::string a = slurp("acceptance_sweep_a.csv");
    const std::string b = slurp("acceptance_sweep_b.csv");
    expect(!a.empty() && a == b, "sweep output is byte-identical across runs");
    expect(a.rfind("n,h,dmin_upper,dmin_lower,packing_lower,packing_upper,"
                   "witness_center,witness_radius\n",
                   0) == 0,
           "sweep header matches the documented schema");
    expect(a.find(",inf,") != std::string::npos,
           "uncertified upper bound serializes as inf");
    std::remove("acceptance_sweep_a.csv");
    std::remove("acceptance_sweep_b.csv");

    {
        const char* argv[] = {"packdim", "dimension", "--n", "6",
                              "--out", "acceptance_dim.csv", "--format", "csv",
                              "--no-timestamp"};
        expect(main_entry(9, argv) == 0, "dimension command exits zero");
        std::remove("acceptance_dim.csv");
    }
    {
        const char* argv[] = {"packdim", "bogus"};
        expect(main_entry(2, argv) == 1, "unknown command exits one");
    }
    {
        const char* argv[] = {"packdim", "measure", "--n", "2",
                              "--interval", "0.7", "0.3"};
        expect(main_entry(7, argv) == 1, "reversed interval exits one");
    }
    {
        const char* argv[] = {"packdim", "dmin", "--n", "10", "--gen", "8"};
        expect(main_entry(6, argv) == 2, "enumeration overflow exits two");
    }
}

bool run_criterion(const char* name, double budget, double seconds,
                   int failures_before) {
    const bool time_ok = budget <= 0.0 || seconds <= budget;
    if (!time_ok) {
        ++g_failures;
        std::printf("       fail: %s exceeded its %.0f s budget\n", name, budget);
    }
    const bool ok = g_failures == failures_before && time_ok;
    std::printf("[%s] %-46s (%7.2f s)\n", ok ? "PASS" : "FAIL", name, seconds);
    return ok;
}

}  // namespace

int main() {
    std::printf("packing density acceptance battery\n");
    int bad = 0;

    struct Step {
        const char* name;
        double budget;
        void (*fn)();
    };
    const Step head[] = {
        {"dimension solver", kDimensionBudget, criterion_dimension},
        {"interval mass vs exhaustive refinement", kOverlapBudget,
         criterion_exhaustive_overlap},
        {"conformal covariance of interval mass", 0.0, criterion_conformal},
        {"extremal interval density closed forms", kExtremalBudget,
         criterion_extremal_interval},
    };
    for (const Step& s : head) {
        const int before = g_failures;
        const double t0 = now_seconds();
        s.fn();
        if (!run_criterion(s.name, s.budget, now_seconds() - t0, before)) ++bad;
    }

    SearchOptions deep;
    deep.generation = 4;
    deep.radii_per_center = 64;
    deep.enumeration_cap = 20'000'000;
    const double sweep_t0 = now_seconds();
    const std::vector<PackingEstimate> rows = sweep(4, 64, [&] {
        SearchOptions o = deep;
        o.n_stride = 2;
        o.n_geometric = true;
        return o;
    }());
    const double sweep_seconds = now_seconds() - sweep_t0;
    std::printf("# shared sweep over n in {4,8,16,32,64} took %.2f s\n",
                sweep_seconds);

    {
        const int before = g_failures;
        const double t0 = now_seconds();
        criterion_hull_bound(rows);
        if (!run_criterion("lower packing bound beats hull reference", 0.0,
                           now_seconds() - t0, before))
            ++bad;
    }
    {
        const int before = g_failures;
        const double t0 = now_seconds();
        criterion_half_line();
        if (!run_criterion("half-line density floors hold", 0.0,
                           now_seconds() - t0, before))
            ++bad;
    }
    {
        const int before = g_failures;
        criterion_sweep(rows, sweep_seconds);
        if (!run_criterion("density dip sweep trends toward the limit", 0.0,
                           sweep_seconds, before))
            ++bad;
    }
    {
        const int before = g_failures;
        const double t0 = now_seconds();
        criterion_batteries();
        if (!run_criterion("randomized regularity and gap batteries", 0.0,
                           now_seconds() - t0, before))
            ++bad;
    }
    {
        const int before = g_failures;
        const double t0 = now_seconds();
        criterion_cli();
        if (!run_criterion("command line determinism and exit codes", 0.0,
                           now_seconds() - t0, before))
            ++bad;
    }

    if (bad == 0) {
        std::printf("all criteria passed\n");
        return 0;
    }
    std::printf("%d criteria failed\n", bad);
    return 1;
}
