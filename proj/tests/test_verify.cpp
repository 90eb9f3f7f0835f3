#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "packdim/dimension.hpp"
#include "packdim/verify.hpp"

using namespace packdim;

namespace {

std::vector<SuiteReport> run_all(int n, int samples, std::uint64_t seed) {
    const IfsSystem s = make_gauss_linear_ifs(n);
    const double h = solve_dimension(s).h;
    return run_verify_suites(s, h, "all", samples, seed);
}

}  // namespace

TEST_CASE("the full battery passes for a small alphabet") {
    const auto reports = run_all(2, 120, 1);
    REQUIRE(reports.size() == 6);
    const char* expected[] = {"zero_r",        "uniform_left",
                              "uniform_right", "lower_bound_interval",
                              "regularity",    "gap_structure"};
    for (std::size_t i = 0; i < reports.size(); ++i) {
        CAPTURE(reports[i].suite);
        CHECK(reports[i].suite == expected[i]);
        CHECK(reports[i].n == 2);
        CHECK(reports[i].seed == 1);
        CHECK(reports[i].violations == 0);
        CHECK(reports[i].pass);
        CHECK(reports[i].worst_margin >= 0.0);
    }
    // Randomized suites take the requested sample count; the deterministic
    // ones report how many checks they actually ran.
    CHECK(reports[0].samples == 120);
    CHECK(reports[1].samples == 120);
    CHECK(reports[2].samples == 120);
    CHECK(reports[3].samples == 5);
    CHECK(reports[4].samples == 120);
    CHECK(reports[5].samples == 6);
}

TEST_CASE("the full battery passes for a wider alphabet") {
    for (const auto& r : run_all(8, 120, 1)) {
        CAPTURE(r.suite);
        CHECK(r.pass);
        CHECK(r.violations == 0);
    }
}

TEST_CASE("reports are reproducible for a fixed seed") {
    const auto a = run_all(3, 80, 7);
    const auto b = run_all(3, 80, 7);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].worst_margin == b[i].worst_margin);
        CHECK(a[i].violations == b[i].violations);
    }
}

TEST_CASE("a single suite can be selected by name") {
    const IfsSystem s = make_gauss_linear_ifs(2);
    const double h = solve_dimension(s).h;
    const auto reports = run_verify_suites(s, h, "zero_r", 50, 3);
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].suite == "zero_r");
    CHECK(reports[0].samples == 50);
    CHECK(reports[0].seed == 3);
    CHECK(reports[0].pass);
}

TEST_CASE("invalid selections are rejected") {
    const IfsSystem s = make_gauss_linear_ifs(2);
    const double h = solve_dimension(s).h;
    CHECK_THROWS_AS(run_verify_suites(s, h, "bogus", 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(run_verify_suites(s, h, "all", 0, 1), std::invalid_argument);
    const IfsSystem s1 = make_gauss_linear_ifs(1);
    CHECK_THROWS_AS(run_verify_suites(s1, 0.0, "all", 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(run_verify_suites(s, 0.9, "all", 10, 1), std::invalid_argument);
}

TEST_CASE("reports serialize to one JSON line") {
    SuiteReport r;
    r.suite = "zero_r";
    r.n = 2;
    r.samples = 10;
    r.seed = 1;
    r.violations = 0;
    r.worst_margin = 0.015625;
    r.pass = true;
    CHECK(report_json_line(r) ==
          "{\"suite\":\"zero_r\",\"n\":2,\"samples\":10,\"seed\":1,"
          "\"violations\":0,\"worst_margin\":0.015625,\"pass\":true}");
}
