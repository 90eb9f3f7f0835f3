#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "packdim/dimension.hpp"
#include "support/oracles.hpp"

using namespace packdim;

TEST_CASE("single-branch system has exponent zero exactly") {
    const DimensionResult r = solve_dimension(make_gauss_linear_ifs(1));
    CHECK(r.h == 0.0);
    CHECK(r.residual == 0.0);
    CHECK(r.iterations == 0);
}

TEST_CASE("residual has the known endpoint values and frozen midpoint") {
    const IfsSystem s = make_gauss_linear_ifs(2);
    CHECK(moran_residual(s, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(moran_residual(s, 1.0) == doctest::Approx(-1.0 / 3).epsilon(1e-14));
    CHECK(moran_residual(s, 0.6) ==
          doctest::Approx(1.0327072329836791e-3).epsilon(1e-12));
    const IfsSystem s5 = make_gauss_linear_ifs(5);
    CHECK(moran_residual(s5, 0.0) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(moran_residual(s5, 1.0) == doctest::Approx(-1.0 / 6).epsilon(1e-14));
}

TEST_CASE("solved exponents match frozen references") {
    const struct {
        int n;
        double h;
    } cases[] = {
        {2, 0.60096685161367549},   {3, 0.75839948400480778},
        {4, 0.82918167851305523},   {5, 0.86883123016993553},
        {8, 0.92383233753312816},   {10, 0.94082471635410578},
        {16, 0.96486020544622793},  {25, 0.97833107014546116},
        {32, 0.98334904794426440},  {64, 0.99195631400819552},
        {1024, 0.99952003261116590},
    };
    for (const auto& c : cases) {
        const IfsSystem s = make_gauss_linear_ifs(c.n);
        const DimensionResult r = solve_dimension(s);
        CHECK(r.h == doctest::Approx(c.h).epsilon(1e-13));
        CHECK(std::fabs(r.residual) <= 1e-14);
        CHECK(moran_residual(s, r.h) == r.residual);
        CHECK(r.tolerance == 1e-14);
        CHECK(r.iterations >= 1);
    }
}

TEST_CASE("solver agrees with plain bisection") {
    for (int n : {2, 3, 7, 12, 33}) {
        const DimensionResult r = solve_dimension(make_gauss_linear_ifs(n));
        CHECK(std::fabs(r.h - testsupport::brute_dimension(n)) <= 1e-12);
    }
}

TEST_CASE("exponent increases strictly with the branch count") {
    double prev = 0.0;
    for (int n = 2; n <= 40; ++n) {
        const double h = solve_dimension(make_gauss_linear_ifs(n)).h;
        CHECK(h > prev);
        CHECK(h < 1.0);
        prev = h;
    }
}

TEST_CASE("warm starts do not cost extra iterations") {
    const IfsSystem s = make_gauss_linear_ifs(9);
    const DimensionResult cold = solve_dimension(s);
    const double hint = solve_dimension(make_gauss_linear_ifs(8)).h;
    const DimensionResult warm = solve_dimension(s, 1e-14, hint);
    CHECK(warm.iterations <= cold.iterations);
    CHECK(warm.h == doctest::Approx(cold.h).epsilon(1e-13));
    // Hints outside (0, 1) fall back to the cold start.
    const DimensionResult silly = solve_dimension(s, 1e-14, 5.0);
    CHECK(silly.h == cold.h);
}

TEST_CASE("tolerances below double resolution are rejected") {
    const IfsSystem s = make_gauss_linear_ifs(3);
    CHECK_THROWS_AS(solve_dimension(s, 1e-20), std::invalid_argument);
    CHECK_THROWS_AS(solve_dimension(s, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(solve_dimension(s, -1e-10), std::invalid_argument);
    const DimensionResult loose = solve_dimension(s, 1e-6);
    CHECK(std::fabs(loose.residual) <= 1e-6);
    CHECK(loose.tolerance == 1e-6);
}
