#include <cmath>
#include <vector>

#include "doctest.h"
#include "gdlab/rng.hpp"
#include "gdlab/stats.hpp"

using namespace gdlab;

TEST_CASE("wilson interval reference values") {
    auto w = wilson_interval(50, 100);
    CHECK(w.lo == doctest::Approx(0.4038315303659956).epsilon(1e-10));
    CHECK(w.hi == doctest::Approx(0.5961684696340044).epsilon(1e-10));
    auto w2 = wilson_interval(3, 10);
    CHECK(w2.lo == doctest::Approx(0.10779126740630104).epsilon(1e-9));
    CHECK(w2.hi == doctest::Approx(0.6032218525388546).epsilon(1e-9));
    auto w0 = wilson_interval(0, 20);
    CHECK(w0.lo == doctest::Approx(0.0));
    CHECK(w0.hi == doctest::Approx(0.1611251580528194).epsilon(1e-9));
    CHECK_THROWS(wilson_interval(5, 0));
}

TEST_CASE("incomplete gamma and chi-square tails") {
    CHECK(gamma_q(2.5, 1.0) == doctest::Approx(0.8491450360846096).epsilon(1e-10));
    CHECK(gamma_q(0.5, 4.0) == doctest::Approx(0.004677734981047276).epsilon(1e-9));
    CHECK(chi_square_sf(3.841459, 1) == doctest::Approx(0.05).epsilon(1e-5));
    CHECK(chi_square_sf(11.0705, 5) == doctest::Approx(0.05).epsilon(1e-4));
    CHECK(chi_square_sf(2.5, 4) == doctest::Approx(0.6446357929354278).epsilon(1e-9));
    CHECK(chi_square_sf(25.0, 10) == doctest::Approx(0.005345505487134069).epsilon(1e-8));
}

TEST_CASE("chi-square helpers behave on synthetic tables") {
    // Perfectly uniform counts: p = 1.
    auto even = chi_square_uniform({100, 100, 100, 100});
    CHECK(even.p_value == doctest::Approx(1.0));
    // Badly skewed counts: p tiny.
    auto skew = chi_square_uniform({400, 10, 10, 10});
    CHECK(skew.p_value < 1e-10);
    // Homogeneous groups.
    auto hom = chi_square_homogeneity({{50, 50}, {48, 52}, {52, 48}});
    CHECK(hom.p_value > 0.5);
    auto het = chi_square_homogeneity({{90, 10}, {10, 90}});
    CHECK(het.p_value < 1e-10);
}

TEST_CASE("two-sample KS") {
    RngStream rng(31, 0);
    std::vector<double> a, b, c;
    for (int i = 0; i < 3000; ++i) {
        a.push_back(rng.next_gaussian());
        b.push_back(rng.next_gaussian());
        c.push_back(rng.next_gaussian() + 0.4);
    }
    auto same = ks_test(a, b);
    CHECK(same.p_value > 0.05);
    auto shifted = ks_test(a, c);
    CHECK(shifted.p_value < 1e-6);
    CHECK(shifted.distance > same.distance);
}

TEST_CASE("line fit recovers an exact line") {
    std::vector<double> x{0, 1, 2, 3, 4}, y;
    for (double v : x) y.push_back(-2.5 * v + 0.75);
    auto f = fit_line(x, y);
    CHECK(f.slope == doctest::Approx(-2.5).epsilon(1e-12));
    CHECK(f.intercept == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(f.r2 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("tail fit on exponential and heavy-tailed samples") {
    RngStream rng(37, 0);
    std::vector<double> expo, pareto;
    for (int i = 0; i < 200000; ++i) {
        double u = 1.0 - rng.next_unit();
        expo.push_back(-std::log(u));
        pareto.push_back(std::pow(u, -0.8) - 1.0);  // survival (1+t)^(-1.25)
    }
    std::vector<double> grid{0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0};
    auto ef = tail_fit(expo, grid);
    CHECK(ef.line.slope == doctest::Approx(-1.0).epsilon(0.05));
    CHECK(ef.line.r2 > 0.99);
    // A polynomial tail bends on a grid wide enough to see the curvature.
    std::vector<double> wide{0.5, 5.0, 10.0, 20.0, 40.0, 80.0};
    auto pf = tail_fit(pareto, wide);
    CHECK(pf.line.r2 < 0.9);  // flagged as non-exponential by the caller

    CHECK_THROWS(tail_fit(expo, {1e9, 2e9, 3e9}));          // all cells empty
    CHECK_THROWS(tail_fit({1.0, 2.0}, grid));               // too few samples
}

TEST_CASE("median and its order-statistic interval") {
    std::vector<double> xs;
    for (int i = 1; i <= 21; ++i) xs.push_back(i);
    CHECK(median(xs) == 11.0);
    auto ci = median_ci(xs);
    CHECK(ci.med == 11.0);
    CHECK(ci.lo >= 5.0);
    CHECK(ci.lo <= 9.0);
    CHECK(ci.hi >= 13.0);
    CHECK(ci.hi <= 17.0);
}
