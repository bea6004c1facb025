#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "gdlab/geometry.hpp"
#include "gdlab/rng.hpp"

using namespace gdlab;

namespace {

PointR pr(double x, double y, double z) {
    PointR p(3);
    p[0] = x;
    p[1] = y;
    p[2] = z;
    return p;
}

PointZ pz(int x, int y, int z) {
    PointZ p(3);
    p[0] = x;
    p[1] = y;
    p[2] = z;
    return p;
}

PointR random_direction(RngStream& rng, int d) {
    PointR u(d);
    double n2 = 0;
    do {
        for (int i = 0; i < d; ++i) u[i] = rng.next_gaussian();
        n2 = u.norm2();
    } while (n2 == 0);
    return (1.0 / std::sqrt(n2)) * u;
}

}  // namespace

TEST_CASE("continuum membership") {
    GrowingDomain ball(StarDomain::ball(3, 1.0), ScaleFunction::power(1.0, 0.5),
                       GrowingDomain::Mode::Continuum);
    // f(3) = 2 > 1.9
    CHECK(ball.contains(3.0, pr(1.9, 0, 0)));
    CHECK_FALSE(ball.contains(3.0, pr(2.1, 0, 0)));
    CHECK(ball.contains(0.0, pr(0, 0, 0)));  // origin always inside

    GrowingDomain ell(StarDomain::ellipsoid({2, 1, 1}), ScaleFunction::constant(1.0),
                      GrowingDomain::Mode::Continuum, false);
    CHECK(ell.contains(0.0, pr(1.5, 0, 0)));
    CHECK_FALSE(ell.contains(0.0, pr(0, 1.5, 0)));
}

TEST_CASE("lattice neighbors, canonical order") {
    GrowingDomain dom(StarDomain::ball(3, 1.0), ScaleFunction::constant(5.0),
                      GrowingDomain::Mode::Lattice, false);
    auto nb = dom.lattice_neighbors(0.0, pz(0, 0, 0));
    REQUIRE(nb.size() == 6);
    CHECK(nb[0] == pz(1, 0, 0));
    CHECK(nb[1] == pz(-1, 0, 0));
    CHECK(nb[2] == pz(0, 1, 0));
    CHECK(nb[3] == pz(0, -1, 0));
    CHECK(nb[4] == pz(0, 0, 1));
    CHECK(nb[5] == pz(0, 0, -1));
}

TEST_CASE("lattice neighbors at the rim: brute-force cross-check") {
    // K = Ball(1), f = 2.2: y = (2,0,0) has only (1,0,0) inside.
    GrowingDomain dom(StarDomain::ball(3, 1.0), ScaleFunction::constant(2.2),
                      GrowingDomain::Mode::Lattice, false);
    auto nb = dom.lattice_neighbors(0.0, pz(2, 0, 0));
    std::vector<PointZ> expect;
    for (int axis = 0; axis < 3; ++axis)
        for (int s : {+1, -1}) {
            PointZ cand = pz(2, 0, 0).shifted(axis, s);
            if (std::sqrt(static_cast<double>(cand.norm2())) < 2.2) expect.push_back(cand);
        }
    REQUIRE(nb.size() == expect.size());
    for (size_t i = 0; i < nb.size(); ++i) CHECK(nb[i] == expect[i]);
    CHECK(nb.size() == 1);
    CHECK(nb[0] == pz(1, 0, 0));
}

TEST_CASE("isolated vertex is an error") {
    GrowingDomain dom(StarDomain::ball(3, 1.0), ScaleFunction::constant(0.5),
                      GrowingDomain::Mode::Lattice, false);
    CHECK_THROWS_AS(dom.lattice_neighbors(0.0, pz(0, 0, 0)), IsolatedVertexError);
}

TEST_CASE("inner boundary") {
    SUBCASE("seven-point star") {
        GrowingDomain dom(StarDomain::ball(3, 1.0), ScaleFunction::constant(1.2),
                          GrowingDomain::Mode::Lattice, false);
        auto bd = dom.inner_boundary(0.0);
        CHECK(bd.size() == 6);  // each unit vector touches the outside
    }
    SUBCASE("single point") {
        GrowingDomain dom(StarDomain::ball(3, 1.0), ScaleFunction::constant(0.9),
                          GrowingDomain::Mode::Lattice, false);
        auto bd = dom.inner_boundary(0.0);
        REQUIRE(bd.size() == 1);
        CHECK(bd[0] == pz(0, 0, 0));
    }
    SUBCASE("radius 4 ball vs exhaustive scan") {
        GrowingDomain dom(StarDomain::ball(3, 1.0), ScaleFunction::constant(4.0),
                          GrowingDomain::Mode::Lattice, false);
        auto bd = dom.inner_boundary(0.0);
        std::set<int64_t> got;
        for (const auto& p : bd) got.insert(p.norm2() * 1000000 + (p[0] + 10) * 10000 + (p[1] + 10) * 100 + (p[2] + 10));
        size_t count = 0;
        for (int x = -4; x <= 4; ++x)
            for (int y = -4; y <= 4; ++y)
                for (int z = -4; z <= 4; ++z) {
                    PointZ p = pz(x, y, z);
                    if (static_cast<double>(p.norm2()) >= 16.0) continue;
                    bool edge = false;
                    for (int axis = 0; axis < 3 && !edge; ++axis)
                        for (int s : {+1, -1})
                            if (static_cast<double>(p.shifted(axis, s).norm2()) >= 16.0) edge = true;
                    if (edge) ++count;
                }
        CHECK(bd.size() == count);
    }
}

TEST_CASE("inward normals") {
    auto ball = StarDomain::ball(3, 1.0);
    PointR n = ball.inward_normal(pr(1, 0, 0));
    CHECK(n[0] == doctest::Approx(-1.0));
    CHECK_THROWS(ball.inward_normal(PointR::zero(3)));

    auto ell = StarDomain::ellipsoid({2, 1, 1});
    PointR ne = ell.inward_normal(pr(2, 0, 0));
    CHECK(ne[0] == doctest::Approx(-1.0).epsilon(1e-12));

    // (sqrt2, 1/sqrt2, 0) lies on the surface; normal ~ -(x/4, y, 0).
    PointR x = pr(std::sqrt(2.0), 1.0 / std::sqrt(2.0), 0);
    PointR want = pr(-std::sqrt(2.0) / 4, -1.0 / std::sqrt(2.0), 0).normalized();
    PointR got = ell.inward_normal(x);
    for (int i = 0; i < 3; ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-10));
}

TEST_CASE("ball normals match -x/|x| at sampled boundary points") {
    RngStream rng(5, 0);
    auto ball = StarDomain::ball(3, 2.5);
    for (int i = 0; i < 1000; ++i) {
        PointR u = random_direction(rng, 3);
        PointR n = ball.inward_normal(2.5 * u);
        for (int k = 0; k < 3; ++k) CHECK(std::abs(n[k] + u[k]) < 1e-12);
    }
}

TEST_CASE("ellipsoid finite-difference normals match the analytic form") {
    RngStream rng(6, 0);
    auto ell = StarDomain::ellipsoid({2, 1, 1.5});
    for (int i = 0; i < 200; ++i) {
        PointR u = random_direction(rng, 3);
        double r = ell.radial_profile(u);
        PointR x = r * u;
        PointR analytic = ell.inward_normal(x);
        // Central differences of the radial gap g(x) = r(x/|x|) - |x|.
        double h = 1e-6;
        PointR fd(3);
        for (int k = 0; k < 3; ++k) {
            PointR xp = x, xm = x;
            xp[k] += h;
            xm[k] -= h;
            double gp = ell.radial_profile(xp.normalized()) - xp.norm();
            double gm = ell.radial_profile(xm.normalized()) - xm.norm();
            fd[k] = (gp - gm) / (2 * h);
        }
        fd = fd.normalized();
        for (int k = 0; k < 3; ++k) CHECK(std::abs(fd[k] - analytic[k]) < 1e-5);
    }
}

TEST_CASE("connectivity") {
    GrowingDomain dom(StarDomain::ball(3, 1.0), ScaleFunction::constant(5.0),
                      GrowingDomain::Mode::Lattice, false);
    CHECK(dom.connectivity_check(0.0));

    GrowingDomain single(StarDomain::ball(3, 1.0), ScaleFunction::constant(0.9),
                         GrowingDomain::Mode::Lattice, false);
    CHECK(single.connectivity_check(0.0));

    // Two disjoint blobs via the raw BFS helper.
    std::vector<PointZ> blobs{pz(0, 0, 0), pz(1, 0, 0), pz(5, 5, 5), pz(5, 5, 6)};
    CHECK_FALSE(sites_connected_from(blobs, pz(0, 0, 0)));
}

TEST_CASE("membership is monotone in time and star-shaped") {
    RngStream rng(13, 0);
    GrowingDomain dom(StarDomain::ellipsoid({2, 1, 1}), ScaleFunction::power(1.0, 0.4),
                      GrowingDomain::Mode::Continuum);
    for (int i = 0; i < 10000; ++i) {
        double s = 30.0 * rng.next_unit();
        double t = s + 30.0 * rng.next_unit();
        PointR x = (4.0 * rng.next_unit()) * random_direction(rng, 3);
        if (dom.contains(s, x)) {
            CHECK(dom.contains(t, x));
            double lam = rng.next_unit();
            CHECK(dom.contains(s, lam * x));
        }
    }
}

TEST_CASE("neighbor sets are monotone in time") {
    GrowingDomain dom(StarDomain::ball(3, 1.0), ScaleFunction::power(1.0, 0.5),
                      GrowingDomain::Mode::Lattice);
    RngStream rng(17, 0);
    for (int i = 0; i < 500; ++i) {
        double s = 20.0 * rng.next_unit();
        double t = s + 20.0 * rng.next_unit();
        PointZ y = pz(static_cast<int>(rng.below(5)), static_cast<int>(rng.below(5)),
                      static_cast<int>(rng.below(5)));
        if (!dom.contains(s, y)) continue;
        PointZ bs[2 * kMaxDim], bt[2 * kMaxDim];
        int ns = dom.lattice_neighbors_into(s, y, bs);
        int nt = dom.lattice_neighbors_into(t, y, bt);
        CHECK(ns <= nt);
        for (int k = 0; k < ns; ++k) {
            bool found = false;
            for (int m = 0; m < nt; ++m)
                if (bs[k] == bt[m]) found = true;
            CHECK(found);
        }
    }
}

TEST_CASE("lattice convention rescales the shape") {
    GrowingDomain dom(StarDomain::ball(3, 1.0), ScaleFunction::constant(3.0),
                      GrowingDomain::Mode::Lattice);
    CHECK(dom.shape().inner_radius() == doctest::Approx(2.0));
    // Effective domain is B_6 now.
    CHECK(dom.contains(0.0, pz(5, 0, 0)));
    CHECK_FALSE(dom.contains(0.0, pz(6, 0, 0)));
    CHECK_THROWS(GrowingDomain(StarDomain::ball(3, 1.0), ScaleFunction::constant(0.5),
                               GrowingDomain::Mode::Lattice));
}

TEST_CASE("radial table shapes interpolate and stay star-shaped") {
    // Slightly squashed sphere tabulated on a coarse grid.
    std::vector<double> thetas, phis;
    for (int i = 0; i <= 8; ++i) thetas.push_back(M_PI * i / 8.0);
    for (int j = 0; j <= 16; ++j) phis.push_back(2 * M_PI * j / 16.0);
    std::vector<double> radii;
    for (double th : thetas)
        for (double ph : phis) {
            (void)ph;
            radii.push_back(1.0 + 0.2 * std::cos(th) * std::cos(th));
        }
    auto shape = StarDomain::radial_table(thetas, phis, radii, 1.0);
    CHECK(shape.inner_radius() == doctest::Approx(1.0));
    CHECK(shape.outer_radius() == doctest::Approx(1.2));
    PointR up = pr(0, 0, 1);
    CHECK(shape.radial_profile(up) == doctest::Approx(1.2).epsilon(1e-9));
    PointR side = pr(1, 0, 0);
    CHECK(shape.radial_profile(side) == doctest::Approx(1.0).epsilon(1e-9));
    PointR n = shape.inward_normal(pr(0, 0, 1.2));
    CHECK(n[2] < -0.9);  // points back toward the origin
}
