#include <cmath>
#include <vector>

#include "doctest.h"
#include "gdlab/oracle.hpp"
#include "gdlab/rng.hpp"

using namespace gdlab;

TEST_CASE("continuous hit probability closed form") {
    CHECK(continuous_hit_prob(1.0, 1.0, 10.0, 3) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(continuous_hit_prob(10.0, 1.0, 10.0, 3) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(continuous_hit_prob(5.0, 1.0, 10.0, 3) == doctest::Approx(1.0 / 9).epsilon(1e-13));
    CHECK_THROWS(continuous_hit_prob(5.0, 11.0, 10.0, 3));
    CHECK_THROWS(continuous_hit_prob(5.0, 1.0, 10.0, 2));
}

TEST_CASE("hit probability is monotone and within [0,1]") {
    for (int d : {3, 4, 5}) {
        double prev = 1.0;
        for (double r = 1.0; r <= 20.0; r += 0.25) {
            double b = continuous_hit_prob(r, 1.0, 20.0, d);
            CHECK(b >= 0.0);
            CHECK(b <= 1.0);
            CHECK(b <= prev + 1e-14);  // decreasing in r
            prev = b;
        }
        // Increasing in eps at fixed r.
        double lo = continuous_hit_prob(5.0, 0.5, 20.0, d);
        double hi = continuous_hit_prob(5.0, 1.5, 20.0, d);
        CHECK(lo < hi);
    }
}

TEST_CASE("excursion rate") {
    CHECK(excursion_rate(10.0, 1.0, 3) == doctest::Approx(1.0 / 9).epsilon(1e-13));
    // b(a) * a approaches a constant for large a at fixed eps.
    double prev = 0;
    for (double a : {100.0, 1000.0, 10000.0}) {
        double v = excursion_rate(a, 1.0, 3) * a;
        if (prev > 0) CHECK(std::abs(v - prev) < 0.02);
        prev = v;
    }
    CHECK(prev == doctest::Approx(1.0).epsilon(0.01));
}

namespace {

GrowingDomain frozen_ball(double a) {
    return GrowingDomain(StarDomain::ball(3, 1.0), ScaleFunction::constant(a),
                         GrowingDomain::Mode::Lattice);
}

// Independent route: damped fixed-point iteration of the harmonic relation.
std::vector<double> jacobi_solve(const LatticeGraph& g, const PointZ& target, double exit_radius,
                                 int sweeps) {
    std::vector<double> v(g.sites.size(), 0.0), next(g.sites.size(), 0.0);
    int32_t ti = g.at(target);
    auto pinned = [&](size_t i) {
        if (static_cast<int32_t>(i) == ti) return true;
        return static_cast<double>(g.sites[i].norm2()) >= exit_radius * exit_radius;
    };
    v[static_cast<size_t>(ti)] = 1.0;
    for (int s = 0; s < sweeps; ++s) {
        for (size_t i = 0; i < g.sites.size(); ++i) {
            if (pinned(i)) {
                next[i] = static_cast<int32_t>(i) == ti ? 1.0 : 0.0;
                continue;
            }
            double acc = 0;
            for (int32_t nb : g.neighbors[i]) {
                if (nb < 0) break;
                acc += v[static_cast<size_t>(nb)];
            }
            next[i] = acc / g.degree[i];
        }
        v.swap(next);
    }
    return v;
}

}  // namespace

TEST_CASE("one-site domain: h == 1") {
    GrowingDomain dom(StarDomain::ball(3, 1.0), ScaleFunction::constant(0.9),
                      GrowingDomain::Mode::Lattice, false);
    auto res = discrete_hit_solve(dom, 0.0, PointZ::zero(3), SolveMode::BeforeExit);
    REQUIRE(res.value.size() == 1);
    CHECK(res.value[0] == 1.0);
}

TEST_CASE("dense, cg and power-iteration routes agree") {
    GrowingDomain dom = frozen_ball(2.0);  // effective domain B_4
    PointZ target = PointZ::zero(3);
    auto dense = discrete_hit_solve(dom, 0.0, target, SolveMode::BeforeExit, 2.0,
                                    /*dense_threshold=*/100000);
    auto cg = discrete_hit_solve(dom, 0.0, target, SolveMode::BeforeExit, 2.0,
                                 /*dense_threshold=*/0);
    CHECK(dense.method == SolveMethod::DenseLU);
    CHECK(cg.method == SolveMethod::ConjugateGradient);
    CHECK(dense.residual_max <= 1e-10);
    CHECK(cg.residual_max <= 1e-10);

    auto jac = jacobi_solve(dense.graph, target, 2.0, 4000);
    PointZ e1 = PointZ::zero(3);
    e1[0] = 1;
    double h_dense = dense.at(e1);
    double h_cg = cg.at(e1);
    double h_jac = jac[static_cast<size_t>(dense.graph.at(e1))];
    CHECK(std::abs(h_dense - h_cg) < 1e-9);
    CHECK(std::abs(h_dense - h_jac) < 1e-9);
    CHECK(h_dense > 0.0);
    CHECK(h_dense < 1.0);
}

TEST_CASE("solution is within [0,1] and harmonic to tolerance") {
    GrowingDomain dom = frozen_ball(6.0);
    auto res = discrete_hit_solve(dom, 0.0, PointZ::zero(3), SolveMode::BeforeExit, 6.0);
    for (double v : res.value) {
        CHECK(v >= -1e-12);
        CHECK(v <= 1.0 + 1e-12);
    }
    CHECK(res.residual_max <= 1e-10);
}

TEST_CASE("a^(d-2) trend of the lattice hitting probability") {
    // h(a/2 e1) * a should approach a constant in d = 3.
    std::vector<double> scaled;
    for (double a : {8.0, 12.0, 16.0}) {
        GrowingDomain dom = frozen_ball(a);
        auto res = discrete_hit_solve(dom, 0.0, PointZ::zero(3), SolveMode::BeforeExit, a);
        PointZ probe = PointZ::zero(3);
        probe[0] = static_cast<int32_t>(a / 2);
        scaled.push_back(res.at(probe) * a);
    }
    for (size_t i = 1; i < scaled.size(); ++i) {
        double ratio = scaled[i] / scaled[i - 1];
        CHECK(ratio > 0.8);
        CHECK(ratio < 1.2);
    }
}

TEST_CASE("expected exit time matches the diffusive scale") {
    // E_0[tau(B_8)] for the walk is close to 8^2 (per-step variance 1).
    GrowingDomain dom = frozen_ball(8.0);
    auto res = discrete_hit_solve(dom, 0.0, PointZ::zero(3), SolveMode::ExpectedExitTime, 8.0);
    double m0 = res.at(PointZ::zero(3));
    CHECK(m0 == doctest::Approx(64.0).epsilon(0.15));
    CHECK_THROWS(discrete_hit_solve(dom, 0.0, PointZ::zero(3), SolveMode::ExpectedExitTime));
}

TEST_CASE("finite-horizon hit probability propagation") {
    GrowingDomain dom = frozen_ball(3.0);
    PointZ start = PointZ::zero(3);
    start[0] = 2;
    // T = 0: not at the target yet.
    CHECK(discrete_hit_by_time(dom, 0.0, PointZ::zero(3), start, 0) == 0.0);
    // Monotone in T and saturating toward 1 on the confined chain.
    double p1 = discrete_hit_by_time(dom, 0.0, PointZ::zero(3), start, 50);
    double p2 = discrete_hit_by_time(dom, 0.0, PointZ::zero(3), start, 500);
    double p3 = discrete_hit_by_time(dom, 0.0, PointZ::zero(3), start, 50000);
    CHECK(p1 > 0.0);
    CHECK(p1 <= p2);
    CHECK(p2 <= p3);
    CHECK(p3 == doctest::Approx(1.0).epsilon(1e-6));
}
