#include <array>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "gdlab/oracle.hpp"
#include "gdlab/srw.hpp"
#include "gdlab/stats.hpp"

using namespace gdlab;

namespace {

PointZ pz(int x, int y, int z) {
    PointZ p(3);
    p[0] = x;
    p[1] = y;
    p[2] = z;
    return p;
}

GrowingDomain frozen(double radius) {
    return GrowingDomain(StarDomain::ball(3, 1.0), ScaleFunction::constant(radius),
                         GrowingDomain::Mode::Lattice, false);
}

}  // namespace

TEST_CASE("step draws uniformly among available neighbors") {
    SUBCASE("deep interior: six directions") {
        GrowingDomain dom = frozen(50.0);
        WalkState st{pz(0, 0, 0), 0, RngStream(101, 0)};
        std::vector<int64_t> counts(6, 0);
        for (int i = 0; i < 60000; ++i) {
            st.position = pz(0, 0, 0);
            st.time = 0;
            step_walk(st, dom);
            for (int axis = 0; axis < 3; ++axis) {
                if (st.position[axis] == 1) counts[static_cast<size_t>(2 * axis)]++;
                if (st.position[axis] == -1) counts[static_cast<size_t>(2 * axis + 1)]++;
            }
        }
        CHECK(chi_square_uniform(counts).p_value > 0.001);
    }
    SUBCASE("corner site with three neighbors") {
        GrowingDomain dom = frozen(1.8);  // (1,1,1) has neighbors (0,1,1),(1,0,1),(1,1,0)
        WalkState st{pz(1, 1, 1), 0, RngStream(102, 0)};
        std::vector<int64_t> counts(3, 0);
        for (int i = 0; i < 30000; ++i) {
            st.position = pz(1, 1, 1);
            st.time = 0;
            step_walk(st, dom);
            if (st.position == pz(0, 1, 1)) counts[0]++;
            else if (st.position == pz(1, 0, 1)) counts[1]++;
            else if (st.position == pz(1, 1, 0)) counts[2]++;
            else FAIL("stepped outside the frozen domain");
        }
        CHECK(chi_square_uniform(counts).p_value > 0.001);
    }
}

TEST_CASE("the step consults the domain at t+1") {
    // Radius jumps 1.5 -> 1.8 at t = 1, opening (1,1,1) and (1,1,-1) as
    // neighbors of (1,1,0) exactly when the first step is taken.
    GrowingDomain dom(StarDomain::ball(3, 1.0), ScaleFunction::piecewise({0.0, 1.0}, {1.5, 1.8}),
                      GrowingDomain::Mode::Lattice, false);
    REQUIRE_FALSE(dom.contains(0.0, pz(1, 1, 1)));
    REQUIRE(dom.contains(1.0, pz(1, 1, 1)));
    bool saw_new_site = false;
    for (uint64_t rep = 0; rep < 200; ++rep) {
        WalkState st{pz(1, 1, 0), 0, RngStream(103, rep)};
        step_walk(st, dom);
        if (st.position == pz(1, 1, 1) || st.position == pz(1, 1, -1)) saw_new_site = true;
    }
    CHECK(saw_new_site);
}

TEST_CASE("horizon zero") {
    GrowingDomain dom = frozen(5.0);
    auto log_same = run_walk(dom, pz(0, 0, 0), pz(0, 0, 0), 0, 1);
    REQUIRE(log_same.visit_times.size() == 1);
    CHECK(log_same.visit_times[0] == 0);
    auto log_other = run_walk(dom, pz(1, 0, 0), pz(0, 0, 0), 0, 1);
    CHECK(log_other.visit_times.empty());
}

TEST_CASE("isolated vertex aborts with a flagged record") {
    GrowingDomain dom = frozen(0.9);  // the origin alone
    auto log = run_walk(dom, pz(0, 0, 0), pz(0, 0, 0), 10, 1);
    CHECK(log.aborted_isolated);
    CHECK(log.abort_time == 0);
}

TEST_CASE("reproducibility: identical seeds give identical logs") {
    GrowingDomain dom(StarDomain::ball(3, 1.0), ScaleFunction::power(1.0, 0.3),
                      GrowingDomain::Mode::Lattice);
    auto a = run_walk(dom, pz(0, 0, 0), pz(0, 0, 0), 20000, 42, 7);
    auto b = run_walk(dom, pz(0, 0, 0), pz(0, 0, 0), 20000, 42, 7);
    CHECK(a.visit_times == b.visit_times);
    CHECK(a.final_position == b.final_position);
    auto c = run_walk(dom, pz(0, 0, 0), pz(0, 0, 0), 20000, 42, 8);
    CHECK(a.visit_times != c.visit_times);  // different replica stream
}

TEST_CASE("visit parity matches the l1 distance") {
    GrowingDomain dom(StarDomain::ball(3, 1.0), ScaleFunction::power(1.0, 0.25),
                      GrowingDomain::Mode::Lattice);
    for (const PointZ& target : {pz(0, 0, 0), pz(1, 0, 0), pz(1, 1, 0)}) {
        auto log = run_walk(dom, pz(0, 0, 0), target, 50000, 11, 3);
        int64_t parity = target.norm1() % 2;
        for (int64_t t : log.visit_times) CHECK(t % 2 == parity);
    }
}

TEST_CASE("domain confinement along the path") {
    GrowingDomain dom(StarDomain::ball(3, 1.0), ScaleFunction::power(1.0, 0.3),
                      GrowingDomain::Mode::Lattice);
    WalkState st{pz(0, 0, 0), 0, RngStream(55, 0)};
    for (int i = 0; i < 20000; ++i) {
        step_walk(st, dom);
        CHECK(dom.contains(static_cast<double>(st.time), st.position));
    }
}

TEST_CASE("seven-point fixture matches its exact occupation law") {
    // B_1.2 keeps exactly the origin and the six unit vectors.
    GrowingDomain dom = frozen(1.2);
    REQUIRE(dom.lattice_sites(0.0).size() == 7);

    // Exact Cesaro occupation of the origin from the 7-state chain.
    std::array<double, 7> p{};  // index 0 = origin, 1..6 = leaves
    p[0] = 1.0;
    const int64_t horizon = 20000;
    double occupation = 0.0;
    for (int64_t t = 1; t <= horizon; ++t) {
        std::array<double, 7> q{};
        for (int leaf = 1; leaf < 7; ++leaf) {
            q[static_cast<size_t>(leaf)] += p[0] / 6.0;  // origin spreads out
            q[0] += p[static_cast<size_t>(leaf)];        // leaves return
        }
        p = q;
        occupation += p[0];
    }
    double exact_freq = occupation / static_cast<double>(horizon);

    // Empirical frequency over independent replicas.
    const int replicas = 24;
    std::vector<double> freqs;
    for (int rep = 0; rep < replicas; ++rep) {
        auto log = run_walk(dom, pz(0, 0, 0), pz(0, 0, 0), horizon, 2024,
                            static_cast<uint64_t>(rep));
        // Visits at t >= 1 (the start does not count as a return).
        freqs.push_back(static_cast<double>(log.visit_times.size() - 1) / horizon);
    }
    double mean = 0;
    for (double f : freqs) mean += f;
    mean /= replicas;
    double var = 0;
    for (double f : freqs) var += (f - mean) * (f - mean);
    double se = std::sqrt(var / (replicas - 1) / replicas);
    CHECK(std::abs(mean - exact_freq) <= 3.0 * se + 1e-4);
}

TEST_CASE("hit_origin_probability basics") {
    auto est = hit_origin_probability(StarDomain::ball(3, 1.0), 6.0, pz(3, 0, 0), 0, 500, 9);
    CHECK(est.successes == 0);  // T = 0 and start != origin
    CHECK_THROWS(hit_origin_probability(StarDomain::ball(3, 1.0), 6.0, pz(0, 0, 0), 10, 10, 9));
    CHECK_THROWS(hit_origin_probability(StarDomain::ball(3, 1.0), 6.0, pz(99, 0, 0), 10, 10, 9));
}

TEST_CASE("exit time mean matches the linear-solve oracle") {
    const double a = 10.0;
    auto samples = exit_time_samples(StarDomain::ball(3, 1.0), a, pz(0, 0, 0), 3000, 77,
                                     ExitStatistic::ExitBall, 0.0, 2);
    double mean = 0;
    for (double s : samples) mean += s;
    mean /= static_cast<double>(samples.size());

    GrowingDomain dom(StarDomain::ball(3, 1.0), ScaleFunction::constant(a),
                      GrowingDomain::Mode::Lattice);
    auto sol = discrete_hit_solve(dom, 0.0, pz(0, 0, 0), SolveMode::ExpectedExitTime, a);
    double oracle = sol.at(pz(0, 0, 0)) / (a * a);
    CHECK(std::abs(mean - oracle) / oracle < 0.15);
}

TEST_CASE("return-time samples support the inner-hit statistic") {
    const double a = 8.0;
    PointZ start = pz(7, 0, 0);  // outside B_a/2, inside the domain B_16
    auto samples = exit_time_samples(StarDomain::ball(3, 1.0), a, start, 500, 78,
                                     ExitStatistic::HitInnerBall, a / 2, 2);
    for (double s : samples) CHECK(s > 0.0);
}
