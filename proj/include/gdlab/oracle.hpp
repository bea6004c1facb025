#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "gdlab/geometry.hpp"
#include "gdlab/vec.hpp"

namespace gdlab {

/// Probability that Brownian motion started at radius r in the ball B_a
/// enters B_eps before first touching the outer boundary:
///     (r^(2-d) - a^(2-d)) / (eps^(2-d) - a^(2-d)).
/// Requires eps <= r <= a and d >= 3.
double continuous_hit_prob(double r, double eps, double a, int d);

/// Per-excursion success probability b_eps(a/2 e1): the chance one
/// out-and-back excursion between radius a/2 and the outer boundary dips
/// into B_eps, so the number of excursions before the first entry into
/// B_eps is geometric with this parameter.
double excursion_rate(double a, double eps, int d);

/// Indexed site set of a frozen lattice domain, restricted to the
/// connected component of a root site, with per-site in-domain neighbor
/// lists in canonical order.
struct LatticeGraph {
    std::vector<PointZ> sites;
    std::unordered_map<PointZ, int32_t, PointZHash> index;
    std::vector<std::array<int32_t, 2 * kMaxDim>> neighbors;  // -1 padded
    std::vector<int32_t> degree;

    static LatticeGraph build(const GrowingDomain& dom, double t, const PointZ& root);
    int32_t at(const PointZ& p) const {
        auto it = index.find(p);
        return it == index.end() ? -1 : it->second;
    }
};

enum class SolveMode { BeforeExit, ExpectedExitTime };
enum class SolveMethod { ConjugateGradient, DenseLU };

/// Solution of a discrete harmonic system on a frozen lattice domain.
struct HitSolveResult {
    LatticeGraph graph;
    std::vector<double> value;
    double residual_max = 0.0;
    SolveMethod method = SolveMethod::ConjugateGradient;
    int iterations = 0;

    double at(const PointZ& p) const;
};

/// Solves on the walk's graph (confined to the domain):
///   BeforeExit:       h = neighbor average, h(target) = 1, h = 0 on the
///                     exit set {|x| >= exit_radius}; with no exit set the
///                     confined chain gives h == 1.
///   ExpectedExitTime: m = 1 + neighbor average, m = 0 on the exit set
///                     (exit set required).
/// Residual of the returned solution is verified to <= 1e-10 in max norm.
/// Throws if the target/exit configuration is degenerate.
HitSolveResult discrete_hit_solve(const GrowingDomain& dom, double t, const PointZ& target,
                                  SolveMode mode, double exit_radius = -1.0,
                                  int dense_threshold = 1500);

/// Exact finite-horizon hitting probability P_start(exists s <= T: Z_s =
/// target) for the confined walk, by forward propagation on the absorbing
/// chain (the power-method companion of discrete_hit_solve).
double discrete_hit_by_time(const GrowingDomain& dom, double t, const PointZ& target,
                            const PointZ& start, int64_t T);

}  // namespace gdlab
