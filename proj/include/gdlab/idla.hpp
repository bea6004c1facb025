#pragma once

#include <cstdint>
#include <functional>
#include <unordered_map>
#include <vector>

#include "gdlab/srw.hpp"
#include "gdlab/vec.hpp"

namespace gdlab {

/// Injection intensity lambda(t), bounded away from zero on its support.
/// Constant and power-law forms invert their cumulative exactly, so
/// arrivals are sampled without thinning.
struct LambdaProfile {
    enum class Kind { Constant, PowerLaw };
    Kind kind = Kind::Constant;
    double rate = 1.0;           // Constant: lambda == rate
    double coef = 1.0, expo = 0.0;  // PowerLaw: lambda(t) = coef * t^expo

    static LambdaProfile constant(double rate);
    static LambdaProfile power_law(double coef, double expo);

    double intensity(double t) const;
    /// g(t) = integral of lambda over [0, t].
    double cumulative(double t) const;
    /// Smallest t with cumulative(t) = g.
    double invert_cumulative(double g) const;
};

/// Frozen realization of the aggregation environment: settle times of all
/// occupied sites plus the injection record.
struct IdlaTimeline {
    int d = 3;
    double v = 1.0;  // walker jump rate of the growth particles
    double horizon = 0.0;
    LambdaProfile lambda;
    std::unordered_map<PointZ, double, PointZHash> settle_time;
    std::vector<double> settle_times_sorted;   // event times, increasing
    std::vector<double> injection_times;       // increasing

    int64_t settled_count(double t) const;     // M_t
    int64_t injected_count(double t) const;    // N_t
    bool occupied(const PointZ& site, double t) const;

    /// Growing-domain view for a tracked walker (one step per unit time):
    /// membership at time t means settled by t.
    bool contains(double t, const PointZ& y) const { return occupied(y, t); }
    int lattice_neighbors_into(double t, const PointZ& y, PointZ* out) const;
};

/// Event-driven growth: Poisson injections at the origin, each particle an
/// independent rate-v nearest-neighbor walk that settles at the first site
/// outside the current cluster. Stops at the horizon or after max_settles
/// settles (whichever first; max_settles <= 0 means unlimited).
IdlaTimeline grow(const LambdaProfile& lambda, double v, double horizon, int d, uint64_t seed,
                  int64_t max_settles = -1);

/// Radius of the ball of unit volume in dimension d.
double unit_volume_ball_radius(int d);

/// Inner/outer radii of the cluster in units of kappa_d M^(1/d).
struct ShapeDeviation {
    double inner_ratio = 0.0;
    double outer_ratio = 0.0;
    int64_t m = 0;
};
ShapeDeviation shape_deviation(const IdlaTimeline& tl, double t);

/// Exact integral of max(M_t, 1)^(-1) over [1, horizon]; `floored` flags a
/// stretch where the cluster was still empty.
struct JRandomResult {
    double value = 0.0;
    bool floored = false;
};
JRandomResult j_random(const IdlaTimeline& tl);

/// sup{u : g(t - c u^(2/d)) >= u} by bisection; c = 0 gives g(t).
double u_solver(const std::function<double(double)>& g, double c, int d, double t,
                double tol = 1e-9);

/// Tracked walker on the frozen growth realization (independent of it):
/// one step per unit time against the settled set.
VisitLog srw_on_idla(const IdlaTimeline& tl, const PointZ& target, int64_t horizon_steps,
                     uint64_t master_seed, uint64_t replica = 0);

}  // namespace gdlab
