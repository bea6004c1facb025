#pragma once

#include <cstdint>
#include <vector>

#include "gdlab/geometry.hpp"
#include "gdlab/rng.hpp"
#include "gdlab/stats.hpp"
#include "gdlab/vec.hpp"

namespace gdlab {

enum class Scheme { MovingDomain, RescaledFixedDomain };

/// Configuration of one reflected-diffusion replica.
///
/// The step size adapts to the diffusive scale of the current domain:
/// dt = dt_base * f(t)^2, so spatial accuracy is uniform across growth.
struct DiffusionConfig {
    GrowingDomain dom;
    Scheme scheme = Scheme::MovingDomain;
    double dt_base = 1e-4;
    double horizon = 1.0;
    double epsilon = 0.1;  // inner radius for recurrence detection, < 1/2
    PointR start;          // empty -> origin
    uint64_t master_seed = 0;
    uint64_t replica = 0;
    int k_max = 12;          // reflection projection iterations per step
    int max_halvings = 16;   // dt halvings before a replica is abandoned
    bool record_trajectory = false;
    double record_dt = 0.0;  // spacing of stored samples (0 = every step)

    void validate() const;
};

/// Interleaved recurrence stopping times: tau enters B_eps, sigma escapes
/// past radius 1/2; sigma0 is the first time the domain covers B_eps.
struct ExcursionLog {
    double sigma0 = 0.0;
    std::vector<double> tau_times;
    std::vector<double> sigma_times;
    int64_t completed_excursions = 0;
    bool truncated = false;  // an excursion was still open at the horizon
    bool valid = true;       // false when step-size rescue hit its floor
};

struct Trajectory {
    std::vector<double> times;
    std::vector<PointR> positions;
    std::vector<double> radii() const;
};

struct RbmRun {
    ExcursionLog log;
    Trajectory traj;  // populated only when record_trajectory is set
    double pushed_length = 0.0;
    bool f_prime_sq_integrable = true;
    PointR final_position;
};

/// Pushes a proposal back into D_t along the inward normal, mirror-style
/// (exact radial mirror on balls). Fails after k_max iterations.
struct ReflectOutcome {
    PointR x;
    double push_len = 0.0;
    bool ok = true;
    bool touched_boundary = false;
};
ReflectOutcome reflect_into(const GrowingDomain& dom, double t, PointR proposal, int k_max);
ReflectOutcome reflect_into_shape(const StarDomain& shape, PointR proposal, int k_max);

/// Moving-domain Euler step: propose x + dW and reflect into D_{t_next}.
ReflectOutcome reflected_step(const PointR& x, double t_next, const PointR& dW,
                              const DiffusionConfig& cfg);

/// Fixed-domain rescaled step: x + dU/f(t) - (f'(t)/f(t)) x dt with normal
/// reflection at the shape boundary.
ReflectOutcome rescaled_step(const PointR& x, double t, double dt, const PointR& dU,
                             const DiffusionConfig& cfg);

/// Common shrinkage at a jump of f: eta = f(t-)/f(t) in (0,1).
PointR apply_jump(const PointR& x, double eta);

/// Simulates one replica to the horizon, extracting the recurrence
/// stopping times (thresholds applied to |W_t|, or |X_t| f(t) for the
/// rescaled scheme).
RbmRun run_rbmg(const DiffusionConfig& cfg);

/// Excursions of a stored trajectory between radius a and a/2:
/// sigma_0 = 0, tau_k = first boundary contact after sigma_{k-1},
/// sigma_k = first return to B_{a/2}; lengths L_k = sigma_{k+1} - sigma_k.
struct ExcursionDecomposition {
    std::vector<double> sigma_times;  // starts at sigma_0 = 0
    std::vector<double> tau_times;
    std::vector<double> lengths;
    bool open_record = false;
};
ExcursionDecomposition excursion_decomposition(const Trajectory& traj, double a);

/// Counts out-and-back excursion cycles of the frozen-ball process and how
/// many dip into B_eps, for comparison with the geometric law.
struct GeometricExcursionStats {
    int64_t cycles = 0;
    int64_t hits = 0;
    double mean_cycles_per_hit = 0.0;
};
GeometricExcursionStats geometric_excursion_trial(double a, double eps, int d,
                                                  int64_t target_cycles, double dt,
                                                  uint64_t master_seed);

/// First boundary-contact times of the frozen-ball process on B_a started
/// at the origin (before the first contact the path is free, so this
/// samples the exit-time law of the ball).
std::vector<double> rbm_contact_time_samples(double a, int d, double dt, int replicas,
                                             uint64_t master_seed, int workers = 1);

/// Monte Carlo curve of P(exists s <= T: |Z_s| < eps) on the frozen ball
/// B_a, starts uniform on the sphere of radius r_start.
struct HittingCurve {
    std::vector<double> T_grid;
    std::vector<BinomialEstimate> estimates;
};
HittingCurve ball_hitting_curve(double a, double eps, double r_start,
                                const std::vector<double>& T_grid, int replicas, int d,
                                double dt_base, uint64_t master_seed, int workers = 1);

}  // namespace gdlab
