#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gdlab/config.hpp"
#include "gdlab/geometry.hpp"
#include "gdlab/scale.hpp"
#include "gdlab/stats.hpp"

namespace gdlab {

enum class ExperimentKind { Srw, Rbm };
enum class Trend { Growing, Plateau, Inconclusive };

std::string to_string(Trend t);
std::string to_string(DivergenceVerdict::Verdict v);

/// Thresholds standing in for "finitely often" vs "infinitely often" --
/// engineering conventions, reported with every verdict.
struct TrendThresholds {
    double growth_factor = 1.5;   // median growth between middle and last horizon
    double plateau_delta = 1.0;   // max per-replica count increase for a plateau
    double plateau_fraction = 0.8;
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::Srw;
    int d = 3;
    StarDomain shape = StarDomain::ball(3, 1.0);
    ScaleFunction scale = ScaleFunction::power(1.0, 0.5);
    std::vector<double> horizons;  // strictly increasing
    int replicas = 20;
    uint64_t master_seed = 1;
    std::string out_dir;
    int workers = 1;
    TrendThresholds thresholds;
    double epsilon = 0.1;    // rbm recurrence threshold
    double dt_base = 1e-4;   // rbm step scale

    void validate() const;
};

struct HorizonStats {
    double horizon = 0;
    MedianCI count_ci;
    std::vector<int64_t> counts;  // per replica
};

struct PhaseVerdict {
    DivergenceVerdict j;
    Trend trend = Trend::Inconclusive;
    std::optional<bool> consistent;  // defined only when both sides are decisive
    std::vector<HorizonStats> per_horizon;
    TrendThresholds thresholds;
};

/// Pure trend classifier over per-horizon replica counts (unit-testable on
/// synthetic aggregates). counts[h][r] = visit/excursion count of replica r
/// at horizon h.
Trend classify_trend(const std::vector<std::vector<int64_t>>& counts,
                     const TrendThresholds& thresholds);

/// Conjecture check: Divergent profiles should grow, Finite should plateau.
std::optional<bool> verdict_consistent(DivergenceVerdict::Verdict j, Trend trend);

/// Runs replicas at every horizon (one checkpointed run per replica) and
/// classifies the visit/excursion trend. Writes srw_visits.csv or
/// rbm_excursions.csv plus phase.plot.csv and verdict.json into out_dir
/// when it is non-empty.
PhaseVerdict phase_experiment(const ExperimentConfig& cfg);

/// Least-squares exponential-tail fit of normalized stopping times,
/// delegating to tail_fit; emits tail.plot.csv when out_dir is set.
TailFit tail_fit_experiment(const std::vector<double>& samples, const std::vector<double>& t_grid,
                            const std::string& out_dir);

/// KS distances between the rescaled walk exit-time law from B_{a/2} in
/// a*K and the reflected-diffusion exit-time law from B_{1/2} in K, per a.
/// Walk steps convert to diffusion time via kappa = 1/d (the per-coordinate
/// step variance of the lattice walk).
struct InvarianceResult {
    std::vector<double> a_values;
    std::vector<double> ks_distances;
    int inversions = 0;  // increases along the sequence
};
InvarianceResult invariance_check(const StarDomain& shape, const std::vector<double>& a_list,
                                  int replicas, uint64_t master_seed, int workers = 1,
                                  double rbm_dt = 1e-4);

/// Runs the same walk replicas against several targets and tests
/// homogeneity of the "visited at least k times" frequency across targets.
/// All targets must share the l1 parity of the start.
struct TargetIndependenceResult {
    std::vector<PointZ> targets;
    std::vector<int64_t> hit_counts;  // replicas with >= k visits, per target
    int64_t replicas = 0;
    int64_t k_threshold = 0;
    ChiSquareResult homogeneity;
};
TargetIndependenceResult target_independence(const ExperimentConfig& cfg,
                                             const std::vector<PointZ>& targets,
                                             int64_t horizon_steps, int64_t k_threshold);

/// Shared emission of per-replica walk records (srw_visits.csv schema).
struct SrwReplicaRecord {
    int64_t replica = 0;
    uint64_t seed = 0;
    int64_t horizon = 0;
    int64_t n_visits = 0;
    int64_t last_visit = -1;
    double final_r = 0.0;
};
std::string srw_visits_csv(const std::vector<SrwReplicaRecord>& records);

}  // namespace gdlab
