#pragma once

#include <cstdint>
#include <vector>

#include "gdlab/geometry.hpp"
#include "gdlab/scale.hpp"
#include "gdlab/vec.hpp"

namespace gdlab {

/// The orthogonal matrix acting as the identity on span{x,y}-perp and
/// rotating x to y within span{x,y}. Requires |x| = |y| within tol*|x|.
/// Antiparallel inputs rotate by pi in the plane of x and the
/// lowest-index coordinate axis not aligned with x.
MatD rotation_matrix(const PointR& x, const PointR& y, double tol = 1e-9);

enum class CouplingScenario { Nested, SameBall };

struct CoupleConfig {
    int d = 3;
    double dt = 1e-4;
    double horizon = 10.0;
    uint64_t master_seed = 0;
    uint64_t replica = 0;
    /// Radius whose first exit time of the second process is recorded
    /// (<= 0 disables recording).
    double exit_record_radius = 0.0;
};

/// Trace of one coupled pair: the radial gap psi_t = |W2| - |W1| is the
/// monitored invariant, phases alternate Independent -> Mirrored at the
/// first discrete step with psi <= 0 and back at outer-boundary contact.
struct CoupledTrace {
    double min_psi = 0.0;
    int n_phase_switches = 0;
    std::vector<double> switch_times;  // eta_1, tau_1, eta_2, ...
    double outer_exit_time = -1.0;     // first exit of W2 from the recorded radius
    double final_psi = 0.0;
    bool mirrored_at_end = false;
};

/// Part (a) run: inner process on B_{g(t)}, outer on B_{c g(t)}; after the
/// radii meet, the outer path is the rotated image of the inner driver's
/// free path until it contacts its own boundary.
CoupledTrace coupled_run_nested(const ScaleFunction& g, double c, const PointR& x1,
                                const PointR& x2, const CoupleConfig& cfg);

/// Part (b) run: both processes on B_{g(t)}; after the radii meet the
/// second path is the rotated image of the first, so psi == 0 thereafter.
CoupledTrace coupled_run_same_ball(const ScaleFunction& g, const PointR& x1, const PointR& x2,
                                   const CoupleConfig& cfg);

/// Uncoupled reference: exit time of a single reflected path on B_{g(t)}
/// from the given radius (for marginal-preservation checks).
double single_rbm_exit_time(const ScaleFunction& g, const PointR& start, double exit_radius,
                            const CoupleConfig& cfg);

}  // namespace gdlab
