#pragma once

#include <cstdint>
#include <vector>

#include "gdlab/geometry.hpp"
#include "gdlab/rng.hpp"
#include "gdlab/stats.hpp"
#include "gdlab/vec.hpp"

namespace gdlab {

/// State of one discrete-time walk: replica-deterministic stream included.
struct WalkState {
    PointZ position;
    int64_t time = 0;
    RngStream rng;
};

/// Visit record of a single walk replica.
struct VisitLog {
    PointZ target;
    std::vector<int64_t> visit_times;  // strictly increasing, <= horizon
    int64_t horizon = 0;
    PointZ final_position;
    bool aborted_isolated = false;  // walker ran out of moves (geometry bug guard)
    int64_t abort_time = -1;
};

/// One step: choose uniformly among the neighbors available in the domain
/// at time t+1 (the walk consults the grown domain, not the current one).
/// Throws IsolatedVertexError when no move exists.
template <class Domain>
void step_walk(WalkState& st, const Domain& dom) {
    PointZ buf[2 * kMaxDim];
    int n = dom.lattice_neighbors_into(static_cast<double>(st.time + 1), st.position, buf);
    if (n == 0) throw IsolatedVertexError("step: no admissible move");
    st.position = buf[st.rng.below(static_cast<uint32_t>(n))];
    ++st.time;
}

/// Runs a walk for `horizon` steps from `start`, recording every time the
/// position equals `target` (including step 0). Deterministic given
/// (master_seed, replica) and the inputs; an isolated vertex aborts the
/// replica with a flagged record instead of throwing.
template <class Domain>
VisitLog run_walk_on(const Domain& dom, const PointZ& start, const PointZ& target, int64_t horizon,
                     uint64_t master_seed, uint64_t replica) {
    if (!dom.contains(0.0, start)) throw std::invalid_argument("run_walk: start not in domain");
    VisitLog log;
    log.target = target;
    log.horizon = horizon;
    WalkState st{start, 0, RngStream(master_seed, replica)};
    if (st.position == target) log.visit_times.push_back(0);
    PointZ buf[2 * kMaxDim];
    while (st.time < horizon) {
        int n = dom.lattice_neighbors_into(static_cast<double>(st.time + 1), st.position, buf);
        if (n == 0) {
            log.aborted_isolated = true;
            log.abort_time = st.time;
            break;
        }
        st.position = buf[st.rng.below(static_cast<uint32_t>(n))];
        ++st.time;
        if (st.position == target) log.visit_times.push_back(st.time);
    }
    log.final_position = st.position;
    return log;
}

VisitLog run_walk(const GrowingDomain& dom, const PointZ& start, const PointZ& target,
                  int64_t horizon, uint64_t master_seed, uint64_t replica = 0);

/// Monte Carlo estimate of P_start(exists s <= T : Z_s = 0) for the walk on
/// the frozen domain a*K (lattice convention applies), with a Wilson CI.
/// Rejects starts outside the domain or at the origin.
BinomialEstimate hit_origin_probability(const StarDomain& shape, double a, const PointZ& start,
                                        int64_t T, int replicas, uint64_t master_seed,
                                        int workers = 1);

enum class ExitStatistic {
    ExitBall,      // tau(a): first step with |Z| >= a
    HitInnerBall,  // sigma(a, r): first step with |Z| <= r
};

/// i.i.d. samples of tau(a)/a^2 (or sigma(a,r)/a^2) for the walk on the
/// frozen domain a*K. The domain must strictly contain B_a for ExitBall to
/// be reachable (the lattice convention K >= B_2 guarantees it).
std::vector<double> exit_time_samples(const StarDomain& shape, double a, const PointZ& start,
                                      int replicas, uint64_t master_seed,
                                      ExitStatistic stat = ExitStatistic::ExitBall,
                                      double inner_r = 0.0, int workers = 1,
                                      int64_t step_cap = 0);

}  // namespace gdlab
