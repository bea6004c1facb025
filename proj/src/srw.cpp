#include "gdlab/srw.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "gdlab/parallel.hpp"

namespace gdlab {

VisitLog run_walk(const GrowingDomain& dom, const PointZ& start, const PointZ& target,
                  int64_t horizon, uint64_t master_seed, uint64_t replica) {
    return run_walk_on(dom, start, target, horizon, master_seed, replica);
}

BinomialEstimate hit_origin_probability(const StarDomain& shape, double a, const PointZ& start,
                                        int64_t T, int replicas, uint64_t master_seed,
                                        int workers) {
    GrowingDomain dom(shape, ScaleFunction::constant(a), GrowingDomain::Mode::Lattice);
    if (!dom.contains(0.0, start)) throw std::invalid_argument("hit_origin: start outside domain");
    PointZ origin = PointZ::zero(start.d);
    if (start == origin) throw std::invalid_argument("hit_origin: start must differ from origin");

    std::atomic<int64_t> hits{0};
    parallel_for(replicas, workers, [&](int64_t rep) {
        WalkState st{start, 0, RngStream(master_seed, static_cast<uint64_t>(rep))};
        PointZ buf[2 * kMaxDim];
        bool hit = false;
        while (st.time < T) {
            int n = dom.lattice_neighbors_into(0.0, st.position, buf);
            if (n == 0) throw IsolatedVertexError("hit_origin: isolated vertex");
            st.position = buf[st.rng.below(static_cast<uint32_t>(n))];
            ++st.time;
            if (st.position == origin) {
                hit = true;
                break;
            }
        }
        if (hit) hits.fetch_add(1);
    });

    BinomialEstimate est;
    est.successes = hits.load();
    est.trials = replicas;
    est.ci = wilson_interval(est.successes, est.trials);
    return est;
}

std::vector<double> exit_time_samples(const StarDomain& shape, double a, const PointZ& start,
                                      int replicas, uint64_t master_seed, ExitStatistic stat,
                                      double inner_r, int workers, int64_t step_cap) {
    GrowingDomain dom(shape, ScaleFunction::constant(a), GrowingDomain::Mode::Lattice);
    if (!dom.contains(0.0, start)) throw std::invalid_argument("exit_time: start outside domain");
    if (dom.shape().inner_radius() * a <= a && stat == ExitStatistic::ExitBall)
        throw std::invalid_argument("exit_time: domain must strictly contain B_a");
    if (stat == ExitStatistic::HitInnerBall && inner_r <= 0)
        throw std::invalid_argument("exit_time: HitInnerBall needs inner_r > 0");
    if (step_cap <= 0) step_cap = static_cast<int64_t>(400.0 * a * a) + 1000;

    const double a2 = a * a;
    const double r2 = inner_r * inner_r;
    std::vector<double> samples(static_cast<size_t>(replicas));
    parallel_for(replicas, workers, [&](int64_t rep) {
        WalkState st{start, 0, RngStream(master_seed, static_cast<uint64_t>(rep))};
        PointZ buf[2 * kMaxDim];
        int64_t stopped = -1;
        while (st.time < step_cap) {
            int n = dom.lattice_neighbors_into(0.0, st.position, buf);
            if (n == 0) throw IsolatedVertexError("exit_time: isolated vertex");
            st.position = buf[st.rng.below(static_cast<uint32_t>(n))];
            ++st.time;
            double n2 = static_cast<double>(st.position.norm2());
            if (stat == ExitStatistic::ExitBall ? (n2 >= a2) : (n2 <= r2)) {
                stopped = st.time;
                break;
            }
        }
        // A capped replica reports the cap; the exponential tail makes this
        // astronomically rare at the default cap of 400 a^2.
        samples[static_cast<size_t>(rep)] = static_cast<double>(stopped < 0 ? step_cap : stopped) / a2;
    });
    return samples;
}

}  // namespace gdlab
