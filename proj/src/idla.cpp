#include "gdlab/idla.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "gdlab/rng.hpp"

namespace gdlab {

LambdaProfile LambdaProfile::constant(double rate) {
    if (rate <= 0) throw std::invalid_argument("lambda: rate must be positive");
    LambdaProfile p;
    p.kind = Kind::Constant;
    p.rate = rate;
    return p;
}

LambdaProfile LambdaProfile::power_law(double coef, double expo) {
    if (coef <= 0 || expo < 0) throw std::invalid_argument("lambda: bad power-law parameters");
    LambdaProfile p;
    p.kind = Kind::PowerLaw;
    p.coef = coef;
    p.expo = expo;
    return p;
}

double LambdaProfile::intensity(double t) const {
    return kind == Kind::Constant ? rate : coef * std::pow(t, expo);
}

double LambdaProfile::cumulative(double t) const {
    if (t <= 0) return 0.0;
    return kind == Kind::Constant ? rate * t : coef * std::pow(t, expo + 1.0) / (expo + 1.0);
}

double LambdaProfile::invert_cumulative(double g) const {
    if (g <= 0) return 0.0;
    if (kind == Kind::Constant) return g / rate;
    return std::pow(g * (expo + 1.0) / coef, 1.0 / (expo + 1.0));
}

int64_t IdlaTimeline::settled_count(double t) const {
    auto it = std::upper_bound(settle_times_sorted.begin(), settle_times_sorted.end(), t);
    return it - settle_times_sorted.begin();
}

int64_t IdlaTimeline::injected_count(double t) const {
    auto it = std::upper_bound(injection_times.begin(), injection_times.end(), t);
    return it - injection_times.begin();
}

bool IdlaTimeline::occupied(const PointZ& site, double t) const {
    auto it = settle_time.find(site);
    return it != settle_time.end() && it->second <= t;
}

int IdlaTimeline::lattice_neighbors_into(double t, const PointZ& y, PointZ* out) const {
    int n = 0;
    for (int i = 0; i < d; ++i) {
        PointZ p = y.shifted(i, +1);
        if (occupied(p, t)) out[n++] = p;
        PointZ m = y.shifted(i, -1);
        if (occupied(m, t)) out[n++] = m;
    }
    return n;
}

namespace {

struct Event {
    double time;
    int64_t seq;     // ties broken by creation order, for determinism
    int64_t particle;  // -1 for the next-injection marker
    bool operator>(const Event& o) const {
        return time > o.time || (time == o.time && seq > o.seq);
    }
};

}  // namespace

IdlaTimeline grow(const LambdaProfile& lambda, double v, double horizon, int d, uint64_t seed,
                  int64_t max_settles) {
    if (v <= 0) throw std::invalid_argument("grow: jump rate must be positive");
    if (horizon <= 0) throw std::invalid_argument("grow: horizon must be positive");

    IdlaTimeline tl;
    tl.d = d;
    tl.v = v;
    tl.horizon = horizon;
    tl.lambda = lambda;

    RngStream rng(seed, 0);
    std::priority_queue<Event, std::vector<Event>, std::greater<Event>> queue;
    std::vector<PointZ> particle_pos;  // in-flight positions
    std::vector<char> particle_done;
    int64_t seq = 0;

    auto exp_draw = [&](double mean) { return -mean * std::log(1.0 - rng.next_unit()); };

    // First injection: solve g(t) = Exp(1).
    double g_next = exp_draw(1.0);
    double t_inject = lambda.invert_cumulative(g_next);
    if (t_inject <= horizon) queue.push({t_inject, seq++, -1});

    while (!queue.empty()) {
        Event ev = queue.top();
        queue.pop();
        if (ev.time > horizon) break;

        if (ev.particle < 0) {
            // Injection at the origin.
            tl.injection_times.push_back(ev.time);
            PointZ origin = PointZ::zero(d);
            int64_t pid = static_cast<int64_t>(particle_pos.size());
            particle_pos.push_back(origin);
            particle_done.push_back(0);
            if (!tl.occupied(origin, ev.time)) {
                // Empty cluster (or hole at the origin): settle immediately.
                tl.settle_time.emplace(origin, ev.time);
                tl.settle_times_sorted.push_back(ev.time);
                particle_done.back() = 1;
                if (max_settles > 0 &&
                    static_cast<int64_t>(tl.settle_times_sorted.size()) >= max_settles)
                    break;
            } else {
                queue.push({ev.time + exp_draw(1.0 / v), seq++, pid});
            }
            // Schedule the next injection.
            g_next += exp_draw(1.0);
            double t_next = lambda.invert_cumulative(g_next);
            if (t_next <= horizon) queue.push({t_next, seq++, -1});
            continue;
        }

        // Walker jump.
        size_t pid = static_cast<size_t>(ev.particle);
        if (particle_done[pid]) continue;
        PointZ& pos = particle_pos[pid];
        int axis = static_cast<int>(rng.below(static_cast<uint32_t>(d)));
        int sign = rng.below(2) ? 1 : -1;
        pos = pos.shifted(axis, sign);
        if (!tl.occupied(pos, ev.time)) {
            tl.settle_time.emplace(pos, ev.time);
            tl.settle_times_sorted.push_back(ev.time);
            particle_done[pid] = 1;
            if (max_settles > 0 &&
                static_cast<int64_t>(tl.settle_times_sorted.size()) >= max_settles)
                break;
        } else {
            queue.push({ev.time + exp_draw(1.0 / v), seq++, ev.particle});
        }
    }
    return tl;
}

double unit_volume_ball_radius(int d) {
    // vol(B_r) = pi^(d/2) r^d / Gamma(d/2 + 1) = 1.
    double log_vol1 = 0.5 * d * std::log(M_PI) - std::lgamma(0.5 * d + 1.0);
    return std::exp(-log_vol1 / d);
}

ShapeDeviation shape_deviation(const IdlaTimeline& tl, double t) {
    ShapeDeviation dev;
    dev.m = tl.settled_count(t);
    if (dev.m < 1) throw std::invalid_argument("shape_deviation: empty cluster");
    double scale = unit_volume_ball_radius(tl.d) * std::pow(static_cast<double>(dev.m), 1.0 / tl.d);

    // Outer radius: farthest settled site.
    double max_n2 = 0.0;
    for (const auto& [site, st] : tl.settle_time) {
        if (st > t) continue;
        max_n2 = std::max(max_n2, static_cast<double>(site.norm2()));
    }
    dev.outer_ratio = std::sqrt(max_n2) / scale;

    // Inner radius: nearest unoccupied site, found by scanning shells
    // outward from the origin.
    const int d = tl.d;
    double r_in = -1.0;
    if (!tl.occupied(PointZ::zero(d), t)) r_in = 0.0;
    for (int32_t shell = 1; r_in < 0; ++shell) {
        double best = -1.0;
        PointZ p(d);
        for (int i = 0; i < d; ++i) p[i] = static_cast<int32_t>(-shell);
        while (true) {
            int64_t n2 = p.norm2();
            if (n2 <= static_cast<int64_t>(shell) * shell && n2 > 0) {
                if (!tl.occupied(p, t)) {
                    double dist = std::sqrt(static_cast<double>(n2));
                    if (best < 0 || dist < best) best = dist;
                }
            }
            int axis = 0;
            while (axis < d) {
                if (++p[axis] <= shell) break;
                p[axis] = static_cast<int32_t>(-shell);
                ++axis;
            }
            if (axis == d) break;
        }
        if (best >= 0) r_in = best;
    }
    dev.inner_ratio = r_in / scale;
    return dev;
}

JRandomResult j_random(const IdlaTimeline& tl) {
    if (tl.horizon < 1.0) throw std::invalid_argument("j_random: horizon must be >= 1");
    JRandomResult res;
    const auto& st = tl.settle_times_sorted;
    // M_t is a step function jumping by one at each settle time; integrate
    // max(M,1)^(-1) exactly over [1, horizon].
    double t_lo = 1.0;
    size_t k = std::upper_bound(st.begin(), st.end(), 1.0) - st.begin();  // M at time 1
    if (k == 0) res.floored = true;
    while (t_lo < tl.horizon) {
        double t_hi = k < st.size() ? std::min(st[k], tl.horizon) : tl.horizon;
        if (t_hi > t_lo) {
            double m = static_cast<double>(std::max<size_t>(k, 1));
            res.value += (t_hi - t_lo) / m;
            t_lo = t_hi;
        }
        if (k < st.size() && st[k] <= t_lo) ++k;
    }
    return res;
}

double u_solver(const std::function<double(double)>& g, double c, int d, double t, double tol) {
    if (g(0.0) < 0) throw std::invalid_argument("u_solver: g must be non-negative at 0");
    if (c < 0) throw std::invalid_argument("u_solver: c must be >= 0");
    if (c == 0.0) return g(t);
    // h(u) = g(t - c u^(2/d)) - u is strictly decreasing; the domain
    // constraint t - c u^(2/d) >= 0 caps u at (t/c)^(d/2).
    double u_cap = std::pow(t / c, d / 2.0);
    auto feasible = [&](double u) {
        double arg = t - c * std::pow(u, 2.0 / d);
        return arg >= 0 && g(arg) >= u;
    };
    if (!feasible(0.0)) return 0.0;
    double lo = 0.0, hi = u_cap;
    if (feasible(u_cap)) return u_cap;
    while (hi - lo > tol * (1.0 + hi)) {
        double mid = 0.5 * (lo + hi);
        if (feasible(mid))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

namespace {

// Replays a frozen timeline with the walker's clock starting at the moment
// the cluster first exists (the growth and the walk share no randomness).
struct TimelineView {
    const IdlaTimeline& tl;
    double t0;
    bool contains(double t, const PointZ& y) const { return tl.occupied(y, t0 + t); }
    int lattice_neighbors_into(double t, const PointZ& y, PointZ* out) const {
        return tl.lattice_neighbors_into(t0 + t, y, out);
    }
};

}  // namespace

VisitLog srw_on_idla(const IdlaTimeline& tl, const PointZ& target, int64_t horizon_steps,
                     uint64_t master_seed, uint64_t replica) {
    PointZ origin = PointZ::zero(tl.d);
    auto it = tl.settle_time.find(origin);
    if (it == tl.settle_time.end())
        throw std::invalid_argument("srw_on_idla: origin never settles in this timeline");
    TimelineView view{tl, it->second};
    return run_walk_on(view, origin, target, horizon_steps, master_seed, replica);
}

}  // namespace gdlab
