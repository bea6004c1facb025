#include "gdlab/coupling.hpp"

#include <cmath>
#include <stdexcept>

#include "gdlab/rng.hpp"

namespace gdlab {

MatD rotation_matrix(const PointR& x, const PointR& y, double tol) {
    double nx = x.norm(), ny = y.norm();
    if (nx == 0 || ny == 0) throw std::invalid_argument("rotation_matrix: zero vector");
    if (std::abs(nx - ny) > tol * nx)
        throw std::invalid_argument("rotation_matrix: |x| and |y| differ beyond tolerance");
    const int d = x.d;
    PointR u = x.normalized();
    PointR yn = y.normalized();

    double cos_t = dot(u, yn);
    // Component of y orthogonal to x.
    PointR w = yn - cos_t * u;
    double wn = w.norm();

    if (wn < 1e-12) {
        if (cos_t > 0) return MatD::identity(d);  // x == y
        // Antiparallel: rotate by pi in the plane of u and the lowest-index
        // axis not aligned with u.
        int axis = 0;
        for (; axis < d; ++axis) {
            PointR e = PointR::unit(d, axis);
            PointR p = e - dot(e, u) * u;
            if (p.norm() > 1e-6) {
                w = p.normalized();
                break;
            }
        }
        MatD o = MatD::identity(d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) o(i, j) -= 2.0 * (u[i] * u[j] + w[i] * w[j]);
        return o;
    }

    PointR v = (1.0 / wn) * w;  // orthonormal to u, in span{x,y}
    double sin_t = wn;
    // O = I + (cos-1)(uu' + vv') + sin (vu' - uv')
    MatD o = MatD::identity(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            o(i, j) += (cos_t - 1.0) * (u[i] * u[j] + v[i] * v[j]) +
                       sin_t * (v[i] * u[j] - u[i] * v[j]);
    return o;
}

namespace {

// Radial mirror into the ball of radius R; returns the reflected point.
PointR mirror_ball(PointR x, double R) {
    double n = x.norm();
    if (n < R || n == 0) return x;
    return ((2.0 * R - n) / n) * x;
}

struct PairState {
    PointR w1, w2;
    PointR free_path;   // unreflected driver during the mirrored phase
    MatD rot;           // rotation applied to the free path
    bool mirrored = false;
    PairState(int d) : w1(d), w2(d), free_path(d), rot(MatD::identity(d)) {}
};

CoupledTrace run_pair(const ScaleFunction& g, double c, const PointR& x1, const PointR& x2,
                      const CoupleConfig& cfg, CouplingScenario scenario) {
    const int d = cfg.d;
    if (x1.d != d || x2.d != d) throw std::invalid_argument("coupled run: dimension mismatch");
    if (x1.norm() > x2.norm() + 1e-12)
        throw std::invalid_argument("coupled run: need |x1| <= |x2|");
    double g0 = g(0.0);
    if (x1.norm() >= g0) throw std::invalid_argument("coupled run: x1 must start inside B_g(0)");
    double outer0 = scenario == CouplingScenario::Nested ? c * g0 : g0;
    if (x2.norm() >= outer0)
        throw std::invalid_argument("coupled run: x2 must start inside the outer domain");

    RngStream rng1(cfg.master_seed, 2 * cfg.replica);
    RngStream rng2(cfg.master_seed, 2 * cfg.replica + 1);

    PairState st(d);
    st.w1 = x1;
    st.w2 = x2;
    CoupledTrace trace;
    trace.min_psi = x2.norm() - x1.norm();

    const double s = std::sqrt(cfg.dt);
    double t = 0.0;
    bool exit_recorded = cfg.exit_record_radius <= 0;
    bool same_ball_locked = false;  // part (b) mirrors once, permanently

    auto maybe_enter_mirror = [&] {
        if (st.mirrored || same_ball_locked) return;
        double psi = st.w2.norm() - st.w1.norm();
        if (psi > 0.0) return;
        st.mirrored = true;
        ++trace.n_phase_switches;
        trace.switch_times.push_back(t);
        if (st.w1.norm() > 0 && st.w2.norm() > 0)
            st.rot = rotation_matrix(st.w1.normalized(), st.w2.normalized(), 1e-6);
        else
            st.rot = MatD::identity(d);
        st.free_path = st.w1;
        if (scenario == CouplingScenario::SameBall) {
            st.w2 = st.rot.apply(st.w1);
            same_ball_locked = true;
        }
    };

    maybe_enter_mirror();
    while (t < cfg.horizon) {
        double gt_next = g(std::min(t + cfg.dt, cfg.horizon));
        double outer_next = scenario == CouplingScenario::Nested ? c * gt_next : gt_next;

        PointR dU(d);
        for (int i = 0; i < d; ++i) dU[i] = s * rng1.next_gaussian();

        if (!st.mirrored) {
            st.w1 = mirror_ball(st.w1 + dU, gt_next);
            PointR dV(d);
            for (int i = 0; i < d; ++i) dV[i] = s * rng2.next_gaussian();
            st.w2 = mirror_ball(st.w2 + dV, outer_next);
        } else {
            st.w1 = mirror_ball(st.w1 + dU, gt_next);
            if (scenario == CouplingScenario::SameBall) {
                // The second path is the rotated reflected path itself.
                st.w2 = st.rot.apply(st.w1);
            } else {
                st.free_path += dU;
                if (st.free_path.norm() >= outer_next) {
                    // Outer boundary contact: the mirrored segment ends.
                    st.w2 = mirror_ball(st.rot.apply(st.free_path), outer_next);
                    st.mirrored = false;
                    ++trace.n_phase_switches;
                    trace.switch_times.push_back(t + cfg.dt);
                } else {
                    st.w2 = st.rot.apply(st.free_path);
                }
            }
        }

        t += cfg.dt;
        double psi = st.w2.norm() - st.w1.norm();
        trace.min_psi = std::min(trace.min_psi, psi);

        if (!exit_recorded && st.w2.norm() >= cfg.exit_record_radius) {
            trace.outer_exit_time = t;
            exit_recorded = true;
        }
        maybe_enter_mirror();
    }
    trace.final_psi = st.w2.norm() - st.w1.norm();
    trace.mirrored_at_end = st.mirrored;
    return trace;
}

}  // namespace

CoupledTrace coupled_run_nested(const ScaleFunction& g, double c, const PointR& x1,
                                const PointR& x2, const CoupleConfig& cfg) {
    if (c <= 1.0) throw std::invalid_argument("coupled_run_nested: need c > 1");
    return run_pair(g, c, x1, x2, cfg, CouplingScenario::Nested);
}

CoupledTrace coupled_run_same_ball(const ScaleFunction& g, const PointR& x1, const PointR& x2,
                                   const CoupleConfig& cfg) {
    return run_pair(g, 1.0, x1, x2, cfg, CouplingScenario::SameBall);
}

double single_rbm_exit_time(const ScaleFunction& g, const PointR& start, double exit_radius,
                            const CoupleConfig& cfg) {
    RngStream rng(cfg.master_seed, cfg.replica);
    PointR x = start;
    const int d = cfg.d;
    const double s = std::sqrt(cfg.dt);
    double t = 0.0;
    while (t < cfg.horizon) {
        PointR dU(d);
        for (int i = 0; i < d; ++i) dU[i] = s * rng.next_gaussian();
        x = mirror_ball(x + dU, g(std::min(t + cfg.dt, cfg.horizon)));
        t += cfg.dt;
        if (x.norm() >= exit_radius) return t;
    }
    return -1.0;
}

}  // namespace gdlab
