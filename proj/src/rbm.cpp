#include "gdlab/rbm.hpp"

#include <cmath>
#include <stdexcept>

#include "gdlab/parallel.hpp"

namespace gdlab {

void DiffusionConfig::validate() const {
    if (dom.mode() != GrowingDomain::Mode::Continuum)
        throw std::invalid_argument("diffusion: domain must be in continuum mode");
    if (dt_base <= 0) throw std::invalid_argument("diffusion: dt must be positive");
    if (horizon <= 0) throw std::invalid_argument("diffusion: horizon must be positive");
    if (epsilon <= 0 || epsilon >= 0.5)
        throw std::invalid_argument("diffusion: epsilon must lie in (0, 1/2)");
    if (epsilon >= dom.scale()(0.0) * dom.shape().inner_radius())
        throw std::invalid_argument("diffusion: epsilon must be below f(0) * rho");
}

std::vector<double> Trajectory::radii() const {
    std::vector<double> r(positions.size());
    for (size_t i = 0; i < positions.size(); ++i) r[i] = positions[i].norm();
    return r;
}

namespace {

template <typename BoundaryRadius, typename InwardNormal>
ReflectOutcome mirror_iterate(PointR x, int k_max, BoundaryRadius&& boundary_radius,
                              InwardNormal&& inward_normal) {
    ReflectOutcome out;
    for (int k = 0; k < k_max; ++k) {
        double n = x.norm();
        if (n == 0) break;
        PointR u(x.d);
        for (int i = 0; i < x.d; ++i) u[i] = x[i] / n;
        double r = boundary_radius(u);
        double gap = n - r;
        if (gap < 0) break;  // inside
        PointR b = r * u;
        PointR nrm = inward_normal(b);
        x += (2.0 * gap) * nrm;
        out.push_len += 2.0 * gap;
        out.touched_boundary = true;
    }
    out.x = x;
    double n = x.norm();
    if (n > 0) {
        PointR u(x.d);
        for (int i = 0; i < x.d; ++i) u[i] = x[i] / n;
        out.ok = n < boundary_radius(u);
    }
    return out;
}

}  // namespace

ReflectOutcome reflect_into(const GrowingDomain& dom, double t, PointR proposal, int k_max) {
    if (dom.contains(t, proposal)) {
        ReflectOutcome out;
        out.x = proposal;
        return out;
    }
    return mirror_iterate(
        proposal, k_max, [&](const PointR& u) { return dom.boundary_radius(t, u); },
        [&](const PointR& b) { return dom.shape().inward_normal(b); });
}

ReflectOutcome reflect_into_shape(const StarDomain& shape, PointR proposal, int k_max) {
    if (shape.contains(proposal)) {
        ReflectOutcome out;
        out.x = proposal;
        return out;
    }
    return mirror_iterate(
        proposal, k_max, [&](const PointR& u) { return shape.radial_profile(u); },
        [&](const PointR& b) { return shape.inward_normal(b); });
}

ReflectOutcome reflected_step(const PointR& x, double t_next, const PointR& dW,
                              const DiffusionConfig& cfg) {
    return reflect_into(cfg.dom, t_next, x + dW, cfg.k_max);
}

ReflectOutcome rescaled_step(const PointR& x, double t, double dt, const PointR& dU,
                             const DiffusionConfig& cfg) {
    double f = cfg.dom.scale()(t);
    double fp = cfg.dom.scale().derivative(t);
    PointR prop = x;
    for (int i = 0; i < x.d; ++i) prop[i] += dU[i] / f - (fp / f) * x[i] * dt;
    return reflect_into_shape(cfg.dom.shape(), prop, cfg.k_max);
}

PointR apply_jump(const PointR& x, double eta) {
    if (eta <= 0.0 || eta >= 1.0) throw std::invalid_argument("apply_jump: eta must be in (0,1)");
    return eta * x;
}

namespace {

// Recurrence bookkeeping per the interleaved stopping times: radius dips
// below eps (tau), then escapes past 1/2 (sigma), repeatedly.
class RecurrenceMachine {
  public:
    RecurrenceMachine(double sigma0, double eps) : sigma0_(sigma0), eps_(eps) {}

    void feed(double t, double radius, ExcursionLog& log) {
        if (t < sigma0_) return;
        if (waiting_tau_) {
            if (radius < eps_) {
                log.tau_times.push_back(t);
                waiting_tau_ = false;
            }
        } else if (radius > 0.5) {
            log.sigma_times.push_back(t);
            ++log.completed_excursions;
            waiting_tau_ = true;
        }
    }

    bool open() const { return !waiting_tau_; }

  private:
    double sigma0_;
    double eps_;
    bool waiting_tau_ = true;
};

}  // namespace

RbmRun run_rbmg(const DiffusionConfig& cfg) {
    cfg.validate();
    const int d = cfg.dom.dim();
    const ScaleFunction& f = cfg.dom.scale();
    const double rho = cfg.dom.shape().inner_radius();

    RbmRun run;
    run.log.sigma0 = std::max(0.0, f.first_time_reaching(cfg.epsilon / rho, cfg.horizon));
    if (f.kind() == ScaleFunction::Kind::Power && f.power_alpha() >= 0.5)
        run.f_prime_sq_integrable = false;  // integral of f'^2 diverges

    const bool rescaled = cfg.scheme == Scheme::RescaledFixedDomain;
    PointR x = cfg.start.d == d ? cfg.start : PointR::zero(d);
    if (rescaled) x *= 1.0 / f(0.0);
    RngStream rng(cfg.master_seed, cfg.replica);
    RecurrenceMachine machine(run.log.sigma0, cfg.epsilon);

    std::vector<double> jumps = rescaled ? f.jumps_in(cfg.horizon) : std::vector<double>{};
    size_t next_jump = 0;

    double t = 0.0;
    double last_recorded = -1.0;
    auto radius_of = [&](double tt) {
        return rescaled ? x.norm() * f(tt) : x.norm();
    };
    auto record = [&](double tt) {
        machine.feed(tt, radius_of(tt), run.log);
        if (cfg.record_trajectory && tt - last_recorded >= cfg.record_dt) {
            run.traj.times.push_back(tt);
            run.traj.positions.push_back(rescaled ? f(tt) * x : x);
            last_recorded = tt;
        }
    };
    record(0.0);

    while (t < cfg.horizon && run.log.valid) {
        double dt = cfg.dt_base * f(t) * f(t);
        if (t + dt > cfg.horizon) dt = cfg.horizon - t;
        if (rescaled && next_jump < jumps.size() && t + dt >= jumps[next_jump]) {
            double jt = jumps[next_jump];
            if (jt > t) dt = jt - t;  // land exactly on the jump
        }

        int halvings = 0;
        for (;;) {
            PointR dW(d);
            double s = std::sqrt(dt);
            for (int i = 0; i < d; ++i) dW[i] = s * rng.next_gaussian();
            ReflectOutcome step = rescaled ? rescaled_step(x, t, dt, dW, cfg)
                                           : reflected_step(x, t + dt, dW, cfg);
            if (step.ok) {
                x = step.x;
                run.pushed_length += step.push_len;
                break;
            }
            if (++halvings > cfg.max_halvings) {
                run.log.valid = false;
                break;
            }
            dt *= 0.5;
        }
        if (!run.log.valid) break;
        t += dt;
        if (rescaled && next_jump < jumps.size() && t >= jumps[next_jump]) {
            double before = f(jumps[next_jump] - 1e-15 * (1.0 + jumps[next_jump]));
            double after = f(jumps[next_jump]);
            if (after > before) x = apply_jump(x, before / after);
            ++next_jump;
        }
        record(t);
    }

    run.log.truncated = machine.open();
    run.final_position = rescaled ? f(t) * x : x;
    return run;
}

ExcursionDecomposition excursion_decomposition(const Trajectory& traj, double a) {
    ExcursionDecomposition dec;
    dec.sigma_times.push_back(0.0);
    bool seeking_tau = true;
    for (size_t i = 0; i < traj.times.size(); ++i) {
        double r = traj.positions[i].norm();
        if (seeking_tau) {
            if (r >= a) {
                dec.tau_times.push_back(traj.times[i]);
                seeking_tau = false;
            }
        } else if (r <= a / 2) {
            dec.sigma_times.push_back(traj.times[i]);
            seeking_tau = true;
        }
    }
    dec.open_record = !seeking_tau;
    for (size_t k = 0; k + 1 < dec.sigma_times.size(); ++k)
        dec.lengths.push_back(dec.sigma_times[k + 1] - dec.sigma_times[k]);
    return dec;
}

GeometricExcursionStats geometric_excursion_trial(double a, double eps, int d,
                                                  int64_t target_cycles, double dt,
                                                  uint64_t master_seed) {
    if (eps >= a / 2) throw std::invalid_argument("excursion trial: need eps < a/2");
    GrowingDomain dom(StarDomain::ball(d, 1.0), ScaleFunction::constant(a),
                      GrowingDomain::Mode::Continuum, /*enforce_b2=*/false);
    PointR x = (a / 2) * PointR::unit(d, 0);
    RngStream rng(master_seed, 0);
    const double s = std::sqrt(dt);

    GeometricExcursionStats stats;
    bool outbound = true;  // between sigma_k and the next boundary contact
    bool hit_this_cycle = false;
    const double half2 = (a / 2) * (a / 2);
    const double eps2 = eps * eps;
    const double a2 = a * a;
    while (stats.cycles < target_cycles) {
        PointR prop = x;
        for (int i = 0; i < d; ++i) prop[i] += s * rng.next_gaussian();
        double p2 = prop.norm2();
        if (p2 >= a2) {
            // Boundary contact: radial mirror, and the outbound leg ends.
            double n = std::sqrt(p2);
            prop *= (2.0 * a - n) / n;
            if (outbound) outbound = false;
        }
        x = prop;
        double n2 = x.norm2();
        if (outbound) {
            if (n2 < eps2) hit_this_cycle = true;
        } else if (n2 <= half2) {
            ++stats.cycles;
            if (hit_this_cycle) ++stats.hits;
            hit_this_cycle = false;
            outbound = true;
        }
    }
    stats.mean_cycles_per_hit =
        stats.hits > 0 ? static_cast<double>(stats.cycles) / stats.hits : 0.0;
    return stats;
}

std::vector<double> rbm_contact_time_samples(double a, int d, double dt, int replicas,
                                             uint64_t master_seed, int workers) {
    std::vector<double> samples(static_cast<size_t>(replicas));
    const double s = std::sqrt(dt);
    const double a2 = a * a;
    parallel_for(replicas, workers, [&](int64_t rep) {
        RngStream rng(master_seed, static_cast<uint64_t>(rep));
        PointR x(d);
        double t = 0.0;
        for (;;) {
            for (int i = 0; i < d; ++i) x[i] += s * rng.next_gaussian();
            t += dt;
            if (x.norm2() >= a2) break;
        }
        samples[static_cast<size_t>(rep)] = t;
    });
    return samples;
}

HittingCurve ball_hitting_curve(double a, double eps, double r_start,
                                const std::vector<double>& T_grid, int replicas, int d,
                                double dt_base, uint64_t master_seed, int workers) {
    if (eps <= 0 || eps >= r_start || r_start >= a)
        throw std::invalid_argument("hitting curve: need 0 < eps < r_start < a");
    double T_max = 0;
    for (double T : T_grid) T_max = std::max(T_max, T);

    std::vector<double> first_hit(static_cast<size_t>(replicas));
    parallel_for(replicas, workers, [&](int64_t rep) {
        RngStream rng(master_seed, static_cast<uint64_t>(rep));
        PointR x(d);
        double n2;
        do {
            for (int i = 0; i < d; ++i) x[i] = rng.next_gaussian();
            n2 = x.norm2();
        } while (n2 == 0);
        x *= r_start / std::sqrt(n2);

        double dt = dt_base * a * a;
        double s = std::sqrt(dt);
        double t = 0.0, hit = -1.0;
        const double eps2 = eps * eps, a2 = a * a;
        while (t < T_max) {
            for (int i = 0; i < d; ++i) x[i] += s * rng.next_gaussian();
            double p2 = x.norm2();
            if (p2 >= a2) {
                double n = std::sqrt(p2);
                x *= (2.0 * a - n) / n;
                p2 = x.norm2();
            }
            t += dt;
            if (p2 < eps2) {
                hit = t;
                break;
            }
        }
        first_hit[static_cast<size_t>(rep)] = hit;
    });

    HittingCurve curve;
    curve.T_grid = T_grid;
    for (double T : T_grid) {
        int64_t k = 0;
        for (double h : first_hit)
            if (h >= 0 && h <= T) ++k;
        BinomialEstimate est;
        est.successes = k;
        est.trials = replicas;
        est.ci = wilson_interval(k, replicas);
        curve.estimates.push_back(est);
    }
    return curve;
}

}  // namespace gdlab
