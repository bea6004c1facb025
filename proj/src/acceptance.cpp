#include "gdlab/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <vector>

#include "gdlab/coupling.hpp"
#include "gdlab/csv.hpp"
#include "gdlab/experiments.hpp"
#include "gdlab/idla.hpp"
#include "gdlab/oracle.hpp"
#include "gdlab/parallel.hpp"
#include "gdlab/rbm.hpp"
#include "gdlab/srw.hpp"
#include "gdlab/stats.hpp"

namespace gdlab {

namespace {

struct Criterion {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v, int prec = 6) { return format_fixed(v, prec); }

// 1. Closed-form hitting probability, exact values and boundary grid.
Criterion c1_closed_form() {
    Criterion c;
    double v = continuous_hit_prob(5.0, 1.0, 10.0, 3);
    bool ok = std::abs(v - 1.0 / 9.0) <= 1e-12;
    double worst = 0.0;
    for (int d : {3, 4, 5})
        for (double a : {2.0, 5.0, 10.0, 40.0})
            for (double eps : {0.1, 0.5, 1.0}) {
                if (eps >= a) continue;
                worst = std::max(worst, std::abs(continuous_hit_prob(eps, eps, a, d) - 1.0));
                worst = std::max(worst, std::abs(continuous_hit_prob(a, eps, a, d)));
            }
    ok = ok && worst <= 1e-12;
    c.pass = ok;
    c.detail = "b(5;1,10,3) = " + fmt(v, 15) + ", boundary grid max err " + fmt(worst, 15);
    return c;
}

// 2. Monte Carlo hitting probability vs the exact absorbing-chain value.
Criterion c2_oracle_vs_mc(const AcceptanceOptions& opts) {
    Criterion c;
    const double a = 12.0;
    const int64_t T = static_cast<int64_t>(std::ceil(50.0 * a * a * std::log(a)));
    PointZ start = PointZ::zero(3);
    start[0] = 6;
    const int replicas = 200000;

    BinomialEstimate est = hit_origin_probability(StarDomain::ball(3, 1.0), a, start, T, replicas,
                                                  opts.master_seed + 2, opts.workers);
    GrowingDomain dom(StarDomain::ball(3, 1.0), ScaleFunction::constant(a),
                      GrowingDomain::Mode::Lattice);
    double exact = discrete_hit_by_time(dom, 0.0, PointZ::zero(3), start, T);
    double diff = std::abs(est.ci.p_hat - exact);
    double band = 3.0 * est.ci.half_width();
    c.pass = diff <= band;
    c.detail = "mc " + fmt(est.ci.p_hat) + " vs exact " + fmt(exact) + ", |diff| " + fmt(diff) +
               " <= 3hw " + fmt(band) + " (T=" + std::to_string(T) + ")";
    return c;
}

// 3. Geometric excursion counts on the frozen ball.
Criterion c3_geometric_excursions(const AcceptanceOptions& opts) {
    Criterion c;
    const double a = 10.0, eps = 1.0;
    const double expect = 1.0 / excursion_rate(a, eps, 3);  // = 9
    GeometricExcursionStats stats =
        geometric_excursion_trial(a, eps, 3, 2000, /*dt=*/1e-3, opts.master_seed + 3);
    double rel = std::abs(stats.mean_cycles_per_hit - expect) / expect;
    c.pass = stats.hits > 0 && rel <= 0.10;
    c.detail = "mean cycles/hit " + fmt(stats.mean_cycles_per_hit, 4) + " vs " + fmt(expect, 4) +
               " (rel err " + fmt(rel, 4) + ", " + std::to_string(stats.hits) + " hits in " +
               std::to_string(stats.cycles) + " cycles)";
    return c;
}

// 4. Exponential tails of normalized exit times, walk and diffusion.
Criterion c4_exponential_tails(const AcceptanceOptions& opts) {
    Criterion c;
    std::vector<double> grid;
    for (double t = 1.0; t <= 6.0 + 1e-9; t += 0.5) grid.push_back(t);

    auto srw_samples = exit_time_samples(StarDomain::ball(3, 1.0), 16.0, PointZ::zero(3), 10000,
                                         opts.master_seed + 4, ExitStatistic::ExitBall, 0.0,
                                         opts.workers);
    TailFit srw_fit = tail_fit(srw_samples, grid);

    // Diffusion contact times in walk-equivalent units (steps/a^2 for the
    // walk corresponds to d * t / a^2 for the diffusion).
    auto rbm_raw = rbm_contact_time_samples(1.0, 3, 1e-4, 10000, opts.master_seed + 40,
                                            opts.workers);
    for (double& v : rbm_raw) v *= 3.0;
    TailFit rbm_fit = tail_fit(rbm_raw, grid);

    bool ok = srw_fit.line.slope < 0 && srw_fit.line.r2 >= 0.95 && rbm_fit.line.slope < 0 &&
              rbm_fit.line.r2 >= 0.95;
    c.pass = ok;
    c.detail = "srw slope " + fmt(srw_fit.line.slope, 3) + " r2 " + fmt(srw_fit.line.r2, 4) +
               " (" + std::to_string(srw_fit.t_used.size()) + " cells); rbm slope " +
               fmt(rbm_fit.line.slope, 3) + " r2 " + fmt(rbm_fit.line.r2, 4) + " (" +
               std::to_string(rbm_fit.t_used.size()) + " cells)";
    return c;
}

// 5. Hit-probability scaling at fixed T / a^d.
Criterion c5_scaling(const AcceptanceOptions& opts) {
    Criterion c;
    std::vector<double> estimates;
    std::ostringstream detail;
    for (double a : {8.0, 16.0, 32.0}) {
        PointZ start = PointZ::zero(3);
        start[0] = static_cast<int32_t>(a / 2);
        int64_t T = static_cast<int64_t>(a * a * a);  // T/a^d = 1
        int replicas = a <= 8 ? 30000 : (a <= 16 ? 12000 : 4000);
        BinomialEstimate est = hit_origin_probability(StarDomain::ball(3, 1.0), a, start, T,
                                                      replicas, opts.master_seed + 5, opts.workers);
        estimates.push_back(est.ci.p_hat);
        detail << "a=" << a << ": " << fmt(est.ci.p_hat, 4) << "  ";
    }
    double lo = *std::min_element(estimates.begin(), estimates.end());
    double hi = *std::max_element(estimates.begin(), estimates.end());
    c.pass = lo > 0 && hi / lo <= 2.0;
    c.detail = detail.str() + "(max/min " + fmt(hi / lo, 3) + ")";
    return c;
}

// 6. Phase dichotomy: divergent profile grows, finite profile plateaus.
Criterion c6_phase_dichotomy(const AcceptanceOptions& opts) {
    Criterion c;
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::Srw;
    cfg.d = 3;
    cfg.shape = StarDomain::ball(3, 1.0);
    cfg.horizons = {1e5, 1e6, 1e7};
    cfg.replicas = 20;
    cfg.workers = opts.workers;
    cfg.master_seed = opts.master_seed + 6;

    cfg.scale = ScaleFunction::power(1.0, 0.25);
    cfg.out_dir = opts.out_dir + "/phase_alpha025";
    PhaseVerdict grow = phase_experiment(cfg);

    cfg.scale = ScaleFunction::power(1.0, 0.5);
    cfg.out_dir = opts.out_dir + "/phase_alpha05";
    PhaseVerdict flat = phase_experiment(cfg);

    bool ok = grow.trend == Trend::Growing && grow.consistent.value_or(false) &&
              flat.trend == Trend::Plateau && flat.consistent.value_or(false);
    c.pass = ok;
    auto med = [](const PhaseVerdict& v, size_t i) { return v.per_horizon[i].count_ci.med; };
    c.detail = "alpha=0.25: " + to_string(grow.trend) + " (medians " + fmt(med(grow, 0), 1) + "/" +
               fmt(med(grow, 1), 1) + "/" + fmt(med(grow, 2), 1) + "); alpha=0.5: " +
               to_string(flat.trend) + " (medians " + fmt(med(flat, 0), 1) + "/" +
               fmt(med(flat, 1), 1) + "/" + fmt(med(flat, 2), 1) + ")";
    return c;
}

// 7. Coupling invariant and marginal preservation.
Criterion c7_coupling(const AcceptanceOptions& opts) {
    Criterion c;
    const double dt = 1e-4;
    const double band = -10.0 * std::sqrt(dt);
    auto g = ScaleFunction::power(1.0, 0.3);

    double worst_psi = 0.0;
    std::vector<double> mins(100);
    parallel_for(100, opts.workers, [&](int64_t rep) {
        CoupleConfig cc;
        cc.d = 3;
        cc.dt = dt;
        cc.horizon = 50.0;
        cc.master_seed = opts.master_seed + 7;
        cc.replica = static_cast<uint64_t>(rep);
        PointR x1 = 0.3 * PointR::unit(3, 0);
        PointR x2 = 1.2 * PointR::unit(3, 0);
        CoupledTrace tr = coupled_run_nested(g, 2.0, x1, x2, cc);
        mins[static_cast<size_t>(rep)] = tr.min_psi;
    });
    worst_psi = *std::min_element(mins.begin(), mins.end());
    bool band_ok = worst_psi >= band;

    // Marginal preservation: coupled same-ball second path vs an uncoupled
    // reference, first exit from B_{g(0)/2}.
    const int n_marginal = 2000;
    std::vector<double> coupled(n_marginal), reference(n_marginal);
    parallel_for(n_marginal, opts.workers, [&](int64_t rep) {
        CoupleConfig cc;
        cc.d = 3;
        cc.dt = dt;
        cc.horizon = 20.0;
        cc.exit_record_radius = 0.5;
        cc.master_seed = opts.master_seed + 70;
        cc.replica = static_cast<uint64_t>(rep);
        PointR x1 = 0.1 * PointR::unit(3, 0);
        PointR x2 = 0.25 * PointR::unit(3, 0);
        CoupledTrace tr = coupled_run_same_ball(g, x1, x2, cc);
        coupled[static_cast<size_t>(rep)] = tr.outer_exit_time;

        CoupleConfig ref = cc;
        ref.master_seed = opts.master_seed + 71;
        reference[static_cast<size_t>(rep)] = single_rbm_exit_time(g, x2, 0.5, ref);
    });
    KsResult ks = ks_test(coupled, reference);
    c.pass = band_ok && ks.p_value > 0.01;
    c.detail = "min psi " + fmt(worst_psi, 4) + " >= " + fmt(band, 4) + "; marginal KS D " +
               fmt(ks.distance, 4) + " p " + fmt(ks.p_value, 4);
    return c;
}

// 8. Aggregation sanity: counting inequality, first settle laws, shape.
Criterion c8_idla(const AcceptanceOptions& opts) {
    Criterion c;
    auto lambda = LambdaProfile::constant(1.0);

    // First two settle laws over 10^4 runs.
    std::vector<int64_t> direction_counts(6, 0);
    bool first_always_origin = true;
    bool m_le_n = true;
    for (int run = 0; run < 10000; ++run) {
        IdlaTimeline tl = grow(lambda, 1e6, 100.0, 3, opts.master_seed + 8000000 + run, 2);
        if (tl.settle_times_sorted.size() < 2) continue;
        // First settle must be the origin at the first injection.
        PointZ origin = PointZ::zero(3);
        auto it = tl.settle_time.find(origin);
        if (it == tl.settle_time.end() || it->second != tl.settle_times_sorted[0])
            first_always_origin = false;
        for (const auto& [site, st] : tl.settle_time) {
            if (st != tl.settle_times_sorted[1]) continue;
            for (int axis = 0; axis < 3; ++axis) {
                if (site[axis] == 1) direction_counts[static_cast<size_t>(2 * axis)]++;
                if (site[axis] == -1) direction_counts[static_cast<size_t>(2 * axis + 1)]++;
            }
        }
        for (double t : {1.0, 10.0, 100.0})
            if (tl.settled_count(t) > tl.injected_count(t)) m_le_n = false;
    }
    ChiSquareResult chi = chi_square_uniform(direction_counts);

    // Shape ratios at M = 10^4 over 20 seeds.
    int shape_ok = 0;
    const int n_seeds = 20;
    std::vector<int> oks(n_seeds, 0);
    parallel_for(n_seeds, opts.workers, [&](int64_t seed) {
        IdlaTimeline tl = grow(lambda, 1e6, 10700.0, 3, opts.master_seed + 80 + seed, 10000);
        if (tl.settled_count(tl.horizon + 1) > tl.injected_count(tl.horizon + 1)) return;
        double t_query = tl.settle_times_sorted.back();
        ShapeDeviation dev = shape_deviation(tl, t_query);
        if (dev.m >= 10000 && dev.inner_ratio >= 0.85 && dev.outer_ratio <= 1.15)
            oks[static_cast<size_t>(seed)] = 1;
    });
    for (int ok : oks) shape_ok += ok;

    c.pass = first_always_origin && m_le_n && chi.p_value > 0.001 && shape_ok >= 19;
    c.detail = std::string("first settle at origin: ") + (first_always_origin ? "yes" : "NO") +
               "; M<=N: " + (m_le_n ? "yes" : "NO") + "; second-settle chi2 p " +
               fmt(chi.p_value, 4) + "; shape ok " + std::to_string(shape_ok) + "/20";
    return c;
}

// 9. Divergence functional exactness and the dyadic sandwich.
Criterion c9_j_exactness(const AcceptanceOptions& opts) {
    Criterion c;
    auto v = j_functional(ScaleFunction::power(1.0, 0.5), 3, 10.0);
    bool ok = v.verdict == DivergenceVerdict::Verdict::Finite &&
              std::abs(v.partial_value - 2.0) <= 1e-12;

    // Geometric fixture: terms 2^-l exactly.
    const int L = 12;
    std::vector<double> times{0.0}, levels;
    for (int l = 1; l <= L; ++l) {
        levels.push_back(std::pow(2.0, l));
        if (l < L) times.push_back(times.back() + std::pow(4.0, l));
    }
    double horizon = times.back() + std::pow(4.0, L);
    auto w = j_functional(ScaleFunction::piecewise(times, levels), 3, horizon);
    double expect = 1.0 - std::pow(2.0, -L);
    ok = ok && std::abs(w.partial_value - expect) <= 1e-12;

    // Sandwich property at 1000 probes.
    RngStream rng(opts.master_seed + 9, 0);
    auto f = ScaleFunction::power(2.0, 0.7);
    auto env = dyadic_envelope(f, 1e-12, 40);
    int violations = 0;
    for (int i = 0; i < 1000; ++i) {
        double t = 1e5 * rng.next_unit();
        double g = env.g(t);
        if (!(g <= f(t) * (1 + 1e-9) && f(t) <= 2 * g * (1 + 1e-9))) ++violations;
    }
    ok = ok && violations == 0;
    c.pass = ok;
    c.detail = "J(power) err " + fmt(std::abs(v.partial_value - 2.0), 15) + "; J(geom) err " +
               fmt(std::abs(w.partial_value - expect), 15) + "; sandwich violations " +
               std::to_string(violations) + "/1000";
    return c;
}

// 10. Invariance-principle trend of KS distances.
Criterion c10_invariance(const AcceptanceOptions& opts) {
    Criterion c;
    InvarianceResult res = invariance_check(StarDomain::ball(3, 1.0), {10.0, 20.0, 40.0}, 10000,
                                            opts.master_seed + 10, opts.workers);
    double final_d = res.ks_distances.back();
    c.pass = res.inversions <= 1 && final_d < 0.1;
    std::ostringstream ss;
    ss << "KS distances";
    for (size_t i = 0; i < res.a_values.size(); ++i)
        ss << " a=" << res.a_values[i] << ":" << fmt(res.ks_distances[i], 4);
    ss << " (inversions " << res.inversions << ")";
    c.detail = ss.str();
    return c;
}

// 11. Target independence in the recurrent regime.
Criterion c11_target_independence(const AcceptanceOptions& opts) {
    Criterion c;
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::Srw;
    cfg.d = 3;
    cfg.shape = StarDomain::ball(3, 1.0);
    cfg.scale = ScaleFunction::power(1.0, 0.25);
    cfg.horizons = {1e4, 1e5};
    cfg.replicas = 200;
    cfg.workers = opts.workers;
    cfg.master_seed = opts.master_seed + 11;

    std::vector<PointZ> targets(3, PointZ::zero(3));
    targets[1][0] = 1;
    targets[1][1] = 1;
    targets[2][0] = 2;
    TargetIndependenceResult res = target_independence(cfg, targets, 100000, 2);
    c.pass = res.homogeneity.p_value > 0.01;
    std::ostringstream ss;
    ss << "counts(>=2 visits)";
    for (int64_t h : res.hit_counts) ss << " " << h;
    ss << "/200, chi2 p " << fmt(res.homogeneity.p_value, 4);
    c.detail = ss.str();
    return c;
}

// 12. Determinism across reruns and worker counts.
Criterion c12_determinism(const AcceptanceOptions& opts) {
    Criterion c;
    auto run_once = [&](const std::string& dir, int workers) {
        ExperimentConfig cfg;
        cfg.kind = ExperimentKind::Srw;
        cfg.d = 3;
        cfg.shape = StarDomain::ball(3, 1.0);
        cfg.scale = ScaleFunction::power(1.0, 0.25);
        cfg.horizons = {1e3, 1e4};
        cfg.replicas = 16;
        cfg.workers = workers;
        cfg.master_seed = opts.master_seed + 12;
        cfg.out_dir = dir;
        phase_experiment(cfg);
    };
    auto slurp = [](const std::string& path) {
        std::ifstream f(path, std::ios::binary);
        std::ostringstream ss;
        ss << f.rdbuf();
        return ss.str();
    };
    std::string d1 = opts.out_dir + "/det_w1";
    std::string d2 = opts.out_dir + "/det_w3";
    std::string d3 = opts.out_dir + "/det_w1b";
    run_once(d1, 1);
    run_once(d2, 3);
    run_once(d3, 1);
    bool ok = true;
    for (const char* name : {"/srw_visits.csv", "/phase.plot.csv", "/verdict.json"}) {
        std::string a = slurp(d1 + name), b = slurp(d2 + name), e = slurp(d3 + name);
        ok = ok && !a.empty() && a == b && a == e;
    }
    c.pass = ok;
    c.detail = ok ? "csv/json outputs byte-identical across reruns and worker counts"
                  : "outputs differ across worker counts";
    return c;
}

}  // namespace

int run_acceptance(const AcceptanceOptions& opts, std::ostream& log) {
    std::filesystem::create_directories(opts.out_dir);
    struct Entry {
        const char* name;
        std::function<Criterion()> run;
    };
    const Entry entries[] = {
        {"C1 closed-form hitting probability", [&] { return c1_closed_form(); }},
        {"C2 oracle vs Monte Carlo hit probability", [&] { return c2_oracle_vs_mc(opts); }},
        {"C3 geometric excursion counts", [&] { return c3_geometric_excursions(opts); }},
        {"C4 exponential exit-time tails", [&] { return c4_exponential_tails(opts); }},
        {"C5 hit probability at fixed T/a^d", [&] { return c5_scaling(opts); }},
        {"C6 phase dichotomy", [&] { return c6_phase_dichotomy(opts); }},
        {"C7 coupling invariant", [&] { return c7_coupling(opts); }},
        {"C8 aggregation sanity", [&] { return c8_idla(opts); }},
        {"C9 divergence functional exactness", [&] { return c9_j_exactness(opts); }},
        {"C10 invariance-principle trend", [&] { return c10_invariance(opts); }},
        {"C11 target independence", [&] { return c11_target_independence(opts); }},
        {"C12 determinism", [&] { return c12_determinism(opts); }},
    };
    int failures = 0;
    for (const auto& e : entries) {
        Criterion c;
        try {
            c = e.run();
        } catch (const std::exception& ex) {
            c.pass = false;
            c.detail = std::string("exception: ") + ex.what();
        }
        log << (c.pass ? "[PASS] " : "[FAIL] ") << e.name << " -- " << c.detail << '\n'
            << std::flush;
        if (!c.pass) ++failures;
    }
    log << (failures == 0 ? "all criteria passed\n"
                          : std::to_string(failures) + " criteria failed\n");
    return failures;
}

}  // namespace gdlab
