#include "gdlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "json.hpp"

#include "gdlab/csv.hpp"
#include "gdlab/parallel.hpp"
#include "gdlab/rbm.hpp"
#include "gdlab/srw.hpp"

namespace gdlab {

std::string to_string(Trend t) {
    switch (t) {
        case Trend::Growing: return "Growing";
        case Trend::Plateau: return "Plateau";
        case Trend::Inconclusive: return "Inconclusive";
    }
    return "?";
}

std::string to_string(DivergenceVerdict::Verdict v) {
    switch (v) {
        case DivergenceVerdict::Verdict::Finite: return "Finite";
        case DivergenceVerdict::Verdict::Divergent: return "Divergent";
        case DivergenceVerdict::Verdict::Undetermined: return "Undetermined";
    }
    return "?";
}

void ExperimentConfig::validate() const {
    if (d < 3) throw std::invalid_argument("experiment: paper-scope experiments need d >= 3");
    if (horizons.size() < 2) throw std::invalid_argument("experiment: need at least 2 horizons");
    for (size_t i = 1; i < horizons.size(); ++i)
        if (horizons[i] <= horizons[i - 1])
            throw std::invalid_argument("experiment: horizons must be strictly increasing");
    if (replicas < 1) throw std::invalid_argument("experiment: need at least one replica");
}

Trend classify_trend(const std::vector<std::vector<int64_t>>& counts,
                     const TrendThresholds& th) {
    if (counts.size() < 2) throw std::invalid_argument("classify_trend: need >= 2 horizons");
    size_t mid = counts.size() / 2;
    size_t last = counts.size() - 1;
    if (mid == last) mid = last - 1;
    const auto& c_mid = counts[mid];
    const auto& c_last = counts[last];
    if (c_mid.size() != c_last.size() || c_mid.empty())
        throw std::invalid_argument("classify_trend: ragged counts");

    auto to_double = [](const std::vector<int64_t>& v) {
        return std::vector<double>(v.begin(), v.end());
    };
    MedianCI ci_mid = median_ci(to_double(c_mid));
    MedianCI ci_last = median_ci(to_double(c_last));

    bool growing = ci_last.med >= th.growth_factor * ci_mid.med && ci_last.lo > ci_mid.hi;

    size_t flat = 0;
    for (size_t r = 0; r < c_mid.size(); ++r)
        if (static_cast<double>(c_last[r] - c_mid[r]) <= th.plateau_delta) ++flat;
    bool plateau = static_cast<double>(flat) >= th.plateau_fraction * c_mid.size();

    if (growing && !plateau) return Trend::Growing;
    if (plateau && !growing) return Trend::Plateau;
    return Trend::Inconclusive;
}

std::optional<bool> verdict_consistent(DivergenceVerdict::Verdict j, Trend trend) {
    if (j == DivergenceVerdict::Verdict::Undetermined || trend == Trend::Inconclusive)
        return std::nullopt;
    if (j == DivergenceVerdict::Verdict::Divergent) return trend == Trend::Growing;
    return trend == Trend::Plateau;
}

namespace {

uint64_t replica_seed_tag(uint64_t master_seed, uint64_t replica) {
    // Reported in CSVs so a replica can be re-run standalone.
    uint64_t x = master_seed ^ (replica * 0x9e3779b97f4a7c15ull);
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ull;
    x ^= x >> 27;
    return x;
}

void write_verdict_json(const std::string& out_dir, const ExperimentConfig& cfg,
                        const PhaseVerdict& verdict) {
    nlohmann::json j;
    j["experiment"] = cfg.kind == ExperimentKind::Srw ? "srw" : "rbm";
    j["d"] = cfg.d;
    j["replicas"] = cfg.replicas;
    j["master_seed"] = cfg.master_seed;
    j["j_verdict"] = to_string(verdict.j.verdict);
    j["j_partial_value"] = verdict.j.partial_value;
    j["empirical_trend"] = to_string(verdict.trend);
    if (verdict.consistent.has_value())
        j["consistent"] = *verdict.consistent;
    else
        j["consistent"] = nullptr;
    j["thresholds"] = {{"growth_factor", verdict.thresholds.growth_factor},
                       {"plateau_delta", verdict.thresholds.plateau_delta},
                       {"plateau_fraction", verdict.thresholds.plateau_fraction}};
    j["assumptions"] = {
        {"kappa_time_change", "1/d (per-coordinate step variance of the lattice walk)"},
        {"trend_rule", "medians with order-statistic CIs; conventions, not theorems"}};
    nlohmann::json horizons = nlohmann::json::array();
    for (const auto& h : verdict.per_horizon)
        horizons.push_back({{"horizon", h.horizon},
                            {"median", h.count_ci.med},
                            {"ci_lo", h.count_ci.lo},
                            {"ci_hi", h.count_ci.hi}});
    j["per_horizon"] = horizons;
    std::ofstream f(out_dir + "/verdict.json", std::ios::binary);
    f << j.dump(2) << '\n';
}

}  // namespace

std::string srw_visits_csv(const std::vector<SrwReplicaRecord>& records) {
    CsvWriter w("replica,seed,horizon,n_visits,last_visit,final_r");
    for (const auto& r : records) {
        w.field(r.replica)
            .field(static_cast<int64_t>(r.seed))
            .field(r.horizon)
            .field(r.n_visits)
            .field(r.last_visit)
            .field(r.final_r, 6);
        w.end_row();
    }
    return w.str();
}

PhaseVerdict phase_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    PhaseVerdict verdict;
    verdict.thresholds = cfg.thresholds;
    verdict.j = j_functional(cfg.scale, cfg.d, cfg.horizons.back());

    const size_t n_h = cfg.horizons.size();
    std::vector<std::vector<int64_t>> counts(n_h, std::vector<int64_t>(cfg.replicas, 0));
    std::vector<SrwReplicaRecord> records(static_cast<size_t>(cfg.replicas));
    std::vector<std::vector<double>> first_last(static_cast<size_t>(cfg.replicas));

    if (cfg.kind == ExperimentKind::Srw) {
        GrowingDomain dom(cfg.shape, cfg.scale, GrowingDomain::Mode::Lattice);
        PointZ origin = PointZ::zero(cfg.d);
        int64_t max_h = static_cast<int64_t>(cfg.horizons.back());
        parallel_for(cfg.replicas, cfg.workers, [&](int64_t rep) {
            // One checkpointed run per replica covers all horizons.
            VisitLog log = run_walk(dom, origin, origin, max_h, cfg.master_seed,
                                    static_cast<uint64_t>(rep));
            if (log.aborted_isolated)
                throw IsolatedVertexError("phase_experiment: replica aborted (geometry bug?)");
            // Returns only: the occupation of the origin at step 0 is not a
            // return, so the trend counts visits in [1, horizon].
            auto first_return =
                std::lower_bound(log.visit_times.begin(), log.visit_times.end(), int64_t{1});
            for (size_t h = 0; h < n_h; ++h) {
                int64_t hz = static_cast<int64_t>(cfg.horizons[h]);
                auto it = std::upper_bound(first_return, log.visit_times.end(), hz);
                counts[h][static_cast<size_t>(rep)] = it - first_return;
            }
            SrwReplicaRecord rec;
            rec.replica = rep;
            rec.seed = replica_seed_tag(cfg.master_seed, static_cast<uint64_t>(rep));
            rec.horizon = max_h;
            rec.n_visits = static_cast<int64_t>(log.visit_times.size());
            rec.last_visit = log.visit_times.empty() ? -1 : log.visit_times.back();
            rec.final_r = std::sqrt(static_cast<double>(log.final_position.norm2()));
            records[static_cast<size_t>(rep)] = rec;
        });
        if (!cfg.out_dir.empty()) {
            std::filesystem::create_directories(cfg.out_dir);
            std::ofstream f(cfg.out_dir + "/srw_visits.csv", std::ios::binary);
            f << srw_visits_csv(records);
        }
    } else {
        GrowingDomain dom(cfg.shape, cfg.scale, GrowingDomain::Mode::Continuum);
        parallel_for(cfg.replicas, cfg.workers, [&](int64_t rep) {
            DiffusionConfig dc{dom};
            dc.scheme = Scheme::MovingDomain;
            dc.dt_base = cfg.dt_base;
            dc.horizon = cfg.horizons.back();
            dc.epsilon = cfg.epsilon;
            dc.master_seed = cfg.master_seed;
            dc.replica = static_cast<uint64_t>(rep);
            RbmRun run = run_rbmg(dc);
            if (!run.log.valid) throw std::runtime_error("phase_experiment: rbm replica invalid");
            for (size_t h = 0; h < n_h; ++h) {
                const auto& sig = run.log.sigma_times;
                counts[h][static_cast<size_t>(rep)] =
                    std::upper_bound(sig.begin(), sig.end(), cfg.horizons[h]) - sig.begin();
            }
            first_last[static_cast<size_t>(rep)] = {
                run.log.tau_times.empty() ? -1.0 : run.log.tau_times.front(),
                run.log.sigma_times.empty() ? -1.0 : run.log.sigma_times.back(),
                run.log.truncated ? 1.0 : 0.0};
        });
        if (!cfg.out_dir.empty()) {
            std::filesystem::create_directories(cfg.out_dir);
            CsvWriter w("replica,seed,horizon,n_excursions,truncated,first_tau,last_sigma");
            for (int64_t rep = 0; rep < cfg.replicas; ++rep) {
                const auto& fl = first_last[static_cast<size_t>(rep)];
                w.field(rep)
                    .field(static_cast<int64_t>(replica_seed_tag(cfg.master_seed,
                                                                 static_cast<uint64_t>(rep))))
                    .field(cfg.horizons.back(), 6)
                    .field(counts[n_h - 1][static_cast<size_t>(rep)])
                    .field(static_cast<int64_t>(fl[2]))
                    .field(fl[0], 6)
                    .field(fl[1], 6);
                w.end_row();
            }
            w.write_file(cfg.out_dir + "/rbm_excursions.csv");
        }
    }

    for (size_t h = 0; h < n_h; ++h) {
        HorizonStats hs;
        hs.horizon = cfg.horizons[h];
        hs.counts = counts[h];
        hs.count_ci = median_ci(std::vector<double>(counts[h].begin(), counts[h].end()));
        verdict.per_horizon.push_back(std::move(hs));
    }
    verdict.trend = classify_trend(counts, cfg.thresholds);
    verdict.consistent = verdict_consistent(verdict.j.verdict, verdict.trend);

    if (!cfg.out_dir.empty()) {
        CsvWriter w("x,y,lo,hi");
        for (const auto& h : verdict.per_horizon) {
            w.field(h.horizon, 6)
                .field(h.count_ci.med, 6)
                .field(h.count_ci.lo, 6)
                .field(h.count_ci.hi, 6);
            w.end_row();
        }
        w.write_file(cfg.out_dir + "/phase.plot.csv");
        write_verdict_json(cfg.out_dir, cfg, verdict);
    }
    return verdict;
}

TailFit tail_fit_experiment(const std::vector<double>& samples, const std::vector<double>& t_grid,
                            const std::string& out_dir) {
    TailFit fit = tail_fit(samples, t_grid);
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        CsvWriter w("x,y,lo,hi");
        for (size_t i = 0; i < fit.t_used.size(); ++i) {
            w.field(fit.t_used[i], 6).field(fit.log_p[i], 6).field(fit.log_p[i], 6).field(fit.log_p[i], 6);
            w.end_row();
        }
        w.write_file(out_dir + "/tail.plot.csv");
    }
    return fit;
}

InvarianceResult invariance_check(const StarDomain& shape, const std::vector<double>& a_list,
                                  int replicas, uint64_t master_seed, int workers, double rbm_dt) {
    InvarianceResult res;
    const int d = shape.dim();
    const double kappa = 1.0 / d;

    // Reference law: reflected diffusion on K, first exit from B_{1/2}.
    GrowingDomain unit_dom(shape, ScaleFunction::constant(1.0), GrowingDomain::Mode::Continuum,
                           /*enforce_b2=*/false);
    std::vector<double> rbm_exits(static_cast<size_t>(replicas));
    parallel_for(replicas, workers, [&](int64_t rep) {
        RngStream rng(master_seed ^ 0x52424du, static_cast<uint64_t>(rep));
        PointR x = PointR::zero(d);
        double t = 0.0;
        double s = std::sqrt(rbm_dt);
        for (;;) {
            PointR dW(d);
            for (int i = 0; i < d; ++i) dW[i] = s * rng.next_gaussian();
            ReflectOutcome out = reflect_into(unit_dom, 0.0, x + dW, 12);
            x = out.x;
            t += rbm_dt;
            if (x.norm() > 0.5) break;
        }
        rbm_exits[static_cast<size_t>(rep)] = t;
    });

    double prev = -1.0;
    for (double a : a_list) {
        GrowingDomain dom(shape, ScaleFunction::constant(a), GrowingDomain::Mode::Lattice,
                          /*enforce_b2=*/false);
        const double thresh2 = (a / 2) * (a / 2);
        std::vector<double> walk_exits(static_cast<size_t>(replicas));
        parallel_for(replicas, workers, [&](int64_t rep) {
            WalkState st{PointZ::zero(d), 0, RngStream(master_seed ^ 0x535257u,
                                                       static_cast<uint64_t>(rep))};
            PointZ buf[2 * kMaxDim];
            for (;;) {
                int n = dom.lattice_neighbors_into(0.0, st.position, buf);
                if (n == 0) throw IsolatedVertexError("invariance_check: isolated vertex");
                st.position = buf[st.rng.below(static_cast<uint32_t>(n))];
                ++st.time;
                if (static_cast<double>(st.position.norm2()) > thresh2) break;
            }
            walk_exits[static_cast<size_t>(rep)] =
                kappa * static_cast<double>(st.time) / (a * a);
        });
        double dist = ks_statistic(walk_exits, rbm_exits);
        if (prev >= 0 && dist > prev) ++res.inversions;
        res.a_values.push_back(a);
        res.ks_distances.push_back(dist);
        prev = dist;
    }
    return res;
}

TargetIndependenceResult target_independence(const ExperimentConfig& cfg,
                                             const std::vector<PointZ>& targets,
                                             int64_t horizon_steps, int64_t k_threshold) {
    if (targets.empty()) throw std::invalid_argument("target_independence: no targets");
    PointZ origin = PointZ::zero(cfg.d);
    // The equivalence of targets holds along even l1 displacements from the
    // start; reject anything else.
    for (const auto& tgt : targets)
        if (tgt.norm1() % 2 != 0)
            throw std::invalid_argument("target_independence: target at odd parity from start");

    GrowingDomain dom(cfg.shape, cfg.scale, GrowingDomain::Mode::Lattice);
    TargetIndependenceResult res;
    res.targets = targets;
    res.replicas = cfg.replicas;
    res.k_threshold = k_threshold;
    res.hit_counts.assign(targets.size(), 0);

    std::vector<std::vector<int64_t>> per_replica(static_cast<size_t>(cfg.replicas),
                                                  std::vector<int64_t>(targets.size(), 0));
    parallel_for(cfg.replicas, cfg.workers, [&](int64_t rep) {
        // One walk, all targets counted along the same path; the occupation
        // of the start at step 0 is not a visit.
        WalkState st{origin, 0, RngStream(cfg.master_seed, static_cast<uint64_t>(rep))};
        auto& mine = per_replica[static_cast<size_t>(rep)];
        PointZ buf[2 * kMaxDim];
        while (st.time < horizon_steps) {
            int n = dom.lattice_neighbors_into(static_cast<double>(st.time + 1), st.position, buf);
            if (n == 0) throw IsolatedVertexError("target_independence: isolated vertex");
            st.position = buf[st.rng.below(static_cast<uint32_t>(n))];
            ++st.time;
            for (size_t ti = 0; ti < targets.size(); ++ti)
                if (st.position == targets[ti]) ++mine[ti];
        }
    });
    for (const auto& counts : per_replica)
        for (size_t ti = 0; ti < targets.size(); ++ti)
            if (counts[ti] >= k_threshold) ++res.hit_counts[ti];

    std::vector<std::pair<int64_t, int64_t>> table;
    for (size_t ti = 0; ti < targets.size(); ++ti)
        table.emplace_back(res.hit_counts[ti], cfg.replicas - res.hit_counts[ti]);
    res.homogeneity = chi_square_homogeneity(table);
    return res;
}

}  // namespace gdlab
