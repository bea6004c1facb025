// Command-line front end: simulation subcommands, experiment sweeps and the
// verification suite, driven by flat config files.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gdlab/acceptance.hpp"
#include "gdlab/config.hpp"
#include "gdlab/coupling.hpp"
#include "gdlab/csv.hpp"
#include "gdlab/experiments.hpp"
#include "gdlab/idla.hpp"
#include "gdlab/oracle.hpp"
#include "gdlab/parallel.hpp"
#include "gdlab/rbm.hpp"
#include "gdlab/srw.hpp"

using namespace gdlab;

namespace {

struct CommonFlags {
    std::string config_path;
    std::string out_dir = "out";
    int64_t seed = -1;
    int64_t replicas = -1;
    int workers = 1;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool config_required = true) {
    auto* opt = cmd->add_option("--config", flags.config_path, "config file (key = value lines)");
    if (config_required) opt->required();
    cmd->add_option("--out", flags.out_dir, "output directory");
    cmd->add_option("--seed", flags.seed, "master seed override");
    cmd->add_option("--replicas", flags.replicas, "replica count override");
    cmd->add_option("--workers", flags.workers, "worker threads");
}

ExperimentConfig load_experiment(const CommonFlags& flags, ExperimentKind kind) {
    ConfigMap cfg = ConfigMap::parse_file(flags.config_path);
    ExperimentConfig ec;
    ec.kind = kind;
    ec.d = static_cast<int>(cfg.get_int("d", 3));
    ec.shape = parse_shape_spec(cfg.get_string("shape", "ball(1)"), ec.d);
    ec.scale = parse_scale_spec(cfg.get_string("scale", "power(1, 0.5)"));
    ec.horizons = cfg.get_list("horizons");
    ec.replicas = static_cast<int>(cfg.get_int("replicas", 20));
    ec.master_seed = static_cast<uint64_t>(cfg.get_int("master_seed", 1));
    ec.epsilon = cfg.get_double("epsilon", 0.1);
    ec.dt_base = cfg.get_double("dt", 1e-4);
    ec.thresholds.growth_factor = cfg.get_double("growth_factor", 1.5);
    ec.thresholds.plateau_delta = cfg.get_double("plateau_delta", 1.0);
    ec.thresholds.plateau_fraction = cfg.get_double("plateau_fraction", 0.8);
    cfg.finalize();
    if (flags.seed >= 0) ec.master_seed = static_cast<uint64_t>(flags.seed);
    if (flags.replicas > 0) ec.replicas = static_cast<int>(flags.replicas);
    ec.workers = flags.workers;
    ec.out_dir = flags.out_dir;
    return ec;
}

void print_verdict(const PhaseVerdict& v) {
    std::cout << "J verdict: " << to_string(v.j.verdict) << " (partial value "
              << format_fixed(v.j.partial_value, 6) << ")\n";
    std::cout << "empirical trend: " << to_string(v.trend) << "\n";
    if (v.consistent.has_value())
        std::cout << "consistent with the criterion: " << (*v.consistent ? "yes" : "no") << "\n";
    else
        std::cout << "consistent with the criterion: undefined\n";
    for (const auto& h : v.per_horizon)
        std::cout << "  horizon " << format_fixed(h.horizon, 0) << ": median "
                  << format_fixed(h.count_ci.med, 1) << " [" << format_fixed(h.count_ci.lo, 1)
                  << ", " << format_fixed(h.count_ci.hi, 1) << "]\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"simulation lab for walks and reflected diffusions on growing domains"};
    app.require_subcommand(1);

    CommonFlags srw_flags, rbm_flags, idla_flags, hit_flags, couple_flags, sweep_flags, check_flags;

    auto* srw_cmd = app.add_subcommand("simulate-srw", "lattice walk phase experiment");
    add_common(srw_cmd, srw_flags);

    auto* rbm_cmd = app.add_subcommand("simulate-rbm", "reflected diffusion phase experiment");
    add_common(rbm_cmd, rbm_flags);

    auto* idla_cmd = app.add_subcommand("idla", "cluster growth simulation");
    add_common(idla_cmd, idla_flags);
    bool idla_sites = false;
    idla_cmd->add_flag("--sites", idla_sites, "also dump idla_sites.csv");

    auto* hit_cmd = app.add_subcommand("hit-prob", "hitting-probability oracle table");
    add_common(hit_cmd, hit_flags);

    auto* couple_cmd = app.add_subcommand("couple", "coupled reflected pairs");
    add_common(couple_cmd, couple_flags);

    auto* sweep_cmd = app.add_subcommand("sweep", "phase experiment over a grid of exponents");
    add_common(sweep_cmd, sweep_flags);

    auto* check_cmd = app.add_subcommand("check", "run the acceptance suite");
    add_common(check_cmd, check_flags, /*config_required=*/false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (srw_cmd->parsed()) {
            ExperimentConfig ec = load_experiment(srw_flags, ExperimentKind::Srw);
            print_verdict(phase_experiment(ec));
        } else if (rbm_cmd->parsed()) {
            ExperimentConfig ec = load_experiment(rbm_flags, ExperimentKind::Rbm);
            print_verdict(phase_experiment(ec));
        } else if (idla_cmd->parsed()) {
            ConfigMap cfg = ConfigMap::parse_file(idla_flags.config_path);
            int d = static_cast<int>(cfg.get_int("d", 3));
            double v = cfg.get_double("v", 1.0);
            double horizon = cfg.get_double("horizon");
            uint64_t seed = static_cast<uint64_t>(cfg.get_int("master_seed", 1));
            int64_t max_settles = cfg.get_int("max_settles", -1);
            LambdaProfile lambda;
            std::string lk = cfg.get_string("lambda", "constant(1)");
            {
                auto open = lk.find('(');
                std::string name = lk.substr(0, open);
                std::string args = lk.substr(open + 1, lk.size() - open - 2);
                if (name == "constant")
                    lambda = LambdaProfile::constant(std::stod(args));
                else if (name == "power") {
                    auto comma = args.find(',');
                    lambda = LambdaProfile::power_law(std::stod(args.substr(0, comma)),
                                                      std::stod(args.substr(comma + 1)));
                } else
                    throw std::invalid_argument("idla: lambda must be constant(r) or power(c,e)");
            }
            cfg.finalize();
            if (idla_flags.seed >= 0) seed = static_cast<uint64_t>(idla_flags.seed);

            IdlaTimeline tl = grow(lambda, v, horizon, d, seed, max_settles);
            std::filesystem::create_directories(idla_flags.out_dir);
            CsvWriter w("t,M,N,inner_ratio,outer_ratio");
            size_t step = std::max<size_t>(1, tl.settle_times_sorted.size() / 200);
            for (size_t i = 0; i < tl.settle_times_sorted.size(); i += step) {
                double t = tl.settle_times_sorted[i];
                ShapeDeviation dev = shape_deviation(tl, t);
                w.field(t, 6)
                    .field(tl.settled_count(t))
                    .field(tl.injected_count(t))
                    .field(dev.inner_ratio, 6)
                    .field(dev.outer_ratio, 6);
                w.end_row();
            }
            w.write_file(idla_flags.out_dir + "/idla_timeline.csv");
            if (idla_sites) {
                std::string header;
                for (int i = 0; i < d; ++i) header += "x" + std::to_string(i + 1) + ",";
                CsvWriter sw(header + "settle_time");
                for (const auto& [site, st] : tl.settle_time) {
                    for (int i = 0; i < d; ++i) sw.field(static_cast<int64_t>(site[i]));
                    sw.field(st, 6);
                    sw.end_row();
                }
                sw.write_file(idla_flags.out_dir + "/idla_sites.csv");
            }
            JRandomResult j = j_random(tl);
            std::cout << "settles " << tl.settle_times_sorted.size() << ", injections "
                      << tl.injection_times.size() << ", J partial "
                      << format_fixed(j.value, 6) << (j.floored ? " (floored)" : "") << "\n";
        } else if (hit_cmd->parsed()) {
            ConfigMap cfg = ConfigMap::parse_file(hit_flags.config_path);
            int d = static_cast<int>(cfg.get_int("d", 3));
            double a = cfg.get_double("a");
            double eps = cfg.get_double("epsilon", 1.0);
            StarDomain shape = parse_shape_spec(cfg.get_string("shape", "ball(1)"), d);
            cfg.finalize();

            GrowingDomain dom(shape, ScaleFunction::constant(a), GrowingDomain::Mode::Lattice);
            HitSolveResult sol = discrete_hit_solve(dom, 0.0, PointZ::zero(d),
                                                    SolveMode::BeforeExit, a);
            std::cout << "r,oracle,closed_form,abs_diff\n";
            for (int r = static_cast<int>(eps) + 1; r < static_cast<int>(a); ++r) {
                PointZ p = PointZ::zero(d);
                p[0] = r;
                double oracle = sol.at(p);
                double closed = continuous_hit_prob(r, eps, a, d);
                std::cout << r << "," << format_fixed(oracle, 6) << "," << format_fixed(closed, 6)
                          << "," << format_fixed(std::abs(oracle - closed), 6) << "\n";
            }
        } else if (couple_cmd->parsed()) {
            ConfigMap cfg = ConfigMap::parse_file(couple_flags.config_path);
            int d = static_cast<int>(cfg.get_int("d", 3));
            double c_factor = cfg.get_double("c", 2.0);
            double horizon = cfg.get_double("horizon", 50.0);
            double dt = cfg.get_double("dt", 1e-4);
            int replicas = static_cast<int>(cfg.get_int("replicas", 100));
            uint64_t seed = static_cast<uint64_t>(cfg.get_int("master_seed", 1));
            std::string scenario = cfg.get_string("scenario", "nested");
            ScaleFunction g = parse_scale_spec(cfg.get_string("scale", "power(1, 0.3)"));
            cfg.finalize();
            if (couple_flags.seed >= 0) seed = static_cast<uint64_t>(couple_flags.seed);
            if (couple_flags.replicas > 0) replicas = static_cast<int>(couple_flags.replicas);

            std::filesystem::create_directories(couple_flags.out_dir);
            CsvWriter w("replica,seed,scenario,min_psi,n_phase_switches,horizon");
            std::vector<CoupledTrace> traces(static_cast<size_t>(replicas));
            parallel_for(replicas, couple_flags.workers, [&](int64_t rep) {
                CoupleConfig cc;
                cc.d = d;
                cc.dt = dt;
                cc.horizon = horizon;
                cc.master_seed = seed;
                cc.replica = static_cast<uint64_t>(rep);
                PointR x1 = (0.3 * g(0.0)) * PointR::unit(d, 0);
                PointR x2 = (scenario == "nested" ? 1.2 : 0.6) * g(0.0) * PointR::unit(d, 0);
                traces[static_cast<size_t>(rep)] =
                    scenario == "nested" ? coupled_run_nested(g, c_factor, x1, x2, cc)
                                         : coupled_run_same_ball(g, x1, x2, cc);
            });
            for (int64_t rep = 0; rep < replicas; ++rep) {
                const auto& tr = traces[static_cast<size_t>(rep)];
                w.field(rep)
                    .field(static_cast<int64_t>(seed))
                    .field(scenario)
                    .field(tr.min_psi, 6)
                    .field(static_cast<int64_t>(tr.n_phase_switches))
                    .field(horizon, 6);
                w.end_row();
            }
            w.write_file(couple_flags.out_dir + "/coupling.csv");
            std::cout << "wrote " << couple_flags.out_dir << "/coupling.csv\n";
        } else if (sweep_cmd->parsed()) {
            ConfigMap cfg = ConfigMap::parse_file(sweep_flags.config_path);
            int d = static_cast<int>(cfg.get_int("d", 3));
            auto alphas = cfg.get_list("alphas");
            auto horizons = cfg.get_list("horizons");
            int replicas = static_cast<int>(cfg.get_int("replicas", 20));
            uint64_t seed = static_cast<uint64_t>(cfg.get_int("master_seed", 1));
            double c_offset = cfg.get_double("c", 1.0);
            cfg.finalize();
            if (sweep_flags.seed >= 0) seed = static_cast<uint64_t>(sweep_flags.seed);
            if (sweep_flags.replicas > 0) replicas = static_cast<int>(sweep_flags.replicas);

            std::filesystem::create_directories(sweep_flags.out_dir);
            CsvWriter w("alpha,j_verdict,trend,consistent,median_last");
            for (double alpha : alphas) {
                ExperimentConfig ec;
                ec.kind = ExperimentKind::Srw;
                ec.d = d;
                ec.shape = StarDomain::ball(d, 1.0);
                ec.scale = ScaleFunction::power(c_offset, alpha);
                ec.horizons = horizons;
                ec.replicas = replicas;
                ec.master_seed = seed;
                ec.workers = sweep_flags.workers;
                PhaseVerdict v = phase_experiment(ec);
                w.field(alpha, 4)
                    .field(to_string(v.j.verdict))
                    .field(to_string(v.trend))
                    .field(v.consistent.has_value() ? (*v.consistent ? "true" : "false") : "undefined")
                    .field(v.per_horizon.back().count_ci.med, 2);
                w.end_row();
                std::cout << "alpha " << format_fixed(alpha, 3) << ": "
                          << to_string(v.j.verdict) << " / " << to_string(v.trend) << "\n";
            }
            w.write_file(sweep_flags.out_dir + "/sweep.csv");
        } else if (check_cmd->parsed()) {
            AcceptanceOptions opts;
            opts.out_dir = check_flags.out_dir;
            opts.workers = check_flags.workers;
            if (check_flags.seed >= 0) opts.master_seed = static_cast<uint64_t>(check_flags.seed);
            return run_acceptance(opts, std::cout) == 0 ? 0 : 1;
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
    return 0;
}
