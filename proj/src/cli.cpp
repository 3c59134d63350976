#include "qcsim/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "qcsim/output.hpp"
#include "qcsim/version.hpp"

namespace qcsim {

namespace {

std::filesystem::path default_output_dir() {
    if (const char* env = std::getenv("QCSIM_OUTPUT_DIR")) return env;
    return "qcsim_out";
}

// Common config plumbing: optional file, then key=value overrides, then
// dedicated flags (which win).
struct ConfigCli {
    std::string config_file;
    std::vector<std::string> sets;

    void attach(CLI::App* app) {
        app->add_option("--config", config_file, "key=value config file");
        app->add_option("--set", sets, "override a config key (key=value, repeatable)");
    }

    SimConfig build() const {
        SimConfig cfg;
        if (!config_file.empty()) cfg = load_config_file(config_file);
        for (const std::string& kv : sets) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw ConfigError("--set expects key=value, got '" + kv + "'");
            apply_config_key(cfg, kv.substr(0, eq), kv.substr(eq + 1));
        }
        return cfg;
    }
};

void add_override(CLI::App* app, std::vector<std::pair<std::string, std::string>>& overrides,
                  const char* flag, const char* key, const char* help) {
    app->add_option_function<std::string>(
           flag,
           [&overrides, key = std::string(key)](const std::string& v) {
               overrides.emplace_back(key, v);
           },
           help)
        ->type_name("VALUE");
}

int run_simulate(const ConfigCli& cc,
                 const std::vector<std::pair<std::string, std::string>>& overrides,
                 const std::string& out_dir_flag, bool dump_psi, bool dump_husimi) {
    SimConfig cfg = cc.build();
    for (const auto& [key, value] : overrides) apply_config_key(cfg, key, value);
    const ValidatedConfig vc = validate(cfg);

    const std::filesystem::path dir =
        out_dir_flag.empty() ? default_output_dir() : std::filesystem::path(out_dir_flag);
    const EnsembleRecord rec = run_ensemble(vc);

    std::vector<EmittedFile> files;
    files.push_back(write_output_file(dir, "config_snapshot.cfg", config_to_text(cfg)));
    files.push_back(write_output_file(dir, "result.json", result_json(rec)));
    files.push_back(write_output_file(dir, "classical.csv", classical_csv(rec)));
    files.push_back(write_output_file(dir, "quantum.csv", quantum_csv(rec)));
    files.push_back(write_output_file(dir, "rms.csv", rms_csv(rec)));
    files.push_back(write_output_file(dir, "phase_portrait.svg", phase_portrait_svg(rec)));

    if (dump_psi || dump_husimi) {
        // verbose dumps replay member 0 (deterministic), so the ensemble
        // path stays untouched
        long index = 0;
        MeasurementObserver obs;
        obs.on_measurement = [&](double, const WaveFunction& pre, const HusimiField& field,
                                 const PhasePoint&) {
            char name[64];
            if (dump_psi) {
                std::snprintf(name, sizeof name, "psi_%05ld.csv", index);
                files.push_back(write_output_file(dir, name, wavefunction_csv(pre)));
            }
            if (dump_husimi) {
                std::snprintf(name, sizeof name, "husimi_%05ld.csv", index);
                files.push_back(write_output_file(dir, name, husimi_csv(field)));
            }
            ++index;
        };
        run_single(vc, member_seed(cfg.base_seed, 0), &obs);
    }

    write_output_file(dir, "manifest.json", manifest_json("simulate", cfg.base_seed, files));

    std::printf("mean divergence time: %.17g s%s\n", rec.mean_divergence_time,
                rec.censored_count ? " (censored at t_max)" : "");
    std::printf("outputs in %s\n", dir.string().c_str());
    return 0;
}

int run_sweep_cmd(const ConfigCli& cc,
                  const std::vector<std::pair<std::string, std::string>>& overrides,
                  SweepSpec spec, const std::string& out_dir_flag, bool fresh, bool quiet) {
    SimConfig base = cc.build();
    for (const auto& [key, value] : overrides) apply_config_key(base, key, value);
    // the heatmap averages per-run divergence times unless a mode was asked for
    bool mode_given = false;
    for (const auto& [key, _] : overrides) mode_given |= key == "divergence_mode";
    for (const std::string& kv : cc.sets) mode_given |= kv.rfind("divergence_mode", 0) == 0;
    if (!mode_given) base.divergence_mode = DivergenceMode::per_run;
    spec.base = base;

    const std::filesystem::path dir =
        out_dir_flag.empty() ? default_output_dir() : std::filesystem::path(out_dir_flag);
    std::filesystem::create_directories(dir);
    const std::filesystem::path checkpoint = dir / "sweep_checkpoint.csv";
    if (fresh) std::filesystem::remove(checkpoint);

    const std::size_t total = static_cast<std::size_t>(spec.hbar_count) * spec.dt_count;
    std::size_t done = 0;
    auto progress = [&](const SweepCell& cell) {
        ++done;
        if (!quiet)
            std::fprintf(stderr, "[%zu/%zu] hbar=%.3g dt=%.3g -> %s\n", done, total, cell.hbar,
                         cell.dt,
                         cell.failed ? "failed" : std::to_string(cell.divergence_time).c_str());
    };
    const SweepResult result = run_sweep(spec, checkpoint, progress);

    std::vector<EmittedFile> files;
    files.push_back(write_output_file(dir, "config_snapshot.cfg", config_to_text(base)));
    files.push_back(write_output_file(dir, "sweep.csv", sweep_csv(result)));
    files.push_back(write_output_file(dir, "sweep.json", sweep_manifest_json(spec, result)));
    files.push_back(write_output_file(dir, "heatmap.svg", heatmap_svg(result)));
    write_output_file(dir, "manifest.json", manifest_json("sweep", base.base_seed, files));

    std::printf("sweep complete: %zu cells, outputs in %s\n", result.cells.size(),
                dir.string().c_str());
    return 0;
}

int run_regimes(const ConfigCli& cc,
                const std::vector<std::pair<std::string, std::string>>& overrides,
                double epsilon, double delta_x, double delta_p, double eval_x, double eval_p,
                bool have_dx, bool have_dp, bool have_x, bool have_p,
                const std::string& annotate_in, const std::string& annotate_out) {
    SimConfig cfg = cc.build();
    for (const auto& [key, value] : overrides) apply_config_key(cfg, key, value);
    const ValidatedConfig vc = validate(cfg);

    RegimeInputs in = regime_inputs_for(vc);
    if (have_x) in.x = eval_x;
    if (have_p) in.p = eval_p;
    if (have_dx) in.delta_x = delta_x;
    if (have_dp) in.delta_p = delta_p;

    if (!annotate_in.empty()) {
        // batch mode: recompute the regime column of a sweep CSV
        std::ifstream src(annotate_in);
        if (!src) throw ConfigError("cannot open " + annotate_in);
        std::ostringstream dst;
        std::string line;
        bool header = true;
        while (std::getline(src, line)) {
            if (header) {
                dst << line << '\n';
                header = false;
                continue;
            }
            std::istringstream ss(line);
            std::string tok;
            std::vector<std::string> cols;
            while (std::getline(ss, tok, ',')) cols.push_back(tok);
            if (cols.size() >= 7) {
                RegimeInputs row = in;
                row.hbar = std::stod(cols[2]);
                row.dt_meas = std::stod(cols[3]);
                const CoherentWidths w = coherent_widths(row.hbar, row.m, row.omega);
                if (!have_dx) row.delta_x = w.sigma_x;
                if (!have_dp) row.delta_p = w.sigma_p;
                cols[6] = to_string(classify(row, epsilon));
            }
            for (std::size_t i = 0; i < cols.size(); ++i)
                dst << (i ? "," : "") << cols[i];
            dst << '\n';
        }
        const std::string out_name = annotate_out.empty() ? annotate_in + ".annotated"
                                                          : annotate_out;
        std::ofstream out(out_name, std::ios::binary);
        out << dst.str();
        std::printf("annotated sweep written to %s\n", out_name.c_str());
        return 0;
    }

    std::fputs(regime_report(in, epsilon).c_str(), stdout);
    return 0;
}

}  // namespace

std::string regime_report(const RegimeInputs& in, double epsilon) {
    std::ostringstream out;
    char buf[64];
    try {
        std::snprintf(buf, sizeof buf, "%.10g", uncertainty_lhs(in));
        out << "uncertainty_lhs = " << buf << "\n";
    } catch (const ConfigError&) {
        out << "uncertainty_lhs = n/a\n";
    }
    try {
        std::snprintf(buf, sizeof buf, "%.10g", wavelike_lhs(in));
        out << "wavelike_lhs = " << buf << "\n";
    } catch (const ConfigError&) {
        out << "wavelike_lhs = n/a\n";
    }
    out << "label = " << to_string(classify(in, epsilon)) << "\n";
    return out.str();
}

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"quantum-classical correspondence simulator"};
    app.set_version_flag("--version", QCSIM_VERSION);
    app.require_subcommand(0, 1);

    // --- simulate ---
    CLI::App* sim = app.add_subcommand(
        "simulate", "run one ensemble: trajectories, RMS series, phase portrait");
    ConfigCli sim_cc;
    sim_cc.attach(sim);
    std::vector<std::pair<std::string, std::string>> sim_over;
    add_override(sim, sim_over, "--hbar", "hbar", "reduced Planck constant");
    add_override(sim, sim_over, "--dt", "dt_meas", "time between measurements");
    add_override(sim, sim_over, "--mass", "mass", "particle mass");
    add_override(sim, sim_over, "--omega", "omega", "coherent-state width parameter");
    add_override(sim, sim_over, "--x0", "x0", "initial position");
    add_override(sim, sim_over, "--p0", "p0", "initial momentum");
    add_override(sim, sim_over, "--potential", "potential", "potential kind");
    add_override(sim, sim_over, "--ensemble", "ensemble_size", "quantum ensemble size");
    add_override(sim, sim_over, "--seed", "base_seed", "base RNG seed");
    add_override(sim, sim_over, "--t-max", "t_max", "maximum simulated time");
    add_override(sim, sim_over, "--threshold", "divergence_threshold", "divergence threshold");
    add_override(sim, sim_over, "--mode", "divergence_mode",
                 "ensemble_rms or per_run divergence accounting");
    add_override(sim, sim_over, "--workers", "workers", "member-level worker threads");
    std::string sim_out;
    sim->add_option("--out", sim_out, "output directory (default $QCSIM_OUTPUT_DIR)");
    bool dump_psi = false, dump_husimi = false;
    sim->add_flag("--dump-psi", dump_psi, "dump member-0 wavefunction per measurement (large)");
    sim->add_flag("--dump-husimi", dump_husimi,
                  "dump member-0 Husimi field per measurement (large)");

    // --- sweep ---
    CLI::App* swp = app.add_subcommand("sweep", "log-spaced (hbar, dt) divergence-time map");
    ConfigCli swp_cc;
    swp_cc.attach(swp);
    std::vector<std::pair<std::string, std::string>> swp_over;
    add_override(swp, swp_over, "--ensemble", "ensemble_size", "quantum ensemble size");
    add_override(swp, swp_over, "--seed", "base_seed", "base RNG seed");
    add_override(swp, swp_over, "--t-max", "t_max", "maximum simulated time per run");
    add_override(swp, swp_over, "--mode", "divergence_mode",
                 "ensemble_rms or per_run divergence accounting");
    SweepSpec spec;
    swp->add_option("--hbar-min", spec.hbar_min, "hbar axis lower endpoint");
    swp->add_option("--hbar-max", spec.hbar_max, "hbar axis upper endpoint");
    swp->add_option("--hbar-count", spec.hbar_count, "hbar axis point count");
    swp->add_option("--dt-min", spec.dt_min, "dt axis lower endpoint");
    swp->add_option("--dt-max", spec.dt_max, "dt axis upper endpoint");
    swp->add_option("--dt-count", spec.dt_count, "dt axis point count");
    swp->add_option("--workers", spec.workers, "cell-level worker threads (0 = hardware)");
    std::string swp_out;
    swp->add_option("--out", swp_out, "output directory (default $QCSIM_OUTPUT_DIR)");
    bool fresh = false, quiet = false;
    swp->add_flag("--fresh", fresh, "ignore any existing checkpoint");
    swp->add_flag("--quiet", quiet, "suppress per-cell progress");

    // --- regimes ---
    CLI::App* reg = app.add_subcommand("regimes", "evaluate the two regime inequalities");
    ConfigCli reg_cc;
    reg_cc.attach(reg);
    std::vector<std::pair<std::string, std::string>> reg_over;
    add_override(reg, reg_over, "--hbar", "hbar", "reduced Planck constant");
    add_override(reg, reg_over, "--dt", "dt_meas", "time between measurements");
    add_override(reg, reg_over, "--mass", "mass", "particle mass");
    add_override(reg, reg_over, "--omega", "omega", "coherent-state width parameter");
    add_override(reg, reg_over, "--potential", "potential", "potential kind");
    double epsilon = 0.1, rdx = 0.0, rdp = 0.0, rx = 0.0, rp = 0.0;
    reg->add_option("--epsilon", epsilon, "classification threshold for 'much less than 1'");
    CLI::Option* odx = reg->add_option("--dx", rdx, "position displacement (default sigma_x)");
    CLI::Option* odp = reg->add_option("--dp", rdp, "momentum displacement (default sigma_p)");
    CLI::Option* ox = reg->add_option("--x", rx, "evaluation position (default x0)");
    CLI::Option* op = reg->add_option("--p", rp, "evaluation momentum (default p0)");
    std::string annotate_in, annotate_out;
    reg->add_option("--annotate", annotate_in, "sweep CSV whose regime column to recompute");
    reg->add_option("--out-file", annotate_out, "where to write the annotated CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);  // prints help, exit 0
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    if (app.get_subcommands().empty()) {
        std::cout << app.help();
        return 1;
    }

    try {
        if (sim->parsed()) return run_simulate(sim_cc, sim_over, sim_out, dump_psi, dump_husimi);
        if (swp->parsed())
            return run_sweep_cmd(swp_cc, swp_over, spec, swp_out, fresh, quiet);
        if (reg->parsed())
            return run_regimes(reg_cc, reg_over, epsilon, rdx, rdp, rx, rp,
                               odx->count() > 0, odp->count() > 0, ox->count() > 0,
                               op->count() > 0, annotate_in, annotate_out);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}

}  // namespace qcsim
