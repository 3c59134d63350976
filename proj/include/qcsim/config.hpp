#ifndef QCSIM_CONFIG_HPP
#define QCSIM_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <string>

#include "qcsim/potentials.hpp"

namespace qcsim {

// Coherent-state widths: sigma_x = sqrt(hbar / 2 m omega),
// sigma_p = sqrt(hbar m omega / 2); their product is hbar/2 identically.
struct CoherentWidths {
    double sigma_x = 0.0;
    double sigma_p = 0.0;
};

CoherentWidths coherent_widths(double hbar, double m, double omega);

// How divergence time is extracted from an ensemble: a single pooled RMS
// series with one termination, or per-run crossings averaged arithmetically
// (censored runs count as t_max). The heatmap sweep uses per_run.
enum class DivergenceMode { ensemble_rms, per_run };

struct SimConfig {
    double hbar = 1e-3;
    double mass = 1.0;
    double omega = 1.0;          // coherent-state width parameter, not the potential's curvature
    double dt_meas = 0.055;      // time between measurements
    double dt_classical = 0.01;  // RK4 step for the Newtonian reference
    double x0 = 0.0;
    double p0 = 1.0;
    PotentialSpec potential = Harmonic{};
    int ensemble_size = 25;
    double momentum_prefactor = 8.0;      // window space for drift between measurements
    double uncertainty_prefactor = 15.0;  // window space for quantum spreading
    double divergence_threshold = 0.05;
    int husimi_resolution = 50;
    double t_max = 30.0;
    std::uint64_t base_seed = 20250824;
    std::size_t grid_points = 1024;  // minimum transform size; power of two
    double substep_max = 0.005;      // internal split-operator substep cap

    // Protocol options
    DivergenceMode divergence_mode = DivergenceMode::ensemble_rms;
    double husimi_nsigma = 5.0;   // half-extent of the Husimi window in coherent widths
    bool sample_jitter = true;    // uniform jitter within the sampled cell (false: cell centers)
    bool grid_auto = true;        // enlarge grid_points when momentum coverage demands it
    bool measurements = true;     // diagnostic: false evolves without POVM collapses
    bool strict_errors = false;   // true: mid-run window/support failures throw instead of
                                  // terminating the run as a correspondence breakdown
    int workers = 0;              // 0 = hardware concurrency
};

// SimConfig that passed validation, with derived widths attached.
struct ValidatedConfig {
    SimConfig cfg;
    CoherentWidths widths;
};

// Checks every invariant and reports all violations at once (ConfigError).
ValidatedConfig validate(const SimConfig& config);
// Idempotent on already-validated configs.
ValidatedConfig validate(const ValidatedConfig& config);

// Plain-text key=value config file, '#' comments, one parameter per line.
// Unset keys keep the defaults above. Unknown keys are errors.
SimConfig load_config_file(const std::filesystem::path& path);
void apply_config_line(SimConfig& cfg, const std::string& line, int line_no);
void apply_config_key(SimConfig& cfg, const std::string& key, const std::string& value);

// Emits the key=value snapshot that load_config_file round-trips.
std::string config_to_text(const SimConfig& cfg);

bool is_power_of_two(std::size_t n);

}  // namespace qcsim

#endif
