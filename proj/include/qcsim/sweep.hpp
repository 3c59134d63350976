#ifndef QCSIM_SWEEP_HPP
#define QCSIM_SWEEP_HPP

#include <filesystem>
#include <functional>

#include "qcsim/regimes.hpp"
#include "qcsim/simulation.hpp"

namespace qcsim {

// Log-spaced (hbar, dt_meas) grid. The base config supplies everything else;
// the sweep runs each cell as an ensemble in per_run mode by default.
struct SweepSpec {
    double hbar_min = 3.0e-6;
    double hbar_max = 1.0e-2;
    int hbar_count = 25;
    double dt_min = 0.01;
    double dt_max = 0.3;
    int dt_count = 25;
    SimConfig base;
    int workers = 0;  // 0 = hardware concurrency

    SweepSpec() { base.divergence_mode = DivergenceMode::per_run; }
};

void validate_sweep(const SweepSpec& spec);

// Geometric progression inclusive of both endpoints.
std::vector<double> log_axis(double lo, double hi, int count);

struct SweepCell {
    int i = 0;  // hbar index
    int j = 0;  // dt index
    double hbar = 0.0;
    double dt = 0.0;
    double divergence_time = 0.0;  // mean over the cell's ensemble; see censored
    bool censored = false;         // some member never crossed; t_max entered the mean
    RegimeLabel regime = RegimeLabel::indeterminate;
    bool failed = false;
    std::string error;
};

struct SweepResult {
    std::vector<double> hbar_values;
    std::vector<double> dt_values;
    std::vector<SweepCell> cells;  // row-major: index j * hbar_count + i

    const SweepCell& at(int i, int j) const {
        return cells[static_cast<std::size_t>(j) * hbar_values.size() + i];
    }
};

// Runs every cell with seed seed_mix(base_seed, i, j); cells are independent
// work items over a thread pool, so any worker count yields the same matrix.
// Completed cells stream to `checkpoint` (append-only CSV) when given, and
// cells already present there are not recomputed. Per-cell failures are
// recorded in place without aborting the sweep.
SweepResult run_sweep(const SweepSpec& spec,
                      const std::filesystem::path& checkpoint = {},
                      const std::function<void(const SweepCell&)>& on_cell = {});

}  // namespace qcsim

#endif
