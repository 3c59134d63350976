#ifndef QCSIM_SIMULATION_HPP
#define QCSIM_SIMULATION_HPP

#include <functional>
#include <optional>
#include <span>
#include <string>

#include "qcsim/divergence.hpp"
#include "qcsim/husimi.hpp"

namespace qcsim {

// One member's history: sampled measurement outcomes and the classical
// reference at the same instants, plus its distance series.
struct RunRecord {
    std::uint64_t seed = 0;
    std::vector<double> times;
    std::vector<PhasePoint> quantum;
    std::vector<PhasePoint> classical;
    DivergenceSeries rms;
    std::optional<double> divergence_time;
    bool censored = false;   // reached t_max below threshold
    bool breakdown = false;  // window/support failure mid-run; divergence_time holds the instant
    std::string breakdown_reason;
    std::size_t grid_points_used = 0;
};

struct EnsembleRecord {
    SimConfig config;
    DivergenceMode mode = DivergenceMode::ensemble_rms;

    std::vector<RunRecord> runs;  // per_run mode

    // ensemble_rms mode: lock-step history, one pooled D(t) series
    std::vector<double> times;
    std::vector<std::vector<PhasePoint>> pooled;  // [time index][member]
    std::vector<PhasePoint> classical;
    DivergenceSeries rms;

    std::optional<double> divergence_time;
    // Censored contributions enter the mean at t_max (documented floor).
    double mean_divergence_time = 0.0;
    std::size_t censored_count = 0;
    std::size_t breakdown_count = 0;
    std::size_t grid_points_used = 0;
};

std::uint64_t member_seed(std::uint64_t base_seed, std::uint64_t member_index);

// Hook for the verbose dump interfaces: called after each measurement with
// the pre-collapse state, the field it was sampled from, and the outcome.
struct MeasurementObserver {
    std::function<void(double t, const WaveFunction& pre_collapse, const HusimiField& field,
                       const PhasePoint& sample)>
        on_measurement;
};

// Transform size for a run: at least cfg.grid_points, enlarged (when
// grid_auto) until the spectral band covers the momenta the run can reach on
// its widest planned window. Scans the classical reference to bound the
// momentum range. Throws ConfigError past 2^22 points.
std::size_t plan_grid_points(const ValidatedConfig& vc);

// The measurement protocol for a single member: coherent state at (x0, p0),
// then repeat { evolve dt_meas, POVM measure, collapse on a fresh window,
// advance the classical reference, record the sampled point and D } until
// the threshold is crossed or t_max is reached.
RunRecord run_single(const ValidatedConfig& vc, std::uint64_t seed,
                     const MeasurementObserver* observer = nullptr);

// Ensemble per the configured divergence mode. In ensemble_rms mode all
// members advance in lock-step (outer loop over time, inner over members)
// sharing one classical reference; in per_run mode members run independently
// (parallelized over cfg.workers threads) and their crossing times are
// averaged.
EnsembleRecord run_ensemble(const ValidatedConfig& vc);

// Same, with explicit per-member seeds (seeds.size() overrides ensemble_size).
EnsembleRecord run_ensemble_with_seeds(const ValidatedConfig& vc,
                                       std::span<const std::uint64_t> seeds);

}  // namespace qcsim

#endif
