#include "qcsim/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numbers>
#include <thread>

#include "qcsim/propagator.hpp"

namespace qcsim {

std::uint64_t member_seed(std::uint64_t base_seed, std::uint64_t member_index) {
    return seed_mix(base_seed, member_index);
}

namespace {

constexpr std::size_t kMaxGridPoints = std::size_t{1} << 22;

std::size_t next_pow2(double x) {
    std::size_t n = 64;
    while (static_cast<double>(n) < x) {
        n <<= 1;
        if (n > kMaxGridPoints) break;
    }
    return n;
}

struct ClassicalScan {
    double p_max = 0.0;
    double f_max = 0.0;
    double x_lo = 0.0, x_hi = 0.0;
};

ClassicalScan scan_classical(const ValidatedConfig& vc) {
    const SimConfig& c = vc.cfg;
    ClassicalScan scan{std::abs(c.p0), std::abs(force(c.potential, c.x0)), c.x0, c.x0};
    double dt = c.dt_classical;
    const double max_steps = 1e6;
    if (c.t_max / dt > max_steps) dt = c.t_max / max_steps;
    ClassicalState s{0.0, c.x0, c.p0};
    while (s.t < c.t_max) {
        s = rk4_step(s, c.potential, c.mass, dt);
        scan.p_max = std::max(scan.p_max, std::abs(s.p));
        scan.f_max = std::max(scan.f_max, std::abs(force(c.potential, s.x)));
        scan.x_lo = std::min(scan.x_lo, s.x);
        scan.x_hi = std::max(scan.x_hi, s.x);
    }
    return scan;
}

// Largest momentum a run plausibly touches: the classical reach plus
// force impulse over one burst, measurement jitter accumulation (capped by
// the threshold termination when one is in effect), and packet width margin.
double momentum_cover(const ValidatedConfig& vc, const ClassicalScan& scan) {
    const SimConfig& c = vc.cfg;
    const double sp = vc.widths.sigma_p;
    const double n_meas = std::max(1.0, std::ceil(c.t_max / c.dt_meas));
    const double walk = c.measurements
                            ? std::min(3.0 * sp * std::sqrt(2.0 * n_meas),
                                       std::max(6.0 * c.divergence_threshold, 10.0 * sp))
                            : 0.0;
    return 1.25 * scan.p_max + scan.f_max * c.dt_meas + 24.0 * sp + walk;
}

}  // namespace

std::size_t plan_grid_points(const ValidatedConfig& vc) {
    const SimConfig& c = vc.cfg;
    if (!c.grid_auto) return c.grid_points;

    const ClassicalScan scan = scan_classical(vc);
    const double p_cover = momentum_cover(vc, scan);
    const double sx = vc.widths.sigma_x;
    const double sp = vc.widths.sigma_p;

    double half;
    if (c.measurements) {
        half = std::max(c.momentum_prefactor * p_cover * c.dt_meas / c.mass,
                        c.uncertainty_prefactor * sx);
    } else {
        half = 0.5 * (scan.x_hi - scan.x_lo) + c.uncertainty_prefactor * sx;
    }
    const double dx_needed = std::numbers::pi * c.hbar / (p_cover + 24.0 * sp);
    const std::size_t needed = next_pow2(2.0 * half / dx_needed);
    const std::size_t n = std::max(c.grid_points, needed);
    if (n > kMaxGridPoints)
        throw ConfigError("configuration needs more than 2^22 grid points "
                          "(hbar too small for the window this run requires)");
    return n;
}

namespace {

Grid static_orbit_grid(const ValidatedConfig& vc, const ClassicalScan& scan, std::size_t n) {
    const double center = 0.5 * (scan.x_lo + scan.x_hi);
    const double half =
        0.5 * (scan.x_hi - scan.x_lo) + vc.cfg.uncertainty_prefactor * vc.widths.sigma_x;
    return Grid{center - half, 2.0 * half / static_cast<double>(n), n};
}

struct ProtocolState {
    WaveFunction psi;
    Rng rng;
    bool done = false;
};

}  // namespace

RunRecord run_single(const ValidatedConfig& vc, std::uint64_t seed,
                     const MeasurementObserver* observer) {
    const SimConfig& c = vc.cfg;
    RunRecord rec;
    rec.seed = seed;
    rec.rms.threshold = c.divergence_threshold;

    const std::size_t n = plan_grid_points(vc);
    rec.grid_points_used = n;
    auto fft = std::make_shared<Fft>(n);
    Rng rng(seed);

    const WindowPolicy policy{c.momentum_prefactor, c.uncertainty_prefactor};
    Grid grid;
    if (c.measurements) {
        grid = plan_window({c.x0, c.p0}, vc.widths, policy, c.dt_meas, c.mass, n);
    } else {
        grid = static_orbit_grid(vc, scan_classical(vc), n);
    }
    WaveFunction psi = make_coherent_state({c.x0, c.p0}, vc.widths, c.hbar, c.mass, c.omega, grid);
    ClassicalState cl{0.0, c.x0, c.p0};

    for (long k = 1;; ++k) {
        const double t = static_cast<double>(k) * c.dt_meas;
        psi = evolve_burst(psi, c.potential, c.hbar, c.mass, c.substep_max, c.dt_meas, fft);

        PhasePoint pt;
        if (c.measurements) {
            try {
                MeasureResult mr = measure(psi, vc, rng, fft.get());
                pt = mr.point;
                if (observer && observer->on_measurement)
                    observer->on_measurement(t, psi, mr.field, pt);
                psi = std::move(mr.collapsed);
            } catch (const SimulationError& e) {
                if (c.strict_errors) throw SimulationError(e.what(), t);
                // Correspondence breakdown: the packet escaped its window and
                // can no longer be tracked as a quasi-classical particle.
                rec.breakdown = true;
                rec.breakdown_reason = e.what();
                rec.divergence_time = t;
                break;
            }
        } else {
            pt = {expectation_x(psi), expectation_p(psi, c.hbar, *fft)};
        }

        cl = evolve_to(cl, c.potential, c.mass, t, c.dt_classical);
        rec.times.push_back(t);
        rec.quantum.push_back(pt);
        rec.classical.push_back({cl.x, cl.p});
        rec.rms.record(t, rms_deviation(cl, std::span<const PhasePoint>(&pt, 1)));
        if (rec.rms.divergence_time) {
            rec.divergence_time = rec.rms.divergence_time;
            break;
        }
        if (t >= c.t_max) {
            rec.censored = true;
            break;
        }
    }
    return rec;
}

namespace {

EnsembleRecord run_lockstep(const ValidatedConfig& vc, std::span<const std::uint64_t> seeds) {
    const SimConfig& c = vc.cfg;
    const std::size_t members = seeds.size();
    EnsembleRecord rec;
    rec.config = c;
    rec.mode = DivergenceMode::ensemble_rms;
    rec.rms.threshold = c.divergence_threshold;

    const std::size_t n = plan_grid_points(vc);
    rec.grid_points_used = n;
    auto fft = std::make_shared<Fft>(n);
    const WindowPolicy policy{c.momentum_prefactor, c.uncertainty_prefactor};
    const Grid grid0 = plan_window({c.x0, c.p0}, vc.widths, policy, c.dt_meas, c.mass, n);

    std::vector<WaveFunction> psi;
    std::vector<Rng> rngs;
    psi.reserve(members);
    rngs.reserve(members);
    for (std::size_t i = 0; i < members; ++i) {
        psi.push_back(make_coherent_state({c.x0, c.p0}, vc.widths, c.hbar, c.mass, c.omega, grid0));
        rngs.emplace_back(seeds[i]);
    }
    ClassicalState cl{0.0, c.x0, c.p0};

    for (long k = 1;; ++k) {
        const double t = static_cast<double>(k) * c.dt_meas;
        std::vector<PhasePoint> pts(members);
        bool broke = false;
        std::string reason;
        for (std::size_t i = 0; i < members && !broke; ++i) {
            psi[i] = evolve_burst(psi[i], c.potential, c.hbar, c.mass, c.substep_max, c.dt_meas,
                                  fft);
            try {
                MeasureResult mr = measure(psi[i], vc, rngs[i], fft.get());
                pts[i] = mr.point;
                psi[i] = std::move(mr.collapsed);
            } catch (const SimulationError& e) {
                if (c.strict_errors) throw SimulationError(e.what(), t);
                broke = true;
                reason = e.what();
            }
        }
        if (broke) {
            rec.breakdown_count = 1;
            rec.divergence_time = t;
            break;
        }

        cl = evolve_to(cl, c.potential, c.mass, t, c.dt_classical);
        rec.times.push_back(t);
        rec.pooled.push_back(pts);
        rec.classical.push_back({cl.x, cl.p});
        rec.rms.record(t, rms_deviation(cl, pts));
        if (rec.rms.divergence_time) {
            rec.divergence_time = rec.rms.divergence_time;
            break;
        }
        if (t >= c.t_max) {
            rec.censored_count = 1;
            break;
        }
    }
    rec.mean_divergence_time = rec.divergence_time.value_or(c.t_max);
    return rec;
}

EnsembleRecord run_independent(const ValidatedConfig& vc, std::span<const std::uint64_t> seeds) {
    const SimConfig& c = vc.cfg;
    const std::size_t members = seeds.size();
    EnsembleRecord rec;
    rec.config = c;
    rec.mode = DivergenceMode::per_run;
    rec.runs.resize(members);

    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    const std::size_t workers =
        std::min<std::size_t>(members, c.workers > 0 ? static_cast<std::size_t>(c.workers) : hw);

    if (workers <= 1) {
        for (std::size_t i = 0; i < members; ++i) rec.runs[i] = run_single(vc, seeds[i]);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr first_error;
        std::mutex error_mutex;
        auto work = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= members) return;
                try {
                    rec.runs[i] = run_single(vc, seeds[i]);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        };
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
        if (first_error) std::rethrow_exception(first_error);
    }

    double sum = 0.0;
    std::optional<double> earliest;
    for (const RunRecord& r : rec.runs) {
        if (r.censored) ++rec.censored_count;
        if (r.breakdown) ++rec.breakdown_count;
        const double td = r.divergence_time.value_or(c.t_max);
        sum += td;
        if (r.divergence_time && (!earliest || *r.divergence_time < *earliest))
            earliest = r.divergence_time;
    }
    rec.mean_divergence_time = sum / static_cast<double>(members);
    rec.divergence_time = earliest;
    rec.grid_points_used = rec.runs.empty() ? 0 : rec.runs.front().grid_points_used;
    return rec;
}

}  // namespace

EnsembleRecord run_ensemble_with_seeds(const ValidatedConfig& vc,
                                       std::span<const std::uint64_t> seeds) {
    if (seeds.empty()) throw ConfigError("ensemble needs at least one member seed");
    return vc.cfg.divergence_mode == DivergenceMode::ensemble_rms ? run_lockstep(vc, seeds)
                                                                  : run_independent(vc, seeds);
}

EnsembleRecord run_ensemble(const ValidatedConfig& vc) {
    std::vector<std::uint64_t> seeds(static_cast<std::size_t>(vc.cfg.ensemble_size));
    for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = member_seed(vc.cfg.base_seed, i);
    return run_ensemble_with_seeds(vc, seeds);
}

}  // namespace qcsim
