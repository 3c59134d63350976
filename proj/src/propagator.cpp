#include "qcsim/propagator.hpp"

#include <cmath>
#include <numbers>

namespace qcsim {

PropagatorPlan make_plan(const Grid& grid, const PotentialSpec& potential, double hbar, double m,
                         double dt, std::shared_ptr<const Fft> fft) {
    if (!(dt > 0.0)) throw SimulationError("propagator substep must be positive");
    if (!fft) fft = std::make_shared<Fft>(grid.n);
    else if (fft->size() != grid.n) throw SimulationError("propagator: Fft size mismatch");

    PropagatorPlan plan{grid, hbar, m, dt, {}, {}, std::move(fft)};
    plan.half_potential_phase.resize(grid.n);
    plan.kinetic_phase.resize(grid.n);

    const double vfac = -0.5 * dt / hbar;
    for (std::size_t j = 0; j < grid.n; ++j)
        plan.half_potential_phase[j] = std::polar(1.0, vfac * value(potential, grid.x(j)));

    const double dk = 2.0 * std::numbers::pi / grid.length();
    const double kfac = -0.5 * hbar * dt / m;
    const std::size_t n = grid.n;
    for (std::size_t f = 0; f < n; ++f) {
        const double fr = f < n / 2 ? static_cast<double>(f)
                                    : static_cast<double>(f) - static_cast<double>(n);
        const double k = fr * dk;
        plan.kinetic_phase[f] = std::polar(1.0, kfac * k * k);
    }
    return plan;
}

void step_in_place(WaveFunction& psi, const PropagatorPlan& plan) {
    if (!(psi.grid == plan.grid)) throw SimulationError("propagator step: grid mismatch");
    const std::size_t n = psi.grid.n;
    auto* a = psi.amp.data();
    for (std::size_t j = 0; j < n; ++j) a[j] *= plan.half_potential_phase[j];
    plan.fft->forward(a);
    for (std::size_t j = 0; j < n; ++j) a[j] *= plan.kinetic_phase[j];
    plan.fft->inverse(a);
    for (std::size_t j = 0; j < n; ++j) a[j] *= plan.half_potential_phase[j];
}

WaveFunction step(const WaveFunction& psi, const PropagatorPlan& plan) {
    WaveFunction out = psi;
    step_in_place(out, plan);
    return out;
}

WaveFunction evolve_burst(const WaveFunction& psi, const PotentialSpec& potential, double hbar,
                          double m, double substep, double duration,
                          std::shared_ptr<const Fft> fft) {
    if (!(duration > 0.0)) throw SimulationError("evolve_burst: duration must be positive");
    if (!fft) fft = std::make_shared<Fft>(psi.grid.n);

    const auto nsub =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(duration / substep - 1e-12)));
    const double remainder = duration - static_cast<double>(nsub - 1) * substep;
    const bool full_last = std::abs(remainder - substep) <= 1e-12 * substep;

    WaveFunction out = psi;
    if (nsub > 1 || full_last) {
        const PropagatorPlan main = make_plan(psi.grid, potential, hbar, m, substep, fft);
        const std::size_t full_steps = full_last ? nsub : nsub - 1;
        for (std::size_t i = 0; i < full_steps; ++i) step_in_place(out, main);
    }
    // Final substep shortened so the burst lands exactly on `duration`.
    if (!full_last) {
        const PropagatorPlan last = make_plan(psi.grid, potential, hbar, m, remainder, fft);
        step_in_place(out, last);
    }
    return out;
}

}  // namespace qcsim
