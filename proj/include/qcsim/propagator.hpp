#ifndef QCSIM_PROPAGATOR_HPP
#define QCSIM_PROPAGATOR_HPP

#include <memory>

#include "qcsim/fft.hpp"
#include "qcsim/grid.hpp"
#include "qcsim/potentials.hpp"

namespace qcsim {

// Cached phase factors for one (grid, substep) pair. Windows move after each
// measurement, so plans are rebuilt per burst; the Fft object only depends on
// n and is shared across bursts of a run.
struct PropagatorPlan {
    Grid grid;
    double hbar = 0.0;
    double m = 0.0;
    double dt = 0.0;
    std::vector<std::complex<double>> half_potential_phase;  // exp(-i V(x) dt / 2 hbar)
    std::vector<std::complex<double>> kinetic_phase;         // exp(-i hbar k^2 dt / 2 m)
    std::shared_ptr<const Fft> fft;
};

PropagatorPlan make_plan(const Grid& grid, const PotentialSpec& potential, double hbar, double m,
                         double dt, std::shared_ptr<const Fft> fft = nullptr);

// One Strang step: half potential kick, kinetic evolution in momentum space,
// half potential kick. Unitary up to roundoff.
WaveFunction step(const WaveFunction& psi, const PropagatorPlan& plan);
void step_in_place(WaveFunction& psi, const PropagatorPlan& plan);

// ceil(duration/substep) steps with the final substep shortened so the total
// is exactly `duration`.
WaveFunction evolve_burst(const WaveFunction& psi, const PotentialSpec& potential, double hbar,
                          double m, double substep, double duration,
                          std::shared_ptr<const Fft> fft = nullptr);

}  // namespace qcsim

#endif
