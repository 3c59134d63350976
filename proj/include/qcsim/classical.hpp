#ifndef QCSIM_CLASSICAL_HPP
#define QCSIM_CLASSICAL_HPP

#include "qcsim/potentials.hpp"

namespace qcsim {

struct ClassicalState {
    double t = 0.0;
    double x = 0.0;
    double p = 0.0;
};

// One RK4 step of xdot = p/m, pdot = -V'(x).
ClassicalState rk4_step(const ClassicalState& s, const PotentialSpec& potential, double m,
                        double dt);

// Fixed steps of dt_classical with the final step shortened to land exactly
// on t_target. Time is tracked by step counting, not repeated addition.
ClassicalState evolve_to(const ClassicalState& s, const PotentialSpec& potential, double m,
                         double t_target, double dt_classical);

}  // namespace qcsim

#endif
