#include "qcsim/classical.hpp"

#include <cmath>

#include "qcsim/common.hpp"

namespace qcsim {

ClassicalState rk4_step(const ClassicalState& s, const PotentialSpec& potential, double m,
                        double dt) {
    const double kx1 = s.p / m;
    const double kp1 = force(potential, s.x);

    const double kx2 = (s.p + 0.5 * dt * kp1) / m;
    const double kp2 = force(potential, s.x + 0.5 * dt * kx1);

    const double kx3 = (s.p + 0.5 * dt * kp2) / m;
    const double kp3 = force(potential, s.x + 0.5 * dt * kx2);

    const double kx4 = (s.p + dt * kp3) / m;
    const double kp4 = force(potential, s.x + dt * kx3);

    return {s.t + dt, s.x + dt / 6.0 * (kx1 + 2.0 * (kx2 + kx3) + kx4),
            s.p + dt / 6.0 * (kp1 + 2.0 * (kp2 + kp3) + kp4)};
}

ClassicalState evolve_to(const ClassicalState& s, const PotentialSpec& potential, double m,
                         double t_target, double dt_classical) {
    if (t_target < s.t) throw SimulationError("evolve_to: target time in the past", s.t);
    const double span = t_target - s.t;
    if (span == 0.0) return s;

    const auto n_full = static_cast<std::size_t>(std::floor(span / dt_classical + 1e-12));
    ClassicalState out = s;
    for (std::size_t i = 0; i < n_full; ++i) {
        out = rk4_step(out, potential, m, dt_classical);
        out.t = s.t + static_cast<double>(i + 1) * dt_classical;
    }
    const double rem = t_target - out.t;
    if (rem > 1e-12 * dt_classical) out = rk4_step(out, potential, m, rem);
    out.t = t_target;
    return out;
}

}  // namespace qcsim
