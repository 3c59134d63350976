#ifndef QCSIM_REGIMES_HPP
#define QCSIM_REGIMES_HPP

#include "qcsim/config.hpp"
#include "qcsim/potentials.hpp"

namespace qcsim {

// Evaluation point for the two regime inequalities. delta_x/delta_p are
// displacements from the packet center; the defaults below put them one
// coherent width out.
struct RegimeInputs {
    double hbar = 1e-3;
    double m = 1.0;
    double omega = 1.0;
    double dt_meas = 0.055;
    double p = 1.0;  // momentum at evaluation; the uncertainty criterion needs p != 0
    double x = 0.0;
    double delta_x = 0.0;
    double delta_p = 0.0;
    PotentialSpec potential = Harmonic{};
};

enum class RegimeLabel { uncertainty_dominated, wavelike, semiclassical, indeterminate };

const char* to_string(RegimeLabel label);

// hbar m / (2 omega p^2 dt^2): measurement jitter vs classical drift.
// Throws ConfigError on p == 0 or dt <= 0.
double uncertainty_lhs(const RegimeInputs& in);

// |(3 hbar m w dp - 4 dp^3) V'''(x)| / |6 m^2 w^2 (m w^2 p dx - dp V'(x))|:
// the Moyal third-order correction vs the Liouville flow, in the form that
// carries the factor p in the denominator. Throws ConfigError when the
// denominator vanishes.
double wavelike_lhs(const RegimeInputs& in);

// semiclassical iff both LHS < epsilon; uncertainty_dominated iff the
// uncertainty LHS >= epsilon regardless of the wavelike value; wavelike iff
// only the wavelike LHS >= epsilon; indeterminate absorbs singular inputs.
RegimeLabel classify(const RegimeInputs& in, double epsilon = 0.1) noexcept;

// delta_x = sigma_x, delta_p = sigma_p, evaluated at (x0, p0).
RegimeInputs regime_inputs_for(const ValidatedConfig& vc);

}  // namespace qcsim

#endif
