#ifndef QCSIM_HUSIMI_HPP
#define QCSIM_HUSIMI_HPP

#include "qcsim/fft.hpp"
#include "qcsim/grid.hpp"

namespace qcsim {

struct PhaseWindow {
    double x_min = 0.0, x_max = 0.0;
    double p_min = 0.0, p_max = 0.0;
};

// Discretized Q(x,p) = (1/pi) |<x,p|psi>|^2 on a resolution x resolution
// cell grid; values are taken at cell centers. With this convention the
// normalizing phase-space measure is dx dp / (2 hbar) (coherent-state
// completeness), so total_mass() of a well-covered state is 1.
struct HusimiField {
    PhaseWindow window;
    int resolution = 0;
    double cell_dx = 0.0;
    double cell_dp = 0.0;
    double hbar = 1.0;
    std::vector<double> values;  // row-major, [ix * resolution + ip]

    double cell_area() const { return cell_dx * cell_dp; }
    double total_mass() const;  // sum of values * cell_area / (2 hbar)
    double value_at(int ix, int ip) const { return values[ix * resolution + ip]; }
    PhasePoint cell_center(int ix, int ip) const {
        return {window.x_min + (ix + 0.5) * cell_dx, window.p_min + (ip + 0.5) * cell_dp};
    }
};

// Overlaps are grid quadratures of the conjugated coherent state against psi,
// with the projector built from the same (hbar, m, omega) as the simulation.
// Throws SimulationError when the window is disjoint from the support of psi
// (total mass < 1e-6).
HusimiField compute_husimi(const WaveFunction& psi, const PhaseWindow& window, int resolution,
                           double hbar, double m, double omega);

// Categorical draw over cells with probability proportional to value * area;
// the returned point is uniform within the chosen cell (or its center when
// jitter is off). Throws SimulationError on a zero-mass field.
PhasePoint sample_phase_point(const HusimiField& field, Rng& rng, bool jitter = true);

struct MeasureResult {
    PhasePoint point;
    WaveFunction collapsed;
    HusimiField field;
};

// One POVM measurement: Husimi window spanning +-husimi_nsigma coherent
// widths around (<x>, <p>), one sample, collapse to a fresh coherent state on
// a newly planned spatial window. `fft` (same size as psi's grid) avoids
// re-planning for the spectral <p>; pass nullptr to plan ad hoc.
MeasureResult measure(const WaveFunction& psi, const ValidatedConfig& vc, Rng& rng,
                      const Fft* fft = nullptr);

}  // namespace qcsim

#endif
