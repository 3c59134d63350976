#ifndef QCSIM_GRID_HPP
#define QCSIM_GRID_HPP

#include <complex>
#include <cstddef>
#include <vector>

#include "qcsim/common.hpp"
#include "qcsim/config.hpp"

namespace qcsim {

// Uniform spatial grid: x(j) = x_min + j dx, j in [0, n). The periodic
// domain length for spectral purposes is n*dx.
struct Grid {
    double x_min = 0.0;
    double dx = 1.0;
    std::size_t n = 0;

    double x(std::size_t j) const { return x_min + static_cast<double>(j) * dx; }
    double length() const { return static_cast<double>(n) * dx; }
    bool operator==(const Grid&) const = default;
};

// Complex amplitudes on a grid; kept normalized (sum |psi|^2 dx = 1).
struct WaveFunction {
    Grid grid;
    std::vector<std::complex<double>> amp;
};

double norm_sq(const WaveFunction& psi);
void normalize(WaveFunction& psi);

// Probability mass on the outermost 2% of points (1% per side); the
// window-adequacy guard.
double edge_mass(const WaveFunction& psi);

double expectation_x(const WaveFunction& psi);
double position_variance(const WaveFunction& psi);

// <p> evaluated spectrally: the amplitude is transformed to the momentum
// grid p = hbar k with the standard DFT frequencies, and the mean is taken
// over |psi~|^2. hbar enters only as the overall scale of k.
double expectation_p(const WaveFunction& psi, double hbar);

class Fft;
double expectation_p(const WaveFunction& psi, double hbar, const Fft& fft);

// <old|new> on a shared grid (grid quadrature).
std::complex<double> overlap(const WaveFunction& a, const WaveFunction& b);

// Discretized coherent state (mw/pi hbar)^(1/4) exp[-mw (x-x0)^2 / 2 hbar] e^{i p0 (x-x0)/hbar},
// renormalized on the grid. The plane-wave factor is referenced to x0, a
// global phase relative to the e^{i p0 x/hbar} convention.
// Throws SimulationError when the window cannot hold the state: edge mass
// above 1e-8, or |p0| too close to the grid's momentum Nyquist range.
WaveFunction make_coherent_state(PhasePoint center, const CoherentWidths& widths, double hbar,
                                 double m, double omega, const Grid& grid);

struct WindowPolicy {
    double momentum_prefactor = 8.0;
    double uncertainty_prefactor = 15.0;
};

// Half-width L = max(c_p |p|/m dt_meas, c_u sigma_x): drift allocation vs
// uncertainty allocation, whichever is more stringent. Grid spans
// [center.x - L, center.x + L) with the given point count.
Grid plan_window(PhasePoint center, const CoherentWidths& widths, const WindowPolicy& policy,
                 double dt_meas, double m, std::size_t n);

// Transfers amplitudes to a new grid by linear interpolation of the real and
// imaginary parts (zero outside the old support), then renormalizes.
// Throws SimulationError if the pre-renormalization norm^2 drops below 0.999.
WaveFunction rewindow(const WaveFunction& psi, const Grid& new_grid);

}  // namespace qcsim

#endif
