#include "qcsim/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qcsim/fft.hpp"

namespace qcsim {

double norm_sq(const WaveFunction& psi) {
    double s = 0.0;
    for (const auto& a : psi.amp) s += std::norm(a);
    return s * psi.grid.dx;
}

void normalize(WaveFunction& psi) {
    const double n2 = norm_sq(psi);
    if (!(n2 > 0.0)) throw SimulationError("cannot normalize a zero wavefunction");
    const double s = 1.0 / std::sqrt(n2);
    for (auto& a : psi.amp) a *= s;
}

double edge_mass(const WaveFunction& psi) {
    const std::size_t n = psi.grid.n;
    const std::size_t side = std::max<std::size_t>(1, (n + 99) / 100);  // ceil(1%) per side
    double s = 0.0;
    for (std::size_t j = 0; j < side; ++j)
        s += std::norm(psi.amp[j]) + std::norm(psi.amp[n - 1 - j]);
    return s * psi.grid.dx;
}

double expectation_x(const WaveFunction& psi) {
    double s = 0.0;
    for (std::size_t j = 0; j < psi.grid.n; ++j) s += psi.grid.x(j) * std::norm(psi.amp[j]);
    return s * psi.grid.dx / norm_sq(psi);
}

double position_variance(const WaveFunction& psi) {
    const double mu = expectation_x(psi);
    double s = 0.0;
    for (std::size_t j = 0; j < psi.grid.n; ++j) {
        const double d = psi.grid.x(j) - mu;
        s += d * d * std::norm(psi.amp[j]);
    }
    return s * psi.grid.dx / norm_sq(psi);
}

double expectation_p(const WaveFunction& psi, double hbar, const Fft& fft) {
    const std::size_t n = psi.grid.n;
    std::vector<std::complex<double>> tilde = psi.amp;
    fft.forward(tilde.data());
    const double dk = 2.0 * std::numbers::pi / psi.grid.length();
    double num = 0.0, den = 0.0;
    for (std::size_t f = 0; f < n; ++f) {
        const double w = std::norm(tilde[f]);
        const double fr = f < n / 2 ? static_cast<double>(f)
                                    : static_cast<double>(f) - static_cast<double>(n);
        num += hbar * fr * dk * w;
        den += w;
    }
    return num / den;
}

double expectation_p(const WaveFunction& psi, double hbar) {
    return expectation_p(psi, hbar, Fft(psi.grid.n));
}

std::complex<double> overlap(const WaveFunction& a, const WaveFunction& b) {
    if (!(a.grid == b.grid)) throw SimulationError("overlap: grids differ");
    std::complex<double> s = 0.0;
    for (std::size_t j = 0; j < a.grid.n; ++j) s += std::conj(a.amp[j]) * b.amp[j];
    return s * a.grid.dx;
}

WaveFunction make_coherent_state(PhasePoint center, const CoherentWidths& widths, double hbar,
                                 double m, double omega, const Grid& grid) {
    // Momentum support |p0| + 8 sigma_p must sit inside the spectral band
    // [-pi hbar/dx, pi hbar/dx), or the state aliases.
    const double p_nyquist = std::numbers::pi * hbar / grid.dx;
    if (std::abs(center.p) + 8.0 * widths.sigma_p > p_nyquist)
        throw SimulationError("window cannot represent momentum " + std::to_string(center.p) +
                              " (Nyquist " + std::to_string(p_nyquist) + ")");

    WaveFunction psi{grid, std::vector<std::complex<double>>(grid.n)};
    const double amp0 = std::pow(m * omega / (std::numbers::pi * hbar), 0.25);
    const double gauss_scale = m * omega / (2.0 * hbar);
    for (std::size_t j = 0; j < grid.n; ++j) {
        const double d = grid.x(j) - center.x;
        const double mag = amp0 * std::exp(-gauss_scale * d * d);
        psi.amp[j] = std::polar(mag, center.p * d / hbar);
    }
    normalize(psi);
    const double em = edge_mass(psi);
    if (em > 1e-8)
        throw SimulationError("window too narrow for coherent state (edge mass " +
                              std::to_string(em) + ")");
    return psi;
}

Grid plan_window(PhasePoint center, const CoherentWidths& widths, const WindowPolicy& policy,
                 double dt_meas, double m, std::size_t n) {
    const double drift = policy.momentum_prefactor * (std::abs(center.p) / m) * dt_meas;
    const double spread = policy.uncertainty_prefactor * widths.sigma_x;
    const double half = std::max(drift, spread);
    const double dx = 2.0 * half / static_cast<double>(n);
    return Grid{center.x - half, dx, n};
}

WaveFunction rewindow(const WaveFunction& psi, const Grid& new_grid) {
    const Grid& old = psi.grid;
    WaveFunction out{new_grid, std::vector<std::complex<double>>(new_grid.n)};
    const double x_last = old.x(old.n - 1);
    for (std::size_t j = 0; j < new_grid.n; ++j) {
        const double x = new_grid.x(j);
        if (x < old.x_min || x > x_last) continue;
        double u = (x - old.x_min) / old.dx;
        // snap to the lattice when nodes coincide (identity and integer shifts)
        const double r = std::round(u);
        if (std::abs(u - r) < 1e-9) u = r;
        std::size_t i0 = static_cast<std::size_t>(u);
        if (i0 >= old.n - 1) i0 = old.n - 2;
        const double f = u - static_cast<double>(i0);
        out.amp[j] = f == 0.0 ? psi.amp[i0] : (1.0 - f) * psi.amp[i0] + f * psi.amp[i0 + 1];
    }
    const double n2 = norm_sq(out);
    if (n2 < 0.999)
        throw SimulationError("rewindow lost support (norm^2 " + std::to_string(n2) + ")");
    const double s = 1.0 / std::sqrt(n2);
    for (auto& a : out.amp) a *= s;
    return out;
}

}  // namespace qcsim
