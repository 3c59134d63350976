#include "qcsim/husimi.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qcsim {

double HusimiField::total_mass() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s * cell_area() / (2.0 * hbar);
}

HusimiField compute_husimi(const WaveFunction& psi, const PhaseWindow& window, int resolution,
                           double hbar, double m, double omega) {
    if (resolution < 2) throw SimulationError("husimi resolution must be at least 2");
    if (!(window.x_max > window.x_min) || !(window.p_max > window.p_min))
        throw SimulationError("husimi window is empty");

    HusimiField field;
    field.window = window;
    field.resolution = resolution;
    field.cell_dx = (window.x_max - window.x_min) / resolution;
    field.cell_dp = (window.p_max - window.p_min) / resolution;
    field.hbar = hbar;
    field.values.assign(static_cast<std::size_t>(resolution) * resolution, 0.0);

    const Grid& g = psi.grid;
    const double sigma_x = std::sqrt(hbar / (2.0 * m * omega));
    const double amp0 = std::pow(m * omega / (std::numbers::pi * hbar), 0.25);
    const double gauss_scale = m * omega / (2.0 * hbar);
    // The projector's Gaussian envelope decays as exp(-u^2/4 sigma_x^2):
    // beyond 12 sigma_x the integrand is below e^-36.
    const double reach = 12.0 * sigma_x;
    // The overlap integrand is band-limited (probe and state momenta differ
    // by a handful of sigma_p), so the quadrature may subsample the grid:
    // steps of ~sigma_x/4 keep the aliasing error far below 1e-10.
    const auto stride =
        std::max<std::size_t>(1, static_cast<std::size_t>(0.25 * sigma_x / g.dx));
    const double weight = g.dx * static_cast<double>(stride);
    const double p_first = window.p_min + 0.5 * field.cell_dp;
    const double inv_pi = 1.0 / std::numbers::pi;

    const auto res = static_cast<std::size_t>(resolution);
    std::vector<double> acc_re(res), acc_im(res);

    for (int ix = 0; ix < resolution; ++ix) {
        const double xc = window.x_min + (ix + 0.5) * field.cell_dx;
        const auto lo = std::max(0.0, std::ceil((xc - reach - g.x_min) / g.dx));
        const auto hi =
            std::min(static_cast<double>(g.n) - 1.0, std::floor((xc + reach - g.x_min) / g.dx));
        if (lo > hi) continue;

        std::fill(acc_re.begin(), acc_re.end(), 0.0);
        std::fill(acc_im.begin(), acc_im.end(), 0.0);
        for (auto j = static_cast<std::size_t>(lo); j <= static_cast<std::size_t>(hi);
             j += stride) {
            const double u = g.x(j) - xc;
            const double env = amp0 * std::exp(-gauss_scale * u * u) * weight;
            const double wr = env * psi.amp[j].real();
            const double wi = env * psi.amp[j].imag();
            // phase walks across the probe momenta: exp(-i p_r u / hbar)
            const double a0 = -p_first * u / hbar;
            double ph_r = std::cos(a0), ph_i = std::sin(a0);
            const double da = -field.cell_dp * u / hbar;
            const double st_r = std::cos(da), st_i = std::sin(da);
            for (std::size_t r = 0; r < res; ++r) {
                acc_re[r] += wr * ph_r - wi * ph_i;
                acc_im[r] += wr * ph_i + wi * ph_r;
                const double t = ph_r * st_r - ph_i * st_i;
                ph_i = ph_r * st_i + ph_i * st_r;
                ph_r = t;
            }
        }
        for (std::size_t r = 0; r < res; ++r)
            field.values[static_cast<std::size_t>(ix) * res + r] =
                inv_pi * (acc_re[r] * acc_re[r] + acc_im[r] * acc_im[r]);
    }

    if (field.total_mass() < 1e-6)
        throw SimulationError("husimi window is disjoint from the wavefunction support");
    return field;
}

PhasePoint sample_phase_point(const HusimiField& field, Rng& rng, bool jitter) {
    double total = 0.0;
    for (double v : field.values) total += v;
    if (!(total > 0.0)) throw SimulationError("cannot sample a zero-mass husimi field");

    const double u = rng.uniform() * total;
    double acc = 0.0;
    std::size_t chosen = field.values.size() - 1;
    for (std::size_t i = 0; i < field.values.size(); ++i) {
        acc += field.values[i];
        if (u < acc) {
            chosen = i;
            break;
        }
    }
    const int ix = static_cast<int>(chosen) / field.resolution;
    const int ip = static_cast<int>(chosen) % field.resolution;
    if (!jitter) return field.cell_center(ix, ip);
    return {field.window.x_min + (ix + rng.uniform()) * field.cell_dx,
            field.window.p_min + (ip + rng.uniform()) * field.cell_dp};
}

MeasureResult measure(const WaveFunction& psi, const ValidatedConfig& vc, Rng& rng,
                      const Fft* fft) {
    const SimConfig& c = vc.cfg;
    const double mx = expectation_x(psi);
    const double mp = fft ? expectation_p(psi, c.hbar, *fft) : expectation_p(psi, c.hbar);

    const double hx = c.husimi_nsigma * vc.widths.sigma_x;
    const double hp = c.husimi_nsigma * vc.widths.sigma_p;
    const PhaseWindow window{mx - hx, mx + hx, mp - hp, mp + hp};

    HusimiField field =
        compute_husimi(psi, window, c.husimi_resolution, c.hbar, c.mass, c.omega);
    const PhasePoint pt = sample_phase_point(field, rng, c.sample_jitter);

    const WindowPolicy policy{c.momentum_prefactor, c.uncertainty_prefactor};
    const Grid next = plan_window(pt, vc.widths, policy, c.dt_meas, c.mass, psi.grid.n);
    WaveFunction collapsed =
        make_coherent_state(pt, vc.widths, c.hbar, c.mass, c.omega, next);
    return {pt, std::move(collapsed), std::move(field)};
}

}  // namespace qcsim
