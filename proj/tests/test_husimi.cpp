#include <cmath>
#include <numbers>

#include "doctest.h"
#include "qcsim/husimi.hpp"
#include "test_helpers.hpp"

using namespace qcsim;

TEST_SUITE_BEGIN("measurement");

namespace {

constexpr double kPi = std::numbers::pi;

Grid centered_grid(double center, double half, std::size_t n) {
    return Grid{center - half, 2.0 * half / static_cast<double>(n), n};
}

WaveFunction coherent(double x0, double p0, double hbar, std::size_t n = 2048) {
    const CoherentWidths w = coherent_widths(hbar, 1.0, 1.0);
    const Grid g = centered_grid(x0, 12.0 * w.sigma_x, n);
    return make_coherent_state({x0, p0}, w, hbar, 1.0, 1.0, g);
}

PhaseWindow window_around(double x, double p, double nsig, const CoherentWidths& w) {
    return {x - nsig * w.sigma_x, x + nsig * w.sigma_x, p - nsig * w.sigma_p,
            p + nsig * w.sigma_p};
}

// closed-form coherent-state overlap density
double analytic_q(double dx, double dp, double hbar, double m, double omega) {
    return std::exp(-m * omega * dx * dx / (2.0 * hbar) - dp * dp / (2.0 * m * omega * hbar)) /
           kPi;
}

}  // namespace

TEST_CASE("husimi of a coherent state") {
    const double hbar = 0.01, x0 = 0.2, p0 = 0.5;
    const CoherentWidths w = coherent_widths(hbar, 1.0, 1.0);
    const WaveFunction psi = coherent(x0, p0, hbar);
    // odd resolution puts the middle cell center exactly on (x0, p0)
    const HusimiField f =
        compute_husimi(psi, window_around(x0, p0, 5.0, w), 51, hbar, 1.0, 1.0);

    SUBCASE("self-overlap peak is 1/pi") {
        CHECK(std::abs(f.value_at(25, 25) - 1.0 / kPi) < 1e-4);
    }
    SUBCASE("displaced values follow the closed-form overlap") {
        Rng rng(5);
        for (int trial = 0; trial < 100; ++trial) {
            const int ix = static_cast<int>(rng.uniform() * 51);
            const int ip = static_cast<int>(rng.uniform() * 51);
            const PhasePoint c = f.cell_center(ix, ip);
            CHECK(std::abs(f.value_at(ix, ip) -
                           analytic_q(c.x - x0, c.p - p0, hbar, 1.0, 1.0)) < 1e-4);
        }
    }
    SUBCASE("values are nonnegative and mass does not exceed 1") {
        for (double v : f.values) CHECK(v >= 0.0);
        CHECK(f.total_mass() > 0.0);
        CHECK(f.total_mass() <= 1.0 + 1e-6);
    }
    SUBCASE("a 5-sigma window captures at least 99.9% of the mass") {
        CHECK(f.total_mass() >= 0.999);
    }
    SUBCASE("a 6-sigma window integrates to 1 within 1e-3") {
        const HusimiField f6 =
            compute_husimi(psi, window_around(x0, p0, 6.0, w), 50, hbar, 1.0, 1.0);
        CHECK(std::abs(f6.total_mass() - 1.0) < 1e-3);
    }
}

TEST_CASE("husimi respects the simulation widths under m, omega != 1") {
    const double hbar = 0.02, m = 2.0, omega = 3.0, x0 = -0.4, p0 = 1.1;
    const CoherentWidths w = coherent_widths(hbar, m, omega);
    const Grid g = centered_grid(x0, 12.0 * w.sigma_x, 4096);
    const WaveFunction psi = make_coherent_state({x0, p0}, w, hbar, m, omega, g);
    const HusimiField f = compute_husimi(psi, window_around(x0, p0, 5.0, w), 41, hbar, m, omega);
    CHECK(std::abs(f.value_at(20, 20) - 1.0 / kPi) < 1e-4);
    CHECK(f.total_mass() >= 0.999);
    const PhasePoint c = f.cell_center(30, 12);
    CHECK(std::abs(f.value_at(30, 12) - analytic_q(c.x - x0, c.p - p0, hbar, m, omega)) < 1e-4);
}

TEST_CASE("disjoint window raises") {
    const double hbar = 0.01;
    const CoherentWidths w = coherent_widths(hbar, 1.0, 1.0);
    const WaveFunction psi = coherent(0.0, 0.0, hbar);
    CHECK_THROWS_AS(
        compute_husimi(psi, window_around(100.0 * w.sigma_x, 0.0, 5.0, w), 50, hbar, 1.0, 1.0),
        SimulationError);
}

TEST_CASE("sampling") {
    SUBCASE("degenerate field always yields the massive cell") {
        HusimiField f;
        f.window = {0.0, 1.0, 0.0, 1.0};
        f.resolution = 4;
        f.cell_dx = f.cell_dp = 0.25;
        f.hbar = 0.5;
        f.values.assign(16, 0.0);
        f.values[4 * 2 + 1] = 3.0;  // cell (2, 1)
        Rng rng(3);
        for (int i = 0; i < 200; ++i) {
            const PhasePoint pt = sample_phase_point(f, rng);
            CHECK(pt.x >= 0.50);
            CHECK(pt.x < 0.75);
            CHECK(pt.p >= 0.25);
            CHECK(pt.p < 0.50);
        }
    }
    SUBCASE("zero-mass field raises") {
        HusimiField f;
        f.window = {0.0, 1.0, 0.0, 1.0};
        f.resolution = 2;
        f.cell_dx = f.cell_dp = 0.5;
        f.hbar = 0.5;
        f.values.assign(4, 0.0);
        Rng rng(3);
        CHECK_THROWS_AS(sample_phase_point(f, rng), SimulationError);
    }
    SUBCASE("uniform field draws pass the chi-square test") {
        HusimiField f;
        f.window = {0.0, 1.0, 0.0, 1.0};
        f.resolution = 20;
        f.cell_dx = f.cell_dp = 0.05;
        f.hbar = 0.5;
        f.values.assign(400, 1.0);
        Rng rng(17);
        std::vector<double> counts(400, 0.0);
        const int draws = 100000;
        for (int i = 0; i < draws; ++i) {
            const PhasePoint pt = sample_phase_point(f, rng);
            const int ix = std::min(19, static_cast<int>(pt.x / 0.05));
            const int ip = std::min(19, static_cast<int>(pt.p / 0.05));
            counts[ix * 20 + ip] += 1.0;
        }
        const std::vector<double> expected(400, draws / 400.0);
        std::size_t bins = 0;
        const double stat = chi2_stat(counts, expected, bins);
        CHECK(stat < chi2_quantile(kZ999, static_cast<double>(bins - 1)));
    }
    SUBCASE("coherent field draws center on the packet") {
        const double hbar = 0.01, x0 = 0.3;
        const CoherentWidths w = coherent_widths(hbar, 1.0, 1.0);
        const WaveFunction psi = coherent(x0, 0.0, hbar);
        const HusimiField f =
            compute_husimi(psi, window_around(x0, 0.0, 5.0, w), 50, hbar, 1.0, 1.0);
        Rng rng(23);
        const int draws = 100000;
        double sum = 0.0, sum2 = 0.0;
        for (int i = 0; i < draws; ++i) {
            const double x = sample_phase_point(f, rng).x;
            sum += x;
            sum2 += x * x;
        }
        const double mean = sum / draws;
        const double sd = std::sqrt(sum2 / draws - mean * mean);
        CHECK(std::abs(mean - x0) < 4.0 * sd / std::sqrt(static_cast<double>(draws)));
    }
    SUBCASE("replay with the same seed is bit-identical") {
        const double hbar = 0.01;
        const CoherentWidths w = coherent_widths(hbar, 1.0, 1.0);
        const WaveFunction psi = coherent(0.0, 0.2, hbar);
        const HusimiField f =
            compute_husimi(psi, window_around(0.0, 0.2, 5.0, w), 50, hbar, 1.0, 1.0);
        Rng a(99), b(99);
        for (int i = 0; i < 1000; ++i) {
            const PhasePoint u = sample_phase_point(f, a);
            const PhasePoint v = sample_phase_point(f, b);
            CHECK(u.x == v.x);
            CHECK(u.p == v.p);
        }
    }
    SUBCASE("cell-center mode lands on the lattice") {
        HusimiField f;
        f.window = {0.0, 1.0, 0.0, 1.0};
        f.resolution = 4;
        f.cell_dx = f.cell_dp = 0.25;
        f.hbar = 0.5;
        f.values.assign(16, 1.0);
        Rng rng(8);
        for (int i = 0; i < 50; ++i) {
            const PhasePoint pt = sample_phase_point(f, rng, /*jitter=*/false);
            const double rx = std::remainder(pt.x - 0.125, 0.25);
            const double rp = std::remainder(pt.p - 0.125, 0.25);
            CHECK(std::abs(rx) < 1e-12);
            CHECK(std::abs(rp) < 1e-12);
        }
    }
}

TEST_CASE("measure") {
    SimConfig c;
    c.hbar = 1e-3;
    c.p0 = 0.0;
    c.grid_points = 512;
    c.grid_auto = false;
    const ValidatedConfig vc = validate(c);
    const WindowPolicy policy{c.momentum_prefactor, c.uncertainty_prefactor};
    const Grid g = plan_window({0.0, 0.0}, vc.widths, policy, c.dt_meas, 1.0, 512);
    const WaveFunction psi = make_coherent_state({0.0, 0.0}, vc.widths, c.hbar, 1.0, 1.0, g);

    SUBCASE("collapse produces a coherent state at the sampled point") {
        Rng rng(42);
        const MeasureResult mr = measure(psi, vc, rng);
        CHECK(std::abs(expectation_x(mr.collapsed) - mr.point.x) < 1e-8);
        CHECK(std::abs(expectation_p(mr.collapsed, c.hbar) - mr.point.p) < 1e-8);
        const HusimiField peak = compute_husimi(
            mr.collapsed, window_around(mr.point.x, mr.point.p, 5.0, vc.widths), 51, c.hbar,
            1.0, 1.0);
        CHECK(std::abs(peak.value_at(25, 25) - 1.0 / kPi) < 1e-4);
        CHECK(std::abs(norm_sq(mr.collapsed) - 1.0) < 1e-10);
    }
    SUBCASE("sampled scatter sits between sigma_x and 2 sigma_x") {
        // the Husimi of a coherent state is double-width: std sigma_x sqrt(2)
        Rng rng(4242);
        const int reps = 2000;
        double sum = 0.0, sum2 = 0.0;
        for (int i = 0; i < reps; ++i) {
            const double x = measure(psi, vc, rng).point.x;
            sum += x;
            sum2 += x * x;
        }
        const double mean = sum / reps;
        const double sd = std::sqrt(sum2 / reps - mean * mean);
        CHECK(sd > vc.widths.sigma_x);
        CHECK(sd < 2.0 * vc.widths.sigma_x);
    }
    SUBCASE("measurement chains drift without bias") {
        SimConfig cc = c;
        cc.hbar = 1e-4;
        cc.grid_points = 128;
        cc.husimi_resolution = 30;
        const ValidatedConfig vcc = validate(cc);
        Rng rng(7);
        const int chains = 3000, length = 10;
        double sum_dx = 0.0, sum_dp = 0.0, sum_dx2 = 0.0, sum_dp2 = 0.0;
        long steps = 0;
        for (int chain = 0; chain < chains; ++chain) {
            const Grid g0 =
                plan_window({0.0, 0.0}, vcc.widths, policy, cc.dt_meas, 1.0, cc.grid_points);
            WaveFunction state =
                make_coherent_state({0.0, 0.0}, vcc.widths, cc.hbar, 1.0, 1.0, g0);
            PhasePoint prev{0.0, 0.0};
            for (int step = 0; step < length; ++step) {
                const MeasureResult mr = measure(state, vcc, rng);
                sum_dx += mr.point.x - prev.x;
                sum_dp += mr.point.p - prev.p;
                sum_dx2 += (mr.point.x - prev.x) * (mr.point.x - prev.x);
                sum_dp2 += (mr.point.p - prev.p) * (mr.point.p - prev.p);
                prev = mr.point;
                state = mr.collapsed;
                ++steps;
            }
        }
        const double n = static_cast<double>(steps);
        const double se_x = std::sqrt(sum_dx2 / n) / std::sqrt(n);
        const double se_p = std::sqrt(sum_dp2 / n) / std::sqrt(n);
        CHECK(std::abs(sum_dx / n) < 5.0 * se_x);
        CHECK(std::abs(sum_dp / n) < 5.0 * se_p);
    }
}

TEST_SUITE_END();
