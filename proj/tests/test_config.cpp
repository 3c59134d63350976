#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "qcsim/common.hpp"
#include "qcsim/config.hpp"

using namespace qcsim;

TEST_SUITE_BEGIN("config");

static SimConfig paper_defaults() {
    SimConfig c;
    c.hbar = 1e-3;
    c.mass = 1.0;
    c.omega = 1.0;
    c.x0 = 0.0;
    c.p0 = 1.0;
    c.divergence_threshold = 0.05;
    c.ensemble_size = 25;
    c.momentum_prefactor = 8.0;
    c.uncertainty_prefactor = 15.0;
    c.husimi_resolution = 50;
    c.potential = Harmonic{5.0};
    return c;
}

TEST_CASE("paper defaults validate") {
    const ValidatedConfig vc = validate(paper_defaults());
    CHECK(vc.cfg.ensemble_size == 25);
    CHECK(vc.widths.sigma_x == doctest::Approx(std::sqrt(5e-4)).epsilon(1e-12));
}

TEST_CASE("zero hbar is rejected by name") {
    SimConfig c = paper_defaults();
    c.hbar = 0.0;
    CHECK_THROWS_WITH_AS(validate(c), doctest::Contains("hbar must be positive"), ConfigError);
}

TEST_CASE("non power-of-two grid is rejected") {
    SimConfig c = paper_defaults();
    c.grid_points = 100;
    CHECK_THROWS_WITH_AS(validate(c), doctest::Contains("must be power of two"), ConfigError);
}

TEST_CASE("all violations are reported together") {
    SimConfig c = paper_defaults();
    c.hbar = -1.0;
    c.ensemble_size = 0;
    c.divergence_threshold = 0.0;
    try {
        validate(c);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("hbar") != std::string::npos);
        CHECK(msg.find("ensemble_size") != std::string::npos);
        CHECK(msg.find("divergence_threshold") != std::string::npos);
    }
}

TEST_CASE("coherent widths") {
    SUBCASE("natural units") {
        const CoherentWidths w = coherent_widths(1.0, 1.0, 1.0);
        CHECK(w.sigma_x == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
        CHECK(w.sigma_p == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
    }
    SUBCASE("small hbar") {
        const CoherentWidths w = coherent_widths(0.01, 1.0, 1.0);
        CHECK(w.sigma_x == doctest::Approx(0.070710678118654752).epsilon(1e-14));
        CHECK(w.sigma_p == doctest::Approx(0.070710678118654752).epsilon(1e-14));
    }
    SUBCASE("product is hbar/2 to machine precision") {
        Rng rng(7);
        for (int i = 0; i < 200; ++i) {
            const double hbar = std::exp(rng.uniform(std::log(1e-8), std::log(1e2)));
            const double m = std::exp(rng.uniform(-3.0, 3.0));
            const double omega = std::exp(rng.uniform(-3.0, 3.0));
            const CoherentWidths w = coherent_widths(hbar, m, omega);
            CHECK(w.sigma_x * w.sigma_p == doctest::Approx(hbar / 2.0).epsilon(1e-13));
        }
    }
}

TEST_CASE("validate is idempotent") {
    const ValidatedConfig once = validate(paper_defaults());
    const ValidatedConfig twice = validate(once);
    CHECK(once.cfg.hbar == twice.cfg.hbar);
    CHECK(once.widths.sigma_x == twice.widths.sigma_x);
    CHECK(once.widths.sigma_p == twice.widths.sigma_p);
    CHECK(config_to_text(once.cfg) == config_to_text(twice.cfg));
}

TEST_CASE("config file round trip") {
    const auto path = std::filesystem::temp_directory_path() / "qcsim_test_config.cfg";
    {
        std::ofstream out(path);
        out << "# comment line\n";
        out << "hbar = 1e-5\n";
        out << "dt_meas = 0.03   # trailing comment\n";
        out << "k = 7.5\n";  // parameter before the potential name on purpose
        out << "potential = harmonic\n";
        out << "ensemble_size = 4\n";
        out << "sample_jitter = false\n";
        out << "divergence_mode = per_run\n";
    }
    const SimConfig cfg = load_config_file(path);
    CHECK(cfg.hbar == 1e-5);
    CHECK(cfg.dt_meas == 0.03);
    CHECK(std::get<Harmonic>(cfg.potential).k == 7.5);
    CHECK(cfg.ensemble_size == 4);
    CHECK(cfg.sample_jitter == false);
    CHECK(cfg.divergence_mode == DivergenceMode::per_run);

    // snapshot -> reload reproduces the same snapshot
    const auto snap_path = std::filesystem::temp_directory_path() / "qcsim_test_snap.cfg";
    {
        std::ofstream out(snap_path);
        out << config_to_text(cfg);
    }
    const SimConfig reloaded = load_config_file(snap_path);
    CHECK(config_to_text(reloaded) == config_to_text(cfg));
    std::filesystem::remove(path);
    std::filesystem::remove(snap_path);
}

TEST_CASE("unknown keys and bad values are rejected") {
    SimConfig cfg;
    CHECK_THROWS_AS(apply_config_key(cfg, "hbarr", "1"), ConfigError);
    CHECK_THROWS_AS(apply_config_key(cfg, "hbar", "abc"), ConfigError);
    CHECK_THROWS_AS(apply_config_key(cfg, "divergence_mode", "bogus"), ConfigError);
    // parameter not taken by the current potential kind
    apply_config_key(cfg, "potential", "free");
    CHECK_THROWS_AS(apply_config_key(cfg, "k", "2"), ConfigError);
}

TEST_SUITE_END();
