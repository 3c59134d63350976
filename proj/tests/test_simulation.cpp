#include <cmath>

#include "doctest.h"
#include "qcsim/simulation.hpp"

using namespace qcsim;

TEST_SUITE_BEGIN("simulation");

namespace {

SimConfig fast_config() {
    SimConfig c;
    c.hbar = 1e-3;
    c.dt_meas = 0.055;
    c.potential = Harmonic{5.0};
    c.t_max = 3.0;
    c.ensemble_size = 3;
    return c;
}

bool records_equal(const RunRecord& a, const RunRecord& b) {
    if (a.times.size() != b.times.size()) return false;
    for (std::size_t i = 0; i < a.times.size(); ++i) {
        if (a.times[i] != b.times[i]) return false;
        if (a.quantum[i].x != b.quantum[i].x || a.quantum[i].p != b.quantum[i].p) return false;
        if (a.classical[i].x != b.classical[i].x || a.classical[i].p != b.classical[i].p)
            return false;
        if (a.rms.samples[i].second != b.rms.samples[i].second) return false;
    }
    return a.divergence_time == b.divergence_time && a.censored == b.censored &&
           a.breakdown == b.breakdown;
}

}  // namespace

TEST_CASE("identical config and seed replay bit-identically") {
    const ValidatedConfig vc = validate(fast_config());
    const RunRecord a = run_single(vc, 777);
    const RunRecord b = run_single(vc, 777);
    CHECK(records_equal(a, b));
    CHECK(!a.times.empty());
}

TEST_CASE("quantum and classical clocks stay aligned") {
    const ValidatedConfig vc = validate(fast_config());
    const RunRecord rec = run_single(vc, 12);
    REQUIRE(rec.times.size() == rec.quantum.size());
    REQUIRE(rec.times.size() == rec.classical.size());
    for (std::size_t k = 0; k < rec.times.size(); ++k)
        CHECK(rec.times[k] == static_cast<double>(k + 1) * vc.cfg.dt_meas);
}

TEST_CASE("a singleton ensemble reproduces run_single") {
    SimConfig c = fast_config();
    c.ensemble_size = 1;
    c.divergence_mode = DivergenceMode::per_run;
    const ValidatedConfig vc = validate(c);
    const EnsembleRecord ens = run_ensemble(vc);
    const RunRecord solo = run_single(vc, member_seed(c.base_seed, 0));
    REQUIRE(ens.runs.size() == 1);
    CHECK(records_equal(ens.runs[0], solo));
    CHECK(ens.mean_divergence_time == solo.divergence_time.value_or(c.t_max));
}

TEST_CASE("identical member seeds collapse the pooled series onto one member") {
    SimConfig c = fast_config();
    c.divergence_mode = DivergenceMode::ensemble_rms;
    const ValidatedConfig vc = validate(c);
    const std::uint64_t same[4] = {41, 41, 41, 41};
    const std::uint64_t one[1] = {41};
    const EnsembleRecord four = run_ensemble_with_seeds(vc, same);
    const EnsembleRecord single = run_ensemble_with_seeds(vc, one);
    REQUIRE(four.rms.samples.size() == single.rms.samples.size());
    for (std::size_t k = 0; k < four.rms.samples.size(); ++k)
        CHECK(four.rms.samples[k].second ==
              doctest::Approx(single.rms.samples[k].second).epsilon(1e-12));
}

TEST_CASE("per-run members are scheduling independent") {
    SimConfig c = fast_config();
    c.divergence_mode = DivergenceMode::per_run;
    c.ensemble_size = 4;
    c.t_max = 2.0;
    c.workers = 1;
    const EnsembleRecord serial = run_ensemble(validate(c));
    c.workers = 4;
    const EnsembleRecord parallel = run_ensemble(validate(c));
    REQUIRE(serial.runs.size() == parallel.runs.size());
    for (std::size_t i = 0; i < serial.runs.size(); ++i)
        CHECK(records_equal(serial.runs[i], parallel.runs[i]));
    CHECK(serial.mean_divergence_time == parallel.mean_divergence_time);
}

TEST_CASE("with measurements disabled the centroid tracks the classical orbit") {
    SimConfig c = fast_config();
    c.measurements = false;
    c.substep_max = 0.002;
    c.dt_meas = 0.1;
    c.t_max = 2.0;
    c.divergence_threshold = 1e9;
    const ValidatedConfig vc = validate(c);
    const RunRecord rec = run_single(vc, 5);
    REQUIRE(rec.times.size() == 20);
    CHECK(rec.censored);
    for (std::size_t k = 0; k < rec.times.size(); ++k) {
        const double d = std::hypot(rec.quantum[k].x - rec.classical[k].x,
                                    rec.quantum[k].p - rec.classical[k].p);
        CHECK(d < 1e-4);
    }
}

TEST_CASE("dt_meas beyond t_max still takes exactly one measurement") {
    SimConfig c = fast_config();
    c.hbar = 1e-4;
    c.dt_meas = 0.5;
    c.t_max = 0.3;
    c.divergence_threshold = 0.5;
    const ValidatedConfig vc = validate(c);
    const RunRecord rec = run_single(vc, 3);
    CHECK(rec.times.size() == 1);
    CHECK(rec.censored);
}

TEST_CASE("paper corners behave as reported") {
    SUBCASE("hbar = 0.1, dt = 0.1 diverges immediately") {
        SimConfig c = fast_config();
        c.hbar = 0.1;
        c.dt_meas = 0.1;
        c.t_max = 10.0;
        const RunRecord rec = run_single(validate(c), 11);
        REQUIRE(rec.divergence_time.has_value());
        CHECK(*rec.divergence_time < 1.0);
    }
    SUBCASE("hbar = 1e-5, dt = 0.03 stays in correspondence far longer") {
        SimConfig c = fast_config();
        c.hbar = 1e-5;
        c.dt_meas = 0.03;
        c.t_max = 8.0;
        const RunRecord rec = run_single(validate(c), 11);
        REQUIRE(rec.divergence_time.has_value());
        CHECK(*rec.divergence_time > 1.0);
    }
}

TEST_CASE("member seeds are decorrelated and positional") {
    CHECK(member_seed(1, 0) != member_seed(1, 1));
    CHECK(member_seed(1, 0) != member_seed(2, 0));
    CHECK(member_seed(1, 0) == member_seed(1, 0));
}

TEST_CASE("grid auto-sizing responds to hbar") {
    SimConfig c = fast_config();
    c.hbar = 1e-3;
    const std::size_t coarse = plan_grid_points(validate(c));
    c.hbar = 1e-5;
    const std::size_t fine = plan_grid_points(validate(c));
    CHECK(fine > coarse);
    CHECK(is_power_of_two(fine));
    c.grid_auto = false;
    c.grid_points = 256;
    CHECK(plan_grid_points(validate(c)) == 256);
}

TEST_CASE("strict mode surfaces window failures as errors") {
    SimConfig c = fast_config();
    c.hbar = 1e-5;
    c.grid_auto = false;
    c.grid_points = 64;  // cannot represent p0 = 1 at this hbar
    c.strict_errors = true;
    CHECK_THROWS_AS(run_single(validate(c), 1), SimulationError);
}

TEST_CASE("underprovisioned windows end runs as breakdowns, not crashes") {
    // momentum prefactor at the floor: the window barely covers the drift and
    // the first slow-momentum sample strands the packet
    SimConfig c = fast_config();
    c.hbar = 1e-4;
    c.dt_meas = 0.3;
    c.momentum_prefactor = 1.0;
    c.uncertainty_prefactor = 1.0;
    c.t_max = 20.0;
    const ValidatedConfig vc = validate(c);
    const RunRecord rec = run_single(vc, 9);
    REQUIRE(rec.divergence_time.has_value());
    CHECK(!rec.censored);
    if (rec.breakdown) CHECK(!rec.breakdown_reason.empty());
}

TEST_SUITE_END();
