#ifndef QCSIM_COMMON_HPP
#define QCSIM_COMMON_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace qcsim {

struct PhasePoint {
    double x = 0.0;
    double p = 0.0;
};

// Invalid or inconsistent parameters, detected before any physics runs.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Failure while a simulation is in flight (window truncation, support loss, ...).
// `time` is the simulation time at which the failure surfaced, NaN if not applicable.
struct SimulationError : std::runtime_error {
    double time;
    explicit SimulationError(const std::string& msg, double t = std::nan(""))
        : std::runtime_error(msg), time(t) {}
};

// splitmix64 finalizer; decorrelates seeds derived from (base, index, ...) tuples.
inline std::uint64_t seed_mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t seed_mix(std::uint64_t a, std::uint64_t b) {
    return seed_mix(seed_mix(a) ^ (0x9e3779b97f4a7c15ULL + b));
}

inline std::uint64_t seed_mix(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return seed_mix(seed_mix(a, b) ^ (0xc2b2ae3d27d4eb4fULL + c));
}

// mt19937_64 with an explicit uniform mapping, so streams are reproducible
// independent of the standard library's distribution implementations.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // uniform in [0, 1)
    double uniform() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::uint64_t bits() { return eng_(); }

  private:
    std::mt19937_64 eng_;
};

}  // namespace qcsim

#endif
