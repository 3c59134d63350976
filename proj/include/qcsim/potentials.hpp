#ifndef QCSIM_POTENTIALS_HPP
#define QCSIM_POTENTIALS_HPP

#include <map>
#include <string>
#include <variant>
#include <vector>

namespace qcsim {

// 1D potential family. Each kind supplies V, V' (force = -V'), and V'''
// analytically; the third derivative feeds the wavelike-regime criterion.
struct Harmonic {
    double k = 5.0;  // V = (k/2) x^2
};
struct FreeParticle {};
struct LinearRamp {
    double g = 1.0;  // V = g x
};
struct Quartic {
    double lambda = 1.0;  // V = lambda x^4
};
struct GaussianWell {
    double v0 = 1.0;  // depth
    double w = 1.0;   // width; V = -v0 exp(-x^2 / 2 w^2)
};
struct DoubleWell {
    double a = 1.0;  // V = a (x^2 - b^2)^2
    double b = 1.0;
};

using PotentialSpec =
    std::variant<Harmonic, FreeParticle, LinearRamp, Quartic, GaussianWell, DoubleWell>;

double value(const PotentialSpec& spec, double x);
double force(const PotentialSpec& spec, double x);
double third_derivative(const PotentialSpec& spec, double x);

std::string potential_name(const PotentialSpec& spec);

// Appends one message per violated parameter constraint; empty means valid.
void validate_potential(const PotentialSpec& spec, std::vector<std::string>& errors);

// Builds a spec from a config-file name plus parameter keys (k, g, lambda, v0, w, a, b).
// Unknown names or parameters throw ConfigError.
PotentialSpec make_potential(const std::string& name,
                             const std::map<std::string, double>& params);

// Parameter key/value pairs for config snapshots.
std::map<std::string, double> potential_params(const PotentialSpec& spec);

}  // namespace qcsim

#endif
