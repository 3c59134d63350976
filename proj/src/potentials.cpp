#include "qcsim/potentials.hpp"

#include <cmath>

#include "qcsim/common.hpp"

namespace qcsim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

double value(const PotentialSpec& spec, double x) {
    return std::visit(
        overloaded{
            [&](const Harmonic& h) { return 0.5 * h.k * x * x; },
            [&](const FreeParticle&) { return 0.0; },
            [&](const LinearRamp& l) { return l.g * x; },
            [&](const Quartic& q) { return q.lambda * x * x * x * x; },
            [&](const GaussianWell& g) {
                return -g.v0 * std::exp(-x * x / (2.0 * g.w * g.w));
            },
            [&](const DoubleWell& d) {
                const double u = x * x - d.b * d.b;
                return d.a * u * u;
            }},
        spec);
}

double force(const PotentialSpec& spec, double x) {
    return std::visit(
        overloaded{
            [&](const Harmonic& h) { return -h.k * x; },
            [&](const FreeParticle&) { return 0.0; },
            [&](const LinearRamp& l) { return -l.g; },
            [&](const Quartic& q) { return -4.0 * q.lambda * x * x * x; },
            [&](const GaussianWell& g) {
                // V' = (v0 x / w^2) exp(-x^2/2w^2)
                const double w2 = g.w * g.w;
                return -(g.v0 * x / w2) * std::exp(-x * x / (2.0 * w2));
            },
            [&](const DoubleWell& d) {
                return -4.0 * d.a * x * (x * x - d.b * d.b);
            }},
        spec);
}

double third_derivative(const PotentialSpec& spec, double x) {
    return std::visit(
        overloaded{
            [&](const Harmonic&) { return 0.0; },
            [&](const FreeParticle&) { return 0.0; },
            [&](const LinearRamp&) { return 0.0; },
            [&](const Quartic& q) { return 24.0 * q.lambda * x; },
            [&](const GaussianWell& g) {
                // V''' = (v0 x / w^4) (x^2/w^2 - 3) exp(-x^2/2w^2)
                const double w2 = g.w * g.w;
                return (g.v0 * x / (w2 * w2)) * (x * x / w2 - 3.0) *
                       std::exp(-x * x / (2.0 * w2));
            },
            [&](const DoubleWell& d) { return 24.0 * d.a * x; }},
        spec);
}

std::string potential_name(const PotentialSpec& spec) {
    return std::visit(
        overloaded{[](const Harmonic&) { return std::string("harmonic"); },
                   [](const FreeParticle&) { return std::string("free"); },
                   [](const LinearRamp&) { return std::string("linear"); },
                   [](const Quartic&) { return std::string("quartic"); },
                   [](const GaussianWell&) { return std::string("gaussian_well"); },
                   [](const DoubleWell&) { return std::string("double_well"); }},
        spec);
}

void validate_potential(const PotentialSpec& spec, std::vector<std::string>& errors) {
    std::visit(overloaded{[&](const Harmonic& h) {
                              if (!(h.k > 0.0)) errors.push_back("potential k must be positive");
                          },
                          [&](const FreeParticle&) {},
                          [&](const LinearRamp&) {},
                          [&](const Quartic& q) {
                              if (!(q.lambda > 0.0))
                                  errors.push_back("potential lambda must be positive");
                          },
                          [&](const GaussianWell& g) {
                              if (!(g.v0 > 0.0)) errors.push_back("potential v0 must be positive");
                              if (!(g.w > 0.0)) errors.push_back("potential w must be positive");
                          },
                          [&](const DoubleWell& d) {
                              if (!(d.a > 0.0)) errors.push_back("potential a must be positive");
                              if (!(d.b > 0.0)) errors.push_back("potential b must be positive");
                          }},
               spec);
}

PotentialSpec make_potential(const std::string& name,
                             const std::map<std::string, double>& params) {
    auto get = [&](const char* key, double fallback) {
        auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    };
    auto allow = [&](std::initializer_list<const char*> keys) {
        for (const auto& [key, _] : params) {
            bool ok = false;
            for (const char* k : keys)
                if (key == k) ok = true;
            if (!ok)
                throw ConfigError("potential '" + name + "' does not take parameter '" + key +
                                  "'");
        }
    };

    if (name == "harmonic") {
        allow({"k"});
        return Harmonic{get("k", Harmonic{}.k)};
    }
    if (name == "free") {
        allow({});
        return FreeParticle{};
    }
    if (name == "linear") {
        allow({"g"});
        return LinearRamp{get("g", LinearRamp{}.g)};
    }
    if (name == "quartic") {
        allow({"lambda"});
        return Quartic{get("lambda", Quartic{}.lambda)};
    }
    if (name == "gaussian_well") {
        allow({"v0", "w"});
        return GaussianWell{get("v0", GaussianWell{}.v0), get("w", GaussianWell{}.w)};
    }
    if (name == "double_well") {
        allow({"a", "b"});
        return DoubleWell{get("a", DoubleWell{}.a), get("b", DoubleWell{}.b)};
    }
    throw ConfigError("unknown potential '" + name + "'");
}

std::map<std::string, double> potential_params(const PotentialSpec& spec) {
    return std::visit(
        overloaded{[](const Harmonic& h) { return std::map<std::string, double>{{"k", h.k}}; },
                   [](const FreeParticle&) { return std::map<std::string, double>{}; },
                   [](const LinearRamp& l) { return std::map<std::string, double>{{"g", l.g}}; },
                   [](const Quartic& q) {
                       return std::map<std::string, double>{{"lambda", q.lambda}};
                   },
                   [](const GaussianWell& g) {
                       return std::map<std::string, double>{{"v0", g.v0}, {"w", g.w}};
                   },
                   [](const DoubleWell& d) {
                       return std::map<std::string, double>{{"a", d.a}, {"b", d.b}};
                   }},
        spec);
}

}  // namespace qcsim
