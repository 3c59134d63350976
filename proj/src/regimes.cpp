#include "qcsim/regimes.hpp"

#include <cmath>

#include "qcsim/common.hpp"

namespace qcsim {

const char* to_string(RegimeLabel label) {
    switch (label) {
        case RegimeLabel::uncertainty_dominated: return "uncertainty_dominated";
        case RegimeLabel::wavelike: return "wavelike";
        case RegimeLabel::semiclassical: return "semiclassical";
        case RegimeLabel::indeterminate: return "indeterminate";
    }
    return "?";
}

double uncertainty_lhs(const RegimeInputs& in) {
    if (in.p == 0.0) throw ConfigError("uncertainty criterion is undefined at p = 0");
    if (!(in.dt_meas > 0.0)) throw ConfigError("uncertainty criterion needs dt_meas > 0");
    return in.hbar / in.dt_meas / in.dt_meas * in.m / (2.0 * in.omega * in.p * in.p);
}

double wavelike_lhs(const RegimeInputs& in) {
    const double vp = -force(in.potential, in.x);  // V'(x)
    const double vppp = third_derivative(in.potential, in.x);
    const double numerator =
        (3.0 * in.hbar * in.m * in.omega * in.delta_p -
         4.0 * in.delta_p * in.delta_p * in.delta_p) *
        vppp;
    const double denominator = 6.0 * in.m * in.m * in.omega * in.omega *
                               (in.m * in.omega * in.omega * in.p * in.delta_x -
                                in.delta_p * vp);
    if (denominator == 0.0) throw ConfigError("wavelike criterion denominator vanishes");
    return std::abs(numerator / denominator);
}

RegimeLabel classify(const RegimeInputs& in, double epsilon) noexcept {
    double u = 0.0;
    try {
        u = uncertainty_lhs(in);
    } catch (const ConfigError&) {
        return RegimeLabel::indeterminate;
    }
    if (u >= epsilon) return RegimeLabel::uncertainty_dominated;
    double w = 0.0;
    try {
        w = wavelike_lhs(in);
    } catch (const ConfigError&) {
        return RegimeLabel::indeterminate;
    }
    if (w >= epsilon) return RegimeLabel::wavelike;
    return RegimeLabel::semiclassical;
}

RegimeInputs regime_inputs_for(const ValidatedConfig& vc) {
    RegimeInputs in;
    in.hbar = vc.cfg.hbar;
    in.m = vc.cfg.mass;
    in.omega = vc.cfg.omega;
    in.dt_meas = vc.cfg.dt_meas;
    in.p = vc.cfg.p0;
    in.x = vc.cfg.x0;
    in.delta_x = vc.widths.sigma_x;
    in.delta_p = vc.widths.sigma_p;
    in.potential = vc.cfg.potential;
    return in;
}

}  // namespace qcsim
