#ifndef QCSIM_DIVERGENCE_HPP
#define QCSIM_DIVERGENCE_HPP

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "qcsim/classical.hpp"
#include "qcsim/common.hpp"

namespace qcsim {

// D = sqrt( (1/N) sum_i [(x_c - x_i)^2 + (p_c - p_i)^2] )
double rms_deviation(const ClassicalState& classical, std::span<const PhasePoint> samples);

// Time-ordered D(t) samples with first-crossing detection. The crossing is
// strict: D equal to the threshold does not trigger.
struct DivergenceSeries {
    double threshold = 0.05;
    std::vector<std::pair<double, double>> samples;  // (t, D)
    std::optional<double> divergence_time;

    void record(double t, double d);
};

}  // namespace qcsim

#endif
