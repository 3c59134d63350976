#include "qcsim/divergence.hpp"

#include <cmath>

namespace qcsim {

double rms_deviation(const ClassicalState& classical, std::span<const PhasePoint> samples) {
    if (samples.empty()) throw SimulationError("rms_deviation: empty ensemble", classical.t);
    double s = 0.0;
    for (const PhasePoint& q : samples) {
        const double dx = classical.x - q.x;
        const double dp = classical.p - q.p;
        s += dx * dx + dp * dp;
    }
    return std::sqrt(s / static_cast<double>(samples.size()));
}

void DivergenceSeries::record(double t, double d) {
    if (!samples.empty() && t <= samples.back().first)
        throw SimulationError("divergence series: non-monotonic time", t);
    samples.emplace_back(t, d);
    if (!divergence_time && d > threshold) divergence_time = t;
}

}  // namespace qcsim
