#ifndef QCSIM_TEST_HELPERS_HPP
#define QCSIM_TEST_HELPERS_HPP

#include <cmath>
#include <vector>

// Shared statistics helpers for the test suites.

// Wilson-Hilferty approximation of the chi-square quantile; accurate to a
// fraction of a percent for dof >= 30, plenty for accept/reject at p = 0.001.
inline double chi2_quantile(double z, double dof) {
    const double a = 2.0 / (9.0 * dof);
    const double c = 1.0 - a + z * std::sqrt(a);
    return dof * c * c * c;
}

inline constexpr double kZ999 = 3.090232306167814;  // Phi^-1(0.999)

// Pearson statistic with small-expectation cells pooled (E < 5).
// Returns the statistic and the number of bins used via out-param.
inline double chi2_stat(const std::vector<double>& observed, const std::vector<double>& expected,
                        std::size_t& bins) {
    double stat = 0.0, pool_o = 0.0, pool_e = 0.0;
    bins = 0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (expected[i] >= 5.0) {
            const double d = observed[i] - expected[i];
            stat += d * d / expected[i];
            ++bins;
        } else {
            pool_o += observed[i];
            pool_e += expected[i];
        }
    }
    if (pool_e > 0.0) {
        const double d = pool_o - pool_e;
        stat += d * d / pool_e;
        ++bins;
    }
    return stat;
}

#endif
