// Test-side reference computations, kept independent of the library's
// evaluation paths: truncated long-double series for every generating-sum
// quantity, and plain repeated multiplication for powers.
#pragma once

#include <cmath>
#include <vector>

#include "photonmux/photon_stats.hpp"

namespace oracle {

inline constexpr int kHorizon = 4096;

inline double ipow(double base, int n) {
    double result = 1.0;
    for (int i = 0; i < n; ++i) result *= base;
    return result;
}

// pmf terms p[0..horizon] by recurrence.
inline std::vector<long double> pmf_series(photonmux::DistributionKind kind, double mu,
                                           int horizon = kHorizon) {
    std::vector<long double> p(static_cast<std::size_t>(horizon) + 1, 0.0L);
    if (mu == 0.0) {
        p[0] = 1.0L;
        return p;
    }
    if (kind == photonmux::DistributionKind::Thermal) {
        const long double ratio = static_cast<long double>(mu) / (1.0L + mu);
        p[0] = 1.0L / (1.0L + static_cast<long double>(mu));
        for (int n = 1; n <= horizon; ++n) p[n] = p[n - 1] * ratio;
    } else {
        p[0] = std::exp(-static_cast<long double>(mu));
        for (int n = 1; n <= horizon; ++n) p[n] = p[n - 1] * mu / n;
    }
    return p;
}

inline long double series_sum(const std::vector<long double>& p, int up_to) {
    long double total = 0.0L;
    for (int n = 0; n <= up_to; ++n) total += p[static_cast<std::size_t>(n)];
    return total;
}

inline long double series_mean(const std::vector<long double>& p) {
    long double total = 0.0L;
    for (std::size_t n = 0; n < p.size(); ++n) total += static_cast<long double>(n) * p[n];
    return total;
}

// sum_k (1-eta)^k P(k)
inline long double no_detect_series(photonmux::DistributionKind kind, double mu, double eta) {
    const std::vector<long double> p = pmf_series(kind, mu);
    long double weight = 1.0L;
    long double total = 0.0L;
    for (std::size_t k = 0; k < p.size(); ++k) {
        total += weight * p[k];
        weight *= 1.0L - static_cast<long double>(eta);
    }
    return total;
}

// (1-(1-eta)^n) P(n) / sum_{k>=1} (1-(1-eta)^k) P(k)
inline long double posterior_series(photonmux::DistributionKind kind, double mu, double eta,
                                    int n) {
    const std::vector<long double> p = pmf_series(kind, mu);
    const long double miss = 1.0L - static_cast<long double>(eta);
    long double weight = miss;
    long double denom = 0.0L;
    for (std::size_t k = 1; k < p.size(); ++k) {
        denom += (1.0L - weight) * p[k];
        weight *= miss;
    }
    long double miss_n = 1.0L;
    for (int k = 0; k < n; ++k) miss_n *= miss;
    return (1.0L - miss_n) * p[static_cast<std::size_t>(n)] / denom;
}

// sum_{k>=1} (1-eta)^k P(k) / sum_{k>=0} (1-eta)^k P(k)
inline long double incident_no_fire_series(photonmux::DistributionKind kind, double mu,
                                           double eta) {
    const std::vector<long double> p = pmf_series(kind, mu);
    const long double miss = 1.0L - static_cast<long double>(eta);
    long double weight = miss;
    long double numer = 0.0L;
    for (std::size_t k = 1; k < p.size(); ++k) {
        numer += weight * p[k];
        weight *= miss;
    }
    return numer / (p[0] + numer);
}

}  // namespace oracle
