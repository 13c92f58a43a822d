#include "photonmux/detector.hpp"

#include <cmath>

namespace photonmux {

double fire_prob(int n, double eta) {
    if (n < 0) throw InvalidParameter("photon number must be nonnegative");
    require_probability(eta, "eta");
    if (n == 0 || eta == 0.0) return 0.0;
    if (eta == 1.0) return 1.0;
    return -std::expm1(static_cast<double>(n) * std::log1p(-eta));
}

DetectionOutcome detect(int n, const DetectorSpec& spec, RandomStream& rng) {
    if (n < 0) throw InvalidParameter("photon number must be nonnegative");
    require_probability(spec.eta, "eta");

    if (spec.kind == DetectorKind::Threshold) {
        for (int k = 0; k < n; ++k) {
            if (rng.bernoulli(spec.eta)) return {true, std::nullopt};
        }
        return {false, std::nullopt};
    }

    int detected = 0;
    for (int k = 0; k < n; ++k) {
        if (rng.bernoulli(spec.eta)) ++detected;
    }
    return {detected > 0, detected};
}

double mode_fire_prob(const ModeDistribution& dist, double eta) {
    validate(dist);
    require_probability(eta, "eta");
    const double x = eta * dist.mean;
    // Complement of no_detect_weight, written to stay exact for small x.
    return dist.kind == DistributionKind::Thermal ? x / (1.0 + x) : -std::expm1(-x);
}

}  // namespace photonmux
