#pragma once

#include "photonmux/errors.hpp"
#include "photonmux/random_stream.hpp"

namespace photonmux {

enum class DistributionKind { Thermal, Poisson };

const char* to_string(DistributionKind kind);
DistributionKind parse_distribution_kind(const std::string& name);

// Photon-number law of a single collected mode with mean `mean` photons per
// pump pulse.
//
//   Thermal (Bose-Einstein):  P(n) = mu^n / (1+mu)^(n+1)
//   Poisson:                  P(n) = mu^n e^{-mu} / n!
struct ModeDistribution {
    DistributionKind kind = DistributionKind::Thermal;
    double mean = 0.0;
};

void validate(const ModeDistribution& dist);

double pmf(const ModeDistribution& dist, int n);

// Exact draw from the distribution. Thermal uses inverse transform on the
// geometric form; Poisson uses the product-of-uniforms method.
int sample(const ModeDistribution& dist, RandomStream& rng);

// sum_k (1-eta)^k P(k): the probability that a detector of efficiency eta
// sees none of the mode's photons. Thermal: 1/(1+eta*mu); Poisson: e^{-eta*mu}.
double no_detect_weight(const ModeDistribution& dist, double eta);

// Smallest N such that the analytic tail bound on P(X > N) is <= tail_tol
// (exact geometric tail for thermal, Chernoff bound for Poisson).
int truncation_horizon(const ModeDistribution& dist, double tail_tol);

}  // namespace photonmux
