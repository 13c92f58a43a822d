#pragma once

#include <vector>

#include "photonmux/photon_stats.hpp"

namespace photonmux {

// One multiplexed-source design: a total mean pair number n_bar split evenly
// across n_delays delay paths feeding a single trigger detector of
// efficiency eta. Every formula below works with the per-mode mean
// mu = n_bar / n_delays.
struct SourceConfig {
    double n_bar = 1.0;
    double eta = 1.0;
    int n_delays = 8;
    DistributionKind kind = DistributionKind::Thermal;
};

void validate(const SourceConfig& config);
ModeDistribution mode_distribution(const SourceConfig& config);

// One point of the certification fan: the single-photon probability attached
// to a firing of delay `delay_index` in a system of `n_delays` delays.
struct CertificationPoint {
    int n_delays = 0;
    int delay_index = 0;
    double probability = 0.0;
};

// P(n photons incident | detector fired) for one mode:
//   (1-(1-eta)^n) P(n) / sum_{k>=1} (1-(1-eta)^k) P(k).
// Throws DegenerateCondition when the detector cannot fire (eta or mean zero).
double posterior_given_fire(const ModeDistribution& dist, double eta, int n);

// P(photons were incident | detector did not fire) for one mode:
//   sum_{k>=1} (1-eta)^k P(k) / sum_{k>=0} (1-eta)^k P(k).
double incident_given_no_fire(const ModeDistribution& dist, double eta);

// Probability that exactly one photon pair exists given that delay
// `delay_index` caused the firing:
//   (1 - Pnofire)^(i-1) * Pfire(1) * P(0)^(N-i),   mu = n_bar/N.
// The detector is dead after the first fire, so later modes contribute their
// unconditional vacuum probability.
double certification_at_delay(const SourceConfig& config, int delay_index);

// The whole fan for one system size: certifications for delays 1..n_delays,
// strictly rising toward the later delays.
std::vector<CertificationPoint> certification_fan(const SourceConfig& config);

// Probability that delay i is the one that fires: (1-q)^(i-1) q with
// q = mode_fire_prob(mu, eta). Returns 0 when firing is impossible.
double delay_fire_prob(const SourceConfig& config, int delay_index);

// Probability that any delay fires: 1 - (1-q)^N.
double trigger_prob(const SourceConfig& config);

// Overall probability of producing a heralded single photon per pump pulse.
//   Thermal: n_bar*eta*(N/(n_bar+N))^(N+1)
//   Poisson: n_bar*eta*e^{-n_bar}   (independent of N)
// Equals sum_i delay_fire_prob(i) * certification_at_delay(i).
double heralded_single_prob(const SourceConfig& config);

// The same probability conditioned on the trigger having fired.
double heralded_single_given_trigger(const SourceConfig& config);

// Large-N limit of heralded_single_prob: n_bar*eta*e^{-n_bar}, the faint-laser
// (Poisson) result.
double poisson_limit(double n_bar, double eta);

// argmax over n_bar of heralded_single_prob, located by golden-section search
// on [1e-3, 10] to within tol.
double optimize_mean(double eta, int n_delays, DistributionKind kind, double tol = 1e-6);

}  // namespace photonmux
