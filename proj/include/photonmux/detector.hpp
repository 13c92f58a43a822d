#pragma once

#include <optional>

#include "photonmux/photon_stats.hpp"

namespace photonmux {

enum class DetectorKind { Threshold, NumberResolving };

// Trigger detector with quantum efficiency eta. Threshold detectors report
// fired/not-fired only; number-resolving detectors report how many photons
// they detected.
struct DetectorSpec {
    double eta = 1.0;
    DetectorKind kind = DetectorKind::Threshold;
};

// 1 - (1-eta)^n: probability that at least one of n incident photons is
// detected. Monotone nondecreasing in n and in eta.
double fire_prob(int n, double eta);

struct DetectionOutcome {
    bool fired = false;
    std::optional<int> detected_count;  // NumberResolving only
};

// Stochastic detection of n incident photons; each photon is an independent
// Bernoulli(eta) detection. Threshold detectors stop at the first hit.
DetectionOutcome detect(int n, const DetectorSpec& spec, RandomStream& rng);

// 1 - no_detect_weight: probability that one mode makes the detector fire.
// Thermal: eta*mu/(1+eta*mu); Poisson: 1-e^{-eta*mu}.
double mode_fire_prob(const ModeDistribution& dist, double eta);

}  // namespace photonmux
