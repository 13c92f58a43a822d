#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "photonmux/certification.hpp"
#include "photonmux/detector.hpp"

namespace photonmux {

// One simulated pump pulse. The output arm collects every correlated mode, so
// output_photons is the sum over all modes regardless of which delay fired.
struct PulseRecord {
    std::vector<int> mode_counts;       // photon pairs per delay mode
    std::optional<int> fired_delay;     // 1-based; absent when no trigger
    int output_photons = 0;             // sum of mode_counts
    std::optional<int> detected_count;  // NumberResolving only

    bool operator==(const PulseRecord&) const = default;
};

// Sufficient statistics for every estimator, aggregated over pulses.
// Merging is associative, so chunked tallies combine in any order.
struct TallySet {
    std::uint64_t trials = 0;
    std::uint64_t no_fire_count = 0;
    std::vector<std::uint64_t> fire_counts;        // index i-1: fired at delay i
    std::vector<std::uint64_t> single_given_fire;  // fired at i with exactly one photon total
    std::vector<std::uint64_t> target_counts;      // PNR: fired at i, detected == target == total
    std::optional<int> pnr_target;

    TallySet& operator+=(const TallySet& other);
    bool operator==(const TallySet&) const = default;
};

TallySet make_tally(int n_delays, std::optional<int> pnr_target = std::nullopt);
void accumulate(TallySet& tally, const PulseRecord& record);

// Binomial proportion with its standard error.
struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t denominator = 0;
    std::uint64_t successes = 0;
};

// Draws all mode counts, then scans delays in order; the first detection sets
// fired_delay and the deadtime rule hides every later mode from the detector.
void simulate_pulse(const SourceConfig& config, const DetectorSpec& detector,
                    RandomStream& rng, PulseRecord& out);
PulseRecord simulate_pulse(const SourceConfig& config, const DetectorSpec& detector,
                           RandomStream& rng);

struct RunOptions {
    std::uint64_t trials = 1'000'000;
    std::uint64_t seed = 0;
    unsigned workers = 1;
    // Pulses per random-stream chunk. Part of the reproducibility contract:
    // the tally is bit-identical for any worker count given (seed, chunk_size).
    std::uint64_t chunk_size = 65536;
    std::optional<int> pnr_target;
};

TallySet run_trials(const SourceConfig& config, const DetectorSpec& detector,
                    const RunOptions& options);

// Estimators matching the closed forms. Conditional quantities throw
// DegenerateCondition when their denominator is zero.
Estimate estimate_certification(const TallySet& tally, int delay_index);
Estimate estimate_p1(const TallySet& tally);
Estimate estimate_p1_given_trigger(const TallySet& tally);
Estimate estimate_delay_rate(const TallySet& tally, int delay_index);
Estimate estimate_no_fire_rate(const TallySet& tally);
Estimate estimate_pnr_target_rate(const TallySet& tally, int delay_index);

}  // namespace photonmux
