#include "photonmux/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <thread>

namespace photonmux {

TallySet& TallySet::operator+=(const TallySet& other) {
    if (fire_counts.size() != other.fire_counts.size() || pnr_target != other.pnr_target) {
        throw InvalidParameter("cannot merge tallies with different shapes");
    }
    trials += other.trials;
    no_fire_count += other.no_fire_count;
    for (std::size_t i = 0; i < fire_counts.size(); ++i) {
        fire_counts[i] += other.fire_counts[i];
        single_given_fire[i] += other.single_given_fire[i];
        target_counts[i] += other.target_counts[i];
    }
    return *this;
}

TallySet make_tally(int n_delays, std::optional<int> pnr_target) {
    if (n_delays < 1) throw InvalidParameter("n_delays must be at least 1");
    TallySet tally;
    tally.fire_counts.assign(n_delays, 0);
    tally.single_given_fire.assign(n_delays, 0);
    tally.target_counts.assign(n_delays, 0);
    tally.pnr_target = pnr_target;
    return tally;
}

void accumulate(TallySet& tally, const PulseRecord& record) {
    ++tally.trials;
    if (!record.fired_delay) {
        ++tally.no_fire_count;
        return;
    }
    const std::size_t idx = static_cast<std::size_t>(*record.fired_delay - 1);
    ++tally.fire_counts[idx];
    if (record.output_photons == 1) ++tally.single_given_fire[idx];
    if (tally.pnr_target && record.detected_count
        && *record.detected_count == *tally.pnr_target
        && record.output_photons == *tally.pnr_target) {
        ++tally.target_counts[idx];
    }
}

void simulate_pulse(const SourceConfig& config, const DetectorSpec& detector,
                    RandomStream& rng, PulseRecord& out) {
    validate(config);
    require_probability(detector.eta, "detector eta");
    if (detector.eta != config.eta) {
        throw InvalidParameter("detector eta must match the source eta");
    }
    const ModeDistribution dist = mode_distribution(config);
    const int n_delays = config.n_delays;

    out.mode_counts.resize(static_cast<std::size_t>(n_delays));
    out.fired_delay.reset();
    out.detected_count.reset();
    out.output_photons = 0;
    for (int i = 0; i < n_delays; ++i) {
        const int count = sample(dist, rng);
        out.mode_counts[static_cast<std::size_t>(i)] = count;
        out.output_photons += count;
    }
    // Shortest delay gets the first chance; deadtime hides everything after
    // the first fire.
    for (int i = 0; i < n_delays; ++i) {
        const DetectionOutcome outcome = detect(out.mode_counts[static_cast<std::size_t>(i)], detector, rng);
        if (outcome.fired) {
            out.fired_delay = i + 1;
            out.detected_count = outcome.detected_count;
            break;
        }
    }
}

PulseRecord simulate_pulse(const SourceConfig& config, const DetectorSpec& detector,
                           RandomStream& rng) {
    PulseRecord record;
    simulate_pulse(config, detector, rng, record);
    return record;
}

TallySet run_trials(const SourceConfig& config, const DetectorSpec& detector,
                    const RunOptions& options) {
    // Everything is validated here, before any worker starts, so the chunk
    // loops below cannot throw from inside a thread.
    validate(config);
    require_probability(detector.eta, "detector eta");
    if (detector.eta != config.eta) {
        throw InvalidParameter("detector eta must match the source eta");
    }
    if (options.trials < 1) throw InvalidParameter("trials must be at least 1");
    if (options.workers < 1) throw InvalidParameter("workers must be at least 1");
    if (options.chunk_size < 1) throw InvalidParameter("chunk_size must be at least 1");
    if (options.pnr_target) {
        if (*options.pnr_target < 1) throw InvalidParameter("pnr target must be at least 1");
        if (detector.kind != DetectorKind::NumberResolving) {
            throw InvalidParameter("pnr target requires a number-resolving detector");
        }
    }

    const std::uint64_t n_chunks = (options.trials + options.chunk_size - 1) / options.chunk_size;

    const auto run_chunk = [&](std::uint64_t chunk, TallySet& into, PulseRecord& scratch) {
        RandomStream rng = stream_for_chunk(options.seed, chunk);
        const std::uint64_t begin = chunk * options.chunk_size;
        const std::uint64_t count = std::min<std::uint64_t>(options.chunk_size, options.trials - begin);
        for (std::uint64_t t = 0; t < count; ++t) {
            simulate_pulse(config, detector, rng, scratch);
            accumulate(into, scratch);
        }
    };

    const unsigned workers =
        static_cast<unsigned>(std::min<std::uint64_t>(options.workers, n_chunks));
    if (workers == 1) {
        TallySet tally = make_tally(config.n_delays, options.pnr_target);
        PulseRecord scratch;
        for (std::uint64_t chunk = 0; chunk < n_chunks; ++chunk) run_chunk(chunk, tally, scratch);
        return tally;
    }

    // Workers pull chunk indices from a shared counter; per-chunk streams make
    // the merged tally independent of which worker ran which chunk.
    std::vector<TallySet> partials(workers, make_tally(config.n_delays, options.pnr_target));
    std::atomic<std::uint64_t> next_chunk{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            PulseRecord scratch;
            for (std::uint64_t chunk = next_chunk.fetch_add(1); chunk < n_chunks;
                 chunk = next_chunk.fetch_add(1)) {
                run_chunk(chunk, partials[w], scratch);
            }
        });
    }
    for (std::thread& worker : pool) worker.join();

    TallySet tally = make_tally(config.n_delays, options.pnr_target);
    for (const TallySet& partial : partials) tally += partial;
    return tally;
}

namespace {

Estimate proportion(std::uint64_t successes, std::uint64_t denominator, const char* what) {
    if (denominator == 0) {
        throw DegenerateCondition(std::string(what) + " is undefined: denominator is zero");
    }
    const double value = static_cast<double>(successes) / static_cast<double>(denominator);
    const double std_error = std::sqrt(value * (1.0 - value) / static_cast<double>(denominator));
    return {value, std_error, denominator, successes};
}

std::size_t checked_index(const TallySet& tally, int delay_index) {
    if (delay_index < 1 || delay_index > static_cast<int>(tally.fire_counts.size())) {
        throw InvalidParameter("delay_index must lie in [1, n_delays]");
    }
    return static_cast<std::size_t>(delay_index - 1);
}

std::uint64_t total_fires(const TallySet& tally) {
    std::uint64_t total = 0;
    for (std::uint64_t f : tally.fire_counts) total += f;
    return total;
}

std::uint64_t total_singles(const TallySet& tally) {
    std::uint64_t total = 0;
    for (std::uint64_t s : tally.single_given_fire) total += s;
    return total;
}

}  // namespace

Estimate estimate_certification(const TallySet& tally, int delay_index) {
    const std::size_t i = checked_index(tally, delay_index);
    return proportion(tally.single_given_fire[i], tally.fire_counts[i], "certification");
}

Estimate estimate_p1(const TallySet& tally) {
    return proportion(total_singles(tally), tally.trials, "p1");
}

Estimate estimate_p1_given_trigger(const TallySet& tally) {
    return proportion(total_singles(tally), total_fires(tally), "p1_given_trigger");
}

Estimate estimate_delay_rate(const TallySet& tally, int delay_index) {
    const std::size_t i = checked_index(tally, delay_index);
    return proportion(tally.fire_counts[i], tally.trials, "delay_rate");
}

Estimate estimate_no_fire_rate(const TallySet& tally) {
    return proportion(tally.no_fire_count, tally.trials, "no_fire_rate");
}

Estimate estimate_pnr_target_rate(const TallySet& tally, int delay_index) {
    if (!tally.pnr_target) {
        throw DegenerateCondition("pnr_target_rate is undefined: tally has no PNR target");
    }
    const std::size_t i = checked_index(tally, delay_index);
    return proportion(tally.target_counts[i], tally.fire_counts[i], "pnr_target_rate");
}

}  // namespace photonmux
