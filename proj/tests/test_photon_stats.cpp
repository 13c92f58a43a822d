#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "photonmux/photon_stats.hpp"

using photonmux::DistributionKind;
using photonmux::InvalidParameter;
using photonmux::ModeDistribution;
using photonmux::RandomStream;
using photonmux::no_detect_weight;
using photonmux::pmf;
using photonmux::sample;
using photonmux::truncation_horizon;

namespace {
const std::vector<double> kMuGrid = {0.0, 0.01, 0.125, 0.5, 1.0, 2.0};
const std::vector<double> kEtaGrid = {0.0, 0.1, 0.25, 0.5, 0.9, 1.0};
const std::vector<DistributionKind> kKinds = {DistributionKind::Thermal,
                                              DistributionKind::Poisson};
}  // namespace

TEST_CASE("pmf matches the series recurrences term by term") {
    for (DistributionKind kind : kKinds) {
        for (double mu : kMuGrid) {
            const ModeDistribution dist{kind, mu};
            const auto series = oracle::pmf_series(kind, mu, 64);
            for (int n = 0; n <= 64; ++n) {
                const double expected = static_cast<double>(series[n]);
                CHECK(std::abs(pmf(dist, n) - expected) <= 1e-14 * std::max(1.0, expected));
            }
        }
    }
}

TEST_CASE("pmf examples") {
    CHECK(pmf({DistributionKind::Thermal, 0.0}, 0) == 1.0);
    CHECK(pmf({DistributionKind::Thermal, 0.0}, 5) == 0.0);

    // 1/(1+mu) against the normalized truncated geometric series
    const double thermal0 = pmf({DistributionKind::Thermal, 1.0}, 0);
    CHECK(thermal0 == doctest::Approx(0.5).epsilon(1e-14));
    const auto thermal_series = oracle::pmf_series(DistributionKind::Thermal, 1.0);
    const long double norm = oracle::series_sum(thermal_series, oracle::kHorizon);
    CHECK(thermal0 == doctest::Approx(static_cast<double>(thermal_series[0] / norm)).epsilon(1e-13));

    // e^{-1} against the factorial-series normalization
    const double poisson1 = pmf({DistributionKind::Poisson, 1.0}, 1);
    const auto poisson_series = oracle::pmf_series(DistributionKind::Poisson, 1.0);
    const long double poisson_norm = oracle::series_sum(poisson_series, oracle::kHorizon);
    CHECK(poisson1 == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK(poisson1
          == doctest::Approx(static_cast<double>(poisson_series[1] / poisson_norm)).epsilon(1e-13));
}

TEST_CASE("pmf rejects bad arguments") {
    CHECK_THROWS_AS(pmf({DistributionKind::Thermal, -0.5}, 0), InvalidParameter);
    CHECK_THROWS_AS(pmf({DistributionKind::Thermal, 1.0}, -1), InvalidParameter);
}

TEST_CASE("pmf sums to one and reproduces the mean over the truncation horizon") {
    for (DistributionKind kind : kKinds) {
        for (double mu : kMuGrid) {
            const ModeDistribution dist{kind, mu};
            const int horizon = truncation_horizon(dist, 1e-15);
            long double sum = 0.0L;
            long double mean = 0.0L;
            for (int n = 0; n <= horizon; ++n) {
                const long double p = pmf(dist, n);
                sum += p;
                mean += n * p;
            }
            CHECK(static_cast<double>(sum) >= 1.0 - 1e-12);
            CHECK(static_cast<double>(sum) <= 1.0 + 1e-15);
            CHECK(std::abs(static_cast<double>(mean) - mu) <= 1e-10);
        }
    }
}

TEST_CASE("truncation horizon bounds the true tail") {
    for (DistributionKind kind : kKinds) {
        for (double mu : kMuGrid) {
            if (mu == 0.0) {
                CHECK(truncation_horizon({kind, mu}, 1e-15) == 0);
                continue;
            }
            for (double tol : {1e-12, 1e-15}) {
                const int horizon = truncation_horizon({kind, mu}, tol);
                const auto series = oracle::pmf_series(kind, mu);
                const long double tail = 1.0L - oracle::series_sum(series, horizon);
                CHECK(static_cast<double>(tail) <= tol);
                CHECK(horizon < 2000);  // bound stays practical on this grid
            }
        }
    }
}

TEST_CASE("no_detect_weight closed forms equal the truncated sums") {
    for (DistributionKind kind : kKinds) {
        for (double mu : kMuGrid) {
            for (double eta : kEtaGrid) {
                const double closed = no_detect_weight({kind, mu}, eta);
                const double series = static_cast<double>(oracle::no_detect_series(kind, mu, eta));
                CHECK(std::abs(closed - series) <= 1e-12);
            }
        }
    }
    CHECK(no_detect_weight({DistributionKind::Thermal, 1.0}, 0.0) == 1.0);
    CHECK(no_detect_weight({DistributionKind::Poisson, 2.0}, 0.0) == 1.0);
    CHECK(no_detect_weight({DistributionKind::Thermal, 1.0}, 1.0)
          == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(no_detect_weight({DistributionKind::Thermal, 1.0}, 0.5)
          == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("sampling is deterministic given the stream state") {
    const ModeDistribution dist{DistributionKind::Thermal, 0.7};
    RandomStream a(123);
    RandomStream b(123);
    for (int i = 0; i < 2000; ++i) CHECK(sample(dist, a) == sample(dist, b));
}

TEST_CASE("a zero-mean mode only ever yields vacuum") {
    RandomStream rng(5);
    for (DistributionKind kind : kKinds) {
        const ModeDistribution dist{kind, 0.0};
        for (int i = 0; i < 100; ++i) CHECK(sample(dist, rng) == 0);
    }
}

TEST_CASE("thermal sample mean is within four standard errors at 1e6 draws") {
    const ModeDistribution dist{DistributionKind::Thermal, 1.0};
    RandomStream rng(2024);
    const int trials = 1'000'000;
    long double total = 0.0L;
    for (int i = 0; i < trials; ++i) total += sample(dist, rng);
    const double mean = static_cast<double>(total) / trials;
    const double stderr_mean = std::sqrt(1.0 * (1.0 + 1.0) / trials);  // sqrt(mu(1+mu)/n)
    CHECK(std::abs(mean - 1.0) <= 4.0 * stderr_mean);
}

TEST_CASE("poisson empirical vacuum probability matches e^{-1} at 1e6 draws") {
    const ModeDistribution dist{DistributionKind::Poisson, 1.0};
    RandomStream rng(77);
    const int trials = 1'000'000;
    int zeros = 0;
    for (int i = 0; i < trials; ++i) {
        if (sample(dist, rng) == 0) ++zeros;
    }
    const double p0 = std::exp(-1.0);
    const double freq = static_cast<double>(zeros) / trials;
    CHECK(std::abs(freq - p0) <= 4.0 * std::sqrt(p0 * (1.0 - p0) / trials));
}

TEST_CASE("sampler fidelity: every bin within four sigma at 1e6 draws") {
    struct Setup {
        DistributionKind kind;
        double mu;
        int bins;  // compare bins [0, bins); lump the rest
        std::uint64_t seed;
    };
    const std::vector<Setup> setups = {{DistributionKind::Thermal, 1.0, 14, 41},
                                       {DistributionKind::Thermal, 0.125, 5, 42},
                                       {DistributionKind::Poisson, 1.0, 8, 43},
                                       {DistributionKind::Poisson, 0.5, 6, 44}};
    const int trials = 1'000'000;
    for (const Setup& setup : setups) {
        CAPTURE(setup.mu);
        const ModeDistribution dist{setup.kind, setup.mu};
        RandomStream rng(setup.seed);
        std::vector<int> counts(static_cast<std::size_t>(setup.bins) + 1, 0);
        for (int i = 0; i < trials; ++i) {
            const int n = sample(dist, rng);
            ++counts[static_cast<std::size_t>(std::min(n, setup.bins))];
        }
        double tail_prob = 1.0;
        for (int n = 0; n < setup.bins; ++n) {
            const double p = pmf(dist, n);
            tail_prob -= p;
            const double freq = static_cast<double>(counts[n]) / trials;
            CHECK(std::abs(freq - p) <= 4.0 * std::sqrt(p * (1.0 - p) / trials));
        }
        const double tail_freq = static_cast<double>(counts[setup.bins]) / trials;
        CHECK(std::abs(tail_freq - tail_prob)
              <= 4.0 * std::sqrt(tail_prob * (1.0 - tail_prob) / trials));
    }
}

TEST_CASE("distribution kind names round-trip") {
    CHECK(photonmux::parse_distribution_kind("thermal") == DistributionKind::Thermal);
    CHECK(photonmux::parse_distribution_kind("poisson") == DistributionKind::Poisson);
    CHECK(std::string(to_string(DistributionKind::Thermal)) == "thermal");
    CHECK_THROWS_AS(photonmux::parse_distribution_kind("uniform"), InvalidParameter);
}
