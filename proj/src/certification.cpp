#include "photonmux/certification.hpp"

#include <cmath>

#include "photonmux/detector.hpp"

namespace photonmux {

namespace {

// log of sum_k (1-eta)^k P(k). Thermal: -log(1+eta*mu); Poisson: -eta*mu.
// Written in terms of eta*mu directly so powers of the weight stay accurate
// far from 1 (no_detect_weight itself would round first).
double log_no_detect(const ModeDistribution& dist, double eta) {
    const double x = eta * dist.mean;
    return dist.kind == DistributionKind::Thermal ? -std::log1p(x) : -x;
}

double log_vacuum(const ModeDistribution& dist) {
    return log_no_detect(dist, 1.0);
}

}  // namespace

void validate(const SourceConfig& config) {
    if (!(config.n_bar > 0.0) || !std::isfinite(config.n_bar)) {
        throw InvalidParameter("n_bar must be finite and positive");
    }
    require_probability(config.eta, "eta");
    if (config.n_delays < 1) throw InvalidParameter("n_delays must be at least 1");
}

ModeDistribution mode_distribution(const SourceConfig& config) {
    validate(config);
    return {config.kind, config.n_bar / config.n_delays};
}

double posterior_given_fire(const ModeDistribution& dist, double eta, int n) {
    if (n < 0) throw InvalidParameter("photon number must be nonnegative");
    const double q = mode_fire_prob(dist, eta);
    if (q <= 0.0) {
        throw DegenerateCondition("posterior_given_fire is undefined: the detector cannot fire");
    }
    if (n == 0) return 0.0;
    return fire_prob(n, eta) * pmf(dist, n) / q;
}

double incident_given_no_fire(const ModeDistribution& dist, double eta) {
    const double weight = no_detect_weight(dist, eta);
    if (weight <= 0.0) {
        throw DegenerateCondition("incident_given_no_fire is undefined: the detector fires with certainty");
    }
    return 1.0 - pmf(dist, 0) / weight;
}

double certification_at_delay(const SourceConfig& config, int delay_index) {
    validate(config);
    if (delay_index < 1 || delay_index > config.n_delays) {
        throw InvalidParameter("delay_index must lie in [1, n_delays]");
    }
    const ModeDistribution dist = mode_distribution(config);
    const double q = mode_fire_prob(dist, config.eta);
    if (q <= 0.0) {
        throw DegenerateCondition("certification_at_delay is undefined: firing is impossible");
    }
    // (P(0)/w)^(i-1) * Pfire(1) * P(0)^(N-i) evaluated in log space. At eta=1
    // the first factor is exactly 1 (w equals the vacuum probability).
    const double log_vac = log_vacuum(dist);
    const double log_w = log_no_detect(dist, config.eta);
    const double single = posterior_given_fire(dist, config.eta, 1);
    return std::exp((delay_index - 1) * (log_vac - log_w)
                    + std::log(single)
                    + (config.n_delays - delay_index) * log_vac);
}

std::vector<CertificationPoint> certification_fan(const SourceConfig& config) {
    validate(config);
    std::vector<CertificationPoint> fan;
    fan.reserve(static_cast<std::size_t>(config.n_delays));
    for (int i = 1; i <= config.n_delays; ++i) {
        fan.push_back({config.n_delays, i, certification_at_delay(config, i)});
    }
    return fan;
}

double delay_fire_prob(const SourceConfig& config, int delay_index) {
    validate(config);
    if (delay_index < 1 || delay_index > config.n_delays) {
        throw InvalidParameter("delay_index must lie in [1, n_delays]");
    }
    const ModeDistribution dist = mode_distribution(config);
    const double q = mode_fire_prob(dist, config.eta);
    if (q == 0.0) return 0.0;
    return std::exp((delay_index - 1) * log_no_detect(dist, config.eta)) * q;
}

double trigger_prob(const SourceConfig& config) {
    validate(config);
    const ModeDistribution dist = mode_distribution(config);
    return -std::expm1(config.n_delays * log_no_detect(dist, config.eta));
}

double heralded_single_prob(const SourceConfig& config) {
    validate(config);
    if (config.eta == 0.0) return 0.0;
    if (config.kind == DistributionKind::Poisson) {
        return config.n_bar * config.eta * std::exp(-config.n_bar);
    }
    // n_bar * eta * (N/(n_bar+N))^(N+1), power taken in log space so the
    // large-N Poisson limit evaluates without loss.
    const double log_ratio = -std::log1p(config.n_bar / config.n_delays);
    return config.n_bar * config.eta * std::exp((config.n_delays + 1.0) * log_ratio);
}

double heralded_single_given_trigger(const SourceConfig& config) {
    validate(config);
    if (config.eta == 0.0) {
        throw DegenerateCondition("heralded_single_given_trigger is undefined: no trigger is possible");
    }
    return heralded_single_prob(config) / trigger_prob(config);
}

double poisson_limit(double n_bar, double eta) {
    if (!(n_bar >= 0.0) || !std::isfinite(n_bar)) {
        throw InvalidParameter("n_bar must be finite and nonnegative");
    }
    require_probability(eta, "eta");
    return n_bar * eta * std::exp(-n_bar);
}

double optimize_mean(double eta, int n_delays, DistributionKind kind, double tol) {
    require_probability(eta, "eta");
    if (eta == 0.0) throw InvalidParameter("eta must be positive");
    if (n_delays < 1) throw InvalidParameter("n_delays must be at least 1");
    if (!(tol > 0.0)) throw InvalidParameter("tol must be positive");

    const auto yield = [&](double n_bar) {
        return heralded_single_prob({n_bar, eta, n_delays, kind});
    };

    // Golden-section search; the yield is smooth and unimodal on the bracket.
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 1e-3;
    double hi = 10.0;
    double a = hi - inv_phi * (hi - lo);
    double b = lo + inv_phi * (hi - lo);
    double fa = yield(a);
    double fb = yield(b);
    while (hi - lo > tol) {
        if (fa < fb) {
            lo = a;
            a = b;
            fa = fb;
            b = lo + inv_phi * (hi - lo);
            fb = yield(b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - inv_phi * (hi - lo);
            fa = yield(a);
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace photonmux
