#include "photonmux/photon_stats.hpp"

#include <cmath>

namespace photonmux {

const char* to_string(DistributionKind kind) {
    return kind == DistributionKind::Thermal ? "thermal" : "poisson";
}

DistributionKind parse_distribution_kind(const std::string& name) {
    if (name == "thermal") return DistributionKind::Thermal;
    if (name == "poisson") return DistributionKind::Poisson;
    throw InvalidParameter("unknown distribution kind '" + name + "' (expected thermal or poisson)");
}

void validate(const ModeDistribution& dist) {
    if (!(dist.mean >= 0.0) || !std::isfinite(dist.mean)) {
        throw InvalidParameter("mode mean must be finite and nonnegative");
    }
}

double pmf(const ModeDistribution& dist, int n) {
    validate(dist);
    if (n < 0) throw InvalidParameter("photon number must be nonnegative");
    const double mu = dist.mean;
    if (mu == 0.0) return n == 0 ? 1.0 : 0.0;

    if (dist.kind == DistributionKind::Thermal) {
        // mu^n / (1+mu)^(n+1) = r^n * (1-r) with r = mu/(1+mu)
        return std::pow(mu / (1.0 + mu), n) / (1.0 + mu);
    }
    if (n <= 128) {
        double p = std::exp(-mu);
        for (int k = 1; k <= n; ++k) p *= mu / k;
        return p;
    }
    return std::exp(n * std::log(mu) - mu - std::lgamma(n + 1.0));
}

int sample(const ModeDistribution& dist, RandomStream& rng) {
    validate(dist);
    const double mu = dist.mean;
    if (mu == 0.0) return 0;
    const double u = rng.next_double();

    if (dist.kind == DistributionKind::Thermal) {
        // Smallest n with CDF(n) > u; CDF accumulated through the geometric
        // ratio r so each step costs one multiply and one add.
        const double r = mu / (1.0 + mu);
        double term = 1.0 / (1.0 + mu);
        double cum = term;
        int n = 0;
        while (u >= cum) {
            term *= r;
            const double next = cum + term;
            if (next == cum) break;  // tail below double resolution
            cum = next;
            ++n;
        }
        return n;
    }

    // Poisson via product of uniforms: n is the number of extra draws needed
    // before the running product falls to e^{-mu}.
    const double limit = std::exp(-mu);
    double product = u;
    int n = 0;
    while (product > limit) {
        product *= rng.next_double();
        ++n;
    }
    return n;
}

double no_detect_weight(const ModeDistribution& dist, double eta) {
    validate(dist);
    require_probability(eta, "eta");
    const double x = eta * dist.mean;
    return dist.kind == DistributionKind::Thermal ? 1.0 / (1.0 + x) : std::exp(-x);
}

int truncation_horizon(const ModeDistribution& dist, double tail_tol) {
    validate(dist);
    if (!(tail_tol > 0.0)) throw InvalidParameter("tail tolerance must be positive");
    const double mu = dist.mean;
    if (mu == 0.0) return 0;
    const double log_tol = std::log(tail_tol);

    if (dist.kind == DistributionKind::Thermal) {
        // Tail after N is exactly r^(N+1), r = mu/(1+mu).
        const double log_r = std::log(mu) - std::log1p(mu);
        const double steps = std::ceil(log_tol / log_r);
        return steps <= 1.0 ? 0 : static_cast<int>(steps) - 1;
    }

    // Chernoff: P(X >= m) <= exp(-mu + m(1 + log(mu) - log m)) for m > mu.
    int m = static_cast<int>(std::ceil(mu)) + 1;
    while (true) {
        const double log_bound = -mu + m * (1.0 + std::log(mu) - std::log(static_cast<double>(m)));
        if (log_bound <= log_tol) return m - 1;
        ++m;
    }
}

}  // namespace photonmux
