#include "photonmux/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <tuple>

namespace photonmux {

std::string format_value(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.12g", value);
    return buffer;
}

const char* const kFig2CsvHeader =
    "series,kind,n_bar,eta,n_delays,delay_index,value,mc_value,mc_stderr,trials";

std::vector<Fig2Row> fig2_dataset(double eta, double n_bar, int max_delays,
                                  DistributionKind kind) {
    if (max_delays < 1) throw InvalidParameter("max_delays must be at least 1");
    validate(SourceConfig{n_bar, eta, 1, kind});

    std::vector<Fig2Row> rows;
    rows.reserve(static_cast<std::size_t>(max_delays) * (max_delays + 7) / 2);
    for (int n_delays = 1; n_delays <= max_delays; ++n_delays) {
        const SourceConfig config{n_bar, eta, n_delays, kind};
        for (int i = 1; i <= n_delays; ++i) {
            rows.push_back({"fan", kind, n_bar, eta, n_delays, i,
                            certification_at_delay(config, i), {}, {}, {}});
        }
        rows.push_back({"p1_given_trigger", kind, n_bar, eta, n_delays, {},
                        heralded_single_given_trigger(config), {}, {}, {}});
        rows.push_back({"p1_total", kind, n_bar, eta, n_delays, {},
                        heralded_single_prob(config), {}, {}, {}});
        rows.push_back({"poisson_limit", kind, n_bar, eta, n_delays, {},
                        poisson_limit(n_bar, eta), {}, {}, {}});
    }
    std::sort(rows.begin(), rows.end(), [](const Fig2Row& a, const Fig2Row& b) {
        return std::tie(a.series, a.n_delays, a.delay_index)
             < std::tie(b.series, b.n_delays, b.delay_index);
    });
    return rows;
}

void annotate_with_mc(std::vector<Fig2Row>& rows, const RunOptions& options) {
    if (rows.empty()) return;
    int max_delays = 0;
    for (const Fig2Row& row : rows) max_delays = std::max(max_delays, row.n_delays);

    for (int n_delays = 1; n_delays <= max_delays; ++n_delays) {
        const SourceConfig config{rows.front().n_bar, rows.front().eta, n_delays,
                                  rows.front().kind};
        const DetectorSpec detector{config.eta, DetectorKind::Threshold};
        // One run per system size; its stream is derived from (seed, n_delays)
        // so annotation stays reproducible chunk by chunk.
        RunOptions per_size = options;
        per_size.seed = mix_seed(options.seed, static_cast<std::uint64_t>(n_delays));
        const TallySet tally = run_trials(config, detector, per_size);

        for (Fig2Row& row : rows) {
            if (row.n_delays != n_delays) continue;
            try {
                Estimate estimate;
                if (row.series == "fan") {
                    estimate = estimate_certification(tally, *row.delay_index);
                } else if (row.series == "p1_total") {
                    estimate = estimate_p1(tally);
                } else if (row.series == "p1_given_trigger") {
                    estimate = estimate_p1_given_trigger(tally);
                } else {
                    continue;  // poisson_limit has no simulation estimator
                }
                row.mc_value = estimate.value;
                row.mc_stderr = estimate.std_error;
                row.trials = options.trials;
            } catch (const DegenerateCondition&) {
                // leave the row analytic-only
            }
        }
    }
}

void write_fig2_csv(const std::vector<Fig2Row>& rows, std::ostream& out) {
    out << kFig2CsvHeader << '\n';
    for (const Fig2Row& row : rows) {
        out << row.series << ',' << to_string(row.kind) << ','
            << format_value(row.n_bar) << ',' << format_value(row.eta) << ','
            << row.n_delays << ',';
        if (row.delay_index) out << *row.delay_index;
        out << ',' << format_value(row.value) << ',';
        if (row.mc_value) out << format_value(*row.mc_value);
        out << ',';
        if (row.mc_stderr) out << format_value(*row.mc_stderr);
        out << ',';
        if (row.trials) out << *row.trials;
        out << '\n';
    }
}

const char* to_string(RowStatus status) {
    switch (status) {
        case RowStatus::Pass: return "pass";
        case RowStatus::Fail: return "fail";
        default: return "skipped";
    }
}

namespace {

constexpr double kMaxAbsZ = 4.0;
constexpr double kMaxAbsDelta = 0.005;

template <typename AnalyticFn, typename EstimateFn>
ComparisonRow compare_row(const std::string& quantity, std::optional<int> delay_index,
                          AnalyticFn&& analytic_fn, EstimateFn&& estimate_fn) {
    ComparisonRow row;
    row.quantity = quantity;
    row.delay_index = delay_index;
    try {
        row.analytic = analytic_fn();
    } catch (const DegenerateCondition& e) {
        row.status = RowStatus::Skipped;
        row.note = e.what();
        return row;
    }
    try {
        const Estimate estimate = estimate_fn();
        row.estimate = estimate.value;
        row.std_error = estimate.std_error;
    } catch (const DegenerateCondition& e) {
        row.status = RowStatus::Skipped;
        row.note = e.what();
        return row;
    }

    const double delta = *row.estimate - *row.analytic;
    if (*row.std_error > 0.0) {
        row.z_score = delta / *row.std_error;
    } else {
        row.z_score = delta == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    const bool pass = std::abs(*row.z_score) <= kMaxAbsZ && std::abs(delta) <= kMaxAbsDelta;
    row.status = pass ? RowStatus::Pass : RowStatus::Fail;
    return row;
}

}  // namespace

ComparisonReport compare_analytic_mc(const SourceConfig& config, const RunOptions& options) {
    validate(config);
    if (options.trials < 10'000) {
        throw InvalidParameter("compare requires at least 10000 trials");
    }
    const DetectorSpec detector{config.eta, DetectorKind::Threshold};
    const TallySet tally = run_trials(config, detector, options);

    ComparisonReport report;
    report.config = config;
    report.trials = options.trials;
    report.seed = options.seed;
    report.chunk_size = options.chunk_size;

    report.rows.push_back(compare_row(
        "p1", std::nullopt,
        [&] { return heralded_single_prob(config); },
        [&] { return estimate_p1(tally); }));
    report.rows.push_back(compare_row(
        "p1_given_trigger", std::nullopt,
        [&] { return heralded_single_given_trigger(config); },
        [&] { return estimate_p1_given_trigger(tally); }));
    report.rows.push_back(compare_row(
        "no_fire_rate", std::nullopt,
        [&] { return 1.0 - trigger_prob(config); },
        [&] { return estimate_no_fire_rate(tally); }));
    for (int i = 1; i <= config.n_delays; ++i) {
        report.rows.push_back(compare_row(
            "delay_rate", i,
            [&] { return delay_fire_prob(config, i); },
            [&] { return estimate_delay_rate(tally, i); }));
    }
    for (int i = 1; i <= config.n_delays; ++i) {
        report.rows.push_back(compare_row(
            "certification", i,
            [&] { return certification_at_delay(config, i); },
            [&] { return estimate_certification(tally, i); }));
    }

    report.overall_pass = std::all_of(report.rows.begin(), report.rows.end(),
                                      [](const ComparisonRow& row) {
                                          return row.status != RowStatus::Fail;
                                      });
    return report;
}

std::vector<SweepRow> sweep(const std::vector<double>& n_bar_grid,
                            const std::vector<double>& eta_grid,
                            const std::vector<int>& delays_set,
                            DistributionKind kind) {
    if (n_bar_grid.empty() || eta_grid.empty() || delays_set.empty()) {
        throw InvalidParameter("sweep grids must be nonempty");
    }
    for (double eta : eta_grid) {
        require_probability(eta, "eta");
        if (eta == 0.0) throw InvalidParameter("sweep requires eta > 0");
    }

    std::vector<SweepRow> rows;
    rows.reserve(n_bar_grid.size() * eta_grid.size() * delays_set.size());
    for (double n_bar : n_bar_grid) {
        for (double eta : eta_grid) {
            for (int n_delays : delays_set) {
                const SourceConfig config{n_bar, eta, n_delays, kind};
                validate(config);
                rows.push_back({kind, n_bar, eta, n_delays,
                                heralded_single_prob(config),
                                heralded_single_given_trigger(config),
                                certification_at_delay(config, n_delays)});
            }
        }
    }
    return rows;
}

}  // namespace photonmux
