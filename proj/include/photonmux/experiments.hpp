#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "photonmux/montecarlo.hpp"

namespace photonmux {

// Formats a value with 12 significant digits (the precision used by every
// CSV and JSON surface).
std::string format_value(double value);

// One row of the certification-fan dataset. Fan rows carry a delay index;
// the three curve rows (p1_total, poisson_limit, p1_given_trigger) are
// functions of n_delays alone.
struct Fig2Row {
    std::string series;  // fan | p1_given_trigger | p1_total | poisson_limit
    DistributionKind kind = DistributionKind::Thermal;
    double n_bar = 1.0;
    double eta = 1.0;
    int n_delays = 0;
    std::optional<int> delay_index;
    double value = 0.0;
    std::optional<double> mc_value;
    std::optional<double> mc_stderr;
    std::optional<std::uint64_t> trials;
};

std::vector<Fig2Row> fig2_dataset(double eta, double n_bar, int max_delays,
                                  DistributionKind kind = DistributionKind::Thermal);

// Fills mc_value/mc_stderr for every row that has a Monte Carlo estimator
// (fan, p1_total, p1_given_trigger) by simulating each system size once.
void annotate_with_mc(std::vector<Fig2Row>& rows, const RunOptions& options);

extern const char* const kFig2CsvHeader;
void write_fig2_csv(const std::vector<Fig2Row>& rows, std::ostream& out);

enum class RowStatus { Pass, Fail, Skipped };

const char* to_string(RowStatus status);

// One closed-form-versus-simulation check. Skipped rows record why the
// quantity was undefined instead of fabricating a number.
struct ComparisonRow {
    std::string quantity;
    std::optional<int> delay_index;
    std::optional<double> analytic;
    std::optional<double> estimate;
    std::optional<double> std_error;
    std::optional<double> z_score;
    RowStatus status = RowStatus::Skipped;
    std::string note;
};

struct ComparisonReport {
    SourceConfig config;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::uint64_t chunk_size = 0;
    std::vector<ComparisonRow> rows;
    // True iff every non-skipped row has |z| <= 4 and |analytic-estimate| <= 0.005.
    bool overall_pass = false;
};

// Runs the pulse-level oracle and checks every estimator against its closed
// form. Requires at least 1e4 trials.
ComparisonReport compare_analytic_mc(const SourceConfig& config, const RunOptions& options);

struct SweepRow {
    DistributionKind kind = DistributionKind::Thermal;
    double n_bar = 0.0;
    double eta = 0.0;
    int n_delays = 0;
    double p1 = 0.0;
    double p1_given_trigger = 0.0;
    double cert_last_delay = 0.0;
};

// Cartesian sweep over operating points; one row per (n_bar, eta, n_delays).
std::vector<SweepRow> sweep(const std::vector<double>& n_bar_grid,
                            const std::vector<double>& eta_grid,
                            const std::vector<int>& delays_set,
                            DistributionKind kind);

}  // namespace photonmux
