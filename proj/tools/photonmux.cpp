// Command-line frontend: certification queries, pulse-level simulation,
// analytic-vs-simulation comparison, fan-dataset generation, operating-point
// optimization, and parameter sweeps.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "photonmux/experiments.hpp"

namespace {

using photonmux::DegenerateCondition;
using photonmux::DistributionKind;
using photonmux::InvalidParameter;
using photonmux::format_value;
using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitCompareFailed = 3;

// JSON and CSV must encode identical values, so JSON numbers are re-read from
// the 12-significant-digit text.
json json_number(double value) {
    return json::parse(format_value(value));
}

struct CommonParams {
    double n_bar = 1.0;
    double eta = 1.0;
    int delays = 8;
    std::string kind = "thermal";

    photonmux::SourceConfig config() const {
        return {n_bar, eta, delays, photonmux::parse_distribution_kind(kind)};
    }
};

struct McParams {
    std::uint64_t trials = 1'000'000;
    std::uint64_t seed = 0;
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());

    photonmux::RunOptions options() const {
        photonmux::RunOptions run;
        run.trials = trials;
        run.seed = seed;
        run.workers = workers;
        return run;
    }
};

struct OutputParams {
    std::string format = "csv";
    std::string out_path;

    bool is_json() const { return format == "json"; }
};

void add_common(CLI::App* cmd, CommonParams& params) {
    cmd->add_option("--n-bar", params.n_bar, "Total mean photon pairs per pump pulse");
    cmd->add_option("--eta", params.eta, "Trigger detector quantum efficiency");
    cmd->add_option("--delays", params.delays, "Number of delay paths");
    cmd->add_option("--kind", params.kind, "Photon-number statistics")
        ->check(CLI::IsMember({"thermal", "poisson"}));
}

void add_mc(CLI::App* cmd, McParams& params) {
    cmd->add_option("--trials", params.trials, "Number of simulated pump pulses");
    cmd->add_option("--seed", params.seed, "Master random seed");
    cmd->add_option("--workers", params.workers, "Worker threads (does not affect results)");
}

void add_output(CLI::App* cmd, OutputParams& params) {
    cmd->add_option("--format", params.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", params.out_path, "Write output to a file instead of stdout");
}

void add_config_file(CLI::App* cmd, std::string& path) {
    cmd->add_option("--config", path, "Config file with key=value lines mirroring the flags");
}

std::string trimmed(const std::string& text) {
    const char* whitespace = " \t\r";
    const std::size_t begin = text.find_first_not_of(whitespace);
    if (begin == std::string::npos) return {};
    const std::size_t end = text.find_last_not_of(whitespace);
    return text.substr(begin, end - begin + 1);
}

// Applies key=value lines to every option the command line left unset, so
// explicit flags always win over the file.
void apply_config_file(CLI::App* cmd, const std::string& path) {
    if (path.empty()) return;
    std::ifstream file(path);
    if (!file) throw InvalidParameter("cannot read config file '" + path + "'");
    std::string line;
    int line_number = 0;
    while (std::getline(file, line)) {
        ++line_number;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string entry = trimmed(line);
        if (entry.empty()) continue;
        const std::size_t eq = entry.find('=');
        if (eq == std::string::npos) {
            throw InvalidParameter("config line " + std::to_string(line_number)
                                   + " is not key=value");
        }
        const std::string key = trimmed(entry.substr(0, eq));
        const std::string value = trimmed(entry.substr(eq + 1));
        CLI::Option* option =
            key == "config" ? nullptr : cmd->get_option_no_throw("--" + key);
        if (option == nullptr) {
            throw InvalidParameter("unknown config key '" + key + "'");
        }
        if (!option->empty()) continue;
        option->add_result(value);
        option->run_callback();
    }
}

int emit(const OutputParams& output, const std::string& text) {
    if (output.out_path.empty()) {
        std::cout << text;
        return kExitOk;
    }
    std::ofstream file(output.out_path);
    if (!file) {
        std::cerr << "error: cannot open '" << output.out_path << "' for writing\n";
        return kExitUsage;
    }
    file << text;
    return kExitOk;
}

json meta_for(const std::string& command, const photonmux::SourceConfig& config) {
    json meta;
    meta["command"] = command;
    meta["kind"] = photonmux::to_string(config.kind);
    meta["n_bar"] = json_number(config.n_bar);
    meta["eta"] = json_number(config.eta);
    meta["n_delays"] = config.n_delays;
    return meta;
}

void add_mc_meta(json& meta, const photonmux::RunOptions& options) {
    meta["trials"] = options.trials;
    meta["seed"] = options.seed;
    meta["chunk_size"] = options.chunk_size;
}

std::string csv_note(std::string note) {
    for (char& c : note) {
        if (c == ',' || c == '\n') c = ';';
    }
    return note;
}

// --- certify ---------------------------------------------------------------

int run_certify(const CommonParams& common, const std::optional<int>& delay,
                const OutputParams& output) {
    const photonmux::SourceConfig config = common.config();
    photonmux::validate(config);
    if (delay) {
        const double value = photonmux::certification_at_delay(config, *delay);
        if (output.is_json()) {
            json doc;
            doc["meta"] = meta_for("certify", config);
            doc["meta"]["delay_index"] = *delay;
            doc["value"] = json_number(value);
            return emit(output, doc.dump(2) + "\n");
        }
        return emit(output, format_value(value) + "\n");
    }

    std::string csv = "delay_index,certification,delay_fire_prob\n";
    json rows = json::array();
    for (const photonmux::CertificationPoint& point : photonmux::certification_fan(config)) {
        const double rate = photonmux::delay_fire_prob(config, point.delay_index);
        csv += std::to_string(point.delay_index) + "," + format_value(point.probability) + ","
             + format_value(rate) + "\n";
        rows.push_back({{"delay_index", point.delay_index},
                        {"certification", json_number(point.probability)},
                        {"delay_fire_prob", json_number(rate)}});
    }
    if (output.is_json()) {
        json doc;
        doc["meta"] = meta_for("certify", config);
        doc["rows"] = rows;
        return emit(output, doc.dump(2) + "\n");
    }
    return emit(output, csv);
}

// --- simulate ----------------------------------------------------------------

struct SimRow {
    std::string quantity;
    std::optional<int> delay_index;
    std::optional<photonmux::Estimate> estimate;
};

template <typename Fn>
SimRow sim_row(const std::string& quantity, std::optional<int> delay_index, Fn&& fn) {
    SimRow row{quantity, delay_index, std::nullopt};
    try {
        row.estimate = fn();
    } catch (const DegenerateCondition&) {
        // row stays empty: the conditioning event never happened
    }
    return row;
}

int run_simulate(const CommonParams& common, const McParams& mc, bool pnr,
                 std::optional<int> target, const OutputParams& output) {
    const photonmux::SourceConfig config = common.config();
    photonmux::RunOptions options = mc.options();
    photonmux::DetectorSpec detector{config.eta, photonmux::DetectorKind::Threshold};
    if (pnr) {
        detector.kind = photonmux::DetectorKind::NumberResolving;
        options.pnr_target = target.value_or(1);
    }
    const photonmux::TallySet tally = photonmux::run_trials(config, detector, options);

    std::vector<SimRow> rows;
    rows.push_back(sim_row("p1", {}, [&] { return photonmux::estimate_p1(tally); }));
    rows.push_back(sim_row("p1_given_trigger", {},
                           [&] { return photonmux::estimate_p1_given_trigger(tally); }));
    rows.push_back(sim_row("no_fire_rate", {},
                           [&] { return photonmux::estimate_no_fire_rate(tally); }));
    for (int i = 1; i <= config.n_delays; ++i) {
        rows.push_back(sim_row("delay_rate", i,
                               [&] { return photonmux::estimate_delay_rate(tally, i); }));
    }
    for (int i = 1; i <= config.n_delays; ++i) {
        rows.push_back(sim_row("certification", i,
                               [&] { return photonmux::estimate_certification(tally, i); }));
    }
    if (pnr) {
        for (int i = 1; i <= config.n_delays; ++i) {
            rows.push_back(sim_row("pnr_target_rate", i,
                                   [&] { return photonmux::estimate_pnr_target_rate(tally, i); }));
        }
    }

    if (output.is_json()) {
        json doc;
        doc["meta"] = meta_for("simulate", config);
        add_mc_meta(doc["meta"], options);
        if (pnr) doc["meta"]["pnr_target"] = *options.pnr_target;
        doc["rows"] = json::array();
        for (const SimRow& row : rows) {
            json entry;
            entry["quantity"] = row.quantity;
            entry["delay_index"] = row.delay_index ? json(*row.delay_index) : json(nullptr);
            if (row.estimate) {
                entry["value"] = json_number(row.estimate->value);
                entry["stderr"] = json_number(row.estimate->std_error);
                entry["successes"] = row.estimate->successes;
                entry["denominator"] = row.estimate->denominator;
            } else {
                entry["value"] = nullptr;
                entry["stderr"] = nullptr;
                entry["successes"] = nullptr;
                entry["denominator"] = nullptr;
            }
            doc["rows"].push_back(entry);
        }
        return emit(output, doc.dump(2) + "\n");
    }

    std::string csv = "quantity,delay_index,value,stderr,successes,denominator\n";
    for (const SimRow& row : rows) {
        csv += row.quantity + ",";
        if (row.delay_index) csv += std::to_string(*row.delay_index);
        csv += ",";
        if (row.estimate) {
            csv += format_value(row.estimate->value) + "," +
                   format_value(row.estimate->std_error) + "," +
                   std::to_string(row.estimate->successes) + "," +
                   std::to_string(row.estimate->denominator);
        } else {
            csv += ",,,";
        }
        csv += "\n";
    }
    return emit(output, csv);
}

// --- compare -----------------------------------------------------------------

int run_compare(const CommonParams& common, const McParams& mc, const OutputParams& output) {
    const photonmux::SourceConfig config = common.config();
    const photonmux::ComparisonReport report =
        photonmux::compare_analytic_mc(config, mc.options());

    if (output.is_json()) {
        json doc;
        doc["meta"] = meta_for("compare", config);
        doc["meta"]["trials"] = report.trials;
        doc["meta"]["seed"] = report.seed;
        doc["meta"]["chunk_size"] = report.chunk_size;
        doc["rows"] = json::array();
        for (const photonmux::ComparisonRow& row : report.rows) {
            json entry;
            entry["quantity"] = row.quantity;
            entry["delay_index"] = row.delay_index ? json(*row.delay_index) : json(nullptr);
            entry["analytic"] = row.analytic ? json_number(*row.analytic) : json(nullptr);
            entry["estimate"] = row.estimate ? json_number(*row.estimate) : json(nullptr);
            entry["stderr"] = row.std_error ? json_number(*row.std_error) : json(nullptr);
            entry["z_score"] = row.z_score ? json_number(*row.z_score) : json(nullptr);
            entry["status"] = photonmux::to_string(row.status);
            entry["note"] = row.note;
            doc["rows"].push_back(entry);
        }
        doc["overall_pass"] = report.overall_pass;
        const int rc = emit(output, doc.dump(2) + "\n");
        return rc != kExitOk ? rc : (report.overall_pass ? kExitOk : kExitCompareFailed);
    }

    std::string csv = "quantity,delay_index,analytic,estimate,stderr,z_score,status,note\n";
    for (const photonmux::ComparisonRow& row : report.rows) {
        csv += row.quantity + ",";
        if (row.delay_index) csv += std::to_string(*row.delay_index);
        csv += ",";
        if (row.analytic) csv += format_value(*row.analytic);
        csv += ",";
        if (row.estimate) csv += format_value(*row.estimate);
        csv += ",";
        if (row.std_error) csv += format_value(*row.std_error);
        csv += ",";
        if (row.z_score) csv += format_value(*row.z_score);
        csv += ",";
        csv += photonmux::to_string(row.status);
        csv += "," + csv_note(row.note) + "\n";
    }
    csv += std::string("overall,,,,,,") + (report.overall_pass ? "pass" : "fail") + ",\n";
    const int rc = emit(output, csv);
    return rc != kExitOk ? rc : (report.overall_pass ? kExitOk : kExitCompareFailed);
}

// --- fig2 --------------------------------------------------------------------

int run_fig2(double eta, double n_bar, int max_delays, const std::string& kind_name,
             std::optional<std::uint64_t> trials, std::uint64_t seed, unsigned workers,
             const OutputParams& output) {
    const DistributionKind kind = photonmux::parse_distribution_kind(kind_name);
    std::vector<photonmux::Fig2Row> rows = photonmux::fig2_dataset(eta, n_bar, max_delays, kind);
    photonmux::RunOptions options;
    if (trials) {
        options.trials = *trials;
        options.seed = seed;
        options.workers = workers;
        photonmux::annotate_with_mc(rows, options);
    }

    if (output.is_json()) {
        json doc;
        doc["meta"]["command"] = "fig2";
        doc["meta"]["kind"] = kind_name;
        doc["meta"]["n_bar"] = json_number(n_bar);
        doc["meta"]["eta"] = json_number(eta);
        doc["meta"]["max_delays"] = max_delays;
        if (trials) {
            doc["meta"]["trials"] = *trials;
            doc["meta"]["seed"] = seed;
            doc["meta"]["chunk_size"] = options.chunk_size;
        }
        doc["rows"] = json::array();
        for (const photonmux::Fig2Row& row : rows) {
            json entry;
            entry["series"] = row.series;
            entry["kind"] = photonmux::to_string(row.kind);
            entry["n_bar"] = json_number(row.n_bar);
            entry["eta"] = json_number(row.eta);
            entry["n_delays"] = row.n_delays;
            entry["delay_index"] = row.delay_index ? json(*row.delay_index) : json(nullptr);
            entry["value"] = json_number(row.value);
            entry["mc_value"] = row.mc_value ? json_number(*row.mc_value) : json(nullptr);
            entry["mc_stderr"] = row.mc_stderr ? json_number(*row.mc_stderr) : json(nullptr);
            entry["trials"] = row.trials ? json(*row.trials) : json(nullptr);
            doc["rows"].push_back(entry);
        }
        return emit(output, doc.dump(2) + "\n");
    }

    std::ostringstream text;
    photonmux::write_fig2_csv(rows, text);
    return emit(output, text.str());
}

// --- optimize ------------------------------------------------------------------

int run_optimize(double eta, int delays, const std::string& kind_name, double tol,
                 const OutputParams& output) {
    const DistributionKind kind = photonmux::parse_distribution_kind(kind_name);
    const double best = photonmux::optimize_mean(eta, delays, kind, tol);
    const double p1 = photonmux::heralded_single_prob({best, eta, delays, kind});

    if (output.is_json()) {
        json doc;
        doc["meta"]["command"] = "optimize";
        doc["meta"]["kind"] = kind_name;
        doc["meta"]["eta"] = json_number(eta);
        doc["meta"]["n_delays"] = delays;
        doc["meta"]["tol"] = json_number(tol);
        doc["n_bar_opt"] = json_number(best);
        doc["p1_max"] = json_number(p1);
        return emit(output, doc.dump(2) + "\n");
    }
    std::string csv = "kind,eta,n_delays,tol,n_bar_opt,p1_max\n";
    csv += kind_name + "," + format_value(eta) + "," + std::to_string(delays) + "," +
           format_value(tol) + "," + format_value(best) + "," + format_value(p1) + "\n";
    return emit(output, csv);
}

// --- sweep ---------------------------------------------------------------------

int run_sweep(const std::vector<double>& n_bars, const std::vector<double>& etas,
              const std::vector<int>& delays, const std::string& kind_name,
              const OutputParams& output) {
    const DistributionKind kind = photonmux::parse_distribution_kind(kind_name);
    const std::vector<photonmux::SweepRow> rows = photonmux::sweep(n_bars, etas, delays, kind);

    if (output.is_json()) {
        json doc;
        doc["meta"]["command"] = "sweep";
        doc["meta"]["kind"] = kind_name;
        doc["rows"] = json::array();
        for (const photonmux::SweepRow& row : rows) {
            doc["rows"].push_back({{"kind", photonmux::to_string(row.kind)},
                                   {"n_bar", json_number(row.n_bar)},
                                   {"eta", json_number(row.eta)},
                                   {"n_delays", row.n_delays},
                                   {"p1", json_number(row.p1)},
                                   {"p1_given_trigger", json_number(row.p1_given_trigger)},
                                   {"cert_last_delay", json_number(row.cert_last_delay)}});
        }
        return emit(output, doc.dump(2) + "\n");
    }

    std::string csv = "kind,n_bar,eta,n_delays,p1,p1_given_trigger,cert_last_delay\n";
    for (const photonmux::SweepRow& row : rows) {
        csv += std::string(photonmux::to_string(row.kind)) + "," + format_value(row.n_bar) +
               "," + format_value(row.eta) + "," + std::to_string(row.n_delays) + "," +
               format_value(row.p1) + "," + format_value(row.p1_given_trigger) + "," +
               format_value(row.cert_last_delay) + "\n";
    }
    return emit(output, csv);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multiplexed heralded single-photon source: certifications, "
                 "production probabilities, and a pulse-level simulator"};
    app.require_subcommand(1);

    // certify
    CommonParams certify_common;
    std::optional<int> certify_delay;
    OutputParams certify_output;
    CLI::App* certify = app.add_subcommand(
        "certify", "Single-photon certification per delay (closed form)");
    add_common(certify, certify_common);
    certify->add_option("--delay", certify_delay,
                        "Print only the certification for this delay index");
    add_output(certify, certify_output);
    std::string certify_config;
    add_config_file(certify, certify_config);

    // simulate
    CommonParams sim_common;
    McParams sim_mc;
    bool sim_pnr = false;
    std::optional<int> sim_target;
    OutputParams sim_output;
    CLI::App* simulate = app.add_subcommand(
        "simulate", "Pulse-level Monte Carlo run; prints every estimator");
    add_common(simulate, sim_common);
    add_mc(simulate, sim_mc);
    simulate->add_flag("--pnr", sim_pnr, "Use a number-resolving trigger detector");
    simulate->add_option("--target", sim_target, "Heralded photon-number target (with --pnr)");
    add_output(simulate, sim_output);
    std::string sim_config;
    add_config_file(simulate, sim_config);

    // compare
    CommonParams cmp_common;
    McParams cmp_mc;
    OutputParams cmp_output;
    CLI::App* compare = app.add_subcommand(
        "compare", "Check every closed form against the simulation (exit 3 on failure)");
    add_common(compare, cmp_common);
    add_mc(compare, cmp_mc);
    add_output(compare, cmp_output);
    std::string cmp_config;
    add_config_file(compare, cmp_config);

    // fig2
    double fig2_eta = 1.0;
    double fig2_n_bar = 1.0;
    int fig2_max_delays = 8;
    std::string fig2_kind = "thermal";
    std::optional<std::uint64_t> fig2_trials;
    std::uint64_t fig2_seed = 0;
    unsigned fig2_workers = std::max(1u, std::thread::hardware_concurrency());
    OutputParams fig2_output;
    CLI::App* fig2 = app.add_subcommand(
        "fig2", "Certification-fan dataset over system sizes 1..max-delays");
    fig2->add_option("--eta", fig2_eta, "Trigger detector quantum efficiency");
    fig2->add_option("--n-bar", fig2_n_bar, "Total mean photon pairs per pump pulse");
    fig2->add_option("--max-delays", fig2_max_delays, "Largest system size to emit");
    fig2->add_option("--kind", fig2_kind, "Photon-number statistics")
        ->check(CLI::IsMember({"thermal", "poisson"}));
    fig2->add_option("--trials", fig2_trials, "Also annotate rows with Monte Carlo estimates");
    fig2->add_option("--seed", fig2_seed, "Master random seed for annotation");
    fig2->add_option("--workers", fig2_workers, "Worker threads (does not affect results)");
    add_output(fig2, fig2_output);
    std::string fig2_config;
    add_config_file(fig2, fig2_config);

    // optimize
    double opt_eta = 1.0;
    int opt_delays = 8;
    std::string opt_kind = "thermal";
    double opt_tol = 1e-6;
    OutputParams opt_output;
    CLI::App* optimize = app.add_subcommand(
        "optimize", "Find the n-bar that maximizes heralded single-photon yield");
    optimize->add_option("--eta", opt_eta, "Trigger detector quantum efficiency");
    optimize->add_option("--delays", opt_delays, "Number of delay paths");
    optimize->add_option("--kind", opt_kind, "Photon-number statistics")
        ->check(CLI::IsMember({"thermal", "poisson"}));
    optimize->add_option("--tol", opt_tol, "Bracket tolerance for the search");
    add_output(optimize, opt_output);
    std::string opt_config;
    add_config_file(optimize, opt_config);

    // sweep
    std::vector<double> sweep_n_bars{1.0};
    std::vector<double> sweep_etas{1.0};
    std::vector<int> sweep_delays{8};
    std::string sweep_kind = "thermal";
    OutputParams sweep_output;
    CLI::App* sweep_cmd = app.add_subcommand(
        "sweep", "Tabulate p1, p1|trigger and last-delay certification over grids");
    sweep_cmd->add_option("--n-bar", sweep_n_bars, "n-bar grid (comma separated)")
        ->delimiter(',');
    sweep_cmd->add_option("--eta", sweep_etas, "eta grid (comma separated)")->delimiter(',');
    sweep_cmd->add_option("--delays", sweep_delays, "delay-count grid (comma separated)")
        ->delimiter(',');
    sweep_cmd->add_option("--kind", sweep_kind, "Photon-number statistics")
        ->check(CLI::IsMember({"thermal", "poisson"}));
    add_output(sweep_cmd, sweep_output);
    std::string sweep_config;
    add_config_file(sweep_cmd, sweep_config);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (app.got_subcommand(certify)) {
            apply_config_file(certify, certify_config);
            return run_certify(certify_common, certify_delay, certify_output);
        }
        if (app.got_subcommand(simulate)) {
            apply_config_file(simulate, sim_config);
            return run_simulate(sim_common, sim_mc, sim_pnr, sim_target, sim_output);
        }
        if (app.got_subcommand(compare)) {
            apply_config_file(compare, cmp_config);
            return run_compare(cmp_common, cmp_mc, cmp_output);
        }
        if (app.got_subcommand(fig2)) {
            apply_config_file(fig2, fig2_config);
            return run_fig2(fig2_eta, fig2_n_bar, fig2_max_delays, fig2_kind, fig2_trials,
                            fig2_seed, fig2_workers, fig2_output);
        }
        if (app.got_subcommand(optimize)) {
            apply_config_file(optimize, opt_config);
            return run_optimize(opt_eta, opt_delays, opt_kind, opt_tol, opt_output);
        }
        if (app.got_subcommand(sweep_cmd)) {
            apply_config_file(sweep_cmd, sweep_config);
            return run_sweep(sweep_n_bars, sweep_etas, sweep_delays, sweep_kind, sweep_output);
        }
    } catch (const InvalidParameter& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DegenerateCondition& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitOk;
}
