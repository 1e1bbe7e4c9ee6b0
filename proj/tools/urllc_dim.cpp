// urllc-dim: outage, BLER-target and resource dimensioning for single- and
// multi-connectivity URLLC transmission.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "urllc/error.hpp"
#include "urllc/scenario.hpp"

namespace {

struct GlobalOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    std::string format = "pretty";
    unsigned threads = 0;
};

struct SweepOverrides {
    std::optional<std::string> variable;
    std::optional<double> start;
    std::optional<double> stop;
    std::optional<int> points;
    std::optional<std::string> scale;
};

urllc::ScenarioConfig load_config(const GlobalOptions& opts) {
    urllc::ScenarioConfig cfg;
    if (!opts.config_path.empty()) {
        cfg = urllc::load_scenario(opts.config_path);
    }
    if (opts.seed) {
        cfg.seed = *opts.seed;
    }
    cfg.validate();
    return cfg;
}

void emit(const GlobalOptions& opts, const std::string& name, const urllc::Table& table) {
    std::cout << (opts.format == "csv" ? table.to_csv() : table.to_pretty());
    if (!opts.out_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(opts.out_dir, ec);
        if (ec) {
            throw urllc::IoError(opts.out_dir, ec.message());
        }
        urllc::write_text_file(std::filesystem::path(opts.out_dir) / (name + ".csv"), table.to_csv());
    }
}

urllc::SweepSpec resolve_sweep(const urllc::ScenarioConfig& cfg, const SweepOverrides& o) {
    urllc::SweepSpec sweep = cfg.sweep.value_or(urllc::SweepSpec{});
    if (o.variable) {
        if (*o.variable == "P_D") {
            sweep.variable = urllc::SweepVariable::PD;
        } else if (*o.variable == "SINR_DB") {
            sweep.variable = urllc::SweepVariable::SinrDb;
        } else {
            sweep.variable = urllc::SweepVariable::M;
        }
    }
    if (o.start) {
        sweep.start = *o.start;
    }
    if (o.stop) {
        sweep.stop = *o.stop;
    }
    if (o.points) {
        sweep.points = *o.points;
    }
    if (o.scale) {
        sweep.scale = *o.scale == "LINEAR" ? urllc::SweepScale::Linear : urllc::SweepScale::Log10;
    }
    sweep.validate();
    return sweep;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"URLLC single/multi-connectivity outage and resource dimensioning"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions opts;
    app.add_option("--config", opts.config_path, "Scenario file (JSON)");
    app.add_option("--seed", opts.seed, "Override the scenario seed");
    app.add_option("--out", opts.out_dir, "Directory for CSV output");
    app.add_option("--format", opts.format, "Console format")
        ->check(CLI::IsMember({"csv", "pretty"}));
    app.add_option("--threads", opts.threads, "Simulation threads (0 = hardware concurrency)");

    auto* outage = app.add_subcommand("outage", "Outage breakdown at the configured or solved BLER");
    auto* solve = app.add_subcommand("solve", "BLER target meeting the outage target");
    auto* resource = app.add_subcommand("resource", "Channel uses and total usage at the outage target");
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo check of the closed forms");
    auto* sweep = app.add_subcommand("sweep", "Sweep BLER, SINR or node count");
    auto* reproduce = app.add_subcommand("reproduce", "Write table2/fig3/fig4/fig5 CSVs");

    SweepOverrides sweep_opts;
    sweep->add_option("--variable", sweep_opts.variable)
        ->check(CLI::IsMember({"P_D", "SINR_DB", "M"}));
    sweep->add_option("--start", sweep_opts.start);
    sweep->add_option("--stop", sweep_opts.stop);
    sweep->add_option("--points", sweep_opts.points);
    sweep->add_option("--scale", sweep_opts.scale)->check(CLI::IsMember({"LINEAR", "LOG10"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (reproduce->parsed()) {
            const std::string dir = opts.out_dir.empty() ? "." : opts.out_dir;
            for (const auto& path : urllc::cmd_reproduce(dir)) {
                std::cout << "wrote " << path.string() << '\n';
            }
            return 0;
        }

        const urllc::ScenarioConfig cfg = load_config(opts);
        if (outage->parsed()) {
            emit(opts, "outage", urllc::outage_table(cfg, urllc::cmd_outage(cfg)));
        } else if (solve->parsed()) {
            emit(opts, "solve", urllc::solve_table(cfg, urllc::cmd_solve(cfg)));
        } else if (resource->parsed()) {
            emit(opts, "resource", urllc::resource_table(cfg, urllc::cmd_resource(cfg)));
        } else if (simulate->parsed()) {
            unsigned threads = opts.threads;
            if (threads == 0) {
                threads = std::max(1u, std::thread::hardware_concurrency());
            }
            emit(opts, "simulate", urllc::simulate_table(cfg, urllc::cmd_simulate(cfg, threads)));
        } else if (sweep->parsed()) {
            emit(opts, "sweep", urllc::cmd_sweep(cfg, resolve_sweep(cfg, sweep_opts)));
        }
    } catch (const urllc::Error& e) {
        std::cerr << "error kind=" << urllc::to_string(e.kind()) << " exit=" << e.exit_code()
                  << " message=\"" << e.what() << "\"\n";
        return e.exit_code();
    }
    return 0;
}
