#pragma once

// Scenario configuration and the commands behind the `urllc-dim` CLI. Every
// command returns a plain result object plus a Table that renders as CSV or
// as an aligned text table.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "urllc/bler_solver.hpp"
#include "urllc/harq_sim.hpp"
#include "urllc/outage_model.hpp"
#include "urllc/resource_model.hpp"

namespace urllc {

enum class SweepVariable { PD, SinrDb, M };
enum class SweepScale { Linear, Log10 };

struct SweepSpec {
    SweepVariable variable = SweepVariable::PD;
    double start = 1e-4;
    double stop = 1e-1;
    int points = 61;
    SweepScale scale = SweepScale::Log10;

    void validate() const;
    std::vector<double> grid() const;
};

struct ScenarioConfig {
    Scheme scheme = Scheme::SC;
    int m_nodes = 1;
    /// One entry per node, or a single entry shared by all nodes.
    std::vector<double> sinr_db_per_node{10.0};
    std::uint32_t payload_bits = 256;
    /// Carried and echoed; only sized when `include_metadata_usage` is set.
    std::uint32_t metadata_bits = 128;
    BlerPolicy policy;
    ChaseModel chase_model = ChaseModel::Zero;
    double target_outage = 1e-5;
    /// Fixed data BLER operating point for `outage`/`simulate`. When absent
    /// those commands solve for the target first.
    std::optional<double> p_d;
    Numerology numerology;
    std::uint64_t trials = 1'000'000;
    std::uint64_t seed = 1;
    bool shared_frame_alignment = true;
    bool include_metadata_usage = false;
    std::optional<SweepSpec> sweep;

    void validate() const;
    std::vector<FblContext> node_contexts() const;
    /// Combining spec; the finite-blocklength model uses the first node's context.
    ChaseCombiningSpec chase() const;
};

/// Parses a JSON document (comments allowed). Missing keys take defaults;
/// unknown keys raise ValidationError naming the key; syntax errors raise
/// ParseError with line and column.
ScenarioConfig parse_scenario(std::string_view text);
ScenarioConfig load_scenario(const std::filesystem::path& path);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string to_csv() const;
    std::string to_pretty() const;
};

/// Fixed "%.10g" formatting so output is byte-stable.
std::string format_number(double value);

struct OutageResult {
    double p_d = 0.0;
    std::vector<LinkBlerProfile> profiles;
    std::vector<OutageBreakdown> per_node;
    double p_out = 0.0;
};

OutageResult cmd_outage(const ScenarioConfig& config);
Table outage_table(const ScenarioConfig& config, const OutageResult& result);

SolveResult cmd_solve(const ScenarioConfig& config);
Table solve_table(const ScenarioConfig& config, const SolveResult& result);

UsageReport cmd_resource(const ScenarioConfig& config);
Table resource_table(const ScenarioConfig& config, const UsageReport& report);

struct SimulationRow {
    std::string metric;
    MonteCarloEstimate estimate;
    /// Closed-form counterpart, when one exists.
    std::optional<double> analytic;
};

struct SimulationReport {
    double p_d = 0.0;
    std::vector<SimulationRow> rows;
};

SimulationReport cmd_simulate(const ScenarioConfig& config, unsigned threads = 1);
Table simulate_table(const ScenarioConfig& config, const SimulationReport& report);

Table cmd_sweep(const ScenarioConfig& config, const SweepSpec& sweep);

Table reproduce_table2();
Table reproduce_fig3();
Table reproduce_fig4();
Table reproduce_fig5();

/// Writes table2.csv, fig3.csv, fig4.csv and fig5.csv into `directory`
/// (created if needed) and returns the written paths.
std::vector<std::filesystem::path> cmd_reproduce(const std::filesystem::path& directory);

void write_text_file(const std::filesystem::path& path, const std::string& contents);

std::string policy_label(const BlerPolicy& policy);

} // namespace urllc
