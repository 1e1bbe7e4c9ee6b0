#include "urllc/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "urllc/error.hpp"

namespace urllc {

namespace {

using nlohmann::json;

// Reference resource usages at 1e-5 outage, SINR 10 dB (SC, then MC with two
// nodes). The MC value does not follow from the usage formula with the
// matching BLER and channel use; table2.csv flags the mismatch.
constexpr double kReferenceUsageSc = 85.44;
constexpr double kReferenceUsageMc = 166.12;
constexpr double kReferenceTolerance = 0.10;

std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return s;
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::string& prefix) {
    for (const auto& [key, value] : obj.items()) {
        if (!known.contains(key)) {
            throw ValidationError(prefix + key, "unknown key");
        }
    }
}

const json& require_object(const json& value, const std::string& field) {
    if (!value.is_object()) {
        throw ValidationError(field, "expected an object");
    }
    return value;
}

double get_number(const json& value, const std::string& field) {
    if (!value.is_number()) {
        throw ValidationError(field, "expected a number");
    }
    return value.get<double>();
}

std::uint64_t get_unsigned(const json& value, const std::string& field) {
    if (value.is_number_unsigned()) {
        return value.get<std::uint64_t>();
    }
    if (value.is_number_integer()) {
        throw ValidationError(field, "must be nonnegative");
    }
    // Accept 1e6-style literals as long as they are integral.
    const double d = get_number(value, field);
    if (d < 0.0 || d != std::floor(d) || d > 1.8e19) {
        throw ValidationError(field, "expected a nonnegative integer");
    }
    return static_cast<std::uint64_t>(d);
}

int get_int(const json& value, const std::string& field) {
    if (value.is_number_integer()) {
        const auto v = value.get<std::int64_t>();
        if (v < -1'000'000'000 || v > 1'000'000'000) {
            throw ValidationError(field, "integer out of range");
        }
        return static_cast<int>(v);
    }
    const double d = get_number(value, field);
    if (d != std::floor(d) || std::abs(d) > 1e9) {
        throw ValidationError(field, "expected an integer");
    }
    return static_cast<int>(d);
}

std::string get_string(const json& value, const std::string& field) {
    if (!value.is_string()) {
        throw ValidationError(field, "expected a string");
    }
    return value.get<std::string>();
}

bool get_bool(const json& value, const std::string& field) {
    if (!value.is_boolean()) {
        throw ValidationError(field, "expected true or false");
    }
    return value.get<bool>();
}

Scheme parse_scheme(const json& value) {
    const std::string s = upper(get_string(value, "scheme"));
    if (s == "SC") {
        return Scheme::SC;
    }
    if (s == "MC") {
        return Scheme::MC;
    }
    throw ValidationError("scheme", "expected SC or MC, got '" + s + "'");
}

PolicyKind parse_policy_kind(const std::string& raw) {
    const std::string s = upper(raw);
    if (s == "EQUAL") {
        return PolicyKind::Equal;
    }
    if (s == "HALF") {
        return PolicyKind::Half;
    }
    if (s == "FIXED_META") {
        return PolicyKind::FixedMeta;
    }
    throw ValidationError("policy.kind", "expected EQUAL, HALF or FIXED_META, got '" + raw + "'");
}

BlerPolicy parse_policy(const json& value) {
    BlerPolicy policy;
    if (value.is_string()) {
        policy.kind = parse_policy_kind(value.get<std::string>());
    } else {
        require_object(value, "policy");
        reject_unknown_keys(value, {"kind", "fixed_meta"}, "policy.");
        if (value.contains("kind")) {
            policy.kind = parse_policy_kind(get_string(value.at("kind"), "policy.kind"));
        }
        if (value.contains("fixed_meta")) {
            policy.fixed_meta = get_number(value.at("fixed_meta"), "policy.fixed_meta");
        }
    }
    policy.validate();
    return policy;
}

ChaseModel parse_chase_model(const std::string& raw) {
    const std::string s = upper(raw);
    if (s == "ZERO") {
        return ChaseModel::Zero;
    }
    if (s == "PRODUCT") {
        return ChaseModel::Product;
    }
    if (s == "FINITE_BLOCKLENGTH") {
        return ChaseModel::FiniteBlocklength;
    }
    throw ValidationError("chase.model",
                          "expected ZERO, PRODUCT or FINITE_BLOCKLENGTH, got '" + raw + "'");
}

ChaseModel parse_chase(const json& value) {
    if (value.is_string()) {
        return parse_chase_model(value.get<std::string>());
    }
    require_object(value, "chase");
    reject_unknown_keys(value, {"model"}, "chase.");
    if (!value.contains("model")) {
        return ChaseModel::Zero;
    }
    return parse_chase_model(get_string(value.at("model"), "chase.model"));
}

Numerology parse_numerology(const json& value) {
    require_object(value, "numerology");
    reject_unknown_keys(value,
                        {"scs_khz", "symbols_per_tti", "harq_rtt_ttis", "timeout_ttis",
                         "t_up_ttis", "t_tx_ttis", "t_bp_initial_ttis"},
                        "numerology.");
    Numerology n;
    if (value.contains("scs_khz")) {
        n.scs_khz = get_number(value.at("scs_khz"), "numerology.scs_khz");
    }
    if (value.contains("symbols_per_tti")) {
        n.symbols_per_tti = get_int(value.at("symbols_per_tti"), "numerology.symbols_per_tti");
    }
    if (value.contains("harq_rtt_ttis")) {
        n.harq_rtt_ttis = get_int(value.at("harq_rtt_ttis"), "numerology.harq_rtt_ttis");
    }
    if (value.contains("timeout_ttis")) {
        n.timeout_ttis = get_int(value.at("timeout_ttis"), "numerology.timeout_ttis");
    }
    if (value.contains("t_up_ttis")) {
        n.t_up_ttis = get_number(value.at("t_up_ttis"), "numerology.t_up_ttis");
    }
    if (value.contains("t_tx_ttis")) {
        n.t_tx_ttis = get_number(value.at("t_tx_ttis"), "numerology.t_tx_ttis");
    }
    if (value.contains("t_bp_initial_ttis")) {
        n.t_bp_initial_ttis = get_number(value.at("t_bp_initial_ttis"), "numerology.t_bp_initial_ttis");
    }
    n.validate();
    return n;
}

SweepSpec parse_sweep(const json& value) {
    require_object(value, "sweep");
    reject_unknown_keys(value, {"variable", "start", "stop", "points", "scale"}, "sweep.");
    SweepSpec sweep;
    if (value.contains("variable")) {
        const std::string v = upper(get_string(value.at("variable"), "sweep.variable"));
        if (v == "P_D") {
            sweep.variable = SweepVariable::PD;
        } else if (v == "SINR_DB") {
            sweep.variable = SweepVariable::SinrDb;
        } else if (v == "M") {
            sweep.variable = SweepVariable::M;
        } else {
            throw ValidationError("sweep.variable", "expected P_D, SINR_DB or M");
        }
    }
    if (value.contains("start")) {
        sweep.start = get_number(value.at("start"), "sweep.start");
    }
    if (value.contains("stop")) {
        sweep.stop = get_number(value.at("stop"), "sweep.stop");
    }
    if (value.contains("points")) {
        sweep.points = get_int(value.at("points"), "sweep.points");
    }
    if (value.contains("scale")) {
        const std::string s = upper(get_string(value.at("scale"), "sweep.scale"));
        if (s == "LINEAR") {
            sweep.scale = SweepScale::Linear;
        } else if (s == "LOG10") {
            sweep.scale = SweepScale::Log10;
        } else {
            throw ValidationError("sweep.scale", "expected LINEAR or LOG10");
        }
    }
    sweep.validate();
    return sweep;
}

std::vector<double> parse_sinr(const json& value, const std::string& field) {
    if (value.is_number()) {
        return {value.get<double>()};
    }
    if (!value.is_array() || value.empty()) {
        throw ValidationError(field, "expected a number or a non-empty list of numbers");
    }
    std::vector<double> out;
    for (const auto& v : value) {
        out.push_back(get_number(v, field));
    }
    return out;
}

std::string location_of(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

std::string scheme_label(Scheme scheme, int m) {
    return scheme == Scheme::SC ? "SC" : "MC" + std::to_string(m);
}

std::vector<std::string> row(std::initializer_list<std::string> cells) {
    return std::vector<std::string>(cells);
}

double resolve_p_d(const ScenarioConfig& config) {
    if (config.p_d) {
        return *config.p_d;
    }
    const auto contexts = config.node_contexts();
    return solve_bler(config.scheme, config.m_nodes, config.target_outage, config.policy,
                      config.chase(), contexts)
        .p_d;
}

MonteCarloEstimate proportion(std::uint64_t count, std::uint64_t trials, std::uint64_t seed) {
    MonteCarloEstimate est;
    est.trials = trials;
    est.seed = seed;
    const double n = static_cast<double>(trials);
    est.mean = static_cast<double>(count) / n;
    est.ci_half_width_95 = 1.96 * std::sqrt(est.mean * (1.0 - est.mean) / n);
    return est;
}

} // namespace

void SweepSpec::validate() const {
    if (!(start < stop)) {
        throw ValidationError("sweep.start", "start must be below stop");
    }
    if (points < 2) {
        throw ValidationError("sweep.points", "need at least 2 points");
    }
    if (scale == SweepScale::Log10 && !(start > 0.0)) {
        throw ValidationError("sweep.start", "a log10 sweep needs a positive start");
    }
}

std::vector<double> SweepSpec::grid() const {
    validate();
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(points));
    const double a = scale == SweepScale::Log10 ? std::log10(start) : start;
    const double b = scale == SweepScale::Log10 ? std::log10(stop) : stop;
    for (int i = 0; i < points; ++i) {
        const double t = a + (b - a) * static_cast<double>(i) / static_cast<double>(points - 1);
        out.push_back(scale == SweepScale::Log10 ? std::pow(10.0, t) : t);
    }
    // Pin the endpoints exactly.
    out.front() = start;
    out.back() = stop;
    return out;
}

void ScenarioConfig::validate() const {
    if (m_nodes < 1) {
        throw ValidationError("m_nodes", "must be at least 1");
    }
    if (scheme == Scheme::SC && m_nodes != 1) {
        throw ValidationError("m_nodes", "single connectivity uses exactly one node");
    }
    if (sinr_db_per_node.empty() ||
        (sinr_db_per_node.size() != 1 &&
         sinr_db_per_node.size() != static_cast<std::size_t>(m_nodes))) {
        throw ValidationError("sinr_db_per_node",
                              "expected 1 or " + std::to_string(m_nodes) + " entries, got " +
                                  std::to_string(sinr_db_per_node.size()));
    }
    for (double s : sinr_db_per_node) {
        if (!std::isfinite(s)) {
            throw ValidationError("sinr_db_per_node", "entries must be finite");
        }
    }
    if (payload_bits < 1) {
        throw ValidationError("payload_bits", "must be at least 1");
    }
    if (metadata_bits < 1) {
        throw ValidationError("metadata_bits", "must be at least 1");
    }
    policy.validate();
    if (!(target_outage > 0.0 && target_outage < 0.25)) {
        throw ValidationError("target_outage", "must lie in (0, 0.25)");
    }
    if (p_d && !(*p_d > 0.0 && *p_d < 1.0)) {
        throw ValidationError("p_d", "must lie in (0, 1)");
    }
    numerology.validate();
    if (trials < 1) {
        throw ValidationError("trials", "must be at least 1");
    }
    if (sweep) {
        sweep->validate();
    }
}

std::vector<FblContext> ScenarioConfig::node_contexts() const {
    std::vector<FblContext> out;
    out.reserve(sinr_db_per_node.size());
    for (double s : sinr_db_per_node) {
        out.push_back(FblContext::from_db(payload_bits, s));
    }
    return out;
}

ChaseCombiningSpec ScenarioConfig::chase() const {
    ChaseCombiningSpec spec;
    spec.model = chase_model;
    if (chase_model == ChaseModel::FiniteBlocklength) {
        spec.context = FblContext::from_db(payload_bits, sinr_db_per_node.front());
    }
    return spec;
}

ScenarioConfig parse_scenario(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end(), nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ParseError(location_of(text, e.byte), e.what());
    }
    if (!doc.is_object()) {
        throw ParseError("line 1, column 1", "top-level value must be an object");
    }
    reject_unknown_keys(doc,
                        {"scheme", "m_nodes", "sinr_db", "sinr_db_per_node", "payload_bits",
                         "metadata_bits", "policy", "chase", "target_outage", "p_d", "numerology",
                         "trials", "seed", "shared_frame_alignment", "include_metadata_usage",
                         "sweep"},
                        "");

    ScenarioConfig cfg;
    if (doc.contains("scheme")) {
        cfg.scheme = parse_scheme(doc.at("scheme"));
    }
    if (doc.contains("m_nodes")) {
        cfg.m_nodes = get_int(doc.at("m_nodes"), "m_nodes");
    } else {
        cfg.m_nodes = cfg.scheme == Scheme::MC ? 2 : 1;
    }
    if (doc.contains("sinr_db") && doc.contains("sinr_db_per_node")) {
        throw ValidationError("sinr_db", "give either sinr_db or sinr_db_per_node, not both");
    }
    if (doc.contains("sinr_db")) {
        cfg.sinr_db_per_node = parse_sinr(doc.at("sinr_db"), "sinr_db");
    }
    if (doc.contains("sinr_db_per_node")) {
        cfg.sinr_db_per_node = parse_sinr(doc.at("sinr_db_per_node"), "sinr_db_per_node");
    }
    if (doc.contains("payload_bits")) {
        const auto v = get_unsigned(doc.at("payload_bits"), "payload_bits");
        if (v < 1 || v > 0xFFFFFFFFULL) {
            throw ValidationError("payload_bits", "out of range");
        }
        cfg.payload_bits = static_cast<std::uint32_t>(v);
    }
    if (doc.contains("metadata_bits")) {
        const auto v = get_unsigned(doc.at("metadata_bits"), "metadata_bits");
        if (v < 1 || v > 0xFFFFFFFFULL) {
            throw ValidationError("metadata_bits", "out of range");
        }
        cfg.metadata_bits = static_cast<std::uint32_t>(v);
    }
    if (doc.contains("policy")) {
        cfg.policy = parse_policy(doc.at("policy"));
    }
    if (doc.contains("chase")) {
        cfg.chase_model = parse_chase(doc.at("chase"));
    }
    if (doc.contains("target_outage")) {
        cfg.target_outage = get_number(doc.at("target_outage"), "target_outage");
    }
    if (doc.contains("p_d")) {
        cfg.p_d = get_number(doc.at("p_d"), "p_d");
    }
    if (doc.contains("numerology")) {
        cfg.numerology = parse_numerology(doc.at("numerology"));
    }
    if (doc.contains("trials")) {
        cfg.trials = get_unsigned(doc.at("trials"), "trials");
    }
    if (doc.contains("seed")) {
        cfg.seed = get_unsigned(doc.at("seed"), "seed");
    }
    if (doc.contains("shared_frame_alignment")) {
        cfg.shared_frame_alignment =
            get_bool(doc.at("shared_frame_alignment"), "shared_frame_alignment");
    }
    if (doc.contains("include_metadata_usage")) {
        cfg.include_metadata_usage =
            get_bool(doc.at("include_metadata_usage"), "include_metadata_usage");
    }
    if (doc.contains("sweep")) {
        cfg.sweep = parse_sweep(doc.at("sweep"));
    }
    cfg.validate();
    return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError(path.string(), "cannot open for reading");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::string format_number(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", value);
    return buf;
}

std::string Table::to_csv() const {
    std::string out;
    auto emit = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i > 0) {
                out += ',';
            }
            out += cells[i];
        }
        out += '\n';
    };
    emit(header);
    for (const auto& r : rows) {
        emit(r);
    }
    return out;
}

std::string Table::to_pretty() const {
    std::vector<std::size_t> width(header.size(), 0);
    auto measure = [&width](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size() && i < width.size(); ++i) {
            width[i] = std::max(width[i], cells[i].size());
        }
    };
    measure(header);
    for (const auto& r : rows) {
        measure(r);
    }
    std::string out;
    auto emit = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i > 0) {
                out += "  ";
            }
            out += cells[i];
            if (i + 1 < cells.size() && i < width.size()) {
                out.append(width[i] - cells[i].size(), ' ');
            }
        }
        out += '\n';
    };
    emit(header);
    std::size_t total = 0;
    for (std::size_t w : width) {
        total += w;
    }
    out.append(total + 2 * (width.empty() ? 0 : width.size() - 1), '-');
    out += '\n';
    for (const auto& r : rows) {
        emit(r);
    }
    return out;
}

std::string policy_label(const BlerPolicy& policy) {
    if (policy.kind == PolicyKind::FixedMeta && policy.fixed_meta) {
        return std::string("FIXED_META=") + format_number(*policy.fixed_meta);
    }
    return to_string(policy.kind);
}

OutageResult cmd_outage(const ScenarioConfig& config) {
    config.validate();
    OutageResult result;
    result.p_d = resolve_p_d(config);
    const auto contexts = config.node_contexts();
    result.profiles = build_node_profiles(result.p_d, config.scheme, config.m_nodes, config.policy,
                                          config.chase(), contexts);
    for (const auto& p : result.profiles) {
        result.per_node.push_back(sc_outage(p));
    }
    result.p_out = mc_outage(result.profiles);
    return result;
}

Table outage_table(const ScenarioConfig& config, const OutageResult& result) {
    Table t;
    t.header = {"scheme", "m",  "node", "p_d", "p_m", "p_c", "p_succ_first", "p_succ_timeout_retx",
                "p_succ_nack_retx", "p_out_link", "p_out"};
    for (std::size_t n = 0; n < result.profiles.size(); ++n) {
        const auto& p = result.profiles[n];
        const auto& b = result.per_node[n];
        t.rows.push_back(row({to_string(config.scheme), std::to_string(config.m_nodes),
                              std::to_string(n), format_number(p.p_d1), format_number(p.p_m1),
                              format_number(p.p_c), format_number(b.p_succ_first),
                              format_number(b.p_succ_timeout_retx),
                              format_number(b.p_succ_nack_retx), format_number(b.p_out),
                              format_number(result.p_out)}));
    }
    return t;
}

SolveResult cmd_solve(const ScenarioConfig& config) {
    config.validate();
    const auto contexts = config.node_contexts();
    return solve_bler(config.scheme, config.m_nodes, config.target_outage, config.policy,
                      config.chase(), contexts);
}

Table solve_table(const ScenarioConfig& config, const SolveResult& result) {
    Table t;
    t.header = {"scheme", "m", "target_outage", "policy", "chase", "p_d", "p_m", "achieved_outage",
                "iterations"};
    t.rows.push_back(row({to_string(config.scheme), std::to_string(config.m_nodes),
                          format_number(config.target_outage), policy_label(config.policy),
                          to_string(config.chase_model), format_number(result.p_d),
                          format_number(result.p_m), format_number(result.achieved_outage),
                          std::to_string(result.iterations)}));
    return t;
}

UsageReport cmd_resource(const ScenarioConfig& config) {
    config.validate();
    const auto contexts = config.node_contexts();
    std::optional<std::uint32_t> meta;
    if (config.include_metadata_usage) {
        meta = config.metadata_bits;
    }
    return usage_at_reliability(config.scheme, config.m_nodes, config.target_outage, contexts,
                                config.policy, config.chase(), meta);
}

Table resource_table(const ScenarioConfig& config, const UsageReport& report) {
    Table t;
    t.header = {"scheme",      "m",     "sinr_db",          "payload_bits",
                "metadata_bits", "bler_target", "p_m", "achieved_outage",
                "channel_use", "usage", "metadata_channel_use"};
    std::string sinr;
    for (std::size_t i = 0; i < config.sinr_db_per_node.size(); ++i) {
        sinr += (i ? ";" : "") + format_number(config.sinr_db_per_node[i]);
    }
    t.rows.push_back(row({to_string(report.scheme), std::to_string(report.m_nodes), sinr,
                          std::to_string(config.payload_bits), std::to_string(config.metadata_bits),
                          format_number(report.bler_target), format_number(report.p_m),
                          format_number(report.achieved_outage),
                          format_number(report.channel_use_single), format_number(report.total_usage),
                          report.metadata_channel_use ? format_number(*report.metadata_channel_use)
                                                      : std::string()}));
    return t;
}

SimulationReport cmd_simulate(const ScenarioConfig& config, unsigned threads) {
    config.validate();
    SimulationReport report;
    report.p_d = resolve_p_d(config);
    const auto contexts = config.node_contexts();
    const auto profiles = build_node_profiles(report.p_d, config.scheme, config.m_nodes,
                                              config.policy, config.chase(), contexts);

    SimulationOptions options;
    options.threads = threads;
    options.shared_frame_alignment = config.shared_frame_alignment;
    options.collect_latencies = true;
    const SimulationTally tally =
        run_trials(config.scheme, profiles, config.numerology, config.trials, config.seed, options);

    double analytic_usage = 0.0;
    for (const auto& p : profiles) {
        analytic_usage += normalized_usage(Scheme::SC, 1, p);
    }
    report.rows.push_back({"outage", summarize(tally, Metric::outage(), config.numerology, config.seed),
                           mc_outage(profiles)});
    report.rows.push_back({"mean_usage",
                           summarize(tally, Metric::mean_usage(), config.numerology, config.seed),
                           analytic_usage});

    const OutageBreakdown node0 = sc_outage(profiles.front());
    const std::array<std::pair<const char*, double>, 4> leaves = {{
        {"node0_first_tx", node0.p_succ_first},
        {"node0_timeout_retx", node0.p_succ_timeout_retx},
        {"node0_nack_retx", node0.p_succ_nack_retx},
        {"node0_outage", node0.p_out},
    }};
    for (std::size_t leaf = 0; leaf < leaves.size(); ++leaf) {
        report.rows.push_back({leaves[leaf].first,
                               proportion(tally.node_paths[0][leaf], tally.trials, config.seed),
                               leaves[leaf].second});
    }

    if (!tally.latencies_ttis.empty()) {
        const std::array<std::pair<const char*, double>, 3> quantiles = {{
            {"latency_ms_q50", 0.5},
            {"latency_ms_q99", 0.99},
            {"latency_ms_max", 1.0},
        }};
        for (const auto& [name, q] : quantiles) {
            report.rows.push_back({name,
                                   summarize(tally, Metric::latency_quantile(q), config.numerology,
                                             config.seed),
                                   std::nullopt});
        }
    }
    return report;
}

Table simulate_table(const ScenarioConfig& config, const SimulationReport& report) {
    Table t;
    t.header = {"metric", "scheme", "m", "p_d", "trials", "seed", "mean", "ci_half_width_95",
                "analytic"};
    for (const auto& r : report.rows) {
        t.rows.push_back(row({r.metric, to_string(config.scheme), std::to_string(config.m_nodes),
                              format_number(report.p_d), std::to_string(r.estimate.trials),
                              std::to_string(r.estimate.seed), format_number(r.estimate.mean),
                              format_number(r.estimate.ci_half_width_95),
                              r.analytic ? format_number(*r.analytic) : std::string()}));
    }
    return t;
}

Table cmd_sweep(const ScenarioConfig& config, const SweepSpec& sweep) {
    config.validate();
    const auto grid = sweep.grid();
    const ChaseCombiningSpec chase = config.chase();
    Table t;

    switch (sweep.variable) {
    case SweepVariable::PD: {
        t.header = {"p_d", "policy", "scheme", "m", "outage"};
        const auto contexts = config.node_contexts();
        for (double p_d : grid) {
            const double out =
                scheme_outage(p_d, config.scheme, config.m_nodes, config.policy, chase, contexts);
            t.rows.push_back(row({format_number(p_d), policy_label(config.policy),
                                  to_string(config.scheme), std::to_string(config.m_nodes),
                                  format_number(out)}));
        }
        break;
    }
    case SweepVariable::SinrDb: {
        t.header = {"sinr_db", "scheme", "m", "bler_target", "channel_use", "usage"};
        for (double s : grid) {
            const std::vector<FblContext> ctx{FblContext::from_db(config.payload_bits, s)};
            ChaseCombiningSpec local = chase;
            if (local.model == ChaseModel::FiniteBlocklength) {
                local.context = ctx.front();
            }
            const UsageReport rep = usage_at_reliability(config.scheme, config.m_nodes,
                                                         config.target_outage, ctx, config.policy,
                                                         local);
            t.rows.push_back(row({format_number(s), to_string(config.scheme),
                                  std::to_string(config.m_nodes), format_number(rep.bler_target),
                                  format_number(rep.channel_use_single),
                                  format_number(rep.total_usage)}));
        }
        break;
    }
    case SweepVariable::M: {
        if (config.sinr_db_per_node.size() != 1) {
            throw ValidationError("sinr_db_per_node", "an M sweep needs a single shared SINR");
        }
        t.header = {"m", "scheme", "bler_target", "channel_use", "usage"};
        const auto contexts = config.node_contexts();
        std::set<int> seen;
        for (double v : grid) {
            const int m = static_cast<int>(std::lround(v));
            if (m < 1 || !seen.insert(m).second) {
                continue;
            }
            const UsageReport rep = usage_at_reliability(Scheme::MC, m, config.target_outage,
                                                         contexts, config.policy, chase);
            t.rows.push_back(row({std::to_string(m), "MC", format_number(rep.bler_target),
                                  format_number(rep.channel_use_single),
                                  format_number(rep.total_usage)}));
        }
        break;
    }
    }
    return t;
}

Table reproduce_table2() {
    const std::vector<FblContext> ctx{FblContext::from_db(256, 10.0)};
    const ChaseCombiningSpec chase;
    const BlerPolicy policy = BlerPolicy::equal();
    Table t;
    t.header = {"scheme", "bler_target", "channel_use", "usage_eq", "usage_paper", "discrepancy_flag"};
    const std::array<std::tuple<Scheme, int, double>, 2> cases = {{
        {Scheme::SC, 1, kReferenceUsageSc},
        {Scheme::MC, 2, kReferenceUsageMc},
    }};
    for (const auto& [scheme, m, reference] : cases) {
        const UsageReport rep = usage_at_reliability(scheme, m, 1e-5, ctx, policy, chase);
        const bool mismatch = std::abs(rep.total_usage - reference) > kReferenceTolerance;
        t.rows.push_back(row({scheme_label(scheme, m), format_number(rep.bler_target),
                              format_number(rep.channel_use_single), format_number(rep.total_usage),
                              format_number(reference), mismatch ? "known-discrepancy" : "ok"}));
    }
    return t;
}

Table reproduce_fig3() {
    const SweepSpec sweep{SweepVariable::PD, 1e-4, 1e-1, 61, SweepScale::Log10};
    const auto grid = sweep.grid();
    const ChaseCombiningSpec chase;
    Table t;
    t.header = {"p_d", "policy", "scheme", "m", "outage"};
    const std::array<BlerPolicy, 2> policies = {BlerPolicy::half(), BlerPolicy::fixed(0.01)};
    const std::array<std::pair<Scheme, int>, 3> schemes = {
        {{Scheme::SC, 1}, {Scheme::MC, 2}, {Scheme::MC, 3}}};
    for (const auto& policy : policies) {
        for (const auto& [scheme, m] : schemes) {
            for (double p_d : grid) {
                t.rows.push_back(row({format_number(p_d), policy_label(policy), to_string(scheme),
                                      std::to_string(m),
                                      format_number(scheme_outage(p_d, scheme, m, policy, chase))}));
            }
        }
    }
    return t;
}

Table reproduce_fig4() {
    const LinkBlerProfile profile = LinkBlerProfile::symmetric(0.01, 0.10, 0.0);
    Table t;
    t.header = {"scheme", "m", "p_m", "p_d", "normalized_usage", "outage"};
    const std::array<std::pair<Scheme, int>, 2> schemes = {{{Scheme::SC, 1}, {Scheme::MC, 2}}};
    for (const auto& [scheme, m] : schemes) {
        const std::vector<LinkBlerProfile> links(static_cast<std::size_t>(m), profile);
        t.rows.push_back(row({to_string(scheme), std::to_string(m), format_number(profile.p_m1),
                              format_number(profile.p_d1),
                              format_number(normalized_usage(scheme, m, profile)),
                              format_number(mc_outage(links))}));
    }
    return t;
}

Table reproduce_fig5() {
    const ChaseCombiningSpec chase;
    const BlerPolicy policy = BlerPolicy::equal();
    Table t;
    t.header = {"sinr_db", "scheme", "m", "bler_target", "channel_use", "usage", "sc_saving"};
    for (double sinr_db : {0.0, 10.0}) {
        const std::vector<FblContext> ctx{FblContext::from_db(256, sinr_db)};
        const UsageReport sc = usage_at_reliability(Scheme::SC, 1, 1e-5, ctx, policy, chase);
        const UsageReport mc = usage_at_reliability(Scheme::MC, 2, 1e-5, ctx, policy, chase);
        const double saving = 1.0 - sc.total_usage / mc.total_usage;
        for (const UsageReport* rep : {&sc, &mc}) {
            t.rows.push_back(row({format_number(sinr_db), to_string(rep->scheme),
                                  std::to_string(rep->m_nodes), format_number(rep->bler_target),
                                  format_number(rep->channel_use_single),
                                  format_number(rep->total_usage), format_number(saving)}));
        }
    }
    return t;
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError(path.string(), "cannot open for writing");
    }
    out << contents;
    out.flush();
    if (!out) {
        throw IoError(path.string(), "write failed");
    }
}

std::vector<std::filesystem::path> cmd_reproduce(const std::filesystem::path& directory) {
    std::error_code ec;
    std::filesystem::create_directories(directory, ec);
    if (ec) {
        throw IoError(directory.string(), ec.message());
    }
    const std::array<std::pair<const char*, Table>, 4> outputs = {{
        {"table2.csv", reproduce_table2()},
        {"fig3.csv", reproduce_fig3()},
        {"fig4.csv", reproduce_fig4()},
        {"fig5.csv", reproduce_fig5()},
    }};
    std::vector<std::filesystem::path> written;
    for (const auto& [name, table] : outputs) {
        const auto path = directory / name;
        write_text_file(path, table.to_csv());
        written.push_back(path);
    }
    return written;
}

} // namespace urllc
