#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "urllc/error.hpp"
#include "urllc/scenario.hpp"

namespace py = pybind11;
using namespace urllc;

namespace {

std::vector<FblContext> contexts_from(std::uint32_t payload_bits, const std::vector<double>& sinr_db) {
    std::vector<FblContext> out;
    for (double s : sinr_db) {
        out.push_back(FblContext::from_db(payload_bits, s));
    }
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "URLLC outage and resource dimensioning (C++ core)";

    auto base = py::register_exception<Error>(m, "UrllcError");
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<SolverError>(m, "SolverError", base.ptr());
    py::register_exception<IoError>(m, "IoError", base.ptr());

    py::enum_<Scheme>(m, "Scheme").value("SC", Scheme::SC).value("MC", Scheme::MC);
    py::enum_<ChaseModel>(m, "ChaseModel")
        .value("ZERO", ChaseModel::Zero)
        .value("PRODUCT", ChaseModel::Product)
        .value("FINITE_BLOCKLENGTH", ChaseModel::FiniteBlocklength);
    py::enum_<PolicyKind>(m, "PolicyKind")
        .value("EQUAL", PolicyKind::Equal)
        .value("HALF", PolicyKind::Half)
        .value("FIXED_META", PolicyKind::FixedMeta);

    // Finite-blocklength math
    m.def("q_func", &q_func, py::arg("x"));
    m.def("q_inv", &q_inv, py::arg("p"));
    m.def("shannon_capacity", &shannon_capacity, py::arg("sinr_linear"));
    m.def("channel_dispersion", &channel_dispersion, py::arg("sinr_linear"));
    m.def("db_to_linear", &db_to_linear, py::arg("x_db"));
    m.def("linear_to_db", &linear_to_db, py::arg("x"));

    py::class_<FblContext>(m, "FblContext")
        .def(py::init<std::uint32_t, double>(), py::arg("payload_bits"), py::arg("sinr_linear"))
        .def_static("from_db", &FblContext::from_db, py::arg("payload_bits"), py::arg("sinr_db"))
        .def_property_readonly("payload_bits", &FblContext::payload_bits)
        .def_property_readonly("sinr_linear", &FblContext::sinr_linear)
        .def_property_readonly("capacity", &FblContext::capacity)
        .def_property_readonly("dispersion", &FblContext::dispersion);
    m.def("channel_use", &channel_use, py::arg("ctx"), py::arg("bler"));
    m.def("achieved_bler", &achieved_bler, py::arg("ctx"), py::arg("channel_uses"));

    // Outage model
    py::class_<LinkBlerProfile>(m, "LinkBlerProfile")
        .def(py::init([](double p_m1, double p_d1, double p_m2, double p_d2, double p_c) {
                 LinkBlerProfile p{p_m1, p_d1, p_m2, p_d2, p_c};
                 p.validate();
                 return p;
             }),
             py::arg("p_m1"), py::arg("p_d1"), py::arg("p_m2"), py::arg("p_d2"), py::arg("p_c"))
        .def_static("symmetric", &LinkBlerProfile::symmetric, py::arg("p_m"), py::arg("p_d"),
                    py::arg("p_c") = 0.0)
        .def_readonly("p_m1", &LinkBlerProfile::p_m1)
        .def_readonly("p_d1", &LinkBlerProfile::p_d1)
        .def_readonly("p_m2", &LinkBlerProfile::p_m2)
        .def_readonly("p_d2", &LinkBlerProfile::p_d2)
        .def_readonly("p_c", &LinkBlerProfile::p_c)
        .def("__repr__", [](const LinkBlerProfile& p) {
            return "LinkBlerProfile(p_m1=" + format_number(p.p_m1) + ", p_d1=" + format_number(p.p_d1) +
                   ", p_m2=" + format_number(p.p_m2) + ", p_d2=" + format_number(p.p_d2) +
                   ", p_c=" + format_number(p.p_c) + ")";
        });

    py::class_<OutageBreakdown>(m, "OutageBreakdown")
        .def_readonly("p_succ_first", &OutageBreakdown::p_succ_first)
        .def_readonly("p_succ_timeout_retx", &OutageBreakdown::p_succ_timeout_retx)
        .def_readonly("p_succ_nack_retx", &OutageBreakdown::p_succ_nack_retx)
        .def_readonly("p_out", &OutageBreakdown::p_out);

    m.def("succ_first", &succ_first);
    m.def("succ_retx_timeout", &succ_retx_timeout);
    m.def("succ_retx_nack", &succ_retx_nack);
    m.def("succ_retx_total", &succ_retx_total);
    m.def("sc_outage", &sc_outage);
    m.def("mc_outage", [](const std::vector<LinkBlerProfile>& profiles) { return mc_outage(profiles); });

    // Solver and resource usage
    py::class_<BlerPolicy>(m, "BlerPolicy")
        .def_static("equal", &BlerPolicy::equal)
        .def_static("half", &BlerPolicy::half)
        .def_static("fixed", &BlerPolicy::fixed, py::arg("p_m"))
        .def_readonly("kind", &BlerPolicy::kind)
        .def_readonly("fixed_meta", &BlerPolicy::fixed_meta);

    py::class_<SolveResult>(m, "SolveResult")
        .def_readonly("p_d", &SolveResult::p_d)
        .def_readonly("p_m", &SolveResult::p_m)
        .def_readonly("achieved_outage", &SolveResult::achieved_outage)
        .def_readonly("iterations", &SolveResult::iterations);

    auto make_chase = [](ChaseModel model, std::uint32_t payload_bits, double sinr_db) {
        ChaseCombiningSpec chase{model, std::nullopt};
        if (model == ChaseModel::FiniteBlocklength) {
            chase.context = FblContext::from_db(payload_bits, sinr_db);
        }
        return chase;
    };

    m.def(
        "solve_bler",
        [make_chase](Scheme scheme, int m_nodes, double target, const BlerPolicy& policy,
                     ChaseModel chase, std::uint32_t payload_bits, std::vector<double> sinr_db) {
            const auto ctx = contexts_from(payload_bits, sinr_db);
            return solve_bler(scheme, m_nodes, target, policy,
                              make_chase(chase, payload_bits, sinr_db.front()), ctx);
        },
        py::arg("scheme"), py::arg("m_nodes"), py::arg("target"),
        py::arg("policy") = BlerPolicy::equal(), py::arg("chase") = ChaseModel::Zero,
        py::arg("payload_bits") = 256, py::arg("sinr_db") = std::vector<double>{10.0});

    py::class_<UsagePoint>(m, "UsagePoint")
        .def_readonly("channel_uses", &UsagePoint::channel_uses)
        .def_readonly("probability", &UsagePoint::probability);
    py::class_<UsageDistribution>(m, "UsageDistribution")
        .def_readonly("support", &UsageDistribution::support)
        .def("mean", &UsageDistribution::mean);
    py::class_<UsageReport>(m, "UsageReport")
        .def_readonly("scheme", &UsageReport::scheme)
        .def_readonly("m_nodes", &UsageReport::m_nodes)
        .def_readonly("bler_target", &UsageReport::bler_target)
        .def_readonly("p_m", &UsageReport::p_m)
        .def_readonly("achieved_outage", &UsageReport::achieved_outage)
        .def_readonly("channel_use_single", &UsageReport::channel_use_single)
        .def_readonly("total_usage", &UsageReport::total_usage)
        .def_readonly("per_node_channel_use", &UsageReport::per_node_channel_use)
        .def_readonly("metadata_channel_use", &UsageReport::metadata_channel_use);

    m.def("usage_sc", &usage_sc, py::arg("r"), py::arg("p_succ_first"));
    m.def("usage_mc", &usage_mc, py::arg("m"), py::arg("r"), py::arg("p_succ_first"));
    m.def("usage_distribution_mc", &usage_distribution_mc, py::arg("m"), py::arg("r"),
          py::arg("p_succ_first"));
    m.def("normalized_usage", &normalized_usage, py::arg("scheme"), py::arg("m"), py::arg("profile"));
    m.def(
        "usage_at_reliability",
        [make_chase](Scheme scheme, int m_nodes, double target, const BlerPolicy& policy,
                     ChaseModel chase, std::uint32_t payload_bits, std::vector<double> sinr_db) {
            const auto ctx = contexts_from(payload_bits, sinr_db);
            return usage_at_reliability(scheme, m_nodes, target, ctx, policy,
                                        make_chase(chase, payload_bits, sinr_db.front()));
        },
        py::arg("scheme"), py::arg("m_nodes"), py::arg("target"),
        py::arg("policy") = BlerPolicy::equal(), py::arg("chase") = ChaseModel::Zero,
        py::arg("payload_bits") = 256, py::arg("sinr_db") = std::vector<double>{10.0});

    // HARQ simulation
    py::class_<Numerology>(m, "Numerology")
        .def(py::init<>())
        .def_readwrite("scs_khz", &Numerology::scs_khz)
        .def_readwrite("symbols_per_tti", &Numerology::symbols_per_tti)
        .def_readwrite("harq_rtt_ttis", &Numerology::harq_rtt_ttis)
        .def_readwrite("timeout_ttis", &Numerology::timeout_ttis)
        .def_readwrite("t_up_ttis", &Numerology::t_up_ttis)
        .def_readwrite("t_tx_ttis", &Numerology::t_tx_ttis)
        .def_readwrite("t_bp_initial_ttis", &Numerology::t_bp_initial_ttis);
    m.def("tti_duration_ms", &tti_duration_ms);
    m.def("latency_budget_check", [](const Numerology& n, double budget_ms) {
        const LatencyBudget b = latency_budget_check(n, budget_ms);
        return py::make_tuple(b.worst_case_ms, b.fits);
    });

    py::class_<MonteCarloEstimate>(m, "MonteCarloEstimate")
        .def_readonly("mean", &MonteCarloEstimate::mean)
        .def_readonly("ci_half_width_95", &MonteCarloEstimate::ci_half_width_95)
        .def_readonly("trials", &MonteCarloEstimate::trials)
        .def_readonly("seed", &MonteCarloEstimate::seed);

    m.def(
        "estimate",
        [](const std::string& metric, Scheme scheme, const std::vector<LinkBlerProfile>& profiles,
           std::uint64_t trials, std::uint64_t seed, double quantile, unsigned threads) {
            Metric which;
            if (metric == "outage") {
                which = Metric::outage();
            } else if (metric == "mean_usage") {
                which = Metric::mean_usage();
            } else if (metric == "latency_quantile") {
                which = Metric::latency_quantile(quantile);
            } else {
                throw ValidationError("metric", "expected outage, mean_usage or latency_quantile");
            }
            SimulationOptions opts;
            opts.threads = threads;
            py::gil_scoped_release release;
            return estimate(which, scheme, trials, seed, Numerology{}, profiles, opts);
        },
        py::arg("metric"), py::arg("scheme"), py::arg("profiles"), py::arg("trials"),
        py::arg("seed") = 1, py::arg("quantile") = 0.5, py::arg("threads") = 1);

    // Scenario commands, returned as CSV text
    m.def("run_command", [](const std::string& command, const std::string& config_text) {
        const ScenarioConfig cfg = parse_scenario(config_text);
        if (command == "outage") {
            return outage_table(cfg, cmd_outage(cfg)).to_csv();
        }
        if (command == "solve") {
            return solve_table(cfg, cmd_solve(cfg)).to_csv();
        }
        if (command == "resource") {
            return resource_table(cfg, cmd_resource(cfg)).to_csv();
        }
        if (command == "simulate") {
            return simulate_table(cfg, cmd_simulate(cfg)).to_csv();
        }
        if (command == "sweep") {
            return cmd_sweep(cfg, cfg.sweep.value_or(SweepSpec{})).to_csv();
        }
        throw ValidationError("command", "unknown command '" + command + "'");
    });
    m.def("reproduce", [](const std::filesystem::path& dir) { return cmd_reproduce(dir); });
}
