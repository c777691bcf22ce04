#include "eaconv/config.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>

namespace eaconv {

using nlohmann::json;

RunConfig default_config() { return RunConfig{}; }

std::string defaults_json() {
    const RunConfig d;
    json j;
    j["label"] = "";
    j["problem"] = {{"family", "onemax"},
                    {"n", 4},
                    {"mutation", "onebit"},
                    {"initial", d.initial}};
    j["horizon"] = d.horizon;
    j["simulation"] = {{"runs", d.runs},
                       {"seed", d.seed},
                       {"threads", d.threads},
                       {"mode", "bitstring for family problems, chain for explicit matrices"}};
    j["output"] = {{"path", d.out_path}, {"format", d.format}};
    j["tolerances"] = {{"eps_diag", d.eps_diag}, {"z_threshold", d.z_threshold}};
    j["report"] = {{"digits", d.report_digits}, {"cutoff", d.report_cutoff}};
    return j.dump(2) + "\n";
}

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ConfigError("config error: " + msg); }

/// Numeric cells may be JSON numbers or strings; both normalise to the
/// literal text so the rational backend sees the decimal the user wrote.
std::string cell_text(const json& j, const std::string& where) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number()) return j.dump();
    fail(where + " must be a number or a numeric string");
}

std::vector<std::string> cell_array(const json& j, const std::string& where) {
    if (!j.is_array()) fail(where + " must be an array");
    std::vector<std::string> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(cell_text(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

void parse_problem(const json& p, RunConfig& config) {
    const bool has_family = p.contains("family");
    const bool has_matrix = p.contains("matrix");
    if (has_family == has_matrix)
        fail("problem must contain exactly one of 'family' or 'matrix'");

    if (has_matrix) {
        RunConfig::ExplicitSpec spec;
        const json& m = p.at("matrix");
        if (!m.is_array() || m.empty()) fail("problem.matrix must be a non-empty array");
        if (m[0].is_array()) {  // nested rows
            spec.dim = static_cast<int>(m.size());
            for (const auto& row : m) {
                if (!row.is_array() || static_cast<int>(row.size()) != spec.dim)
                    fail("problem.matrix rows must form a square matrix");
                for (const auto& cell : row)
                    spec.matrix.push_back(cell_text(cell, "problem.matrix"));
            }
        } else {  // flat row-major
            const auto total = m.size();
            const int dim = static_cast<int>(std::llround(std::sqrt(static_cast<double>(total))));
            if (static_cast<std::size_t>(dim) * dim != total)
                fail("flat problem.matrix length must be a perfect square");
            spec.dim = dim;
            spec.matrix = cell_array(m, "problem.matrix");
        }
        if (!p.contains("errors") || !p.contains("f_opt") || !p.contains("q0"))
            fail("explicit problems need 'errors', 'f_opt' and 'q0'");
        spec.errors = cell_array(p.at("errors"), "problem.errors");
        spec.f_opt = cell_text(p.at("f_opt"), "problem.f_opt");
        spec.q0 = cell_array(p.at("q0"), "problem.q0");
        config.explicit_spec = std::move(spec);
        return;
    }

    RunConfig::FamilySpec spec;
    spec.family = p.at("family").get<std::string>();
    if (spec.family == "custom") {
        if (!p.contains("fitness_table")) fail("custom families need 'fitness_table'");
        spec.fitness_table = cell_array(p.at("fitness_table"), "problem.fitness_table");
        spec.n = static_cast<int>(spec.fitness_table.size()) - 1;
    } else {
        if (!p.contains("n")) fail("built-in families need 'n'");
        spec.n = p.at("n").get<int>();
    }
    if (spec.n < 1) fail("problem.n must be >= 1");
    if (p.contains("mutation")) spec.mutation = p.at("mutation").get<std::string>();
    if (spec.mutation == "bitwise") {
        if (!p.contains("p_mut")) fail("bitwise mutation needs 'p_mut'");
        spec.p_mut = cell_text(p.at("p_mut"), "problem.p_mut");
    } else if (spec.mutation != "onebit") {
        fail("mutation must be 'onebit' or 'bitwise'");
    }
    if (p.contains("initial")) {
        const json& init = p.at("initial");
        if (init.is_array()) {
            config.initial = "explicit";
            config.initial_values = cell_array(init, "problem.initial");
        } else {
            config.initial = init.get<std::string>();
        }
    }
    config.family_spec = std::move(spec);
}

}  // namespace

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("cannot parse '" + path + "': " + e.what());
    }

    RunConfig config;
    try {
        if (j.contains("label")) config.label = j.at("label").get<std::string>();
        if (!j.contains("problem")) fail("missing 'problem' block");
        parse_problem(j.at("problem"), config);

        if (j.contains("horizon")) config.horizon = j.at("horizon").get<int>();
        if (config.horizon < 1) fail("horizon must be >= 1");

        if (j.contains("simulation")) {
            const json& s = j.at("simulation");
            if (s.contains("runs")) config.runs = s.at("runs").get<long long>();
            if (s.contains("seed")) config.seed = s.at("seed").get<std::uint64_t>();
            if (s.contains("threads")) config.threads = s.at("threads").get<int>();
            if (s.contains("mode")) config.sim_mode = s.at("mode").get<std::string>();
            if (s.contains("horizon")) {
                const int sim_horizon = s.at("horizon").get<int>();
                if (sim_horizon != config.horizon)
                    fail("simulation.horizon disagrees with the trajectory horizon");
            }
            if (config.runs < 1) fail("simulation.runs must be >= 1");
            if (!config.sim_mode.empty() && config.sim_mode != "bitstring" &&
                config.sim_mode != "chain")
                fail("simulation.mode must be 'bitstring' or 'chain'");
            if (config.sim_mode == "bitstring" && config.explicit_spec)
                fail("explicit-matrix problems have no bitstring form; use mode 'chain'");
        }

        if (j.contains("output")) {
            const json& o = j.at("output");
            if (o.contains("path")) config.out_path = o.at("path").get<std::string>();
            if (o.contains("format")) config.format = o.at("format").get<std::string>();
            if (config.format != "csv") fail("output.format must be 'csv'");
        }

        if (j.contains("tolerances")) {
            const json& t = j.at("tolerances");
            if (t.contains("eps_diag")) config.eps_diag = t.at("eps_diag").get<double>();
            if (t.contains("z_threshold")) config.z_threshold = t.at("z_threshold").get<double>();
            if (!(config.eps_diag >= 0)) fail("tolerances.eps_diag must be >= 0");
            if (!(config.z_threshold > 0)) fail("tolerances.z_threshold must be > 0");
        }

        if (j.contains("report")) {
            const json& r = j.at("report");
            if (r.contains("digits")) config.report_digits = r.at("digits").get<int>();
            if (r.contains("cutoff")) config.report_cutoff = r.at("cutoff").get<double>();
            if (config.report_digits < 0 || config.report_digits > 12)
                fail("report.digits must lie in 0..12");
            if (!(config.report_cutoff >= 0)) fail("report.cutoff must be >= 0");
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config error: ") + e.what());
    }
    return config;
}

std::vector<double> initial_level_distribution(const RunConfig& config) {
    if (!config.family_spec) return {};
    if (config.initial == "worst") return {};
    LevelProblem<double> problem = build_problem<double>(config);
    return problem.q0;
}

}  // namespace eaconv
