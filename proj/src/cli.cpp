#include "qsp/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "qsp/evolution.hpp"
#include "qsp/exceptions.hpp"
#include "qsp/io.hpp"

namespace qsp::cli {

namespace {

struct FamilyInfo {
    std::vector<std::string> required;
    std::vector<std::string> optional;
    std::string signature;
    std::string summary;
    bool is_square = false;
    bool is_twin = false;
};

const std::map<std::string, FamilyInfo>& registry() {
    static const std::map<std::string, FamilyInfo> table = {
        {"q1", {{"g"}, {}, "q1(g)", "2x2 columns (g(s), 1-g(s)); left stochastic, t-independent; g in [0,1]", true, false}},
        {"q2", {{"psi"}, {}, "q2(psi)", "2x2 doubly stochastic mixing family; psi positive decreasing", true, false}},
        {"q3", {{"b"}, {}, "q3(b)", "2x2 doubly stochastic: identity before b, uniform from b on", true, false}},
        {"q4", {{"psi"}, {}, "q4(psi)", "2x2 right stochastic absorbing family; psi positive decreasing", true, false}},
        {"q5", {{"f"}, {}, "q5(f)", "2x2 rows (f(t), 1-f(t)); right stochastic, s-independent; f in [0,1]", true, false}},
        {"q6", {{"lambda", "mu", "theta"}, {}, "q6(lambda, mu, theta)",
                "2x2 right stochastic rate family; 0 < 2*mu < lambda, theta positive decreasing", true, false}},
        {"q7", {{"a", "g"}, {}, "q7(a, g)", "2x2 right stochastic: identity before a, rows (g(t), 1-g(t)) after", true,
                false}},
        {"direct_sum", {{}, {}, "direct_sum(layers: [q-family, ...])",
                        "3-stochastic cubic family with one right-stochastic square process per layer", false, false}},
        {"m1", {{"g", "u11", "u21"}, {}, "m1(g, u11, u21)",
                "(1,2)-stochastic 2x2x2, t-independent; 0 <= u11 <= g, 0 <= u21 <= 1-g", false, false}},
        {"m2", {{"psi", "zeta11", "zeta21", "gamma11", "gamma21"}, {"psi_limit"},
                "m2(psi, zeta11, zeta21, gamma11, gamma21 [, psi_limit])",
                "(1,2)-stochastic 2x2x2 driven by decreasing psi; gammas must stay in the (s,t) bands", false, false}},
        {"m3", {{"eta11", "xi21", "kappa11", "kappa21", "b"}, {},
                "m3(eta11, xi21, kappa11, kappa21, b)",
                "(1,2)-stochastic piecewise 2x2x2; eta/xi in [0,1], kappas in [0,1/2]", false, false}},
        {"flow", {{"a", "b"}, {},
                  "flow(a, b)",
                  "(1,2)-stochastic 2x2x2 from the invertible flow [[a,1-b],[1-a,b]] with the equal beta split",
                  false, false}},
        {"n", {{"a", "b", "alpha", "beta", "gamma", "delta"}, {},
               "n(a, b, alpha, beta, gamma, delta)",
               "(1,2)-stochastic 2x2x2 over the flow; 0<=alpha<=a, 0<=beta<=1-b, 0<=gamma<=1-a, 0<=delta<=b",
               false, false}},
        {"twin_a", {{}, {}, "twin_a()", "twin-birth model, extinction branch: population dies at once", false, true}},
        {"twin_b", {{"phi", "alpha", "beta"}, {"b", "c", "u", "v", "w", "phi_limit"},
                    "twin_b(phi, alpha, beta [, b, c, u, v, w, phi_limit])",
                    "twin-birth model, survival branch: middle layer factors as h(s)*phi(t)", false, true}},
        {"twin_c", {{"alpha0", "beta0", "a"}, {},
                    "twin_c(alpha0, beta0, a)",
                    "twin-birth model, cataclysm branch: stable before a, extinct from a on", false, true}},
    };
    return table;
}

double to_scalar(const TimeFunction& f, const std::string& field) {
    const double v0 = f(0.0);
    for (double t : {1.0, 3.7, 9.0}) {
        if (std::abs(f(t) - v0) > 1e-12) {
            throw ConfigError(field + ": expected a constant, got expression " + f.to_string());
        }
    }
    return v0;
}

const TimeFunction& fn_param(const std::map<std::string, TimeFunction>& params, const std::string& name,
                             const std::string& where) {
    auto it = params.find(name);
    if (it == params.end()) throw ConfigError(where + "." + name + ": missing required parameter");
    return it->second;
}

TimeFunction fn_or(const std::map<std::string, TimeFunction>& params, const std::string& name, double fallback) {
    auto it = params.find(name);
    return it == params.end() ? TimeFunction::constant(fallback) : it->second;
}

void check_known_keys(const nlohmann::json& obj, const std::set<std::string>& known, const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!known.count(key)) throw ConfigError(where + "." + key + ": unknown field");
    }
}

std::map<std::string, TimeFunction> parse_params(const nlohmann::json& j, const std::string& where) {
    std::map<std::string, TimeFunction> out;
    if (!j.is_object()) throw ConfigError(where + ": expected an object of expressions");
    for (const auto& [key, value] : j.items()) {
        try {
            if (value.is_number()) {
                out.emplace(key, TimeFunction::constant(value.get<double>()));
            } else if (value.is_string()) {
                out.emplace(key, TimeFunction::parse(value.get<std::string>()));
            } else {
                throw ConfigError(where + "." + key + ": expected a number or expression string");
            }
        } catch (const ParseError& e) {
            throw ConfigError(where + "." + key + ": " + e.what());
        }
    }
    return out;
}

SquareProcessFamily build_square(const std::string& name, const std::map<std::string, TimeFunction>& params,
                                 const ValidationOptions& opts, const std::string& where) {
    if (name == "q1") return q1(fn_param(params, "g", where), opts);
    if (name == "q2") return q2(fn_param(params, "psi", where), opts);
    if (name == "q3") return q3(to_scalar(fn_param(params, "b", where), where + ".b"), opts);
    if (name == "q4") return q4(fn_param(params, "psi", where), opts);
    if (name == "q5") return q5(fn_param(params, "f", where), opts);
    if (name == "q6") {
        return q6(to_scalar(fn_param(params, "lambda", where), where + ".lambda"),
                  to_scalar(fn_param(params, "mu", where), where + ".mu"), fn_param(params, "theta", where), opts);
    }
    if (name == "q7") {
        return q7(to_scalar(fn_param(params, "a", where), where + ".a"), fn_param(params, "g", where), opts);
    }
    throw ConfigError(where + ": '" + name + "' is not a square family");
}

}  // namespace

const CubicProcessFamily& BuiltFamily::cubic_view() const {
    if (twin) return twin->family;
    if (cubic) return *cubic;
    throw std::logic_error("BuiltFamily: no cubic process (square family)");
}

const std::vector<std::string>& BuiltFamily::warnings() const {
    if (twin) return twin->family.descriptor().warnings;
    if (cubic) return cubic->descriptor().warnings;
    return square->descriptor().warnings;
}

RunConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config: expected a JSON object");
    check_known_keys(j, {"family", "params", "layers", "kind_override", "grid", "tolerances", "simulate",
                         "strict", "output"},
                     "config");
    RunConfig cfg;
    if (!j.contains("family") || !j["family"].is_string()) {
        throw ConfigError("config.family: missing family name");
    }
    cfg.family = j["family"].get<std::string>();
    if (!registry().count(cfg.family)) {
        throw ConfigError("config.family: unknown family '" + cfg.family + "' (see the list subcommand)");
    }
    const FamilyInfo& info = registry().at(cfg.family);

    if (j.contains("params")) cfg.params = parse_params(j["params"], "config.params");
    for (const std::string& req : info.required) {
        if (!cfg.params.count(req)) throw ConfigError("config.params." + req + ": missing required parameter");
    }
    for (const auto& [key, fn] : cfg.params) {
        (void)fn;
        const bool known = std::count(info.required.begin(), info.required.end(), key) ||
                           std::count(info.optional.begin(), info.optional.end(), key);
        if (!known) throw ConfigError("config.params." + key + ": not a parameter of " + cfg.family);
    }

    if (cfg.family == "direct_sum") {
        if (!j.contains("layers") || !j["layers"].is_array() || j["layers"].empty()) {
            throw ConfigError("config.layers: direct_sum needs a non-empty layer array");
        }
        for (std::size_t idx = 0; idx < j["layers"].size(); ++idx) {
            const auto& lj = j["layers"][idx];
            const std::string where = "config.layers[" + std::to_string(idx) + "]";
            check_known_keys(lj, {"family", "params"}, where);
            if (!lj.contains("family") || !lj["family"].is_string()) {
                throw ConfigError(where + ".family: missing layer family name");
            }
            LayerSpec layer;
            layer.family = lj["family"].get<std::string>();
            auto it = registry().find(layer.family);
            if (it == registry().end() || !it->second.is_square) {
                throw ConfigError(where + ".family: '" + layer.family + "' is not a square family");
            }
            if (lj.contains("params")) layer.params = parse_params(lj["params"], where + ".params");
            for (const std::string& req : it->second.required) {
                if (!layer.params.count(req)) {
                    throw ConfigError(where + ".params." + req + ": missing required parameter");
                }
            }
            cfg.layers.push_back(std::move(layer));
        }
    } else if (j.contains("layers")) {
        throw ConfigError("config.layers: only meaningful for direct_sum");
    }

    if (j.contains("kind_override")) {
        try {
            cfg.kind_override = kind_from_name(j["kind_override"].get<std::string>());
        } catch (const std::exception& e) {
            throw ConfigError(std::string("config.kind_override: ") + e.what());
        }
    }

    if (j.contains("grid")) {
        const auto& g = j["grid"];
        check_known_keys(g, {"t_max", "points", "extra"}, "config.grid");
        if (g.contains("t_max")) cfg.grid.t_max = g["t_max"].get<double>();
        if (g.contains("points")) cfg.grid.points = g["points"].get<int>();
        if (g.contains("extra")) cfg.grid.extra = g["extra"].get<std::vector<double>>();
        if (!(cfg.grid.t_max > 0.0) || cfg.grid.points < 3) {
            throw ConfigError("config.grid: needs t_max > 0 and points >= 3");
        }
    }

    if (j.contains("tolerances")) {
        const auto& t = j["tolerances"];
        check_known_keys(t, {"kce_tol", "stoch_tol"}, "config.tolerances");
        if (t.contains("kce_tol")) cfg.kce_tol = t["kce_tol"].get<double>();
        if (t.contains("stoch_tol")) cfg.stoch_tol = t["stoch_tol"].get<double>();
        if (!(cfg.kce_tol > 0.0) || !(cfg.stoch_tol > 0.0)) {
            throw ConfigError("config.tolerances: tolerances must be positive");
        }
    }
    if (const char* env = std::getenv("QSP_DEFAULT_TOL")) {
        try {
            cfg.kce_tol = std::stod(env);
        } catch (const std::exception&) {
            throw ConfigError("QSP_DEFAULT_TOL: not a number: " + std::string(env));
        }
        if (!(cfg.kce_tol > 0.0)) throw ConfigError("QSP_DEFAULT_TOL: must be positive");
    }

    if (j.contains("strict")) cfg.strict = j["strict"].get<bool>();

    if (j.contains("simulate")) {
        const auto& s = j["simulate"];
        check_known_keys(s, {"x0", "s0", "times"}, "config.simulate");
        SimSpec sim;
        if (!s.contains("x0") || !s["x0"].is_array()) throw ConfigError("config.simulate.x0: missing start point");
        sim.x0 = s["x0"].get<std::vector<double>>();
        if (s.contains("s0")) sim.s0 = s["s0"].get<double>();
        if (!s.contains("times")) throw ConfigError("config.simulate.times: missing");
        if (s["times"].is_array()) {
            sim.times = s["times"].get<std::vector<double>>();
        } else if (s["times"].is_object()) {
            check_known_keys(s["times"], {"from", "to", "count"}, "config.simulate.times");
            const double from = s["times"].at("from").get<double>();
            const double to = s["times"].at("to").get<double>();
            const int count = s["times"].at("count").get<int>();
            if (count < 1 || !(to > from)) throw ConfigError("config.simulate.times: bad range");
            for (int i = 0; i < count; ++i) {
                sim.times.push_back(count == 1 ? from : from + (to - from) * i / (count - 1));
            }
        } else {
            throw ConfigError("config.simulate.times: expected an array or {from,to,count}");
        }
        cfg.sim = std::move(sim);
    }

    if (j.contains("output")) {
        check_known_keys(j["output"], {"report"}, "config.output");
        if (j["output"].contains("report")) cfg.report_path = j["output"]["report"].get<std::string>();
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config file not found: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config is not valid JSON: " + std::string(e.what()));
    }
    return config_from_json(j);
}

BuiltFamily build_family(const RunConfig& cfg) {
    ValidationOptions opts;
    opts.t_max = std::max(cfg.grid.t_max, 10.0);
    if (cfg.sim && !cfg.sim->times.empty()) opts.t_max = std::max(opts.t_max, cfg.sim->times.back());
    for (double e : cfg.grid.extra) opts.t_max = std::max(opts.t_max, e);

    const FamilyInfo& info = registry().at(cfg.family);
    BuiltFamily out;
    if (info.is_square) {
        out.square = build_square(cfg.family, cfg.params, opts, "config.params");
        return out;
    }
    if (cfg.family == "direct_sum") {
        std::vector<SquareProcessFamily> layers;
        layers.reserve(cfg.layers.size());
        for (std::size_t i = 0; i < cfg.layers.size(); ++i) {
            layers.push_back(build_square(cfg.layers[i].family, cfg.layers[i].params, opts,
                                          "config.layers[" + std::to_string(i) + "].params"));
        }
        out.cubic = direct_sum_30(layers, opts);
        return out;
    }
    if (cfg.family == "m1") {
        out.cubic = m1_family({fn_param(cfg.params, "g", "config.params"),
                               fn_param(cfg.params, "u11", "config.params"),
                               fn_param(cfg.params, "u21", "config.params")},
                              opts);
        return out;
    }
    if (cfg.family == "m2") {
        M2Params p{fn_param(cfg.params, "psi", "config.params"),
                   fn_param(cfg.params, "zeta11", "config.params"),
                   fn_param(cfg.params, "zeta21", "config.params"),
                   fn_param(cfg.params, "gamma11", "config.params"),
                   fn_param(cfg.params, "gamma21", "config.params"),
                   std::nullopt};
        if (cfg.params.count("psi_limit")) {
            p.psi_limit = to_scalar(cfg.params.at("psi_limit"), "config.params.psi_limit");
        }
        out.cubic = m2_family(p, opts);
        return out;
    }
    if (cfg.family == "m3") {
        out.cubic = m3_family({fn_param(cfg.params, "eta11", "config.params"),
                               fn_param(cfg.params, "xi21", "config.params"),
                               fn_param(cfg.params, "kappa11", "config.params"),
                               fn_param(cfg.params, "kappa21", "config.params"),
                               to_scalar(fn_param(cfg.params, "b", "config.params"), "config.params.b")},
                              opts);
        return out;
    }
    if (cfg.family == "flow") {
        out.cubic = theorem_a_family(
            p3_flow(fn_param(cfg.params, "a", "config.params"), fn_param(cfg.params, "b", "config.params"), opts),
            opts);
        return out;
    }
    if (cfg.family == "n") {
        out.cubic = n_family({fn_param(cfg.params, "a", "config.params"),
                              fn_param(cfg.params, "b", "config.params"),
                              fn_param(cfg.params, "alpha", "config.params"),
                              fn_param(cfg.params, "beta", "config.params"),
                              fn_param(cfg.params, "gamma", "config.params"),
                              fn_param(cfg.params, "delta", "config.params")},
                             opts);
        return out;
    }
    if (cfg.family == "twin_a") {
        out.twin = case_a_family(opts);
        return out;
    }
    if (cfg.family == "twin_b") {
        TwinBParams p{fn_param(cfg.params, "phi", "config.params"),
                      fn_or(cfg.params, "b", 0.0),
                      fn_or(cfg.params, "c", 0.0),
                      fn_or(cfg.params, "u", 0.0),
                      fn_or(cfg.params, "v", 0.0),
                      fn_or(cfg.params, "w", 0.0),
                      fn_param(cfg.params, "alpha", "config.params"),
                      fn_param(cfg.params, "beta", "config.params"),
                      std::nullopt};
        if (cfg.params.count("phi_limit")) {
            p.phi_limit = to_scalar(cfg.params.at("phi_limit"), "config.params.phi_limit");
        }
        out.twin = case_b_family(p, cfg.strict ? TwinConditionMode::Strict : TwinConditionMode::Grid, opts);
        return out;
    }
    if (cfg.family == "twin_c") {
        out.twin = case_c_family({fn_param(cfg.params, "alpha0", "config.params"),
                                  fn_param(cfg.params, "beta0", "config.params"),
                                  to_scalar(fn_param(cfg.params, "a", "config.params"), "config.params.a")},
                                 opts);
        return out;
    }
    throw ConfigError("config.family: unknown family '" + cfg.family + "'");
}

namespace {

TimeGrid verification_grid(const GridSpec& spec, const std::vector<double>& cutoffs) {
    std::vector<double> extra = spec.extra;
    const double h = spec.t_max / (spec.points - 1);
    for (double c : cutoffs) {
        if (c <= 0.0 || c >= spec.t_max) continue;
        extra.push_back(c);
        if (c - 0.5 * h > 0.0) extra.push_back(c - 0.5 * h);
        if (c + 0.5 * h < spec.t_max) extra.push_back(c + 0.5 * h);
    }
    return TimeGrid::uniform_with(spec.t_max, spec.points, extra);
}

nlohmann::json stoch_sweep_square(const SquareProcessFamily& family, const TimeGrid& grid,
                                  const std::vector<StochKind>& kinds, double tol, bool& ok) {
    double worst_dev = 0.0, worst_entry = 0.0;
    std::size_t failures = 0;
    const auto pairs = grid.pairs();
    for (const auto& [s, t] : pairs) {
        const SquareMatrix u = family(s, t);
        for (StochKind kind : kinds) {
            const StochResult r = is_square_stochastic(u, kind, tol);
            worst_dev = std::max(worst_dev, r.max_sum_deviation);
            worst_entry = std::min(worst_entry, r.min_entry);
            if (!r.ok) ++failures;
        }
    }
    ok = failures == 0;
    nlohmann::json kinds_json = nlohmann::json::array();
    for (StochKind kind : kinds) kinds_json.push_back(kind_name(kind));
    return {{"check", "stochasticity"}, {"kinds", kinds_json},      {"tol", tol},
            {"pairs", pairs.size()},    {"max_sum_deviation", worst_dev}, {"min_entry", worst_entry},
            {"failures", failures},     {"pass", ok}};
}

nlohmann::json stoch_sweep_cubic(const CubicProcessFamily& family, const TimeGrid& grid, StochKind kind,
                                 double tol, bool& ok) {
    double worst_dev = 0.0, worst_entry = 0.0;
    std::size_t failures = 0;
    const auto pairs = grid.pairs();
    for (const auto& [s, t] : pairs) {
        const StochResult r = is_stochastic(family(s, t), kind, tol);
        worst_dev = std::max(worst_dev, r.max_sum_deviation);
        worst_entry = std::min(worst_entry, r.min_entry);
        if (!r.ok) ++failures;
    }
    ok = failures == 0;
    return {{"check", "stochasticity"}, {"kinds", {kind_name(kind)}},     {"tol", tol},
            {"pairs", pairs.size()},    {"max_sum_deviation", worst_dev}, {"min_entry", worst_entry},
            {"failures", failures},     {"pass", ok}};
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file: " + path);
    out << content;
    if (!content.empty() && content.back() != '\n') out << '\n';
}

nlohmann::json family_json(const RunConfig& cfg, const BuiltFamily& built) {
    const FamilyDescriptor& desc =
        built.is_square() ? built.square->descriptor() : built.cubic_view().descriptor();
    nlohmann::json j{{"name", desc.name}, {"m", desc.m}, {"params", desc.params}};
    if (!desc.cutoffs.empty()) j["cutoffs"] = desc.cutoffs;
    if (cfg.kind_override) j["kind_override"] = kind_name(*cfg.kind_override);
    return j;
}

}  // namespace

RunOutcome run_verify(const RunConfig& cfg) {
    RunOutcome outcome;
    nlohmann::json& report = outcome.report;
    report["config"] = {{"family", cfg.family},
                        {"grid", {{"t_max", cfg.grid.t_max}, {"points", cfg.grid.points}}},
                        {"kce_tol", cfg.kce_tol},
                        {"stoch_tol", cfg.stoch_tol},
                        {"strict", cfg.strict}};
    bool pass = true;
    try {
        const BuiltFamily built = build_family(cfg);
        report["family"] = family_json(cfg, built);
        report["warnings"] = built.warnings();

        nlohmann::json checks = nlohmann::json::array();
        if (built.is_square()) {
            const SquareProcessFamily& family = *built.square;
            const TimeGrid grid = verification_grid(cfg.grid, family.descriptor().cutoffs);
            bool stoch_ok = false;
            std::vector<StochKind> kinds = family.declared_kinds();
            if (cfg.kind_override) kinds = {*cfg.kind_override};
            checks.push_back(stoch_sweep_square(family, grid, kinds, cfg.stoch_tol, stoch_ok));
            pass = pass && stoch_ok;
            const VerificationReport kce = kce_residual_square(family, grid, cfg.kce_tol);
            checks.push_back(report_to_json(kce));
            pass = pass && kce.pass();
        } else {
            const CubicProcessFamily& family = built.cubic_view();
            const TimeGrid grid = verification_grid(cfg.grid, family.descriptor().cutoffs);
            bool stoch_ok = false;
            const StochKind kind = cfg.kind_override.value_or(family.declared_kind());
            checks.push_back(stoch_sweep_cubic(family, grid, kind, cfg.stoch_tol, stoch_ok));
            pass = pass && stoch_ok;
            const VerificationReport kce = kce_residual_cubic(family, grid, cfg.kce_tol);
            checks.push_back(report_to_json(kce));
            pass = pass && kce.pass();
            if (built.twin) {
                const NineEquationReport nine = verify_nine_equations(family, grid, cfg.kce_tol);
                checks.push_back(report_to_json(nine));
                pass = pass && nine.pass();
            }
        }
        report["checks"] = checks;
        if (cfg.strict && !built.warnings().empty()) {
            report["strict_failure"] = "warnings escalated in strict mode";
            pass = false;
        }
    } catch (const ConstructionError& e) {
        report["error"] = e.what();
        pass = false;
    } catch (const EvalError& e) {
        report["error"] = e.what();
        report["pass"] = false;
        outcome.exit_code = kExitEvalError;
        if (cfg.report_path) {
            write_file(*cfg.report_path, report.dump(2));
            outcome.files.push_back(*cfg.report_path);
        }
        return outcome;
    }
    report["pass"] = pass;
    outcome.exit_code = pass ? kExitPass : kExitCheckFailure;
    if (cfg.report_path) {
        write_file(*cfg.report_path, report.dump(2));
        outcome.files.push_back(*cfg.report_path);
    }
    return outcome;
}

RunOutcome run_simulate(const RunConfig& cfg, const std::string& out_csv) {
    if (!cfg.sim) throw ConfigError("config.simulate: missing simulation block");
    RunOutcome outcome;
    const BuiltFamily built = build_family(cfg);
    if (built.is_square()) {
        throw ConfigError("config.family: simulate drives distribution flow of cubic families only");
    }
    Distribution x0 = [&] {
        try {
            return Distribution(cfg.sim->x0);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("config.simulate.x0: " + std::string(e.what()));
        }
    }();
    try {
        const Trajectory tr = trajectory(built.cubic_view(), x0, cfg.sim->s0, cfg.sim->times);
        write_file(out_csv, trajectory_to_csv(tr));
        outcome.files.push_back(out_csv);
        outcome.report = {{"family", cfg.family},
                          {"rows", tr.times.size()},
                          {"s0", cfg.sim->s0},
                          {"out", out_csv},
                          {"pass", true}};
    } catch (const std::invalid_argument& e) {
        throw ConfigError("config.simulate: " + std::string(e.what()));
    }
    return outcome;
}

RunOutcome run_eval(const RunConfig& cfg, double s, double t, const std::string& out_path) {
    RunOutcome outcome;
    const BuiltFamily built = build_family(cfg);
    const bool as_json = out_path.size() >= 5 && out_path.substr(out_path.size() - 5) == ".json";
    std::string content;
    if (built.is_square()) {
        const SquareMatrix u = (*built.square)(s, t);
        content = as_json ? square_to_json(u).dump(2) : square_to_text(u);
    } else {
        const CubicMatrix q = built.cubic_view()(s, t);
        content = as_json ? cubic_to_json(q).dump(2) : cubic_to_text(q);
    }
    write_file(out_path, content);
    outcome.files.push_back(out_path);
    outcome.report = {{"family", cfg.family}, {"s", s}, {"t", t}, {"out", out_path}, {"pass", true}};
    return outcome;
}

std::string list_families() {
    std::ostringstream out;
    out << "families:\n";
    for (const auto& [name, info] : registry()) {
        out << "  " << info.signature << "\n      " << info.summary << "\n";
    }
    out << "\nparameters are expressions over t: +, -, *, /, exp, sin, cos, min, max, numbers, parentheses\n";
    return out.str();
}

}  // namespace qsp::cli
