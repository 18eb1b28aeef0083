#include "qsp/io.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace qsp {

namespace {

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<double> entries_from_json(const nlohmann::json& j, const char* who) {
    if (!j.is_object() || !j.contains("m") || !j.contains("entries")) {
        throw std::invalid_argument(std::string(who) + ": expected an object with \"m\" and \"entries\"");
    }
    if (!j["entries"].is_array()) throw std::invalid_argument(std::string(who) + ": \"entries\" must be an array");
    std::vector<double> e;
    e.reserve(j["entries"].size());
    for (const auto& v : j["entries"]) {
        if (!v.is_number()) throw std::invalid_argument(std::string(who) + ": non-numeric entry");
        e.push_back(v.get<double>());
    }
    return e;
}

}  // namespace

nlohmann::json cubic_to_json(const CubicMatrix& q) {
    return nlohmann::json{{"m", q.dim()}, {"entries", q.entries()}};
}

CubicMatrix cubic_from_json(const nlohmann::json& j) {
    return CubicMatrix(j.at("m").get<int>(), entries_from_json(j, "cubic_from_json"));
}

std::string cubic_to_text(const CubicMatrix& q) {
    const int m = q.dim();
    std::string out = std::to_string(m) + "\n";
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            for (int k = 0; k < m; ++k) {
                out += g17(q(i, j, k));
                out += (k + 1 == m) ? "\n" : " ";
            }
        }
    return out;
}

CubicMatrix cubic_from_text(const std::string& text) {
    std::istringstream in(text);
    int m = 0;
    if (!(in >> m)) throw std::invalid_argument("cubic_from_text: missing dimension");
    std::vector<double> e;
    e.reserve(static_cast<std::size_t>(m) * m * m);
    double v;
    while (in >> v) e.push_back(v);
    return CubicMatrix(m, std::move(e));
}

nlohmann::json square_to_json(const SquareMatrix& u) {
    return nlohmann::json{{"m", u.dim()}, {"entries", u.entries()}};
}

SquareMatrix square_from_json(const nlohmann::json& j) {
    return SquareMatrix(j.at("m").get<int>(), entries_from_json(j, "square_from_json"));
}

std::string square_to_text(const SquareMatrix& u) {
    const int m = u.dim();
    std::string out = std::to_string(m) + "\n";
    for (int i = 0; i < m; ++i)
        for (int k = 0; k < m; ++k) {
            out += g17(u(i, k));
            out += (k + 1 == m) ? "\n" : " ";
        }
    return out;
}

std::string trajectory_to_csv(const Trajectory& tr) {
    if (tr.states.empty()) throw std::invalid_argument("trajectory_to_csv: empty trajectory");
    const int m = tr.states.front().dim();
    std::string out = "t";
    for (int i = 0; i < m; ++i) out += ",x" + std::to_string(i);
    out += "\n";
    for (std::size_t row = 0; row < tr.times.size(); ++row) {
        out += g17(tr.times[row]);
        for (int i = 0; i < m; ++i) out += "," + g17(tr.states[row][i]);
        out += "\n";
    }
    return out;
}

nlohmann::json report_to_json(const VerificationReport& report) {
    return nlohmann::json{
        {"check", report.check},
        {"tol", report.tol},
        {"triples", report.residuals.size()},
        {"max_residual", report.max_residual},
        {"failures", report.failures},
        {"worst", {{"s", report.worst.s}, {"tau", report.worst.tau}, {"t", report.worst.t},
                   {"residual", report.worst.residual}}},
        {"pass", report.pass()},
    };
}

nlohmann::json report_to_json(const NineEquationReport& report) {
    nlohmann::json equations = nlohmann::json::array();
    for (const auto& slot : report.equations) {
        equations.push_back({{"equation", slot.equation},
                             {"max_residual", slot.max_residual},
                             {"worst", {{"s", slot.s}, {"tau", slot.tau}, {"t", slot.t}}},
                             {"failures", slot.failures}});
    }
    return nlohmann::json{
        {"check", "nine_equations"},
        {"tol", report.tol},
        {"equations", equations},
        {"normalization",
         {{"max_residual", report.normalization.max_residual},
          {"failures", report.normalization.failures}}},
        {"max_residual", report.max_residual},
        {"failures", report.failures},
        {"pass", report.pass()},
    };
}

nlohmann::json twin_report_to_json(const TwinReport& report) {
    nlohmann::json j{
        {"s", report.s},
        {"t", report.t},
        {"no_offspring", report.p_no_offspring},
        {"single_female", report.p_single_female},
        {"single_male", report.p_single_male},
        {"twin_ff", report.p_twin_ff},
        {"twin_mixed", report.p_twin_mixed},
        {"twin_mm", report.p_twin_mm},
    };
    if (report.has_limits) {
        j["limits"] = {{"ff", report.limit_ff}, {"mixed", report.limit_mixed}, {"mm", report.limit_mm}};
    } else {
        j["limits"] = "no limit declared";
    }
    return j;
}

std::string twin_report_csv_header() { return "s,t,p_ff,p_mixed,p_mm,limit_ff,limit_mixed,limit_mm\n"; }

std::string twin_report_csv_row(const TwinReport& report) {
    std::string out = g17(report.s) + "," + g17(report.t) + "," + g17(report.p_twin_ff) + "," +
                      g17(report.p_twin_mixed) + "," + g17(report.p_twin_mm);
    if (report.has_limits) {
        out += "," + g17(report.limit_ff) + "," + g17(report.limit_mixed) + "," + g17(report.limit_mm);
    } else {
        out += ",,,";
    }
    return out + "\n";
}

}  // namespace qsp
