#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "qsp/cli.hpp"
#include "qsp/evolution.hpp"
#include "qsp/exceptions.hpp"
#include "qsp/io.hpp"
#include "qsp/population_twins.hpp"
#include "qsp/qsp_families.hpp"

namespace py = pybind11;
using namespace qsp;

namespace {

py::object json_to_py(const nlohmann::json& j) {
    switch (j.type()) {
        case nlohmann::json::value_t::null: return py::none();
        case nlohmann::json::value_t::boolean: return py::bool_(j.get<bool>());
        case nlohmann::json::value_t::number_integer: return py::int_(j.get<long long>());
        case nlohmann::json::value_t::number_unsigned: return py::int_(j.get<unsigned long long>());
        case nlohmann::json::value_t::number_float: return py::float_(j.get<double>());
        case nlohmann::json::value_t::string: return py::str(j.get<std::string>());
        case nlohmann::json::value_t::array: {
            py::list out;
            for (const auto& v : j) out.append(json_to_py(v));
            return out;
        }
        case nlohmann::json::value_t::object: {
            py::dict out;
            for (const auto& [k, v] : j.items()) out[py::str(k)] = json_to_py(v);
            return out;
        }
        default: return py::none();
    }
}

cli::RunConfig config_from_dict(const py::dict& d) {
    nlohmann::json j = nlohmann::json::parse(
        py::module_::import("json").attr("dumps")(d).cast<std::string>());
    return cli::config_from_json(j);
}

TimeGrid grid_from_points(const std::vector<double>& points) { return TimeGrid(points); }

}  // namespace

PYBIND11_MODULE(_qsp, m) {
    m.doc() = "quadratic stochastic processes: cubic stochastic matrices, process families, "
              "verification sweeps, and simplex dynamics";

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<EvalError>(m, "EvalError", PyExc_ArithmeticError);
    py::register_exception<ConstructionError>(m, "ConstructionError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::class_<CubicMatrix>(m, "CubicMatrix")
        .def(py::init<int, std::vector<double>>(), py::arg("m"), py::arg("entries"))
        .def_property_readonly("m", &CubicMatrix::dim)
        .def("at", &CubicMatrix::at)
        .def("__call__", [](const CubicMatrix& q, int i, int j, int k) { return q.at(i, j, k); })
        .def("entries", [](const CubicMatrix& q) { return q.entries(); })
        .def("__repr__", [](const CubicMatrix& q) {
            return "CubicMatrix(m=" + std::to_string(q.dim()) + ")";
        });

    py::class_<SquareMatrix>(m, "SquareMatrix")
        .def(py::init<int, std::vector<double>>(), py::arg("m"), py::arg("entries"))
        .def_property_readonly("m", &SquareMatrix::dim)
        .def("at", &SquareMatrix::at)
        .def("__call__", [](const SquareMatrix& u, int i, int k) { return u.at(i, k); })
        .def("entries", [](const SquareMatrix& u) { return u.entries(); })
        .def("__repr__", [](const SquareMatrix& u) {
            return "SquareMatrix(m=" + std::to_string(u.dim()) + ")";
        });

    m.def("basis", &basis, py::arg("m"), py::arg("i"), py::arg("j"), py::arg("k"));
    m.def("contract_second", &contract_second);
    m.def("slice_second", &slice_second);
    m.def("slice_first", &slice_first);
    m.def("mul_maksimov0", &mul_maksimov0);
    m.def(
        "mul_maksimov_a",
        [](const CubicMatrix& a, const CubicMatrix& b, const std::optional<std::vector<int>>& table) {
            const BinaryOpTable op = table ? BinaryOpTable(a.dim(), *table)
                                           : BinaryOpTable::left_projection(a.dim());
            return mul_maksimov_a(a, b, op);
        },
        py::arg("a"), py::arg("b"), py::arg("table") = std::nullopt,
        "product under an associative index operation (defaults to the left projection)");

    m.def(
        "is_stochastic",
        [](const CubicMatrix& q, const std::string& kind, double tol) {
            const StochResult r = is_stochastic(q, kind_from_name(kind), tol);
            return py::make_tuple(r.ok, r.max_sum_deviation, r.min_entry);
        },
        py::arg("q"), py::arg("kind"), py::arg("tol") = 1e-12,
        "returns (ok, max_sum_deviation, min_entry)");
    m.def(
        "is_square_stochastic",
        [](const SquareMatrix& u, const std::string& kind, double tol) {
            const StochResult r = is_square_stochastic(u, kind_from_name(kind), tol);
            return py::make_tuple(r.ok, r.max_sum_deviation, r.min_entry);
        },
        py::arg("u"), py::arg("kind"), py::arg("tol") = 1e-12);

    py::class_<TimeFunction>(m, "TimeFunction")
        .def_static("parse", &TimeFunction::parse)
        .def_static("constant", &TimeFunction::constant)
        .def("__call__", [](const TimeFunction& f, double t) { return f(t); })
        .def("__repr__", [](const TimeFunction& f) { return "TimeFunction(" + f.to_string() + ")"; })
        .def("to_string", &TimeFunction::to_string);

    py::class_<SquareProcessFamily>(m, "SquareProcessFamily")
        .def_property_readonly("m", &SquareProcessFamily::dim)
        .def_property_readonly("name",
                               [](const SquareProcessFamily& f) { return f.descriptor().name; })
        .def("__call__", [](const SquareProcessFamily& f, double s, double t) { return f(s, t); });

    py::class_<CubicProcessFamily>(m, "CubicProcessFamily")
        .def_property_readonly("m", &CubicProcessFamily::dim)
        .def_property_readonly("name", [](const CubicProcessFamily& f) { return f.descriptor().name; })
        .def_property_readonly("kind",
                               [](const CubicProcessFamily& f) { return kind_name(f.declared_kind()); })
        .def_property_readonly("warnings",
                               [](const CubicProcessFamily& f) { return f.descriptor().warnings; })
        .def("__call__", [](const CubicProcessFamily& f, double s, double t) { return f(s, t); });

    py::class_<TwinFamily>(m, "TwinFamily")
        .def_property_readonly("family", [](const TwinFamily& t) { return t.family; })
        .def("__call__", [](const TwinFamily& t, double s, double t1) { return t.family(s, t1); });

    m.def(
        "make_family",
        [](const py::dict& config) -> py::object {
            const cli::RunConfig cfg = config_from_dict(config);
            cli::BuiltFamily built = cli::build_family(cfg);
            if (built.square) return py::cast(*built.square);
            if (built.twin) return py::cast(*built.twin);
            return py::cast(*built.cubic);
        },
        py::arg("config"),
        "builds a family from a config dict: {'family': name, 'params': {...}, ...}");

    m.def(
        "kce_residual_square",
        [](const SquareProcessFamily& f, const std::vector<double>& points, double tol) {
            return json_to_py(report_to_json(kce_residual_square(f, grid_from_points(points), tol)));
        },
        py::arg("family"), py::arg("grid_points"), py::arg("tol") = 1e-9);
    m.def(
        "kce_residual_cubic",
        [](const CubicProcessFamily& f, const std::vector<double>& points, double tol) {
            return json_to_py(report_to_json(kce_residual_cubic(f, grid_from_points(points), tol)));
        },
        py::arg("family"), py::arg("grid_points"), py::arg("tol") = 1e-9);
    m.def(
        "verify_nine_equations",
        [](const CubicProcessFamily& f, const std::vector<double>& points, double tol) {
            return json_to_py(report_to_json(verify_nine_equations(f, grid_from_points(points), tol)));
        },
        py::arg("family"), py::arg("grid_points"), py::arg("tol") = 1e-10);
    m.def(
        "twin_report",
        [](const TwinFamily& f, double s, double t) {
            return json_to_py(twin_report_to_json(twin_report(f, s, t)));
        },
        py::arg("family"), py::arg("s"), py::arg("t"));

    m.def(
        "step_quadratic",
        [](const CubicMatrix& p, const std::vector<double>& x, double tol) {
            return step_quadratic(p, Distribution(x), tol).probs();
        },
        py::arg("p"), py::arg("x"), py::arg("tol") = 1e-12);
    m.def(
        "step_linear_12",
        [](const CubicMatrix& p, const std::vector<double>& x, double tol) {
            return step_linear_12(p, Distribution(x), tol).probs();
        },
        py::arg("p"), py::arg("x"), py::arg("tol") = 1e-12);
    m.def(
        "trajectory",
        [](const CubicProcessFamily& f, const std::vector<double>& x0, double s0,
           const std::vector<double>& times) {
            const Trajectory tr = trajectory(f, Distribution(x0), s0, times);
            py::list rows;
            for (std::size_t i = 0; i < tr.times.size(); ++i) {
                rows.append(py::make_tuple(tr.times[i], tr.states[i].probs()));
            }
            return rows;
        },
        py::arg("family"), py::arg("x0"), py::arg("s0"), py::arg("times"));

    m.def("list_families", &cli::list_families);
}
