#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fdde/config.hpp"
#include "fdde/delayed_ml.hpp"
#include "fdde/oracle.hpp"
#include "fdde/verify.hpp"

#include <utility>
#include <vector>

namespace py = pybind11;

namespace {

using Rows = std::vector<std::vector<double>>;

fdde::Matrix to_matrix(const Rows& rows) {
    if (rows.empty() || rows.front().empty()) throw std::invalid_argument("empty matrix");
    std::vector<double> entries;
    entries.reserve(rows.size() * rows.front().size());
    for (const auto& r : rows) {
        if (r.size() != rows.front().size()) throw std::invalid_argument("ragged matrix");
        entries.insert(entries.end(), r.begin(), r.end());
    }
    return fdde::Matrix(rows.size(), rows.front().size(), std::move(entries));
}

Rows from_matrix(const fdde::Matrix& m) {
    Rows rows(m.rows(), std::vector<double>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) rows[i][j] = m(i, j);
    return rows;
}

std::pair<std::vector<double>, Rows> trajectory_pair(const fdde::Trajectory& traj) {
    Rows values;
    values.reserve(traj.values.size());
    for (const auto& v : traj.values) {
        std::vector<double> row(v.rows());
        for (std::size_t r = 0; r < v.rows(); ++r) row[r] = v(r, 0);
        values.push_back(std::move(row));
    }
    return {traj.times, values};
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "delayed Mittag-Leffler matrix functions and fractional delay solvers";

    m.def("gamma", [](double x) { return fdde::gamma(x); }, py::arg("x"));

    m.def(
        "ml_matrix",
        [](const Rows& a, double alpha, double beta, double t, double tol, int max_terms) {
            return from_matrix(fdde::ml_matrix(to_matrix(a), alpha, beta, t, {tol, max_terms}));
        },
        py::arg("a"), py::arg("alpha"), py::arg("beta"), py::arg("t"), py::arg("tol") = 1e-14,
        py::arg("max_terms") = 400);

    m.def("mat_exp", [](const Rows& a) { return from_matrix(fdde::mat_exp(to_matrix(a))); },
          py::arg("a"));

    m.def(
        "delayed_ml",
        [](const Rows& b, double h, double alpha, double beta, double t) {
            return from_matrix(fdde::delayed_ml_E(to_matrix(b), h, alpha, beta, t));
        },
        py::arg("b"), py::arg("h"), py::arg("alpha"), py::arg("beta"), py::arg("t"));

    m.def(
        "qtable_cells",
        [](const Rows& a, const Rows& b, int i_max, int p_max) {
            fdde::QTable qt(to_matrix(a), to_matrix(b), i_max, p_max);
            std::vector<std::vector<Rows>> cells;
            for (int i = 0; i <= i_max; ++i) {
                std::vector<Rows> row;
                for (int j = 0; j <= p_max; ++j) row.push_back(from_matrix(qt.cell(i, j)));
                cells.push_back(std::move(row));
            }
            return cells;
        },
        py::arg("a"), py::arg("b"), py::arg("i_max"), py::arg("p_max"));

    m.def(
        "eval_x",
        [](const Rows& a, const Rows& b, double h, double alpha, double beta,
           const std::vector<double>& times, double tol, int max_terms) {
            double tmax = h;
            for (double t : times) tmax = std::max(tmax, t);
            fdde::QTable qt(to_matrix(a), to_matrix(b), 16,
                            std::max(0, fdde::delay_steps(tmax, h) - 1));
            std::vector<Rows> out;
            out.reserve(times.size());
            for (double t : times)
                out.push_back(from_matrix(
                    fdde::delayed_perturbation_X(qt, h, alpha, beta, t, {tol, max_terms})));
            return out;
        },
        py::arg("a"), py::arg("b"), py::arg("h"), py::arg("alpha"), py::arg("beta"),
        py::arg("times"), py::arg("tol") = 1e-14, py::arg("max_terms") = 400);

    m.def(
        "solve",
        [](const std::string& config_json) {
            const fdde::RunConfig cfg = fdde::parse_run_config(config_json);
            return trajectory_pair(
                fdde::solve(cfg.make_problem(), cfg.output_mesh, cfg.quad, cfg.series));
        },
        py::arg("config_json"));

    m.def(
        "oracle_solve",
        [](const std::string& config_json) {
            const fdde::RunConfig cfg = fdde::parse_run_config(config_json);
            return trajectory_pair(fdde::oracle_solve(cfg.make_problem(), cfg.oracle));
        },
        py::arg("config_json"));

    m.def(
        "verify",
        [](const std::string& config_json) {
            const fdde::RunConfig cfg = fdde::parse_run_config(config_json);
            const fdde::VerifyReport report = fdde::run_verification(cfg);
            return std::make_pair(report.render(), report.all_passed());
        },
        py::arg("config_json"));

    m.def(
        "canonical_config",
        [](const std::string& config_json) {
            return fdde::emit_run_config(fdde::parse_run_config(config_json));
        },
        py::arg("config_json"));
}
