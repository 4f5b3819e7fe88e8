#ifndef FDDE_CONFIG_HPP
#define FDDE_CONFIG_HPP

#include "fdde/matrix.hpp"
#include "fdde/oracle.hpp"
#include "fdde/solver.hpp"
#include "fdde/special.hpp"

#include <stdexcept>
#include <string>
#include <vector>

// Run configuration: one JSON document describing the problem, the numerics,
// and the output sink. History and forcing are named built-ins with
// coefficient vectors, so the analytic Caputo derivative of the history stays
// a well-defined power-rule computation.

namespace fdde {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// kinds: "constant"  coeffs = {c0}          value c0
//        "affine"    coeffs = {c0, c1}      c0 + c1 t
//        "poly"      coeffs = {c0..cm}      sum_k ck (t+h)^k   (basis shifted to -h)
//        "sin"       coeffs = {amp}         amp * sin(omega t + phase), no analytic Caputo
struct FuncSpec {
    std::string kind = "constant";
    std::vector<std::vector<double>> coeffs = {{0.0}};
    double omega = 0.0;
    double phase = 0.0;

    std::size_t dim() const { return coeffs.empty() ? 0 : coeffs.front().size(); }
    bool has_analytic_caputo() const { return kind != "sin"; }
    VectorFunc make(double h) const;
    // (^C D_{-h+}^alpha .) by the power rule; throws ConfigError for "sin".
    VectorFunc make_caputo(double h, double alpha) const;
    bool operator==(const FuncSpec&) const = default;
};

struct RunConfig {
    Matrix a, b;
    double h = 1.0;
    double alpha = 0.5;
    double horizon = 1.0;
    FuncSpec history, forcing;
    std::string history_caputo = "analytic";   // "analytic" | "numeric"

    SeriesConfig series;
    QuadratureConfig quad;
    OracleConfig oracle;
    double output_mesh = 0.05;
    unsigned long seed = 73;

    std::string out_path = "out.csv";
    std::string out_mode = "overwrite";

    bool operator==(const RunConfig&) const;
    void validate() const;
    ProblemSpec make_problem() const;
};

// Parse / serialize. parse rejects malformed JSON with line and field
// diagnostics inside ConfigError::what().
RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);
std::string emit_run_config(const RunConfig& cfg);

// CSV emission, RFC-4180-style with a mandatory header row and 17 significant
// digits per number.
std::string format_csv_number(double x);
std::string trajectory_csv(const Trajectory& traj);
std::string matrix_rows_csv(const std::vector<double>& ts, const std::vector<Matrix>& xs);

} // namespace fdde

#endif
