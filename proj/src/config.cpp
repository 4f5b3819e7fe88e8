#include "fdde/config.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace fdde {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ConfigError(where + ": " + what);
}

double get_number(const json& j, const std::string& where) {
    if (!j.is_number()) fail(where, "expected a number");
    return j.get<double>();
}

Matrix get_matrix(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) fail(where, "expected a nonempty array of rows");
    std::vector<double> entries;
    const std::size_t cols = j.front().is_array() ? j.front().size() : 0;
    if (cols == 0) fail(where, "expected nested arrays of numbers");
    for (const auto& row : j) {
        if (!row.is_array() || row.size() != cols) fail(where, "ragged rows");
        for (const auto& x : row) entries.push_back(get_number(x, where));
    }
    try {
        return Matrix(j.size(), cols, std::move(entries));
    } catch (const std::exception& e) {
        fail(where, e.what());
    }
}

RunConfig detail_extract_run_config(const json& doc);

FuncSpec get_func(const json& j, const std::string& where) {
    if (!j.is_object()) fail(where, "expected an object with kind/coeffs");
    FuncSpec f;
    if (!j.contains("kind") || !j["kind"].is_string()) fail(where, "missing kind");
    f.kind = j["kind"].get<std::string>();
    if (f.kind != "constant" && f.kind != "affine" && f.kind != "poly" && f.kind != "sin")
        fail(where, "unknown kind '" + f.kind + "'");
    if (!j.contains("coeffs")) fail(where, "missing coeffs");
    const Matrix m = get_matrix(j["coeffs"], where + ".coeffs");   // rows = coefficient vectors
    f.coeffs.clear();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        std::vector<double> row(m.cols());
        for (std::size_t c = 0; c < m.cols(); ++c) row[c] = m(r, c);
        f.coeffs.push_back(std::move(row));
    }
    if (f.kind == "constant" && f.coeffs.size() != 1) fail(where, "constant takes one coefficient row");
    if (f.kind == "affine" && f.coeffs.size() != 2) fail(where, "affine takes two coefficient rows");
    if (f.kind == "sin") {
        if (f.coeffs.size() != 1) fail(where, "sin takes one amplitude row");
        if (!j.contains("omega")) fail(where, "sin needs omega");
        f.omega = get_number(j["omega"], where + ".omega");
        if (j.contains("phase")) f.phase = get_number(j["phase"], where + ".phase");
    }
    return f;
}

} // namespace

VectorFunc FuncSpec::make(double h) const {
    const std::size_t n = dim();
    if (n == 0) throw ConfigError("function has no coefficients");
    if (kind == "constant") {
        const Matrix c0 = Matrix::column(coeffs[0]);
        return [c0](double) { return c0; };
    }
    if (kind == "affine") {
        const Matrix c0 = Matrix::column(coeffs[0]);
        const Matrix c1 = Matrix::column(coeffs[1]);
        return [c0, c1](double t) { return c0 + c1 * t; };
    }
    if (kind == "poly") {
        const auto cs = coeffs;
        return [cs, h, n](double t) {
            Matrix v(n, 1);
            double p = 1.0;
            for (const auto& ck : cs) {
                for (std::size_t r = 0; r < n; ++r) v(r, 0) += ck[r] * p;
                p *= (t + h);
            }
            return v;
        };
    }
    if (kind == "sin") {
        const Matrix amp = Matrix::column(coeffs[0]);
        const double w = omega, ph = phase;
        return [amp, w, ph](double t) { return amp * std::sin(w * t + ph); };
    }
    throw ConfigError("unknown function kind '" + kind + "'");
}

VectorFunc FuncSpec::make_caputo(double h, double alpha) const {
    const std::size_t n = dim();
    if (kind == "constant") {
        return [n](double) { return Matrix(n, 1); };
    }
    if (kind == "affine") {
        // c1 (t+h)^{1-alpha} / Gamma(2-alpha)
        const Matrix c1 = Matrix::column(coeffs[1]);
        const double inv_g = 1.0 / gamma(2.0 - alpha);
        return [c1, h, alpha, inv_g](double t) {
            return c1 * (std::pow(t + h, 1.0 - alpha) * inv_g);
        };
    }
    if (kind == "poly") {
        // sum_{k>=1} ck Gamma(k+1)/Gamma(k+1-alpha) (t+h)^{k-alpha}
        std::vector<double> factor(coeffs.size(), 0.0);
        for (std::size_t k = 1; k < coeffs.size(); ++k)
            factor[k] = gamma(static_cast<double>(k) + 1.0) /
                        gamma(static_cast<double>(k) + 1.0 - alpha);
        const auto cs = coeffs;
        return [cs, factor, h, alpha, n](double t) {
            Matrix v(n, 1);
            for (std::size_t k = 1; k < cs.size(); ++k) {
                const double p = factor[k] * std::pow(t + h, static_cast<double>(k) - alpha);
                for (std::size_t r = 0; r < n; ++r) v(r, 0) += cs[k][r] * p;
            }
            return v;
        };
    }
    throw ConfigError("no analytic Caputo derivative for kind '" + kind + "'");
}

bool RunConfig::operator==(const RunConfig& o) const {
    return a.rows() == o.a.rows() && a.cols() == o.a.cols() && a.data() == o.a.data() &&
           b.rows() == o.b.rows() && b.cols() == o.b.cols() && b.data() == o.b.data() &&
           h == o.h && alpha == o.alpha && horizon == o.horizon && history == o.history &&
           forcing == o.forcing && history_caputo == o.history_caputo &&
           series.tol == o.series.tol && series.max_terms == o.series.max_terms &&
           quad.nodes_per_unit == o.quad.nodes_per_unit && quad.scheme == o.quad.scheme &&
           oracle.step == o.oracle.step && oracle.scheme == o.oracle.scheme &&
           output_mesh == o.output_mesh && seed == o.seed && out_path == o.out_path &&
           out_mode == o.out_mode;
}

void RunConfig::validate() const {
    if (!a.is_square() || !b.is_square() || a.rows() != b.rows())
        throw ConfigError("problem.a/problem.b: need square matrices of equal dimension");
    const std::size_t n = a.rows();
    if (history.dim() != n) throw ConfigError("problem.history: coefficient dimension != matrix dimension");
    if (forcing.dim() != n) throw ConfigError("problem.forcing: coefficient dimension != matrix dimension");
    if (!(h > 0.0)) throw ConfigError("problem.h: must be positive");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("problem.alpha: must lie in (0, 1]");
    if (!(horizon > 0.0)) throw ConfigError("problem.T: must be positive");
    if (history_caputo != "analytic" && history_caputo != "numeric")
        throw ConfigError("problem.history_caputo: expected 'analytic' or 'numeric'");
    if (history_caputo == "analytic" && !history.has_analytic_caputo())
        throw ConfigError("problem.history_caputo: kind '" + history.kind +
                          "' has no analytic Caputo derivative; use 'numeric'");
    if (!(output_mesh > 0.0) || output_mesh > h / 4.0)
        throw ConfigError("numerics.output_mesh: must satisfy 0 < mesh <= h/4");
    try {
        SeriesConfig s = series;
        if (s.tol <= 0.0 || s.max_terms < 1) throw std::invalid_argument("bad series config");
        quad.validate();
        oracle.validate(h);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("numerics: ") + e.what());
    }
    if (out_mode != "overwrite" && out_mode != "append")
        throw ConfigError("output.mode: expected 'overwrite' or 'append'");
}

ProblemSpec RunConfig::make_problem() const {
    validate();
    ProblemSpec spec;
    spec.a = a;
    spec.b = b;
    spec.h = h;
    spec.alpha = alpha;
    spec.horizon = horizon;
    spec.history = history.make(h);
    spec.forcing = forcing.make(h);
    if (history_caputo == "analytic" && history.has_analytic_caputo())
        spec.history_caputo = history.make_caputo(h, alpha);
    spec.allow_numeric_caputo = true;
    return spec;
}

RunConfig parse_run_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') { ++line; col = 1; } else ++col;
        }
        throw ConfigError("config parse error at line " + std::to_string(line) + ", column " +
                          std::to_string(col) + ": " + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config root must be an object");
    if (!doc.contains("problem")) throw ConfigError("missing section 'problem'");
    try {
        return detail_extract_run_config(doc);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field error: ") + e.what());
    }
}

namespace {

RunConfig detail_extract_run_config(const json& doc) {
    const json& p = doc["problem"];

    RunConfig cfg;
    if (!p.contains("a") || !p.contains("b")) throw ConfigError("problem: missing matrices a/b");
    cfg.a = get_matrix(p["a"], "problem.a");
    cfg.b = get_matrix(p["b"], "problem.b");
    if (!p.contains("h")) throw ConfigError("problem.h: missing");
    cfg.h = get_number(p["h"], "problem.h");
    if (!p.contains("alpha")) throw ConfigError("problem.alpha: missing");
    cfg.alpha = get_number(p["alpha"], "problem.alpha");
    if (!p.contains("T")) throw ConfigError("problem.T: missing");
    cfg.horizon = get_number(p["T"], "problem.T");
    if (!p.contains("history")) throw ConfigError("problem.history: missing");
    cfg.history = get_func(p["history"], "problem.history");
    if (!p.contains("forcing")) throw ConfigError("problem.forcing: missing");
    cfg.forcing = get_func(p["forcing"], "problem.forcing");
    if (p.contains("history_caputo")) {
        if (!p["history_caputo"].is_string()) throw ConfigError("problem.history_caputo: expected string");
        cfg.history_caputo = p["history_caputo"].get<std::string>();
    } else if (!cfg.history.has_analytic_caputo()) {
        cfg.history_caputo = "numeric";
    }

    if (doc.contains("numerics")) {
        const json& nm = doc["numerics"];
        if (nm.contains("series")) {
            cfg.series.tol = get_number(nm["series"].value("tol", json(cfg.series.tol)),
                                        "numerics.series.tol");
            if (nm["series"].contains("max_terms")) {
                if (!nm["series"]["max_terms"].is_number_integer())
                    throw ConfigError("numerics.series.max_terms: expected integer");
                cfg.series.max_terms = nm["series"]["max_terms"].get<int>();
            }
        }
        if (nm.contains("quadrature") && nm["quadrature"].contains("nodes_per_unit")) {
            if (!nm["quadrature"]["nodes_per_unit"].is_number_integer())
                throw ConfigError("numerics.quadrature.nodes_per_unit: expected integer");
            cfg.quad.nodes_per_unit = nm["quadrature"]["nodes_per_unit"].get<int>();
        }
        if (nm.contains("oracle") && nm["oracle"].contains("step"))
            cfg.oracle.step = get_number(nm["oracle"]["step"], "numerics.oracle.step");
        if (nm.contains("output_mesh"))
            cfg.output_mesh = get_number(nm["output_mesh"], "numerics.output_mesh");
        if (nm.contains("seed")) {
            if (!nm["seed"].is_number_unsigned()) throw ConfigError("numerics.seed: expected unsigned integer");
            cfg.seed = nm["seed"].get<unsigned long>();
        }
    }
    if (doc.contains("output")) {
        const json& o = doc["output"];
        if (o.contains("path")) {
            if (!o["path"].is_string()) throw ConfigError("output.path: expected string");
            cfg.out_path = o["path"].get<std::string>();
        }
        if (o.contains("mode")) {
            if (!o["mode"].is_string()) throw ConfigError("output.mode: expected string");
            cfg.out_mode = o["mode"].get<std::string>();
        }
    }
    cfg.validate();
    return cfg;
}

} // namespace

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str());
}

std::string emit_run_config(const RunConfig& cfg) {
    auto matrix_json = [](const Matrix& m) {
        json rows = json::array();
        for (std::size_t i = 0; i < m.rows(); ++i) {
            json row = json::array();
            for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
            rows.push_back(std::move(row));
        }
        return rows;
    };
    auto func_json = [](const FuncSpec& f) {
        json j;
        j["kind"] = f.kind;
        j["coeffs"] = f.coeffs;
        if (f.kind == "sin") {
            j["omega"] = f.omega;
            j["phase"] = f.phase;
        }
        return j;
    };
    json doc;
    doc["problem"] = {{"a", matrix_json(cfg.a)},
                      {"b", matrix_json(cfg.b)},
                      {"h", cfg.h},
                      {"alpha", cfg.alpha},
                      {"T", cfg.horizon},
                      {"history", func_json(cfg.history)},
                      {"history_caputo", cfg.history_caputo},
                      {"forcing", func_json(cfg.forcing)}};
    doc["numerics"] = {{"series", {{"tol", cfg.series.tol}, {"max_terms", cfg.series.max_terms}}},
                       {"quadrature", {{"nodes_per_unit", cfg.quad.nodes_per_unit}}},
                       {"oracle", {{"step", cfg.oracle.step}}},
                       {"output_mesh", cfg.output_mesh},
                       {"seed", cfg.seed}};
    doc["output"] = {{"path", cfg.out_path}, {"mode", cfg.out_mode}};
    return doc.dump(2) + "\n";
}

std::string format_csv_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string trajectory_csv(const Trajectory& traj) {
    std::string out = "t";
    const std::size_t n = traj.values.empty() ? 0 : traj.values.front().rows();
    for (std::size_t r = 1; r <= n; ++r) out += ",y_" + std::to_string(r);
    out += "\n";
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        out += format_csv_number(traj.times[k]);
        for (std::size_t r = 0; r < n; ++r) out += "," + format_csv_number(traj.values[k](r, 0));
        out += "\n";
    }
    return out;
}

std::string matrix_rows_csv(const std::vector<double>& ts, const std::vector<Matrix>& xs) {
    std::string out = "t";
    const std::size_t n = xs.empty() ? 0 : xs.front().rows();
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = 1; j <= n; ++j)
            out += ",entry_" + std::to_string(i) + "_" + std::to_string(j);
    out += "\n";
    for (std::size_t k = 0; k < ts.size(); ++k) {
        out += format_csv_number(ts[k]);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) out += "," + format_csv_number(xs[k](i, j));
        out += "\n";
    }
    return out;
}

} // namespace fdde
