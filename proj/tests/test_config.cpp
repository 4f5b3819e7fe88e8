#include <doctest.h>

#include "fdde/config.hpp"

#include <cmath>
#include <string>

using fdde::FuncSpec;
using fdde::Matrix;
using fdde::RunConfig;

namespace {

RunConfig base_config() {
    RunConfig cfg;
    cfg.a = Matrix{{0.2, -0.3}, {0.1, 0.25}};
    cfg.b = Matrix{{0.1, 0.2}, {-0.15, 0.3}};
    cfg.h = 1.0;
    cfg.alpha = 0.6;
    cfg.horizon = 3.0;
    cfg.history = {"affine", {{1.0, 0.5}, {0.5, -0.25}}, 0.0, 0.0};
    cfg.forcing = {"constant", {{0.3, -0.2}}, 0.0, 0.0};
    cfg.oracle.step = 1e-3;
    cfg.output_mesh = 0.05;
    return cfg;
}

} // namespace

TEST_CASE("round trip through emit and parse for every builtin kind") {
    RunConfig cfg = base_config();
    for (const FuncSpec f : {FuncSpec{"constant", {{0.1, -0.4}}, 0.0, 0.0},
                             FuncSpec{"affine", {{0.1, 0.2}, {-0.7, 0.33}}, 0.0, 0.0},
                             FuncSpec{"poly", {{0.1, 0.2}, {0.0, -1.0}, {0.25, 0.5}}, 0.0, 0.0},
                             FuncSpec{"sin", {{1.0, 0.5}}, 2.25, 0.7}}) {
        cfg.forcing = f;
        cfg.history_caputo = "numeric";
        cfg.history = FuncSpec{"poly", {{0.1, 0.2}, {0.0, -1.0}, {0.25, 0.5}}, 0.0, 0.0};
        const std::string text = fdde::emit_run_config(cfg);
        const RunConfig back = fdde::parse_run_config(text);
        CHECK(back == cfg);
        // double round trip is byte-stable
        CHECK(fdde::emit_run_config(back) == text);
    }
}

TEST_CASE("parse reports line and field diagnostics") {
    CHECK_THROWS_WITH_AS(fdde::parse_run_config("{\n  \"problem\": [,]\n}"),
                         doctest::Contains("line 2"), fdde::ConfigError);
    const char* missing_alpha = R"({
      "problem": {
        "a": [[0.5]], "b": [[0.25]], "h": 1.0, "T": 2.0,
        "history": {"kind": "constant", "coeffs": [[1.0]]},
        "forcing": {"kind": "constant", "coeffs": [[0.0]]}
      }
    })";
    CHECK_THROWS_WITH_AS(fdde::parse_run_config(missing_alpha), doctest::Contains("problem.alpha"),
                         fdde::ConfigError);
    const char* ragged = R"({
      "problem": {
        "a": [[0.5, 1.0], [0.25]], "b": [[0.25]], "h": 1.0, "alpha": 0.5, "T": 2.0,
        "history": {"kind": "constant", "coeffs": [[1.0]]},
        "forcing": {"kind": "constant", "coeffs": [[0.0]]}
      }
    })";
    CHECK_THROWS_WITH_AS(fdde::parse_run_config(ragged), doctest::Contains("problem.a"),
                         fdde::ConfigError);
}

TEST_CASE("dimension consistency across matrices and function coefficients") {
    RunConfig cfg = base_config();
    cfg.history = {"constant", {{1.0}}, 0.0, 0.0};   // 1-vector against 2x2 A
    CHECK_THROWS_AS(cfg.validate(), fdde::ConfigError);
    cfg = base_config();
    cfg.history = {"sin", {{1.0, 0.5}}, 2.0, 0.0};
    cfg.history_caputo = "analytic";                 // sin has no analytic derivative
    CHECK_THROWS_AS(cfg.validate(), fdde::ConfigError);
    cfg.history_caputo = "numeric";
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("builtin function evaluation") {
    const double h = 0.5;
    const FuncSpec aff{"affine", {{1.0, 2.0}, {0.5, -1.0}}, 0.0, 0.0};
    const Matrix va = aff.make(h)(2.0);
    CHECK(va(0, 0) == doctest::Approx(2.0));
    CHECK(va(1, 0) == doctest::Approx(0.0));

    const FuncSpec poly{"poly", {{1.0}, {0.0}, {2.0}}, 0.0, 0.0};   // 1 + 2 (t+h)^2
    CHECK(poly.make(h)(1.5)(0, 0) == doctest::Approx(1.0 + 2.0 * 4.0));

    const FuncSpec sine{"sin", {{2.0}}, 3.0, 0.25};
    CHECK(sine.make(h)(0.4)(0, 0) == doctest::Approx(2.0 * std::sin(3.0 * 0.4 + 0.25)));
}

TEST_CASE("analytic Caputo derivatives follow the power rule") {
    const double h = 1.0, alpha = 0.5;
    // affine: c1 (t+h)^{1-alpha}/Gamma(2-alpha)
    const FuncSpec aff{"affine", {{0.0}, {2.0}}, 0.0, 0.0};
    const double got = aff.make_caputo(h, alpha)(0.0)(0, 0);
    CHECK(got == doctest::Approx(2.0 * std::pow(1.0, 0.5) / fdde::gamma(1.5)).epsilon(1e-14));

    // quadratic in (t+h): D^alpha (t+h)^2 = Gamma(3)/Gamma(3-alpha) (t+h)^{2-alpha}
    const FuncSpec quad{"poly", {{0.0}, {0.0}, {1.0}}, 0.0, 0.0};
    const double got2 = quad.make_caputo(h, alpha)(0.0)(0, 0);
    CHECK(got2 == doctest::Approx(2.0 / fdde::gamma(2.5)).epsilon(1e-14));

    const FuncSpec sine{"sin", {{1.0}}, 1.0, 0.0};
    CHECK_THROWS_AS(sine.make_caputo(h, alpha), fdde::ConfigError);
}

TEST_CASE("csv formatting carries full precision") {
    const double x = 0.1 + 0.2 / 3.0;
    const std::string s = fdde::format_csv_number(x);
    CHECK(std::stod(s) == x);

    fdde::Trajectory traj;
    traj.times = {-1.0, 0.0, 0.5};
    traj.values = {Matrix{{1.0}, {2.0}}, Matrix{{3.0}, {4.0}}, Matrix{{5.0}, {6.0}}};
    const std::string csv = fdde::trajectory_csv(traj);
    CHECK(csv.substr(0, csv.find('\n')) == "t,y_1,y_2");
    CHECK(csv.find("0.5,5,6\n") != std::string::npos);

    const std::string xcsv = fdde::matrix_rows_csv({0.0}, {Matrix::identity(2)});
    CHECK(xcsv == "t,entry_1_1,entry_1_2,entry_2_1,entry_2_2\n0,1,0,0,1\n");
}
