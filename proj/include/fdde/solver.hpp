#ifndef FDDE_SOLVER_HPP
#define FDDE_SOLVER_HPP

#include "fdde/delayed_ml.hpp"
#include "fdde/matrix.hpp"
#include "fdde/qtable.hpp"
#include "fdde/special.hpp"

#include <functional>
#include <limits>
#include <string>
#include <vector>

// Explicit solutions of the linear fractional delay system
//
//   (^C D_{-h+}^alpha y)(t) = A y(t) + B y(t-h) + f(t),   t in (0, T],
//   y(t) = phi(t),                                        -h <= t <= 0,
//
// via the variation-of-constants representation
//
//   y(t) = X_{h,alpha,1}(t+h) phi(-h)
//        + int_{-h}^0 X_{h,alpha,alpha}(t-s) [ (^C D_{-h+}^alpha phi)(s) - A phi(s) ] ds
//        + int_0^t  X_{h,alpha,alpha}(t-s) f(s) ds.
//
// All convolutions are evaluated termwise over the kernel's double series:
// a term carries the factor (t - s - jh)^{i alpha + alpha - 1}, which is
// integrated exactly against a piecewise-linear interpolant of the smooth
// companion (product integration). Splitting at the kernel breakpoints
// t - s = jh is automatic, since each term has its own support.

namespace fdde {

using VectorFunc = std::function<Matrix(double)>;   // t -> n x 1 column

struct ProblemSpec {
    Matrix a;                    // system matrix
    Matrix b;                    // delay matrix
    double h = 1.0;              // delay
    double alpha = 0.5;          // Caputo order, (0, 1]
    double horizon = 1.0;        // T
    VectorFunc history;          // phi on [-h, 0]
    VectorFunc history_caputo;   // analytic (^C D_{-h+}^alpha phi), may be empty
    VectorFunc forcing;          // f on [-h, T]
    bool allow_numeric_caputo = true;

    std::size_t dim() const { return a.rows(); }
    // Squareness, matching dimensions, finite history/forcing samples.
    void validate() const;
};

struct QuadratureConfig {
    int nodes_per_unit = 128;               // >= 8
    std::string scheme = "product-linear";  // fixed rule tag
    bool breakpoint_split = true;           // always on; kept for the record
    void validate() const;
};

struct TrajectoryMeta {
    double mesh = 0.0;
    int nodes_per_unit = 0;
    double series_tol = 0.0;
};

struct Trajectory {
    std::vector<double> times;     // strictly increasing, spanning [-h, T]
    std::vector<Matrix> values;    // n x 1 per time; history samples verbatim on [-h, 0]
    TrajectoryMeta meta;
};

// Q table sized for every kernel evaluation with arguments up to max_time.
QTable make_problem_qtable(const ProblemSpec& spec, double max_time);

// int_{from_time}^{t} X_{h,alpha,alpha}(t-s) f(s) ds for t > 0, with
// from_time clamped to -h. The default covers the whole window [-h, t]
// (zero-initial-data response to forcing switched on at -h); the full-
// solution assembly passes from_time = 0, where forcing acts only on (0, T].
Matrix forced_response(const ProblemSpec& spec, QTable& qt, double t,
                       const QuadratureConfig& quad = {}, const SeriesConfig& cfg = {},
                       double from_time = -std::numeric_limits<double>::infinity());

// Response to the history phi alone (f = 0): anchor term plus the history
// convolution. Uses the analytic Caputo derivative of phi when supplied,
// otherwise falls back to the first-order L1 approximation (or throws when
// allow_numeric_caputo is off).
Matrix history_response(const ProblemSpec& spec, QTable& qt, double t,
                        const QuadratureConfig& quad = {}, const SeriesConfig& cfg = {});

// Full trajectory on a uniform output mesh over (0, T], prepended with exact
// history samples on [-h, 0]. Output points falling on multiples of h are
// nudged left by mesh * 1e-6 to stay inside the half-open branch intervals.
Trajectory solve(const ProblemSpec& spec, double mesh, const QuadratureConfig& quad = {},
                 const SeriesConfig& cfg = {});

// L1 approximation of (^C D_{-h+}^alpha phi)(s) on a uniform grid of spacing
// about `mesh`; first-order accurate for C^2 histories.
Matrix caputo_of_history_numeric(const VectorFunc& phi, double alpha, double h, double s,
                                 double mesh);

} // namespace fdde

#endif
