#include "fdde/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fdde {

void ProblemSpec::validate() const {
    if (!a.is_square() || !b.is_square() || a.rows() != b.rows())
        throw std::invalid_argument("problem needs square A, B of equal dimension");
    if (!(h > 0.0)) throw std::invalid_argument("delay h must be positive");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha outside (0,1]");
    if (!(horizon > 0.0)) throw std::invalid_argument("horizon T must be positive");
    if (!history) throw std::invalid_argument("history function missing");
    if (!forcing) throw std::invalid_argument("forcing function missing");
    auto check_sample = [&](const Matrix& v, const char* what, double at) {
        if (v.rows() != dim() || v.cols() != 1)
            throw std::invalid_argument(std::string(what) + " returns wrong shape");
        for (double x : v.data())
            if (!std::isfinite(x))
                throw std::invalid_argument(std::string(what) + " not finite at t=" + std::to_string(at));
    };
    check_sample(history(-h), "history", -h);
    check_sample(history(0.0), "history", 0.0);
    for (int i = 0; i <= 8; ++i) {   // sampled continuity/finiteness check
        const double t = -h + (horizon + h) * i / 8.0;
        check_sample(forcing(t), "forcing", t);
    }
}

void QuadratureConfig::validate() const {
    if (nodes_per_unit < 8) throw std::invalid_argument("nodes_per_unit must be >= 8");
    if (scheme != "product-linear") throw std::invalid_argument("unknown quadrature scheme " + scheme);
    if (!breakpoint_split)
        throw std::invalid_argument("breakpoint splitting cannot be disabled");
}

QTable make_problem_qtable(const ProblemSpec& spec, double max_time) {
    const int p = delay_steps(max_time, spec.h);
    return QTable(spec.a, spec.b, std::max(16, 2 * p), std::max(0, p - 1));
}

namespace {

// Nodes on [lo, hi]: uniform density plus dyadic refinement toward both ends
// (the right end maps to s = from_time where the history derivative may lose
// smoothness; the left end is the kernel singularity, integrated exactly but
// refined anyway for the interpolant of g).
std::vector<double> panel_nodes(double lo, double hi, int nodes_per_unit) {
    const double len = hi - lo;
    const int m = std::max(8, static_cast<int>(std::ceil(nodes_per_unit * len)));
    std::vector<double> nodes;
    nodes.reserve(m + 80);
    for (int i = 0; i <= m; ++i) nodes.push_back(lo + len * i / m);
    for (int k = 1; k <= 36; ++k) {
        const double d = len * std::ldexp(1.0, -k);
        if (d < 1e-15 * len) break;
        nodes.push_back(lo + d);
        nodes.push_back(hi - d);
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end(),
                            [len](double x, double y) { return y - x < 1e-15 * len; }),
                nodes.end());
    nodes.back() = hi;
    nodes.front() = lo;
    return nodes;
}

// int_{lo}^{hi} X_{h,alpha,alpha}(t-s) g(s) ds, termwise product integration.
// For the term (i, j) the kernel factor is sigma^{i alpha + alpha - 1} in
// sigma = t - jh - s, integrated exactly against piecewise-linear g.
Matrix convolve_with_kernel(QTable& qt, double h, double alpha, double t, double lo, double hi,
                            const VectorFunc& g, const QuadratureConfig& quad,
                            const SeriesConfig& cfg) {
    const std::size_t n = qt.dim();
    Matrix total(n, 1);
    if (!(hi > lo)) return total;

    for (int j = 0; t - j * h > lo; ++j) {
        const double upper_s = std::min(hi, t - j * h);
        const double sig_lo = t - j * h - upper_s;   // 0 when the kernel edge is inside
        const double sig_hi = t - j * h - lo;
        if (sig_hi - sig_lo < 1e-14 * std::max(1.0, std::abs(t)))
            continue;   // vanishing window, contribution below rounding

        const std::vector<double> sig = panel_nodes(sig_lo, sig_hi, quad.nodes_per_unit);
        const std::size_t m = sig.size();
        std::vector<Matrix> gv;
        gv.reserve(m);
        for (double s : sig) {
            // clamp against ulp drift below lo at the far end of the panel
            gv.push_back(g(std::min(upper_s, std::max(lo, t - j * h - s))));
        }

        // pw[k] carries sigma_k^{mu+1} with mu = i alpha + alpha - 1; the two
        // panel moments needed for exact power-against-linear integration are
        //   I0 = int sigma^mu     = (pw[k+1] - pw[k]) / (mu+1)
        //   I1 = int sigma^{mu+1} = (pw[k+1] sig[k+1] - pw[k] sig[k]) / (mu+2)
        std::vector<double> sal(m), pw(m);
        for (std::size_t k = 0; k < m; ++k) {
            sal[k] = std::pow(sig[k], alpha);
            pw[k] = sal[k];
        }

        double inv_gamma = 1.0 / gamma(alpha);
        const int min_i = std::max(1, j);   // Q_{i+1}(jh) = Theta for i < j
        bool converged = false;
        for (int i = 0; i <= cfg.max_terms; ++i) {
            if (i > qt.i_max()) qt.grow_rows(std::max(2 * qt.i_max(), 8));
            const Matrix& q = qt.cell(i, j);
            const double mu = i * alpha + alpha - 1.0;

            Matrix vec(n, 1);
            for (std::size_t k = 0; k + 1 < m; ++k) {
                const double I0 = (pw[k + 1] - pw[k]) / (mu + 1.0);
                const double I1 = (pw[k + 1] * sig[k + 1] - pw[k] * sig[k]) / (mu + 2.0);
                const double ds = sig[k + 1] - sig[k];
                const double w1 = (I1 - sig[k] * I0) / ds;   // weight of g at sig[k+1]
                const double w0 = I0 - w1;                   // weight of g at sig[k]
                for (std::size_t r = 0; r < n; ++r)
                    vec(r, 0) += w0 * gv[k](r, 0) + w1 * gv[k + 1](r, 0);
            }
            Matrix term = (q * vec) * inv_gamma;
            total += term;
            if (i >= min_i && term.max_abs() < cfg.tol) { converged = true; break; }
            inv_gamma *= gamma_ratio(i * alpha + alpha, alpha);
            for (std::size_t k = 0; k < m; ++k) pw[k] *= sal[k];
        }
        if (!converged)
            throw std::runtime_error("convolution series did not converge within max_terms");
    }
    return total;
}

} // namespace

Matrix forced_response(const ProblemSpec& spec, QTable& qt, double t, const QuadratureConfig& quad,
                       const SeriesConfig& cfg, double from_time) {
    spec.validate();
    quad.validate();
    if (!(t > 0.0)) throw std::invalid_argument("forced_response needs t > 0");
    const double lo = std::max(from_time, -spec.h);
    return convolve_with_kernel(qt, spec.h, spec.alpha, t, lo, t, spec.forcing, quad, cfg);
}

Matrix history_response(const ProblemSpec& spec, QTable& qt, double t, const QuadratureConfig& quad,
                        const SeriesConfig& cfg) {
    spec.validate();
    quad.validate();
    if (!(t > 0.0)) throw std::invalid_argument("history_response needs t > 0");

    const Matrix anchor =
        delayed_perturbation_X(qt, spec.h, spec.alpha, 1.0, t + spec.h, cfg) * spec.history(-spec.h);

    VectorFunc dphi;
    if (spec.history_caputo) {
        dphi = spec.history_caputo;
    } else if (spec.allow_numeric_caputo) {
        const double mesh = spec.h / std::max(1000, 8 * quad.nodes_per_unit);
        const VectorFunc phi = spec.history;
        const double h = spec.h, alpha = spec.alpha;
        const std::size_t n = spec.dim();
        dphi = [phi, alpha, h, mesh, n](double s) {
            // the derivative vanishes at its own lower terminal
            if (s + h <= mesh) return Matrix(n, 1);
            return caputo_of_history_numeric(phi, alpha, h, s, mesh);
        };
    } else {
        throw std::invalid_argument("history Caputo derivative missing and numeric fallback disabled");
    }

    const Matrix a = spec.a;
    const VectorFunc phi = spec.history;
    VectorFunc g = [a, phi, dphi](double s) { return dphi(s) - a * phi(s); };
    return anchor + convolve_with_kernel(qt, spec.h, spec.alpha, t, -spec.h, 0.0, g, quad, cfg);
}

Trajectory solve(const ProblemSpec& spec, double mesh, const QuadratureConfig& quad,
                 const SeriesConfig& cfg) {
    spec.validate();
    quad.validate();
    if (!(mesh > 0.0) || mesh > spec.h / 4.0)
        throw std::invalid_argument("output mesh must satisfy 0 < mesh <= h/4");

    QTable qt = make_problem_qtable(spec, spec.horizon + spec.h);

    Trajectory traj;
    traj.meta = {mesh, quad.nodes_per_unit, cfg.tol};

    // History part: exact phi samples on [-h, 0], 0 included.
    const int kh = std::max(1, static_cast<int>(std::llround(spec.h / mesh)));
    for (int i = 0; i <= kh; ++i) {
        const double t = (i == kh) ? 0.0 : -spec.h + spec.h * i / kh;
        traj.times.push_back(t);
        traj.values.push_back(spec.history(t));
    }

    const double nudge = mesh * 1e-6;
    for (int k = 1;; ++k) {
        double t = k * mesh;
        if (t > spec.horizon * (1.0 + 1e-12)) break;
        const double steps = t / spec.h;
        if (std::abs(steps - std::llround(steps)) < 1e-9) t -= nudge;   // stay left of breakpoints
        Matrix y = history_response(spec, qt, t, quad, cfg) +
                   forced_response(spec, qt, t, quad, cfg, 0.0);
        traj.times.push_back(t);
        traj.values.push_back(std::move(y));
    }
    return traj;
}

Matrix caputo_of_history_numeric(const VectorFunc& phi, double alpha, double h, double s,
                                 double mesh) {
    if (!(h > 0.0)) throw std::invalid_argument("delay must be positive");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha outside (0,1]");
    if (!(mesh > 0.0)) throw std::invalid_argument("mesh must be positive");
    if (!(s > -h && s <= 0.0))
        throw std::invalid_argument("caputo_of_history_numeric needs s in (-h, 0]");
    const int k = std::max(1, static_cast<int>(std::llround((s + h) / mesh)));
    if (s + h < mesh * 0.5)
        throw std::invalid_argument("insufficient samples between -h and s");
    const double tau = (s + h) / k;

    Matrix acc = phi(s) - phi(s - tau);   // m = 1, weight 1
    for (int m = 2; m <= k; ++m) {
        const double c = std::pow(static_cast<double>(m), 1.0 - alpha) -
                         std::pow(static_cast<double>(m - 1), 1.0 - alpha);
        acc += (phi(s - (m - 1) * tau) - phi(s - m * tau)) * c;
    }
    return acc * (std::pow(tau, -alpha) / gamma(2.0 - alpha));
}

} // namespace fdde
