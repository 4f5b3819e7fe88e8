#include "fdde/oracle.hpp"

#include "fdde/special.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fdde {

void OracleConfig::validate(double h) const {
    if (!(step > 0.0)) throw std::invalid_argument("oracle step must be positive");
    if (step > h / 16.0 + 1e-15) throw std::invalid_argument("oracle step must be <= h/16");
    const double ratio = h / step;
    if (std::abs(ratio - std::llround(ratio)) > 1e-9 * ratio)
        throw std::invalid_argument("oracle step must divide the delay h");
    if (scheme != "L1-implicit") throw std::invalid_argument("unknown oracle scheme " + scheme);
}

Trajectory oracle_solve(const ProblemSpec& spec, const OracleConfig& cfg) {
    spec.validate();
    cfg.validate(spec.h);
    const std::size_t n = spec.dim();
    const double tau = cfg.step;
    const std::size_t nh = static_cast<std::size_t>(std::llround(spec.h / tau));
    const std::size_t ksteps =
        static_cast<std::size_t>(std::floor((spec.horizon + spec.h) / tau + 1e-9));

    // flat storage: y[k*n + r]
    std::vector<double> y((ksteps + 1) * n, 0.0);
    auto tat = [&](std::size_t k) { return -spec.h + static_cast<double>(k) * tau; };
    for (std::size_t k = 0; k <= nh; ++k) {
        const Matrix v = spec.history(std::min(tat(k), 0.0));
        for (std::size_t r = 0; r < n; ++r) y[k * n + r] = v(r, 0);
    }

    // c_m = m^{1-alpha} - (m-1)^{1-alpha}; rho = tau^-alpha / Gamma(2-alpha)
    std::vector<double> c(ksteps + 1, 0.0);
    for (std::size_t m = 1; m <= ksteps; ++m)
        c[m] = std::pow(static_cast<double>(m), 1.0 - spec.alpha) -
               std::pow(static_cast<double>(m - 1), 1.0 - spec.alpha);
    const double rho = std::pow(tau, -spec.alpha) / gamma(2.0 - spec.alpha);

    Matrix lhs = Matrix::identity(n) * rho - spec.a;
    std::vector<double> mem(n), rhs(n);
    for (std::size_t k = nh + 1; k <= ksteps; ++k) {
        // memory sum_{m=2..k} c_m (y_{k-m+1} - y_{k-m})
        std::fill(mem.begin(), mem.end(), 0.0);
        for (std::size_t m = 2; m <= k; ++m) {
            const double cm = c[m];
            const double* hi = &y[(k - m + 1) * n];
            const double* lo = &y[(k - m) * n];
            for (std::size_t r = 0; r < n; ++r) mem[r] += cm * (hi[r] - lo[r]);
        }
        const Matrix fv = spec.forcing(tat(k));
        const double* lag = &y[(k - nh) * n];
        for (std::size_t r = 0; r < n; ++r) {
            double br = 0.0;
            for (std::size_t q = 0; q < n; ++q) br += spec.b(r, q) * lag[q];
            rhs[r] = rho * (y[(k - 1) * n + r] - mem[r]) + br + fv(r, 0);
        }
        Matrix sol;
        try {
            sol = lu_solve(lhs, Matrix::column(rhs));
        } catch (const std::runtime_error&) {
            throw std::runtime_error("oracle step matrix (c0 I - A) is singular at t=" +
                                     std::to_string(tat(k)));
        }
        for (std::size_t r = 0; r < n; ++r) y[k * n + r] = sol(r, 0);
    }

    Trajectory traj;
    traj.meta = {tau, 0, 0.0};
    traj.times.reserve(ksteps + 1);
    traj.values.reserve(ksteps + 1);
    for (std::size_t k = 0; k <= ksteps; ++k) {
        traj.times.push_back(tat(k));
        std::vector<double> v(y.begin() + k * n, y.begin() + (k + 1) * n);
        traj.values.push_back(Matrix::column(v));
    }
    return traj;
}

Matrix discrete_caputo(const std::vector<Matrix>& samples, double alpha, double step,
                       std::size_t k) {
    if (k < 1 || k >= samples.size())
        throw std::out_of_range("discrete_caputo index k=" + std::to_string(k));
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha outside (0,1]");
    if (!(step > 0.0)) throw std::invalid_argument("step must be positive");

    Matrix acc = samples[k] - samples[k - 1];   // m = 1, weight 1
    for (std::size_t m = 2; m <= k; ++m) {
        const double cm = std::pow(static_cast<double>(m), 1.0 - alpha) -
                          std::pow(static_cast<double>(m - 1), 1.0 - alpha);
        acc += (samples[k - m + 1] - samples[k - m]) * cm;
    }
    return acc * (std::pow(step, -alpha) / gamma(2.0 - alpha));
}

SingularCaputoDerivative::SingularCaputoDerivative(std::vector<Matrix> samples, double h,
                                                   double alpha, double step, double gamma_cut,
                                                   double fit_window)
    : samples_(std::move(samples)), h_(h), alpha_(alpha), step_(step) {
    if (samples_.empty()) throw std::invalid_argument("no samples");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("singular differentiation needs alpha in (0,1)");
    const std::size_t n = samples_[0].rows();
    const std::size_t ncols = samples_[0].cols();
    const std::size_t K = samples_.size();

    for (int i = 0;; ++i) {
        const double g = (i + 1) * alpha - 1.0;
        if (g >= gamma_cut) break;
        exponents_.push_back(g);
    }
    bool has_zero = false;
    for (double g : exponents_) has_zero = has_zero || std::abs(g) < 1e-12;
    if (!has_zero) exponents_.push_back(0.0);
    std::sort(exponents_.begin(), exponents_.end());

    // Smooth absorber powers for the local fits; integer powers already on
    // the exponent ladder (e.g. 1.0 when alpha = 0.5) must not reappear.
    std::vector<double> absorbers;
    for (double m : {1.0, 2.0, 3.0}) {
        bool clash = false;
        for (double g : exponents_) clash = clash || std::abs(g - m) < 1e-9;
        if (!clash) absorbers.push_back(m);
    }

    remainder_ = samples_;
    const double t_end = time(K - 1);
    for (int l = 0; l * h <= t_end - fit_window; ++l) {
        const double b = l * h;
        std::vector<std::size_t> rows;
        for (std::size_t k = 0; k < K; ++k) {
            const double x = time(k) - b;
            if (x > 1e-12 && x <= fit_window) rows.push_back(k);
        }
        const std::size_t nexp = exponents_.size();
        const std::size_t ncol = nexp + absorbers.size();
        if (rows.size() < 2 * ncol)
            throw std::invalid_argument("fit window too small for the exponent basis");

        Matrix design(rows.size(), ncol);
        Matrix target(rows.size(), n * ncols);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const double x = time(rows[r]) - b;
            for (std::size_t cidx = 0; cidx < nexp; ++cidx)
                design(r, cidx) = std::pow(x, exponents_[cidx]);
            for (std::size_t m = 0; m < absorbers.size(); ++m)
                design(r, nexp + m) = std::pow(x, absorbers[m]);
            const Matrix& s = remainder_[rows[r]];
            for (std::size_t e = 0; e < n * ncols; ++e) target(r, e) = s.data()[e];
        }
        const Matrix coef = least_squares(design, target);

        Head head;
        head.breakpoint = b;
        for (std::size_t cidx = 0; cidx < nexp; ++cidx) {
            std::vector<double> entries(n * ncols);
            for (std::size_t e = 0; e < n * ncols; ++e) entries[e] = coef(cidx, e);
            head.coeff.emplace_back(n, ncols, std::move(entries));
        }
        // peel this head off everything to its right before the next fit
        for (std::size_t k = 0; k < K; ++k) {
            const double x = time(k) - b;
            if (x <= 0.0) continue;
            for (std::size_t cidx = 0; cidx < nexp; ++cidx)
                remainder_[k] -= head.coeff[cidx] * std::pow(x, exponents_[cidx]);
        }
        heads_.push_back(std::move(head));
    }
}

Matrix SingularCaputoDerivative::at(std::size_t k) const {
    Matrix acc = discrete_caputo(remainder_, alpha_, step_, k);
    const double tk = time(k);
    for (const Head& head : heads_) {
        const double x = tk - head.breakpoint;
        if (x <= 0.0) continue;
        for (std::size_t cidx = 0; cidx < exponents_.size(); ++cidx) {
            const double g = exponents_[cidx];
            const double shifted = g + 1.0 - alpha_;
            // Gamma(g+1)/Gamma(g+1-alpha) vanishes at the Gamma poles
            // (notably g = alpha - 1, the head whose derivative is zero).
            if (shifted <= 0.0 && std::abs(shifted - std::round(shifted)) < 1e-12) continue;
            const double coeff = gamma(g + 1.0) / gamma(shifted);
            acc += head.coeff[cidx] * (coeff * std::pow(x, g - alpha_));
        }
    }
    return acc;
}

} // namespace fdde
