#include "fdde/delayed_ml.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace fdde {

int delay_steps(double t, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("delay must be positive");
    if (t <= 0.0) return 0;
    int p = static_cast<int>(std::ceil(t / h));
    while ((p - 1) * h >= t) --p;
    while (p * h < t) ++p;
    return p;
}

namespace {

// (base)^e with the breakpoint guard: a zero base under a negative exponent
// is the singular configuration the half-open branches exclude.
double checked_pow(double base, double e) {
    if (base < 0.0) throw std::domain_error("negative power base in delayed series");
    if (base == 0.0 && e < 0.0)
        throw std::domain_error("singular breakpoint evaluation: 0 raised to " + std::to_string(e));
    return std::pow(base, e);
}

} // namespace

Matrix delayed_ml_E(const Matrix& b, double h, double alpha, double beta, double t,
                    const SeriesConfig& cfg) {
    (void)cfg;   // the sum per branch is finite; nothing to truncate
    if (!b.is_square()) throw std::invalid_argument("delayed_ml_E needs a square matrix");
    if (!(h > 0.0)) throw std::invalid_argument("delay must be positive");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha outside (0,1]");
    if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");

    const std::size_t n = b.rows();
    if (t <= -h) return Matrix::zeros(n, n);
    const int k = delay_steps(t, h);
    Matrix sum(n, n);
    Matrix bpow = Matrix::identity(n);
    for (int m = 0; m <= k; ++m) {
        const double e = m * alpha + beta - 1.0;
        const double c = checked_pow(t - (m - 1) * h, e) / gamma(m * alpha + beta);
        sum += bpow * c;
        if (m < k) bpow = bpow * b;
    }
    return sum;
}

namespace detail {

Matrix delayed_perturbation_x_branch(QTable& qt, double h, double alpha, double beta, double t,
                                     int p, const SeriesConfig& cfg) {
    const std::size_t n = qt.dim();
    if (p - 1 > qt.p_max())
        throw std::invalid_argument("QTable has p_max=" + std::to_string(qt.p_max()) +
                                    ", need >= " + std::to_string(p - 1));
    // Per-column coefficients c_{i,j} = (t-jh)^{i alpha + beta - 1} / Gamma(i alpha + beta),
    // advanced by ratio so neither power nor Gamma overflows on its own.
    std::vector<double> coeff(p);
    for (int j = 0; j < p; ++j)
        coeff[j] = checked_pow(t - j * h, beta - 1.0) / gamma(beta);

    Matrix sum(n, n);
    const int min_i = std::max(1, p - 1);   // cover every column: Q_{i+1}(jh) = Theta for i < j
    for (int i = 0; i <= cfg.max_terms; ++i) {
        if (i > qt.i_max()) qt.grow_rows(std::max(2 * qt.i_max(), 8));
        double largest = 0.0;
        for (int j = 0; j < p; ++j) {
            const Matrix& q = qt.cell(i, j);
            if (j > i) break;
            Matrix term = q * coeff[j];
            largest = std::max(largest, term.max_abs());
            sum += term;
        }
        if (i >= min_i && largest < cfg.tol) return sum;
        const double x = i * alpha + beta;
        const double r = gamma_ratio(x, alpha);
        for (int j = 0; j < p; ++j) coeff[j] *= std::pow(t - j * h, alpha) * r;
    }
    throw std::runtime_error("delayed perturbation series did not converge within max_terms=" +
                             std::to_string(cfg.max_terms));
}

} // namespace detail

Matrix delayed_perturbation_X(QTable& qt, double h, double alpha, double beta, double t,
                              const SeriesConfig& cfg) {
    if (!(h > 0.0)) throw std::invalid_argument("delay must be positive");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha outside (0,1]");
    if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
    const std::size_t n = qt.dim();
    if (t < 0.0) return Matrix::zeros(n, n);
    if (t == 0.0) return Matrix::identity(n);
    return detail::delayed_perturbation_x_branch(qt, h, alpha, beta, t, delay_steps(t, h), cfg);
}

std::pair<Matrix, Matrix> reduction_check_commuting(const Matrix& a, const Matrix& b, double h,
                                                    double t, const SeriesConfig& cfg,
                                                    double commute_tol) {
    if (!a.is_square() || !b.is_square() || a.rows() != b.rows())
        throw std::invalid_argument("commuting reduction needs square A, B of equal dimension");
    if ((a * b - b * a).max_abs() > commute_tol)
        throw std::invalid_argument("A and B do not commute to tolerance");
    if (!(t > 0.0)) throw std::invalid_argument("commuting reduction needs t > 0");

    QTable qt(a, b, std::max(16, 2 * delay_steps(t, h)), std::max(0, delay_steps(t, h) - 1));
    Matrix lhs = delayed_perturbation_X(qt, h, 1.0, 1.0, t, cfg);
    const Matrix b1 = mat_exp(a * (-h)) * b;
    Matrix rhs = mat_exp(a * t) * delayed_ml_E(b1, h, 1.0, 1.0, t - h, cfg);
    return {std::move(lhs), std::move(rhs)};
}

} // namespace fdde
