#ifndef FDDE_SPECIAL_HPP
#define FDDE_SPECIAL_HPP

#include "fdde/matrix.hpp"

// Gamma function and the two-parameter Mittag-Leffler matrix series
//   E_{alpha,beta}(A t^alpha) = sum_k A^k t^{alpha k} / Gamma(k alpha + beta).

namespace fdde {

// Truncation control for all series evaluation. The cutoff norm is the
// max-absolute-entry norm.
struct SeriesConfig {
    double tol = 1e-14;
    int max_terms = 400;
};

// Gamma(x) for real x that is not a nonpositive integer. Lanczos rational
// approximation (N=13, g=6.0246800407767296) with reflection for x < 0.5.
// Throws std::domain_error at poles, std::overflow_error past ~171.62.
double gamma(double x);

// Gamma(x)/Gamma(x + shift) for positive arguments, safe far beyond the
// overflow threshold of gamma itself.
double gamma_ratio(double x, double shift);

// Series factor E_{alpha,beta}(A t^alpha), without the t^{beta-1} prefactor.
// Forward term accumulation; each term is carried as a whole (never the raw
// numerator A^k t^{alpha k}), so large k does not overflow. Stops once the
// term norm drops below cfg.tol with at least two terms summed; throws
// std::runtime_error when cfg.max_terms is exhausted first.
Matrix ml_matrix(const Matrix& a, double alpha, double beta, double t, const SeriesConfig& cfg = {});

} // namespace fdde

#endif
