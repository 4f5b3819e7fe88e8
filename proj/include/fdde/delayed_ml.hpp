#ifndef FDDE_DELAYED_ML_HPP
#define FDDE_DELAYED_ML_HPP

#include "fdde/matrix.hpp"
#include "fdde/qtable.hpp"
#include "fdde/special.hpp"

#include <utility>

// Delayed Mittag-Leffler matrix function E_{h,alpha,beta}^B and its
// perturbation X_{h,alpha,beta}^{A,B} built on the Q_k(s) family. Both are
// piecewise power series on the delay intervals ((p-1)h, ph].

namespace fdde {

// Unique p with (p-1) h < t <= p h; 0 for t <= 0. Robust against t sitting
// a few ulps off a breakpoint from upstream arithmetic.
int delay_steps(double t, double h);

// E_{h,alpha,beta}^B(t):
//   Theta                                   for t <= -h,
//   sum_{m=0}^{k} B^m (t-(m-1)h)^{m alpha + beta - 1} / Gamma(m alpha + beta)
//                                           for (k-1)h < t <= kh, k >= 0,
// where the m = 0 term reads (h+t)^{beta-1}/Gamma(beta) I.
Matrix delayed_ml_E(const Matrix& b, double h, double alpha, double beta, double t,
                    const SeriesConfig& cfg = {});

// X_{h,alpha,beta}^{A,B}(t): Theta for t < 0, I at t = 0, and for
// (p-1)h < t <= ph the double series
//   sum_{i>=0} sum_{j=0}^{p-1} Q_{i+1}(jh) (t-jh)^{i alpha + beta - 1} / Gamma(i alpha + beta),
// truncated in i once the largest j-term falls below cfg.tol. The table is
// grown on demand when truncation needs more rows (doubling); it must have
// p_max >= p-1 columns.
Matrix delayed_perturbation_X(QTable& qt, double h, double alpha, double beta, double t,
                              const SeriesConfig& cfg = {});

// Both sides of the commuting reduction at alpha = beta = 1:
//   lhs = X_{h,1,1}^{A,B}(t),  rhs = e^{At} E_{h,1,1}^{B1}(t-h),  B1 = e^{-Ah} B.
// Throws when A and B fail to commute to commute_tol.
std::pair<Matrix, Matrix> reduction_check_commuting(const Matrix& a, const Matrix& b, double h,
                                                    double t, const SeriesConfig& cfg = {},
                                                    double commute_tol = 1e-10);

namespace detail {
// Series branch of X evaluated with an explicit interval index p (j runs to
// p-1); used to check branch consistency at the breakpoints t = ph.
Matrix delayed_perturbation_x_branch(QTable& qt, double h, double alpha, double beta, double t,
                                     int p, const SeriesConfig& cfg);
} // namespace detail

} // namespace fdde

#endif
