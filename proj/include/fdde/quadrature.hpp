#ifndef FDDE_QUADRATURE_HPP
#define FDDE_QUADRATURE_HPP

#include <functional>

// Double-exponential (tanh-sinh) quadrature on a finite interval. Copes with
// integrable algebraic endpoint singularities, which is exactly the shape of
// the Beta-type kernels checked by the verification suite.

namespace fdde {

// Integrand receives the distances to the endpoints, x - a and b - x,
// computed without cancellation near the ends.
double tanh_sinh(const std::function<double(double, double)>& f, double a, double b,
                 double rel_tol = 1e-12);

// Convenience wrapper for integrands happy with the plain coordinate.
double tanh_sinh_x(const std::function<double(double)>& f, double a, double b,
                   double rel_tol = 1e-12);

} // namespace fdde

#endif
