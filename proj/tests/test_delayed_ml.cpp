#include <doctest.h>

#include "fdde/delayed_ml.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

using fdde::Matrix;
using fdde::QTable;

namespace {

std::mt19937_64 rng(99);
double uni(double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

Matrix random_matrix(std::size_t n, double scale) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = uni(-scale, scale);
    return m;
}

// Independent scalar reference for the delayed Mittag-Leffler sum, straight
// from the branch formula in extended precision.
long double delayed_ml_scalar_ref(long double b, long double h, long double alpha,
                                  long double beta, long double t) {
    if (t <= -h) return 0.0L;
    int k = 0;
    while (k * h < t) ++k;
    long double s = 0.0L, bp = 1.0L;
    for (int m = 0; m <= k; ++m) {
        s += bp * powl(t - (m - 1) * h, m * alpha + beta - 1.0L) * expl(-lgammal(m * alpha + beta));
        bp *= b;
    }
    return s;
}

} // namespace

TEST_CASE("delay interval index") {
    CHECK(fdde::delay_steps(0.0, 1.0) == 0);
    CHECK(fdde::delay_steps(-3.0, 1.0) == 0);
    CHECK(fdde::delay_steps(0.2, 1.0) == 1);
    CHECK(fdde::delay_steps(1.0, 1.0) == 1);    // right endpoint belongs to the interval
    CHECK(fdde::delay_steps(1.0 + 1e-12, 1.0) == 2);
    CHECK(fdde::delay_steps(2.5, 0.5) == 5);
    CHECK_THROWS_AS(fdde::delay_steps(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("delayed_ml_E branches") {
    const Matrix b = random_matrix(2, 1.0);
    CHECK(fdde::delayed_ml_E(b, 1.0, 0.6, 0.8, -2.0).max_abs() == 0.0);   // t <= -h
    // beta = 1 on (-h, 0]: identically I
    for (double t : {-0.999, -0.5, 0.0})
        CHECK((fdde::delayed_ml_E(b, 1.0, 0.6, 1.0, t) - Matrix::identity(2)).max_abs() == 0.0);
    // hand value: scalar b = 1, alpha = beta = 1, t = 1.5 -> 1 + 1.5 + 0.5^2/2
    const Matrix v = fdde::delayed_ml_E(Matrix{{1.0}}, 1.0, 1.0, 1.0, 1.5);
    CHECK(v(0, 0) == doctest::Approx(2.625).epsilon(1e-15));
}

TEST_CASE("delayed_ml_E against the scalar reference across branches") {
    const double b = 0.7, h = 0.8;
    for (double alpha : {0.4, 1.0}) {
        for (double beta : {0.5, 1.0, 1.3}) {
            for (double t : {-0.3, 0.3, 1.1, 2.2, 3.05}) {
                const Matrix got = fdde::delayed_ml_E(Matrix{{b}}, h, alpha, beta, t);
                const long double want = delayed_ml_scalar_ref(b, h, alpha, beta, t);
                CHECK(got(0, 0) ==
                      doctest::Approx(static_cast<double>(want)).epsilon(1e-13).scale(1.0));
            }
        }
    }
}

TEST_CASE("X trivial branches") {
    const Matrix a = random_matrix(2, 1.0), b = random_matrix(2, 1.0);
    QTable qt(a, b, 8, 4);
    CHECK(fdde::delayed_perturbation_X(qt, 1.0, 0.5, 0.5, -0.5).max_abs() == 0.0);
    CHECK(fdde::delayed_perturbation_X(qt, 1.0, 0.5, 0.5, -3.0).max_abs() == 0.0);
    CHECK((fdde::delayed_perturbation_X(qt, 1.0, 0.5, 0.5, 0.0) - Matrix::identity(2)).max_abs() ==
          0.0);
}

TEST_CASE("zero B collapses to the Mittag-Leffler prefactor form") {
    const Matrix a = random_matrix(2, 0.9);
    QTable qt(a, Matrix::zeros(2, 2), 16, 8);
    for (double beta : {0.5, 1.0}) {
        for (double t : {0.25, 1.3, 2.6, 3.9}) {
            const Matrix lhs = fdde::delayed_perturbation_X(qt, 1.0, 0.6, beta, t);
            const Matrix rhs = fdde::ml_matrix(a, 0.6, beta, t) * std::pow(t, beta - 1.0);
            CHECK((lhs - rhs).max_abs() < 1e-10);
        }
    }
}

TEST_CASE("zero A collapses to the delayed Mittag-Leffler function at t - h") {
    const double h = 1.0;
    const Matrix b = random_matrix(2, 0.9);
    QTable qt(Matrix::zeros(2, 2), b, 24, 8);
    for (double beta : {0.5, 1.0}) {
        for (double t : {0.25, 1.3, 2.6, 3.9}) {
            const Matrix lhs = fdde::delayed_perturbation_X(qt, h, 0.6, beta, t);
            const Matrix rhs = fdde::delayed_ml_E(b, h, 0.6, beta, t - h);
            CHECK((lhs - rhs).max_abs() < 1e-10);
        }
    }
}

TEST_CASE("scalar zero-A example against the independent branch sum") {
    // a = 0, b = 0.5, h = 1, alpha = beta = 0.5, t = 1.25: X(t) = E(t - h)
    QTable qt(Matrix{{0.0}}, Matrix{{0.5}}, 16, 4);
    const Matrix got = fdde::delayed_perturbation_X(qt, 1.0, 0.5, 0.5, 1.25);
    const long double want = delayed_ml_scalar_ref(0.5L, 1.0L, 0.5L, 0.5L, 0.25L);
    CHECK(got(0, 0) == doctest::Approx(static_cast<double>(want)).epsilon(1e-13));
}

TEST_CASE("commuting reduction at alpha = beta = 1") {
    // scalar case pinned by hand
    auto [lhs, rhs] = fdde::reduction_check_commuting(Matrix{{0.3}}, Matrix{{0.2}}, 1.0, 2.5);
    CHECK((lhs - rhs).max_abs() < 1e-10);

    // degenerate corners: A = 0 and B = 0
    auto [l0, r0] = fdde::reduction_check_commuting(Matrix::zeros(2, 2), random_matrix(2, 0.8),
                                                    1.0, 1.7);
    CHECK((l0 - r0).max_abs() < 1e-12);
    const Matrix a = random_matrix(2, 0.8);
    auto [l1, r1] = fdde::reduction_check_commuting(a, Matrix::zeros(2, 2), 1.0, 1.7);
    CHECK((l1 - r1).max_abs() < 1e-11);
    CHECK((l1 - fdde::mat_exp(a * 1.7)).max_abs() < 1e-11);

    // matrix commuting family over a t grid
    const Matrix base = random_matrix(2, 0.7);
    const Matrix bb = base * 0.5 + Matrix::identity(2) * 0.1;
    for (int k = 1; k <= 20; ++k) {
        const double t = 3.0 * k / 20.0 - 1e-4;
        auto [l, r] = fdde::reduction_check_commuting(base, bb, 1.0, t);
        CHECK((l - r).max_abs() < 1e-9);
    }

    const Matrix nc1{{0.0, 1.0}, {0.0, 0.0}};
    const Matrix nc2{{0.0, 0.0}, {1.0, 0.0}};
    CHECK_THROWS_AS(fdde::reduction_check_commuting(nc1, nc2, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("branch formulas agree at the breakpoints for beta >= 1") {
    const Matrix a = random_matrix(2, 0.8), b = random_matrix(2, 0.8);
    QTable qt(a, b, 32, 6);
    for (double beta : {1.0, 1.4}) {
        for (int p = 1; p <= 3; ++p) {
            const double t = p * 1.0;
            const Matrix left = fdde::detail::delayed_perturbation_x_branch(qt, 1.0, 0.6, beta, t,
                                                                            p, {});
            const Matrix right = fdde::detail::delayed_perturbation_x_branch(qt, 1.0, 0.6, beta, t,
                                                                             p + 1, {});
            CHECK((left - right).max_abs() < 1e-9);
        }
    }
}

TEST_CASE("beta = 1 keeps X continuous at zero") {
    const Matrix a = random_matrix(2, 0.8), b = random_matrix(2, 0.8);
    QTable qt(a, b, 16, 4);
    const Matrix near_zero = fdde::delayed_perturbation_X(qt, 1.0, 0.6, 1.0, 1e-10);
    CHECK((near_zero - Matrix::identity(2)).max_abs() < 1e-6);
}

TEST_CASE("breakpoint evaluation with beta < 1 on the wrong branch is the singular case") {
    const Matrix a = random_matrix(2, 0.8), b = random_matrix(2, 0.8);
    QTable qt(a, b, 16, 6);
    CHECK_THROWS_AS(
        fdde::detail::delayed_perturbation_x_branch(qt, 1.0, 0.6, 0.6, 1.0, 2, {}),
        std::domain_error);
}

TEST_CASE("table auto-growth during evaluation matches a fresh table") {
    const Matrix a = random_matrix(2, 1.0), b = random_matrix(2, 1.0);
    QTable lazy(a, b, 2, 4);
    QTable roomy(a, b, 64, 4);
    const Matrix x1 = fdde::delayed_perturbation_X(lazy, 1.0, 0.4, 0.7, 3.5);
    const Matrix x2 = fdde::delayed_perturbation_X(roomy, 1.0, 0.4, 0.7, 3.5);
    CHECK(lazy.i_max() > 2);
    CHECK((x1 - x2).max_abs() == 0.0);
}

TEST_CASE("starved series reports non-convergence") {
    const Matrix a{{2.5}}, b{{1.5}};
    QTable qt(a, b, 64, 8);
    CHECK_THROWS_AS(fdde::delayed_perturbation_X(qt, 1.0, 0.3, 0.7, 4.0, {1e-16, 4}),
                    std::runtime_error);
}
