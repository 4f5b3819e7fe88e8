#include <doctest.h>

#include "fdde/special.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

using fdde::Matrix;
using fdde::SeriesConfig;

namespace {

// Independent scalar reference: extended-precision forward sum of
// sum_k z^k / Gamma(k alpha + beta), fed by lgammal.
long double ml_scalar_ref(long double z, long double alpha, long double beta, int terms = 300) {
    long double s = 0.0L;
    for (int k = 0; k < terms; ++k) {
        const long double lg = lgammal(k * alpha + beta);
        if (lg > 11300.0L) break;   // term underflows to zero anyway
        s += (z == 0.0L && k > 0 ? 0.0L : powl(z, k) * expl(-lg));
    }
    return s;
}

std::mt19937_64 rng(777);
double uni(double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

} // namespace

TEST_CASE("gamma exact points") {
    CHECK(fdde::gamma(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(fdde::gamma(0.5) == doctest::Approx(1.7724538509055160273).epsilon(1e-15));
    CHECK(fdde::gamma(5.0) == doctest::Approx(24.0).epsilon(1e-15));
    CHECK(fdde::gamma(170.0) == doctest::Approx(std::tgamma(170.0)).epsilon(1e-13));
}

TEST_CASE("gamma against the C library across (0, 170]") {
    double worst = 0.0;
    for (int k = 1; k <= 1700; ++k) {
        const double x = k * 0.1;
        const double mine = fdde::gamma(x);
        const double ref = std::tgamma(x);
        worst = std::max(worst, std::abs(mine - ref) / ref);
    }
    CHECK(worst < 1e-13);
    // a few negative non-integer points through the reflection path
    for (double x : {-0.5, -1.5, -2.3, -7.7}) {
        CHECK(fdde::gamma(x) == doctest::Approx(std::tgamma(x)).epsilon(1e-12));
    }
}

TEST_CASE("gamma domain errors") {
    CHECK_THROWS_AS(fdde::gamma(0.0), std::domain_error);
    CHECK_THROWS_AS(fdde::gamma(-3.0), std::domain_error);
    CHECK_THROWS_AS(fdde::gamma(172.0), std::overflow_error);
}

TEST_CASE("gamma_ratio stays finite far past the overflow threshold") {
    // Gamma(250)/Gamma(250.7) computed via lgamma; compare against mpmath-free
    // identity ratio Gamma(x)/Gamma(x+1) = 1/x at large x
    CHECK(fdde::gamma_ratio(250.0, 1.0) == doctest::Approx(1.0 / 250.0).epsilon(1e-12));
    CHECK(fdde::gamma_ratio(80.0, 0.6) ==
          doctest::Approx(fdde::gamma(80.0) / fdde::gamma(80.6)).epsilon(1e-12));
}

TEST_CASE("ml_matrix trivial branches") {
    // zero matrix, beta = 1: only k = 0 survives, value I
    const Matrix z = fdde::ml_matrix(Matrix::zeros(2, 2), 0.5, 1.0, 7.0);
    CHECK((z - Matrix::identity(2)).max_abs() == 0.0);
    // scalar identity at alpha = beta = 1, t = 1: e
    const Matrix e = fdde::ml_matrix(Matrix{{1.0}}, 1.0, 1.0, 1.0);
    CHECK(e(0, 0) == doctest::Approx(2.718281828459045).epsilon(1e-14));
}

TEST_CASE("ml_matrix scalar case against the extended-precision series") {
    // frozen: sum_k 0.3^k / Gamma((k+1)/2) = 1.0003143534005860
    const Matrix m = fdde::ml_matrix(Matrix{{0.3}}, 0.5, 0.5, 1.0);
    CHECK(m(0, 0) == doctest::Approx(1.0003143534005860).epsilon(1e-13));
    CHECK(m(0, 0) ==
          doctest::Approx(static_cast<double>(ml_scalar_ref(0.3L, 0.5L, 0.5L))).epsilon(1e-13));
}

TEST_CASE("ml_matrix on diagonal matrices matches the scalar series entrywise") {
    for (double alpha : {0.3, 0.6, 1.0}) {
        for (double beta : {0.4, 1.0, 1.7}) {
            Matrix d(3, 3);
            const double lams[3] = {uni(-1.0, 1.0), uni(-1.0, 1.0), uni(-1.0, 1.0)};
            for (int i = 0; i < 3; ++i) d(i, i) = lams[i];
            for (double t : {0.5, 2.0, 4.0}) {
                const Matrix got = fdde::ml_matrix(d, alpha, beta, t);
                for (int i = 0; i < 3; ++i) {
                    const long double want = ml_scalar_ref(
                        static_cast<long double>(lams[i]) * powl(t, alpha), alpha, beta);
                    CHECK(got(i, i) == doctest::Approx(static_cast<double>(want)).epsilon(1e-12));
                }
            }
        }
    }
}

TEST_CASE("ml_matrix at alpha = beta = 1 is the matrix exponential") {
    for (int rep = 0; rep < 8; ++rep) {
        const std::size_t n = 2 + rep % 2;
        Matrix a(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) a(i, j) = uni(-1.0, 1.0);
        const double t = uni(0.1, 5.0 / std::max(1.0, a.one_norm()));
        const Matrix lhs = fdde::ml_matrix(a, 1.0, 1.0, t);
        const Matrix rhs = fdde::mat_exp(a * t);
        CHECK((lhs - rhs).max_abs() < 1e-10);
    }
}

TEST_CASE("monotone truncation: tighter settings move the result within budget") {
    Matrix a(2, 2);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) a(i, j) = uni(-1.0, 1.0);
    const SeriesConfig loose{1e-8, 400};
    const SeriesConfig tight{1e-15, 800};
    for (double t : {0.7, 2.1}) {
        const Matrix x1 = fdde::ml_matrix(a, 0.6, 0.9, t, loose);
        const Matrix x2 = fdde::ml_matrix(a, 0.6, 0.9, t, tight);
        CHECK((x1 - x2).max_abs() <= loose.tol * loose.max_terms);
    }
}

TEST_CASE("ml_matrix non-convergence reports") {
    const SeriesConfig starved{1e-16, 3};
    CHECK_THROWS_AS(fdde::ml_matrix(Matrix{{2.0}}, 0.5, 1.0, 4.0, starved), std::runtime_error);
}
