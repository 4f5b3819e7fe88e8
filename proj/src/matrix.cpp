#include "fdde/matrix.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace fdde {

namespace {

void check_finite(const std::vector<double>& v) {
    for (double x : v) {
        if (!std::isfinite(x)) throw std::invalid_argument("matrix entry not finite");
    }
}

void check_same_shape(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("matrix shape mismatch: " + std::to_string(a.rows()) + "x" +
                                    std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                                    "x" + std::to_string(b.cols()));
}

} // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {
    if (rows == 0 || cols == 0) throw std::invalid_argument("matrix dimensions must be positive");
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (rows == 0 || cols == 0) throw std::invalid_argument("matrix dimensions must be positive");
    if (data_.size() != rows * cols)
        throw std::invalid_argument("entry count does not match dimensions");
    check_finite(data_);
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    if (rows_ == 0) throw std::invalid_argument("matrix dimensions must be positive");
    cols_ = rows.begin()->size();
    if (cols_ == 0) throw std::invalid_argument("matrix dimensions must be positive");
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw std::invalid_argument("ragged initializer");
        data_.insert(data_.end(), r.begin(), r.end());
    }
    check_finite(data_);
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::zeros(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }

Matrix Matrix::column(const std::vector<double>& v) {
    return Matrix(v.size(), 1, v);
}

Matrix& Matrix::operator+=(const Matrix& other) {
    check_same_shape(*this, other);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
    check_same_shape(*this, other);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

Matrix& Matrix::operator*=(double s) {
    for (double& x : data_) x *= s;
    return *this;
}

double Matrix::max_abs() const {
    double m = 0.0;
    for (double x : data_) m = std::max(m, std::abs(x));
    return m;
}

double Matrix::one_norm() const {
    double m = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < rows_; ++i) s += std::abs((*this)(i, j));
        m = std::max(m, s);
    }
    return m;
}

Matrix Matrix::transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(Matrix a, double s) { return a *= s; }
Matrix operator*(double s, Matrix a) { return a *= s; }

Matrix operator-(const Matrix& a) {
    Matrix r = a;
    return r *= -1.0;
}

Matrix operator*(const Matrix& a, const Matrix& b) { return mat_mul(a, b); }

Matrix mat_mul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows())
        throw std::invalid_argument("matrix product dimension mismatch: " +
                                    std::to_string(a.cols()) + " vs " + std::to_string(b.rows()));
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

Matrix mat_pow(const Matrix& a, unsigned k) {
    if (!a.is_square()) throw std::invalid_argument("mat_pow needs a square matrix");
    Matrix r = Matrix::identity(a.rows());
    Matrix base = a;
    while (k > 0) {
        if (k & 1u) r = r * base;
        k >>= 1u;
        if (k > 0) base = base * base;
    }
    return r;
}

Matrix lu_solve(const Matrix& a, const Matrix& b) {
    if (!a.is_square()) throw std::invalid_argument("lu_solve needs a square matrix");
    if (a.rows() != b.rows()) throw std::invalid_argument("lu_solve right-hand side mismatch");
    const std::size_t n = a.rows();
    Matrix lu = a;
    Matrix x = b;
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        double best = std::abs(lu(col, col));
        for (std::size_t i = col + 1; i < n; ++i) {
            const double v = std::abs(lu(i, col));
            if (v > best) { best = v; piv = i; }
        }
        if (!(best > 0.0) || !std::isfinite(best))
            throw std::runtime_error("singular linear system in lu_solve");
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu(col, j), lu(piv, j));
            for (std::size_t j = 0; j < x.cols(); ++j) std::swap(x(col, j), x(piv, j));
        }
        for (std::size_t i = col + 1; i < n; ++i) {
            const double f = lu(i, col) / lu(col, col);
            lu(i, col) = f;
            for (std::size_t j = col + 1; j < n; ++j) lu(i, j) -= f * lu(col, j);
            for (std::size_t j = 0; j < x.cols(); ++j) x(i, j) -= f * x(col, j);
        }
    }
    for (std::size_t col = n; col-- > 0;) {
        for (std::size_t j = 0; j < x.cols(); ++j) {
            double s = x(col, j);
            for (std::size_t k = col + 1; k < n; ++k) s -= lu(col, k) * x(k, j);
            x(col, j) = s / lu(col, col);
        }
    }
    return x;
}

Matrix mat_exp(const Matrix& a) {
    if (!a.is_square()) throw std::invalid_argument("mat_exp needs a square matrix");
    const std::size_t n = a.rows();
    // Pade(13) coefficients (Higham 2005).
    static const double b[14] = {
        64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
        129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
        1323241920.0,        40840800.0,          960960.0,           16380.0,
        182.0,               1.0};
    const double theta13 = 5.371920351148152;

    const double norm = a.one_norm();
    int squarings = 0;
    Matrix as = a;
    if (norm > theta13) {
        squarings = static_cast<int>(std::ceil(std::log2(norm / theta13)));
        as *= std::ldexp(1.0, -squarings);
    }

    const Matrix a2 = as * as;
    const Matrix a4 = a2 * a2;
    const Matrix a6 = a2 * a4;
    const Matrix eye = Matrix::identity(n);

    Matrix u = as * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) +
                     b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * eye);
    Matrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) +
               b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * eye;

    Matrix r = lu_solve(v - u, v + u);
    for (int s = 0; s < squarings; ++s) r = r * r;
    return r;
}

Matrix least_squares(const Matrix& d, const Matrix& y) {
    if (d.rows() != y.rows()) throw std::invalid_argument("least_squares shape mismatch");
    if (d.rows() < d.cols()) throw std::invalid_argument("least_squares needs rows >= cols");
    const std::size_t m = d.rows(), n = d.cols(), p = y.cols();

    // Equilibrate columns, then Householder QR in place.
    Matrix q = d;
    std::vector<double> scale(n, 1.0);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += q(i, j) * q(i, j);
        s = std::sqrt(s);
        if (s > 0.0) {
            scale[j] = s;
            for (std::size_t i = 0; i < m; ++i) q(i, j) /= s;
        }
    }
    Matrix rhs = y;
    for (std::size_t j = 0; j < n; ++j) {
        double alpha = 0.0;
        for (std::size_t i = j; i < m; ++i) alpha += q(i, j) * q(i, j);
        alpha = std::sqrt(alpha);
        if (alpha == 0.0) throw std::runtime_error("rank-deficient least squares system");
        if (q(j, j) > 0.0) alpha = -alpha;
        std::vector<double> v(m, 0.0);
        for (std::size_t i = j; i < m; ++i) v[i] = q(i, j);
        v[j] -= alpha;
        double vnorm2 = 0.0;
        for (std::size_t i = j; i < m; ++i) vnorm2 += v[i] * v[i];
        if (vnorm2 == 0.0) continue;
        auto reflect = [&](Matrix& mat, std::size_t wide) {
            for (std::size_t c = 0; c < wide; ++c) {
                double dot = 0.0;
                for (std::size_t i = j; i < m; ++i) dot += v[i] * mat(i, c);
                const double f = 2.0 * dot / vnorm2;
                for (std::size_t i = j; i < m; ++i) mat(i, c) -= f * v[i];
            }
        };
        reflect(q, n);
        reflect(rhs, p);
        q(j, j) = alpha;   // clean up rounding below the diagonal
        for (std::size_t i = j + 1; i < m; ++i) q(i, j) = 0.0;
    }
    Matrix x(n, p);
    for (std::size_t col = n; col-- > 0;) {
        for (std::size_t c = 0; c < p; ++c) {
            double s = rhs(col, c);
            for (std::size_t k = col + 1; k < n; ++k) s -= q(col, k) * x(k, c);
            x(col, c) = s / q(col, col);
        }
    }
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t c = 0; c < p; ++c) x(j, c) /= scale[j];
    return x;
}

} // namespace fdde
