#ifndef FDDE_MATRIX_HPP
#define FDDE_MATRIX_HPP

#include <cstddef>
#include <initializer_list>
#include <vector>

// Dense real matrices at desk scale (n is a handful). Row-major storage,
// value semantics, no views. Entries are checked finite on construction;
// arithmetic trusts its inputs.

namespace fdde {

class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols);                     // zeros
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);
    static Matrix zeros(std::size_t rows, std::size_t cols);
    static Matrix column(const std::vector<double>& v);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }
    bool is_empty() const { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double> to_vector() const { return data_; }          // row-major

    Matrix& operator+=(const Matrix& other);
    Matrix& operator-=(const Matrix& other);
    Matrix& operator*=(double s);

    double max_abs() const;       // max-absolute-entry norm (series cutoffs)
    double one_norm() const;      // max column sum (exp scaling)
    Matrix transpose() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(Matrix a, double s);
Matrix operator*(double s, Matrix a);
Matrix operator*(const Matrix& a, const Matrix& b);   // throws on dim mismatch
Matrix operator-(const Matrix& a);

Matrix mat_mul(const Matrix& a, const Matrix& b);
Matrix mat_pow(const Matrix& a, unsigned k);

// X solving A X = B by LU with partial pivoting; throws std::runtime_error
// when a pivot collapses.
Matrix lu_solve(const Matrix& a, const Matrix& b);

// Scaling-and-squaring Pade(13) matrix exponential.
Matrix mat_exp(const Matrix& a);

// Minimum-residual solution of the overdetermined system D x = y for each
// column of y, via Householder QR on the column-equilibrated matrix.
Matrix least_squares(const Matrix& d, const Matrix& y);

} // namespace fdde

#endif
