#include "fdde/qtable.hpp"

#include <stdexcept>
#include <string>

namespace fdde {

QTable::QTable(Matrix a, Matrix b, int i_max, int p_max)
    : a_(std::move(a)), b_(std::move(b)), i_max_(i_max), p_max_(p_max) {
    if (!a_.is_square() || !b_.is_square() || a_.rows() != b_.rows())
        throw std::invalid_argument("QTable needs square A, B of equal dimension");
    if (i_max < 0 || p_max < 0) throw std::invalid_argument("QTable needs i_max, p_max >= 0");
    zero_ = Matrix::zeros(a_.rows(), a_.rows());
    cells_.assign(static_cast<std::size_t>(i_max_ + 1) * (p_max_ + 1), zero_);
    at(0, 0) = Matrix::identity(a_.rows());   // Q_1(0) = I, rest of row stays Theta
    for (int i = 1; i <= i_max_; ++i) fill_row(i);
}

void QTable::fill_row(int i) {
    for (int j = 0; j <= p_max_; ++j) {
        if (j > i) break;                      // Q_{i+1}(j h) = Theta beyond the diagonal
        Matrix v = a_ * at(i - 1, j);
        if (j >= 1) v += b_ * at(i - 1, j - 1);
        at(i, j) = std::move(v);
    }
}

const Matrix& QTable::cell(int i, int j) const {
    if (i < 0 || i > i_max_) throw std::out_of_range("QTable row " + std::to_string(i));
    if (j < 0 || j > i) return zero_;
    if (j > p_max_)   // structurally nonzero but outside storage: refuse to guess
        throw std::out_of_range("QTable column " + std::to_string(j) + " exceeds p_max " +
                                std::to_string(p_max_));
    return cells_[static_cast<std::size_t>(i) * (p_max_ + 1) + j];
}

void QTable::grow_rows(int new_i_max) {
    if (new_i_max <= i_max_) return;
    cells_.resize(static_cast<std::size_t>(new_i_max + 1) * (p_max_ + 1), zero_);
    const int old = i_max_;
    i_max_ = new_i_max;
    for (int i = old + 1; i <= new_i_max; ++i) fill_row(i);
}

Matrix qtable_commuting_closed_form(const Matrix& a, const Matrix& b, int i, int j,
                                    double commute_tol) {
    if (!a.is_square() || !b.is_square() || a.rows() != b.rows())
        throw std::invalid_argument("closed form needs square A, B of equal dimension");
    if (i < 0 || j < 0 || j > i) throw std::invalid_argument("closed form needs 0 <= j <= i");
    if ((a * b - b * a).max_abs() > commute_tol)
        throw std::invalid_argument("A and B do not commute to tolerance");
    double binom = 1.0;
    for (int k = 1; k <= j; ++k) binom *= static_cast<double>(i - j + k) / k;
    return binom * (mat_pow(a, static_cast<unsigned>(i - j)) * mat_pow(b, static_cast<unsigned>(j)));
}

} // namespace fdde
