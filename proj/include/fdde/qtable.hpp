#ifndef FDDE_QTABLE_HPP
#define FDDE_QTABLE_HPP

#include "fdde/matrix.hpp"

#include <vector>

// The matrix family Q_{k}(s) generated by a pair (A, B):
//
//   Q_{k+1}(s) = A Q_k(s) + B Q_k(s - h),
//   Q_0(s) = Theta,  Q_k(-h) = Theta,  Q_1(0) = I,
//
// a noncommutative two-variable analogue of the binomial triangle. Only the
// grid values s = j h matter and the recursion never involves h itself, so
// cells are indexed by the integer j. cell(i, j) holds Q_{i+1}(j h).

namespace fdde {

class QTable {
public:
    QTable(Matrix a, Matrix b, int i_max, int p_max);

    // Q_{i+1}(j h); returns the zero matrix for j > i or j > p_max.
    const Matrix& cell(int i, int j) const;

    int i_max() const { return i_max_; }
    int p_max() const { return p_max_; }
    std::size_t dim() const { return a_.rows(); }
    const Matrix& a() const { return a_; }
    const Matrix& b() const { return b_; }

    // Extend rows so that indices up to new_i_max are available. Existing
    // cells are untouched; not safe to call concurrently with readers.
    void grow_rows(int new_i_max);

private:
    Matrix a_, b_, zero_;
    int i_max_, p_max_;
    std::vector<Matrix> cells_;   // (i_max+1) x (p_max+1), row-major

    Matrix& at(int i, int j) { return cells_[static_cast<std::size_t>(i) * (p_max_ + 1) + j]; }
    void fill_row(int i);
};

// Closed form C(i,j) A^{i-j} B^j valid when A and B commute; throws
// std::invalid_argument when ||AB - BA|| exceeds commute_tol.
Matrix qtable_commuting_closed_form(const Matrix& a, const Matrix& b, int i, int j,
                                    double commute_tol = 1e-12);

} // namespace fdde

#endif
