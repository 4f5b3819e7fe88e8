#ifndef FDDE_ORACLE_HPP
#define FDDE_ORACLE_HPP

#include "fdde/matrix.hpp"
#include "fdde/solver.hpp"

#include <cstddef>
#include <string>
#include <vector>

// Independent time-stepping reference for the delay system: L1 discretization
// of the Caputo derivative with lower terminal -h, delay handled by method of
// steps (the lagged value is already-computed grid data), A treated
// implicitly. Shares no evaluation machinery with the closed-form path.

namespace fdde {

struct OracleConfig {
    double step = 1e-3;
    std::string scheme = "L1-implicit";
    // step must divide h and be <= h/16
    void validate(double h) const;
};

// Grid solution on t_k = -h + k step up to the horizon. The trajectory holds
// history samples for t <= 0 and the stepped solution beyond. Throws
// std::runtime_error when (c0 I - A) is singular for the scheme's leading
// coefficient c0.
Trajectory oracle_solve(const ProblemSpec& spec, const OracleConfig& cfg);

// L1 Caputo derivative at grid index k of samples on the uniform grid
// starting at -h: (step^-alpha / Gamma(2-alpha)) sum_m c_m (y_{k-m+1} - y_{k-m}).
// Works for any fixed column count (vectors or matrices).
Matrix discrete_caputo(const std::vector<Matrix>& samples, double alpha, double step,
                       std::size_t k);

// Caputo-type differentiation of matrix samples whose branch expansions at
// the breakpoints l h carry the power ladder (i+1) alpha - 1 dictated by the
// delay equation. A plain difference scheme loses O(step^alpha) against the
// (t - lh)^{alpha-1} heads, so those heads are fitted from the samples near
// each breakpoint (least squares against the known exponents), differentiated
// by the exact power rule, and only the smooth remainder goes through the L1
// weights. Samples live on the offset grid t_k = -h + (k + 1/2) step, which
// never touches a breakpoint.
class SingularCaputoDerivative {
public:
    SingularCaputoDerivative(std::vector<Matrix> samples, double h, double alpha, double step,
                             double gamma_cut = 1.2, double fit_window = 0.25);

    double time(std::size_t k) const { return -h_ + (k + 0.5) * step_; }
    std::size_t size() const { return samples_.size(); }
    const Matrix& sample(std::size_t k) const { return samples_[k]; }

    Matrix at(std::size_t k) const;

private:
    std::vector<Matrix> samples_;    // original samples
    std::vector<Matrix> remainder_;  // samples minus fitted singular heads
    std::vector<double> exponents_;
    struct Head {
        double breakpoint;
        std::vector<Matrix> coeff;   // one per exponent
    };
    std::vector<Head> heads_;
    double h_, alpha_, step_;
};

} // namespace fdde

#endif
