#ifndef FDDE_VERIFY_HPP
#define FDDE_VERIFY_HPP

#include "fdde/config.hpp"

#include <string>
#include <vector>

// One-shot verification battery: structural identities of the Q family, the
// reduction identities of the delayed perturbation function, the Beta-type
// kernel integral, the fundamental-matrix residual, and closed-form versus
// time-stepped solutions, run on the configured problem plus seeded built-in
// cases. Never throws on a math failure; failures land in the report.

namespace fdde {

struct CheckResult {
    std::string name;
    std::string status;   // "pass" | "fail" | "skip"
    double measured = 0.0;
    double tolerance = 0.0;
    std::string note;
};

struct VerifyReport {
    unsigned long seed = 0;
    std::vector<CheckResult> checks;
    bool all_passed(bool strict = false) const;
    std::string render() const;   // deterministic text table
};

VerifyReport run_verification(const RunConfig& cfg);

// Exact scalar solution of y' = a y + b y(t-h) + fc with affine history
// c0 + c1 t, by method of steps with per-interval (polynomial e^{a tau} +
// polynomial) coefficients; the alpha = 1 reference.
double exact_scalar_dde(double a, double b, double h, double c0, double c1, double fc, double t);

} // namespace fdde

#endif
