#pragma once

#include "kstab/kernels.hpp"
#include "kstab/matrix.hpp"

#include <cstdint>
#include <vector>

namespace kstab {

struct PsdCheck {
    bool pass = false;
    double min_eigenvalue = 0.0;
    bool exact_certificate = false;  // V factor present: PSD holds exactly
};

/// Pass iff the smallest eigenvalue is >= -tol (Jacobi iteration). A V factor
/// on M is an exact certificate and passes unconditionally.
PsdCheck check_psd_matrix(const SymMatrix& m, double tol = 1e-8);

/// Gram matrix of kernel evaluations at sample points.
struct GramSample {
    std::vector<double> points;
    std::vector<double> gram;  // row-major, symmetric by construction
    double min_eigenvalue = 0.0;
    bool pass = false;
};

/// Builds the Gram matrix at the given distinct points and checks its
/// smallest eigenvalue against -tol. Throws on duplicate points.
GramSample gram_check(const Kernel& k, const std::vector<double>& points, double tol = 1e-8);

struct ProbeReport {
    double max_symmetry_defect = 0.0;   // max |K(x,y) - K(y,x)|, exact path
    double max_difference_quotient = 0.0;
    double lipschitz_bound = 0.0;       // analytic bound when available, else 0
    bool symmetric = false;
    bool within_lipschitz_bound = false;
};

/// Randomized symmetry and continuity probe over the kernel support.
/// Falsification tool: a failed probe disproves the property, a passed one
/// does not prove it.
ProbeReport symmetry_continuity_probe(const Kernel& k, std::size_t samples, double delta,
                                      std::uint64_t seed = 20240824);

}  // namespace kstab
