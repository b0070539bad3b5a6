#pragma once

#include <cstddef>
#include <vector>

namespace kstab {

/// Eigenvalues of a dense symmetric matrix (row-major, n*n) by cyclic Jacobi
/// rotations, ascending order. Intended for the small dense matrices this
/// library works with.
std::vector<double> jacobi_eigenvalues(std::vector<double> a, std::size_t n,
                                       double tol = 1e-12, int max_sweeps = 64);

}  // namespace kstab
