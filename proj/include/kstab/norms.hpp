#pragma once

#include "kstab/kernels.hpp"
#include "kstab/matrix.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace kstab {

/// Largest matrix dimension for which the sign-vector enumeration of the
/// (inf,1) norm is offered; 2^23 Gray-code steps, desk-scale seconds.
inline constexpr std::size_t kEnumCap = 24;

struct DimensionCapError : std::runtime_error {
    explicit DimensionCapError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class Flavor { exact, upper_bound, lower_bound };

std::string to_string(Flavor f);

/// One (inf,1)-norm figure: an exact value, or a certified one-sided bound.
/// The witness (a +-1 vector) is present for exact and lower-bound flavors
/// and reproduces the value: ||M w||_1 == value.
struct OpNormValue {
    Rational value;
    Flavor flavor = Flavor::exact;
    std::vector<int> witness;
};

/// Paired L1 / (inf,1) result. When several flavors are present they must
/// bracket each other: lower <= exact <= upper.
struct NormReport {
    Rational l1;
    std::vector<OpNormValue> op_inf1;
};

/// ||M||_1 = sum of absolute entries, exact.
Rational matrix_l1(const SymMatrix& m);

/// ||M v||_1 for a sign vector, exact.
Rational matrix_mv_l1(const SymMatrix& m, const std::vector<int>& v);

/// ||M||_{inf,1} = max over v in {-1,+1}^n of ||M v||_1, by Gray-code
/// enumeration with the first coordinate fixed (v and -v are equivalent).
/// Throws DimensionCapError above the cap.
OpNormValue matrix_opnorm_inf1_exact(const SymMatrix& m, std::size_t cap = kEnumCap);

/// Certified bracket for ||M||_{inf,1} at any dimension: upper bound
/// min(||M||_1, n*sigma_max), lower bound from greedy sign-flip local search
/// with restarts (witness returned). Deterministic for a fixed seed.
NormReport matrix_opnorm_inf1_bounds(const SymMatrix& m, std::uint64_t seed = 20240824,
                                     int restarts = 32);

/// Largest singular value of the symmetric matrix (max |eigenvalue|).
double sigma_max(const SymMatrix& m);

/// ||Mbar||_1 = ||M||_1 (transfer identity for the piecewise constant kernel).
Rational kernel_l1_pwc(const PiecewiseConstantKernel& k);

/// ||Mbar_eps||_1 = ||M||_1: the bump integrates to 1 and term supports are
/// disjoint, so the trapezoid kernel keeps the L1 norm exactly.
Rational kernel_l1_trap(const TrapezoidKernel& k);

/// Exact ||Mbar - Mbar_eps||_1 via closed-form integration of the boundary
/// bands; always within the 4*||M||_1*eps envelope.
Rational kernel_l1_distance_pwc_trap(const SymMatrix& m, const Rational& eps);

/// ||Mbar||_{inf,1} = ||M||_{inf,1} (transfer identity), exact by enumeration.
OpNormValue kernel_opnorm_pwc(const PiecewiseConstantKernel& k, std::size_t cap = kEnumCap);

/// Certified bracket [||M||_{inf,1} - 4||M||_1 eps, ||M||_{inf,1} + 4||M||_1 eps]
/// for ||Mbar_eps||_{inf,1}; lower leg clamped at 0.
NormReport kernel_opnorm_trap_bracket(const TrapezoidKernel& k, std::size_t cap = kEnumCap);

}  // namespace kstab
