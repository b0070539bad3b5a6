#include "kstab/bump.hpp"

#include <stdexcept>

namespace kstab {

BumpFunction::BumpFunction(BumpKind kind, Rational epsilon)
    : kind_(kind), epsilon_(std::move(epsilon)) {
    if (kind_ == BumpKind::trapezoid &&
        (epsilon_ <= 0 || epsilon_ >= Rational(1, 2)))
        throw std::invalid_argument("BumpFunction: epsilon must lie in (0, 1/2)");
}

Rational BumpFunction::operator()(const Rational& x) const {
    if (kind_ == BumpKind::indicator)
        return (x >= 0 && x <= 1) ? Rational(1) : Rational(0);
    const Rational& e = epsilon_;
    if (x <= -e || x >= 1 + e) return 0;
    if (x <= e) return Rational(1, 2) + x / (2 * e);
    if (x <= 1 - e) return 1;
    return Rational(1, 2) + (1 - x) / (2 * e);
}

double BumpFunction::operator()(double x) const {
    if (kind_ == BumpKind::indicator) return (x >= 0.0 && x <= 1.0) ? 1.0 : 0.0;
    const double e = to_double(epsilon_);
    if (x <= -e || x >= 1.0 + e) return 0.0;
    if (x <= e) return 0.5 + x / (2.0 * e);
    if (x <= 1.0 - e) return 1.0;
    return 0.5 + (1.0 - x) / (2.0 * e);
}

Rational BumpFunction::antiderivative(const Rational& x) const {
    if (kind_ == BumpKind::indicator) {
        if (x <= 0) return 0;
        if (x >= 1) return 1;
        return x;
    }
    const Rational& e = epsilon_;
    if (x <= -e) return 0;
    if (x >= 1 + e) return 1;
    if (x <= e) return (x + e) / 2 + (x * x - e * e) / (4 * e);
    if (x <= 1 - e) return x;
    return (1 - e) + (x - 1 + e) / 2 + (e * e - (1 - x) * (1 - x)) / (4 * e);
}

Rational bump_l1_distance(const Rational& epsilon) {
    if (epsilon <= 0 || epsilon >= Rational(1, 2))
        throw std::invalid_argument("bump_l1_distance: epsilon out of range");
    // |g - g_eps| is four congruent triangles of area epsilon/4 each.
    return epsilon;
}

Rational bump_product_l1_distance(const Rational& e) {
    if (e <= 0 || e >= Rational(1, 2))
        throw std::invalid_argument("bump_product_l1_distance: epsilon out of range");
    // Split the square into the ramp strips [-e,0)u(1,1+e] (where g = 0) and
    // the core [0,1] (where g = 1, g_eps <= 1). The integrand keeps one sign
    // on each part, so both reduce to products of one-dimensional integrals.
    Rational ge_total = 1;                   // integral of g_eps over R
    Rational ge_outer = e / 2;               // integral of g_eps over the outer ramps
    Rational ge_core = ge_total - ge_outer;  // integral of g_eps over [0,1]
    Rational positive = ge_outer * ge_total + ge_core * ge_outer;
    Rational negative = 1 - ge_core * ge_core;  // core square has area 1
    return positive + negative;
}

}  // namespace kstab
