#pragma once

#include "kstab/rational.hpp"

namespace kstab {

enum class BumpKind { indicator, trapezoid };

/// Unit bump on [0,1]: either the indicator of [0,1] or its continuous
/// trapezoidal approximation with ramp half-width epsilon. Both integrate
/// to 1 over the real line; the trapezoid vanishes outside (-1/2, 3/2).
class BumpFunction {
public:
    BumpFunction(BumpKind kind, Rational epsilon);

    static BumpFunction indicator() { return BumpFunction(BumpKind::indicator, Rational(1, 4)); }
    static BumpFunction trapezoid(Rational epsilon) {
        return BumpFunction(BumpKind::trapezoid, std::move(epsilon));
    }

    BumpKind kind() const { return kind_; }
    const Rational& epsilon() const { return epsilon_; }

    Rational operator()(const Rational& x) const;
    double operator()(double x) const;

    /// Antiderivative F(x) = integral over (-inf, x], exact.
    Rational antiderivative(const Rational& x) const;

private:
    BumpKind kind_;
    Rational epsilon_;
};

/// ||g - g_eps||_1, which equals epsilon exactly.
Rational bump_l1_distance(const Rational& epsilon);

/// Integral over R^2 of |g(x)g(y) - g_eps(x)g_eps(y)|, exact.
/// Per-cell building block of the kernel distance ||Mbar - Mbar_eps||_1.
Rational bump_product_l1_distance(const Rational& epsilon);

}  // namespace kstab
