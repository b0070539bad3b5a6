#pragma once

#include "kstab/kernels.hpp"
#include "kstab/norms.hpp"

#include <optional>
#include <string>
#include <vector>

namespace kstab {

/// Piecewise constant input with sup norm at most 1, supported on a finite
/// interval. Segment i covers [breakpoints[i], breakpoints[i+1]); the input
/// is zero outside [front, back].
class BoundedInput {
public:
    BoundedInput(std::vector<Rational> breakpoints, std::vector<Rational> values);

    static BoundedInput constant(const Rational& value, const Rational& lo, const Rational& hi);

    const std::vector<Rational>& breakpoints() const { return breaks_; }
    const std::vector<Rational>& values() const { return values_; }
    std::size_t segments() const { return values_.size(); }

    const Rational& domain_begin() const { return breaks_.front(); }
    const Rational& domain_end() const { return breaks_.back(); }

    Rational operator()(const Rational& x) const;
    double eval(double x) const;

    /// Exact integral of u over [a, b].
    Rational integrate(const Rational& a, const Rational& b) const;

    /// Replaces the value of segment i; throws if |v| > 1.
    void set_value(std::size_t i, const Rational& v);

private:
    std::vector<Rational> breaks_;
    std::vector<Rational> values_;
};

struct OperatorOutput {
    enum class Method { exact_piecewise, quadrature };

    std::vector<Rational> grid;
    std::vector<Rational> values;       // z(x) at grid points
    Rational l1;                        // exact for exact_piecewise, estimate otherwise
    Method method = Method::exact_piecewise;
    bool quadrature_warning = false;    // set when quadrature was a fallback
};

/// Default sample grid: kernel support padded by 1, fixed step (1/8 default).
std::vector<Rational> make_grid(const Kernel& k, const Rational& step = Rational(1, 8));

/// Applies the kernel operator z = Ku. For the kernels of this library with
/// piecewise-constant inputs the integrals are closed-form and l1 is exact;
/// anything else falls back to panel-aligned Gauss-Legendre quadrature.
OperatorOutput apply_operator(const Kernel& k, const BoundedInput& u,
                              const std::vector<Rational>& grid,
                              bool force_quadrature = false);

/// Segment integrals u_bar(k) = integral of u over [2k-1, 2k], k = 1..n.
/// Throws if u is supported outside [0, 2n].
std::vector<Rational> reduce_input(const BoundedInput& u, std::size_t n);

struct SearchResult {
    Rational lower_bound;
    BoundedInput witness;
    std::vector<Rational> history;  // best value after each accepted step
};

/// Coordinate ascent over sign patterns of a piecewise-constant input at the
/// given resolution; the result is a certified lower bound on ||K||_{inf,1}.
/// Deterministic; initialized from the matrix witness when available.
SearchResult adversarial_search(const Kernel& k, const Rational& resolution,
                                std::size_t budget = 10000);

enum class Verdict { stable_and_l1, stable_not_l1, undetermined };

std::string to_string(Verdict v);

/// Evidence about ||K||_1: either an exact finite value or a certified
/// divergent lower-bound series (with its value at the evaluation horizon).
struct L1Evidence {
    std::optional<Rational> finite_value;
    bool divergent_certified = false;
    double divergence_lower = 0.0;
};

struct VerdictRecord {
    Verdict verdict = Verdict::undetermined;
    std::string reason;
};

/// Stability is judged through the operator norm: a certified finite upper
/// bound (or exact value) means BIBO stable. Combined with the L1 evidence
/// this yields the final classification.
VerdictRecord stability_verdict(const L1Evidence& l1, const NormReport& op);

}  // namespace kstab
