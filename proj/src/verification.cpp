#include "kstab/verification.hpp"

#include "kstab/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace kstab {

PsdCheck check_psd_matrix(const SymMatrix& m, double tol) {
    PsdCheck out;
    const std::size_t n = m.dim();
    std::vector<double> a(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i * n + j] = to_double(m.at(i, j));
    auto eig = jacobi_eigenvalues(std::move(a), n, 1e-10);
    out.min_eigenvalue = eig.empty() ? 0.0 : eig.front();
    if (m.has_factor()) {
        out.exact_certificate = true;  // M = V V^T holds entrywise
        out.pass = true;
    } else {
        out.pass = out.min_eigenvalue >= -tol;
    }
    return out;
}

GramSample gram_check(const Kernel& k, const std::vector<double>& points, double tol) {
    if (points.empty()) throw std::invalid_argument("gram_check: need at least one point");
    std::vector<double> sorted = points;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("gram_check: duplicate points");

    GramSample s;
    s.points = points;
    const std::size_t n = points.size();
    s.gram.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            double v = k.eval(points[i], points[j]);
            s.gram[i * n + j] = v;
            s.gram[j * n + i] = v;
        }
    auto eig = jacobi_eigenvalues(s.gram, n, 1e-12);
    s.min_eigenvalue = eig.front();
    s.pass = s.min_eigenvalue >= -tol;
    return s;
}

ProbeReport symmetry_continuity_probe(const Kernel& k, std::size_t samples, double delta,
                                      std::uint64_t seed) {
    if (delta <= 0) throw std::invalid_argument("symmetry_continuity_probe: delta must be > 0");
    double lo = 0.0, hi = 1.0;
    if (k.bounded_support()) {
        Interval s = k.support();
        lo = std::max(0.0, to_double(s.lo) - 1.0);
        hi = to_double(s.hi) + 1.0;
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);

    ProbeReport r;
    if (auto* trap = dynamic_cast<const TrapezoidKernel*>(&k))
        r.lipschitz_bound = to_double(trap->lipschitz_bound());
    for (std::size_t i = 0; i < samples; ++i) {
        double x = dist(rng), y = dist(rng);
        // symmetry on the exact path so that a zero defect means equality
        Rational defect = rat_abs(k(Rational(x), Rational(y)) - k(Rational(y), Rational(x)));
        r.max_symmetry_defect = std::max(r.max_symmetry_defect, to_double(defect));
        double q = std::abs(k.eval(x + delta, y) - k.eval(x, y)) / delta;
        r.max_difference_quotient = std::max(r.max_difference_quotient, q);
    }
    r.symmetric = r.max_symmetry_defect == 0.0;
    r.within_lipschitz_bound =
        r.lipschitz_bound == 0.0 || r.max_difference_quotient <= r.lipschitz_bound * (1 + 1e-12);
    return r;
}

}  // namespace kstab
