#include "kstab/norms.hpp"

#include "kstab/bump.hpp"
#include "kstab/jacobi.hpp"

#include <bit>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace kstab {

std::string to_string(Flavor f) {
    switch (f) {
        case Flavor::exact: return "exact";
        case Flavor::upper_bound: return "upper_bound";
        case Flavor::lower_bound: return "lower_bound";
    }
    return "?";
}

Rational matrix_l1(const SymMatrix& m) {
    Rational s = 0;
    for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t j = 0; j < m.dim(); ++j) s += rat_abs(m.at(i, j));
    return s;
}

Rational matrix_mv_l1(const SymMatrix& m, const std::vector<int>& v) {
    if (v.size() != m.dim()) throw std::invalid_argument("matrix_mv_l1: size mismatch");
    Rational total = 0;
    for (std::size_t i = 0; i < m.dim(); ++i) {
        Rational row = 0;
        for (std::size_t j = 0; j < m.dim(); ++j) row += m.at(i, j) * v[j];
        total += rat_abs(row);
    }
    return total;
}

namespace {

// Gray-code scan over sign vectors with v[0] fixed to +1. cols is the
// integer-scaled matrix stored column-major.
template <class Int>
std::pair<Int, std::vector<int>> scan_signs(const std::vector<std::vector<Int>>& cols) {
    const std::size_t n = cols.size();
    std::vector<Int> w(n, Int(0));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) w[i] += cols[j][i];
    auto abs_sum = [&] {
        Int s(0);
        for (const Int& x : w) s += x < 0 ? Int(-x) : x;
        return s;
    };
    std::vector<int> v(n, 1), best_v = v;
    Int best = abs_sum();
    const std::uint64_t total = n >= 1 ? (std::uint64_t{1} << (n - 1)) : 1;
    for (std::uint64_t g = 1; g < total; ++g) {
        std::size_t j = static_cast<std::size_t>(std::countr_zero(g)) + 1;
        v[j] = -v[j];
        Int d(2 * v[j]);
        for (std::size_t i = 0; i < n; ++i) w[i] += d * cols[j][i];
        Int s = abs_sum();
        if (s > best) {
            best = std::move(s);
            best_v = v;
        }
    }
    return {std::move(best), std::move(best_v)};
}

BigInt lcm_denominators(const SymMatrix& m) {
    BigInt l = 1;
    for (std::size_t i = 0; i < m.dim(); ++i)
        for (std::size_t j = 0; j < m.dim(); ++j)
            l = boost::multiprecision::lcm(l, denominator(m.at(i, j)));
    return l;
}

}  // namespace

OpNormValue matrix_opnorm_inf1_exact(const SymMatrix& m, std::size_t cap) {
    const std::size_t n = m.dim();
    if (n > cap)
        throw DimensionCapError("matrix_opnorm_inf1_exact: dimension " + std::to_string(n) +
                                " exceeds enumeration cap " + std::to_string(cap) +
                                "; use matrix_opnorm_inf1_bounds");
    const BigInt scale = lcm_denominators(m);
    std::vector<std::vector<BigInt>> cols(n, std::vector<BigInt>(n));
    BigInt row_bound = 0;
    for (std::size_t i = 0; i < n; ++i) {
        BigInt rb = 0;
        for (std::size_t j = 0; j < n; ++j) {
            cols[j][i] = numerator(m.at(i, j)) * (scale / denominator(m.at(i, j)));
            rb += boost::multiprecision::abs(cols[j][i]);
        }
        row_bound = std::max(row_bound, rb);
    }
    // int64 fast path when no intermediate can overflow
    const BigInt limit = BigInt(std::numeric_limits<std::int64_t>::max()) / (2 * BigInt(n + 1));
    OpNormValue out;
    if (row_bound <= limit) {
        std::vector<std::vector<std::int64_t>> icols(n, std::vector<std::int64_t>(n));
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i)
                icols[j][i] = cols[j][i].convert_to<std::int64_t>();
        auto [best, v] = scan_signs<std::int64_t>(icols);
        out.value = Rational(BigInt(best), scale);
        out.witness = std::move(v);
    } else {
        auto [best, v] = scan_signs<BigInt>(cols);
        out.value = Rational(best, scale);
        out.witness = std::move(v);
    }
    out.flavor = Flavor::exact;
    return out;
}

double sigma_max(const SymMatrix& m) {
    const std::size_t n = m.dim();
    std::vector<double> a(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a[i * n + j] = to_double(m.at(i, j));
    auto eig = jacobi_eigenvalues(std::move(a), n, 1e-10);
    double s = 0.0;
    for (double e : eig) s = std::max(s, std::abs(e));
    return s;
}

NormReport matrix_opnorm_inf1_bounds(const SymMatrix& m, std::uint64_t seed, int restarts) {
    const std::size_t n = m.dim();
    NormReport report;
    report.l1 = matrix_l1(m);

    // Upper bound: ||Mv||_1 <= sqrt(n) ||Mv||_2 <= sqrt(n) sigma_max sqrt(n).
    double smax = sigma_max(m) * (1.0 + 1e-8) + 1e-12;
    Rational upper = std::min(report.l1, Rational(static_cast<double>(n) * smax));

    // Lower bound: steepest single-flip ascent in floating point, exact
    // re-evaluation of the best witness.
    std::vector<double> md(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) md[i * n + j] = to_double(m.at(i, j));
    std::mt19937_64 rng(seed);
    std::vector<int> best_v(n, 1);
    double best_f = -1.0;
    for (int r = 0; r < restarts; ++r) {
        std::vector<int> v(n);
        if (r == 0)
            std::fill(v.begin(), v.end(), 1);
        else
            for (auto& s : v) s = (rng() & 1) ? 1 : -1;
        std::vector<double> w(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) w[i] += md[i * n + j] * v[j];
        auto f_of = [&](const std::vector<double>& ww) {
            double s = 0.0;
            for (double x : ww) s += std::abs(x);
            return s;
        };
        double f = f_of(w);
        bool improved = true;
        while (improved) {
            improved = false;
            std::size_t arg = 0;
            double best_gain = 0.0;
            std::vector<double> trial(n);
            for (std::size_t j = 0; j < n; ++j) {
                double fj = 0.0;
                for (std::size_t i = 0; i < n; ++i)
                    fj += std::abs(w[i] - 2.0 * v[j] * md[i * n + j]);
                if (fj - f > best_gain + 1e-15) {
                    best_gain = fj - f;
                    arg = j;
                    improved = true;
                }
            }
            if (improved) {
                for (std::size_t i = 0; i < n; ++i) w[i] -= 2.0 * v[arg] * md[i * n + arg];
                v[arg] = -v[arg];
                f += best_gain;
            }
        }
        if (f > best_f) {
            best_f = f;
            best_v = v;
        }
    }
    OpNormValue lower;
    lower.value = matrix_mv_l1(m, best_v);
    lower.flavor = Flavor::lower_bound;
    lower.witness = std::move(best_v);
    if (lower.value > upper) upper = lower.value;  // float slack on the sigma route
    report.op_inf1.push_back(std::move(lower));
    report.op_inf1.push_back({upper, Flavor::upper_bound, {}});
    return report;
}

Rational kernel_l1_pwc(const PiecewiseConstantKernel& k) { return matrix_l1(k.matrix()); }

Rational kernel_l1_trap(const TrapezoidKernel& k) { return matrix_l1(k.matrix()); }

Rational kernel_l1_distance_pwc_trap(const SymMatrix& m, const Rational& eps) {
    if (m.dim() == 0 || matrix_l1(m) == 0) return 0;
    // Terms for distinct cells have disjoint supports, so the distance is the
    // per-cell band integral weighted by |M_hk|.
    return matrix_l1(m) * bump_product_l1_distance(eps);
}

OpNormValue kernel_opnorm_pwc(const PiecewiseConstantKernel& k, std::size_t cap) {
    return matrix_opnorm_inf1_exact(k.matrix(), cap);
}

NormReport kernel_opnorm_trap_bracket(const TrapezoidKernel& k, std::size_t cap) {
    OpNormValue center = matrix_opnorm_inf1_exact(k.matrix(), cap);
    Rational band = 4 * matrix_l1(k.matrix()) * k.epsilon();
    NormReport report;
    report.l1 = kernel_l1_trap(k);
    Rational lo = center.value - band;
    if (lo < 0) lo = 0;
    report.op_inf1.push_back({std::move(lo), Flavor::lower_bound, {}});
    report.op_inf1.push_back({center.value + band, Flavor::upper_bound, {}});
    return report;
}

}  // namespace kstab
