#include "kstab/op.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kstab {

// ---------------------------------------------------------------------------
// BoundedInput

BoundedInput::BoundedInput(std::vector<Rational> breakpoints, std::vector<Rational> values)
    : breaks_(std::move(breakpoints)), values_(std::move(values)) {
    if (breaks_.size() < 2 || values_.size() + 1 != breaks_.size())
        throw std::invalid_argument("BoundedInput: need k+1 breakpoints for k segments");
    for (std::size_t i = 1; i < breaks_.size(); ++i)
        if (breaks_[i] <= breaks_[i - 1])
            throw std::invalid_argument("BoundedInput: breakpoints must increase");
    for (const auto& v : values_)
        if (rat_abs(v) > 1)
            throw std::invalid_argument("BoundedInput: |u| must not exceed 1");
}

BoundedInput BoundedInput::constant(const Rational& value, const Rational& lo,
                                    const Rational& hi) {
    return BoundedInput({lo, hi}, {value});
}

Rational BoundedInput::operator()(const Rational& x) const {
    if (x < breaks_.front() || x >= breaks_.back()) return 0;
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
    return values_[static_cast<std::size_t>(it - breaks_.begin()) - 1];
}

double BoundedInput::eval(double x) const { return to_double((*this)(Rational(x))); }

Rational BoundedInput::integrate(const Rational& a, const Rational& b) const {
    if (b <= a) return 0;
    Rational total = 0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        Rational lo = std::max(a, breaks_[i]);
        Rational hi = std::min(b, breaks_[i + 1]);
        if (hi > lo) total += values_[i] * (hi - lo);
    }
    return total;
}

void BoundedInput::set_value(std::size_t i, const Rational& v) {
    if (rat_abs(v) > 1) throw std::invalid_argument("BoundedInput: |u| must not exceed 1");
    values_.at(i) = v;
}

// ---------------------------------------------------------------------------
// helpers

namespace {

/// Exact integral of |linear| given endpoint values over [x0, x1].
Rational integrate_abs_linear(const Rational& x0, const Rational& x1, const Rational& f0,
                              const Rational& f1) {
    Rational len = x1 - x0;
    if (len <= 0) return 0;
    if ((f0 >= 0 && f1 >= 0) || (f0 <= 0 && f1 <= 0))
        return rat_abs(f0 + f1) * len / 2;
    // sign change: split at the root
    Rational root = x0 + len * f0 / (f0 - f1);
    return rat_abs(f0) * (root - x0) / 2 + rat_abs(f1) * (x1 - root) / 2;
}

/// Per-cell coefficients c_k = integral of g_eps(y+1-2k) u(y+shift) dy.
std::vector<Rational> bump_moments(const TrapezoidKernel& k, const BoundedInput& u,
                                   const Rational& shift) {
    const std::size_t n = k.matrix().dim();
    const BumpFunction& g = k.bump();
    std::vector<Rational> c(n, Rational(0));
    const auto& b = u.breakpoints();
    const auto& v = u.values();
    for (std::size_t kk = 1; kk <= n; ++kk) {
        Rational acc = 0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (v[i] == 0) continue;
            Rational lo = b[i] - shift + 1 - 2 * Rational(kk);
            Rational hi = b[i + 1] - shift + 1 - 2 * Rational(kk);
            acc += v[i] * (g.antiderivative(hi) - g.antiderivative(lo));
        }
        c[kk - 1] = std::move(acc);
    }
    return c;
}

/// z restricted to one trapezoid block: sum_h w_h g_eps(x - shift + 1 - 2h).
struct TrapOutput {
    const TrapezoidKernel* kernel;
    Rational shift;
    std::vector<Rational> coeffs;  // w = M c

    Rational eval(const Rational& x) const {
        const std::size_t n = kernel->matrix().dim();
        const Rational t = x - shift;
        Rational out = 0;
        BigInt h0 = rat_floor((t + 1) / 2);
        for (BigInt h = h0; h <= h0 + 1; ++h) {
            if (h < 1 || h > BigInt(n)) continue;
            std::size_t hi = h.convert_to<std::size_t>();
            out += coeffs[hi - 1] * kernel->bump()(t + 1 - 2 * Rational(hi));
        }
        return out;
    }

    /// Exact L1 by integrating |piecewise linear| over each bump's pieces.
    Rational l1() const {
        const Rational& e = kernel->epsilon();
        const BumpFunction& g = kernel->bump();
        Rational total = 0;
        for (std::size_t h = 1; h <= coeffs.size(); ++h) {
            if (coeffs[h - 1] == 0) continue;
            Rational base = shift + 2 * Rational(h) - 1;  // bump arg 0 at this x
            const Rational nodes[4] = {-e, e, 1 - e, 1 + e};
            for (int p = 0; p + 1 < 4; ++p)
                total += integrate_abs_linear(base + nodes[p], base + nodes[p + 1],
                                              coeffs[h - 1] * g(nodes[p]),
                                              coeffs[h - 1] * g(nodes[p + 1]));
        }
        return total;
    }
};

TrapOutput trap_output(const TrapezoidKernel& k, const BoundedInput& u, const Rational& shift) {
    std::vector<Rational> c = bump_moments(k, u, shift);
    std::vector<Rational> w(c.size(), Rational(0));
    for (std::size_t i = 0; i < c.size(); ++i) {
        Rational s = 0;
        for (std::size_t j = 0; j < c.size(); ++j) s += k.matrix().at(i, j) * c[j];
        w[i] = std::move(s);
    }
    return {&k, shift, std::move(w)};
}

// 16-node Gauss-Legendre rule on [-1, 1].
const std::vector<std::pair<double, double>>& gl16() {
    static const auto table = [] {
        const int n = 16;
        std::vector<std::pair<double, double>> t(n);
        for (int i = 0; i < n; ++i) {
            double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int kk = 2; kk <= n; ++kk) {
                    double p2 = ((2 * kk - 1) * x * p1 - (kk - 1) * p0) / kk;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-15) break;
            }
            t[i] = {x, 2.0 / ((1.0 - x * x) * dp * dp)};
        }
        return t;
    }();
    return table;
}

double gl_panel(const std::function<double(double)>& f, double a, double b) {
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0.0;
    for (const auto& [x, w] : gl16()) s += w * f(mid + half * x);
    return s * half;
}

OperatorOutput quadrature_apply(const Kernel& k, const BoundedInput& u,
                                const std::vector<Rational>& grid, bool warning) {
    // y panels: unit intervals over the input domain with u's breakpoints
    // inserted, so the integrand is smooth on each panel.
    std::vector<double> panels;
    double ylo = to_double(u.domain_begin()), yhi = to_double(u.domain_end());
    for (double y = std::floor(ylo); y <= std::ceil(yhi) + 0.5; y += 1.0) panels.push_back(y);
    for (const auto& b : u.breakpoints()) panels.push_back(to_double(b));
    std::sort(panels.begin(), panels.end());
    panels.erase(std::unique(panels.begin(), panels.end()), panels.end());

    auto z = [&](double x) {
        double s = 0.0;
        for (std::size_t i = 0; i + 1 < panels.size(); ++i)
            s += gl_panel([&](double y) { return k.eval(x, y) * u.eval(y); }, panels[i],
                          panels[i + 1]);
        return s;
    };

    OperatorOutput out;
    out.method = OperatorOutput::Method::quadrature;
    out.quadrature_warning = warning;
    out.grid = grid;
    out.values.reserve(grid.size());
    for (const auto& x : grid) out.values.emplace_back(Rational(z(to_double(x))));

    // L1 over the kernel support, unit panels.
    double acc = 0.0;
    if (k.bounded_support()) {
        Interval s = k.support();
        double lo = std::max(0.0, to_double(s.lo)) - 1.0, hi = to_double(s.hi) + 1.0;
        for (double a = lo; a < hi; a += 1.0)
            acc += gl_panel([&](double x) { return std::abs(z(x)); }, a, std::min(a + 1.0, hi));
    }
    out.l1 = Rational(acc);
    return out;
}

std::vector<int> matrix_witness(const SymMatrix& m) {
    if (m.dim() <= kEnumCap) return matrix_opnorm_inf1_exact(m).witness;
    NormReport r = matrix_opnorm_inf1_bounds(m);
    return r.op_inf1.front().witness;
}

}  // namespace

// ---------------------------------------------------------------------------
// apply_operator / reduce_input

std::vector<Rational> make_grid(const Kernel& k, const Rational& step) {
    if (step <= 0) throw std::invalid_argument("make_grid: step must be positive");
    Interval s = k.support();
    Rational lo = s.lo - 1;
    if (lo < 0) lo = 0;
    Rational hi = s.hi + 1;
    std::vector<Rational> g;
    for (Rational x = lo; x <= hi; x += step) g.push_back(x);
    return g;
}

OperatorOutput apply_operator(const Kernel& k, const BoundedInput& u,
                              const std::vector<Rational>& grid, bool force_quadrature) {
    if (force_quadrature) return quadrature_apply(k, u, grid, false);

    if (auto* pwc = dynamic_cast<const PiecewiseConstantKernel*>(&k)) {
        const std::size_t n = pwc->matrix().dim();
        std::vector<Rational> ubar(n);
        for (std::size_t kk = 1; kk <= n; ++kk)
            ubar[kk - 1] = u.integrate(2 * Rational(kk) - 1, 2 * Rational(kk));
        std::vector<Rational> zbar = pwc->matrix().multiply(ubar);
        OperatorOutput out;
        out.grid = grid;
        for (const auto& x : grid) {
            std::size_t h = pwc->cell_index(x);
            out.values.push_back(h ? zbar[h - 1] : Rational(0));
        }
        Rational l1 = 0;
        for (const auto& z : zbar) l1 += rat_abs(z);  // each active cell has unit width
        out.l1 = std::move(l1);
        return out;
    }

    if (auto* trap = dynamic_cast<const TrapezoidKernel*>(&k)) {
        TrapOutput z = trap_output(*trap, u, 0);
        OperatorOutput out;
        out.grid = grid;
        for (const auto& x : grid) out.values.push_back(z.eval(x));
        out.l1 = z.l1();
        return out;
    }

    if (auto* bd = dynamic_cast<const BlockDiagKernel*>(&k)) {
        // Only blocks whose support meets the input domain contribute; the
        // input is compactly supported so this loop terminates even for
        // unbounded kernels.
        std::vector<TrapOutput> parts;
        for (std::size_t h = 1;; ++h) {
            if (bd->block_count() && h > *bd->block_count()) break;
            BlockDiagKernel::Layout lay = bd->layout(h);
            if (lay.lo > u.domain_end()) break;
            if (lay.hi < u.domain_begin()) continue;
            parts.push_back(trap_output(bd->block(h), u, lay.offset));
        }
        OperatorOutput out;
        out.grid = grid;
        for (const auto& x : grid) {
            Rational v = 0;
            for (const auto& p : parts) v += p.eval(x);
            out.values.push_back(std::move(v));
        }
        Rational l1 = 0;
        for (const auto& p : parts) l1 += p.l1();  // block supports are disjoint
        out.l1 = std::move(l1);
        return out;
    }

    return quadrature_apply(k, u, grid, true);
}

std::vector<Rational> reduce_input(const BoundedInput& u, std::size_t n) {
    if (u.domain_begin() < 0 || u.domain_end() > 2 * Rational(n))
        throw std::invalid_argument("reduce_input: input not supported within [0, 2n]");
    std::vector<Rational> ubar(n);
    for (std::size_t k = 1; k <= n; ++k)
        ubar[k - 1] = u.integrate(2 * Rational(k) - 1, 2 * Rational(k));
    return ubar;
}

// ---------------------------------------------------------------------------
// adversarial_search

SearchResult adversarial_search(const Kernel& k, const Rational& resolution,
                                std::size_t budget) {
    if (resolution <= 0)
        throw std::invalid_argument("adversarial_search: resolution must be positive");
    if (!k.bounded_support())
        throw std::domain_error(
            "adversarial_search: kernel support unbounded; cap the block count first");

    Interval s = k.support();
    Rational hi = s.hi;
    std::size_t m = (rat_floor(hi / resolution) + 1).convert_to<std::size_t>();
    std::vector<Rational> breaks(m + 1);
    for (std::size_t i = 0; i <= m; ++i) breaks[i] = Rational(i) * resolution;
    std::vector<Rational> vals(m, Rational(1));

    // Seed sign pattern from the matrix witness where the structure is known.
    auto seed_from = [&](const SymMatrix& mat, const Rational& shift) {
        std::vector<int> w = matrix_witness(mat);
        for (std::size_t i = 0; i < m; ++i) {
            Rational mid = (breaks[i] + breaks[i + 1]) / 2 - shift;
            BigInt cell = rat_floor((mid + 1) / 2);
            if (cell >= 1 && cell <= BigInt(mat.dim()))
                vals[i] = w[cell.convert_to<std::size_t>() - 1];
        }
    };
    if (auto* pwc = dynamic_cast<const PiecewiseConstantKernel*>(&k))
        seed_from(pwc->matrix(), 0);
    else if (auto* trap = dynamic_cast<const TrapezoidKernel*>(&k))
        seed_from(trap->matrix(), 0);
    else if (auto* bd = dynamic_cast<const BlockDiagKernel*>(&k))
        for (std::size_t h = 1; h <= *bd->block_count(); ++h)
            seed_from(bd->block(h).matrix(), bd->layout(h).offset);

    BoundedInput u(breaks, vals);
    auto value = [&](const BoundedInput& in) { return apply_operator(k, in, {}).l1; };

    SearchResult res{value(u), u, {}};
    res.history.push_back(res.lower_bound);
    std::size_t evals = 1;
    bool improved = true;
    while (improved && evals < budget) {
        improved = false;
        for (std::size_t i = 0; i < m && evals < budget; ++i) {
            Rational old = u.values()[i];
            u.set_value(i, -old);
            Rational v = value(u);
            ++evals;
            if (v > res.lower_bound) {
                res.lower_bound = v;
                res.history.push_back(v);
                improved = true;
            } else {
                u.set_value(i, old);
            }
        }
    }
    res.witness = u;
    return res;
}

// ---------------------------------------------------------------------------
// stability_verdict

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::stable_and_l1: return "stable_and_l1";
        case Verdict::stable_not_l1: return "stable_not_l1";
        case Verdict::undetermined: return "undetermined";
    }
    return "?";
}

VerdictRecord stability_verdict(const L1Evidence& l1, const NormReport& op) {
    bool certified_upper = false;
    for (const auto& o : op.op_inf1)
        if (o.flavor == Flavor::exact || o.flavor == Flavor::upper_bound) certified_upper = true;
    if (!certified_upper)
        return {Verdict::undetermined,
                "no certified upper bound on the (inf,1) operator norm"};
    if (l1.finite_value)
        return {Verdict::stable_and_l1,
                "operator norm finite and ||K||_1 = " + format_rational(*l1.finite_value)};
    if (l1.divergent_certified)
        return {Verdict::stable_not_l1,
                "operator norm finite while the L1 partial sums diverge"};
    return {Verdict::undetermined, "L1 evidence inconclusive"};
}

}  // namespace kstab
