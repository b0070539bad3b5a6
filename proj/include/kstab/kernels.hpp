#pragma once

#include "kstab/bump.hpp"
#include "kstab/matrix.hpp"

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

namespace kstab {

/// Closed interval on the half-line.
struct Interval {
    Rational lo, hi;
};

/// Symmetric kernel on the positive quadrant with exact and floating-point
/// evaluation paths. All evaluations are pure and safe for concurrent use.
class Kernel {
public:
    virtual ~Kernel() = default;

    virtual Rational operator()(const Rational& x, const Rational& y) const = 0;
    virtual double eval(double x, double y) const = 0;

    /// Square [lo,hi]^2 containing the support; throws for unbounded kernels.
    virtual Interval support() const = 0;
    virtual bool bounded_support() const { return true; }
};

/// Piecewise constant kernel: value M_hk on the cell [2h-1,2h] x [2k-1,2k],
/// zero elsewhere. Cell boundaries belong to the (unique) closed cell that
/// contains them; ties at shared points resolve to the lower index.
class PiecewiseConstantKernel : public Kernel {
public:
    explicit PiecewiseConstantKernel(SymMatrix m) : m_(std::move(m)) {}

    const SymMatrix& matrix() const { return m_; }

    Rational operator()(const Rational& x, const Rational& y) const override;
    double eval(double x, double y) const override;
    Interval support() const override { return {Rational(1), Rational(2 * m_.dim())}; }

    /// 1-based cell index for a coordinate, or 0 when outside every cell.
    std::size_t cell_index(const Rational& x) const;

private:
    SymMatrix m_;
};

/// Continuous piecewise-bilinear kernel: sum of M_hk g_eps(x+1-2h) g_eps(y+1-2k)
/// over all cells. Supports of distinct terms are disjoint since eps < 1/2,
/// so at most one term is nonzero at any point.
class TrapezoidKernel : public Kernel {
public:
    TrapezoidKernel(SymMatrix m, Rational epsilon);

    const SymMatrix& matrix() const { return m_; }
    const Rational& epsilon() const { return eps_; }
    const BumpFunction& bump() const { return bump_; }

    Rational operator()(const Rational& x, const Rational& y) const override;
    double eval(double x, double y) const override;
    Interval support() const override;

    /// B_r(x) = sum_h V_hr g_eps(x+1-2h); requires a V factor on M.
    /// r is 1-based. Summing B_r(x)B_r(y) over r reproduces the kernel.
    Rational factor_function(std::size_t r, const Rational& x) const;

    /// Per-coordinate Lipschitz constant bound for the evaluation map.
    Rational lipschitz_bound() const;

private:
    SymMatrix m_;
    Rational eps_;
    BumpFunction bump_;
};

/// Lazily materialized sum of trapezoid blocks shifted to mutually disjoint
/// diagonal supports. Block h contributes block_h(x - T_h, y - T_h).
class BlockDiagKernel : public Kernel {
public:
    struct Layout {
        Rational offset;  // T_h
        Rational lo, hi;  // support interval of the shifted block (conservative)
    };
    using LayoutFn = std::function<Layout(std::size_t h)>;                    // 1-based
    using FactoryFn = std::function<std::shared_ptr<const TrapezoidKernel>(std::size_t h)>;

    /// Finite, fully materialized block list.
    BlockDiagKernel(std::vector<std::shared_ptr<const TrapezoidKernel>> blocks,
                    std::vector<Rational> offsets);

    /// Lazy construction; count == nullopt means unbounded.
    BlockDiagKernel(LayoutFn layout, FactoryFn factory, std::optional<std::size_t> count);

    std::optional<std::size_t> block_count() const { return count_; }
    const TrapezoidKernel& block(std::size_t h) const;  // 1-based, materializes
    Layout layout(std::size_t h) const;                 // 1-based

    Rational operator()(const Rational& x, const Rational& y) const override;
    double eval(double x, double y) const override;
    Interval support() const override;
    bool bounded_support() const override { return count_.has_value(); }

private:
    // Index of the block whose support interval contains x, or 0.
    std::size_t locate(const Rational& x) const;
    void ensure_layouts(const Rational& upto) const;
    void ensure_layout_count(std::size_t h) const;

    LayoutFn layout_fn_;
    FactoryFn factory_;
    std::optional<std::size_t> count_;

    mutable std::mutex mtx_;
    mutable std::vector<Layout> layouts_;
    mutable std::vector<std::shared_ptr<const TrapezoidKernel>> cache_;
};

}  // namespace kstab
