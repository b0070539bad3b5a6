#include "kstab/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace kstab {

// ---------------------------------------------------------------------------
// PiecewiseConstantKernel

std::size_t PiecewiseConstantKernel::cell_index(const Rational& x) const {
    BigInt h = rat_floor((x + 1) / 2);
    if (h < 1 || h > BigInt(m_.dim())) return 0;
    if (x < 2 * Rational(h) - 1 || x > 2 * Rational(h)) return 0;
    return h.convert_to<std::size_t>();
}

Rational PiecewiseConstantKernel::operator()(const Rational& x, const Rational& y) const {
    std::size_t h = cell_index(x);
    if (h == 0) return 0;
    std::size_t k = cell_index(y);
    if (k == 0) return 0;
    return m_.at(h - 1, k - 1);
}

double PiecewiseConstantKernel::eval(double x, double y) const {
    return to_double((*this)(Rational(x), Rational(y)));
}

// ---------------------------------------------------------------------------
// TrapezoidKernel

TrapezoidKernel::TrapezoidKernel(SymMatrix m, Rational epsilon)
    : m_(std::move(m)), eps_(epsilon), bump_(BumpFunction::trapezoid(std::move(epsilon))) {}

namespace {

// Candidate 1-based cell indices whose shifted bump can be nonzero at x.
// The bump argument x+1-2h has support inside (-1/2, 3/2), a window of
// per-h width 1, so at most two integers qualify.
inline void cell_candidates(const Rational& x, std::size_t n, std::size_t out[2],
                            std::size_t& count) {
    count = 0;
    BigInt h0 = rat_floor((x + 1) / 2);
    for (BigInt h = h0; h <= h0 + 1; ++h)
        if (h >= 1 && h <= BigInt(n)) out[count++] = h.convert_to<std::size_t>();
}

}  // namespace

Rational TrapezoidKernel::operator()(const Rational& x, const Rational& y) const {
    std::size_t hs[2], ks[2], nh, nk;
    cell_candidates(x, m_.dim(), hs, nh);
    cell_candidates(y, m_.dim(), ks, nk);
    Rational out = 0;
    for (std::size_t i = 0; i < nh; ++i) {
        Rational gx = bump_(x + 1 - 2 * Rational(hs[i]));
        if (gx == 0) continue;
        for (std::size_t j = 0; j < nk; ++j) {
            Rational gy = bump_(y + 1 - 2 * Rational(ks[j]));
            if (gy == 0) continue;
            out += m_.at(hs[i] - 1, ks[j] - 1) * gx * gy;
        }
    }
    return out;
}

double TrapezoidKernel::eval(double x, double y) const {
    const std::size_t n = m_.dim();
    double out = 0.0;
    auto h0 = static_cast<long long>(std::floor((x + 1.0) / 2.0));
    auto k0 = static_cast<long long>(std::floor((y + 1.0) / 2.0));
    for (long long h = h0; h <= h0 + 1; ++h) {
        if (h < 1 || h > static_cast<long long>(n)) continue;
        double gx = bump_(x + 1.0 - 2.0 * static_cast<double>(h));
        if (gx == 0.0) continue;
        for (long long k = k0; k <= k0 + 1; ++k) {
            if (k < 1 || k > static_cast<long long>(n)) continue;
            double gy = bump_(y + 1.0 - 2.0 * static_cast<double>(k));
            if (gy == 0.0) continue;
            out += to_double(m_.at(h - 1, k - 1)) * gx * gy;
        }
    }
    return out;
}

Interval TrapezoidKernel::support() const {
    return {1 - eps_, 2 * Rational(m_.dim()) + eps_};
}

Rational TrapezoidKernel::factor_function(std::size_t r, const Rational& x) const {
    if (!m_.has_factor()) throw std::logic_error("factor_function: matrix has no V factor");
    if (r < 1 || r > m_.factor_rank())
        throw std::out_of_range("factor_function: r out of range");
    std::size_t hs[2], nh;
    cell_candidates(x, m_.dim(), hs, nh);
    Rational out = 0;
    for (std::size_t i = 0; i < nh; ++i)
        out += m_.factor().at(hs[i] - 1, r - 1) * bump_(x + 1 - 2 * Rational(hs[i]));
    return out;
}

Rational TrapezoidKernel::lipschitz_bound() const {
    Rational slope = 1 / (2 * eps_);
    return m_.max_abs_entry() * slope * (1 + slope);
}

// ---------------------------------------------------------------------------
// BlockDiagKernel

BlockDiagKernel::BlockDiagKernel(std::vector<std::shared_ptr<const TrapezoidKernel>> blocks,
                                 std::vector<Rational> offsets)
    : count_(blocks.size()) {
    if (blocks.size() != offsets.size())
        throw std::invalid_argument("BlockDiagKernel: block/offset count mismatch");
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        Interval s = blocks[i]->support();
        layouts_.push_back({offsets[i], offsets[i] + s.lo, offsets[i] + s.hi});
    }
    for (std::size_t i = 1; i < layouts_.size(); ++i)
        if (layouts_[i].lo <= layouts_[i - 1].hi)
            throw std::invalid_argument("BlockDiagKernel: block supports overlap");
    cache_ = std::move(blocks);
}

BlockDiagKernel::BlockDiagKernel(LayoutFn layout, FactoryFn factory,
                                 std::optional<std::size_t> count)
    : layout_fn_(std::move(layout)), factory_(std::move(factory)), count_(count) {
    if (count_ && *count_ == 0)
        throw std::invalid_argument("BlockDiagKernel: empty block list");
}

void BlockDiagKernel::ensure_layout_count(std::size_t h) const {
    if (count_ && h > *count_) throw std::out_of_range("BlockDiagKernel: block index");
    while (layouts_.size() < h) {
        Layout next = layout_fn_(layouts_.size() + 1);
        if (!layouts_.empty() && next.lo <= layouts_.back().hi)
            throw std::logic_error("BlockDiagKernel: generated supports overlap");
        layouts_.push_back(std::move(next));
        cache_.push_back(nullptr);
    }
}

void BlockDiagKernel::ensure_layouts(const Rational& upto) const {
    while ((!count_ || layouts_.size() < *count_) &&
           (layouts_.empty() || layouts_.back().hi < upto))
        ensure_layout_count(layouts_.size() + 1);
}

std::size_t BlockDiagKernel::locate(const Rational& x) const {
    ensure_layouts(x);
    // last layout with lo <= x
    std::size_t lo = 0, hi = layouts_.size();
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (layouts_[mid].lo <= x)
            lo = mid + 1;
        else
            hi = mid;
    }
    if (lo == 0) return 0;
    return x <= layouts_[lo - 1].hi ? lo : 0;
}

const TrapezoidKernel& BlockDiagKernel::block(std::size_t h) const {
    std::lock_guard<std::mutex> g(mtx_);
    ensure_layout_count(h);
    while (cache_.size() < layouts_.size()) cache_.push_back(nullptr);
    if (!cache_[h - 1]) cache_[h - 1] = factory_(h);
    return *cache_[h - 1];
}

BlockDiagKernel::Layout BlockDiagKernel::layout(std::size_t h) const {
    std::lock_guard<std::mutex> g(mtx_);
    ensure_layout_count(h);
    return layouts_[h - 1];
}

Rational BlockDiagKernel::operator()(const Rational& x, const Rational& y) const {
    if (x < 0 || y < 0) return 0;
    std::shared_ptr<const TrapezoidKernel> k;
    Rational shift;
    {
        std::lock_guard<std::mutex> g(mtx_);
        std::size_t bx = locate(x);
        if (bx == 0 || bx != locate(y)) return 0;
        while (cache_.size() < layouts_.size()) cache_.push_back(nullptr);
        if (!cache_[bx - 1]) cache_[bx - 1] = factory_(bx);
        k = cache_[bx - 1];
        shift = layouts_[bx - 1].offset;
    }
    return (*k)(x - shift, y - shift);
}

double BlockDiagKernel::eval(double x, double y) const {
    return to_double((*this)(Rational(x), Rational(y)));
}

Interval BlockDiagKernel::support() const {
    if (!count_) throw std::logic_error("BlockDiagKernel: unbounded support");
    std::lock_guard<std::mutex> g(mtx_);
    ensure_layout_count(*count_);
    Rational lo = layouts_.front().lo;
    return {lo < 0 ? lo : Rational(0), layouts_.back().hi};
}

}  // namespace kstab
