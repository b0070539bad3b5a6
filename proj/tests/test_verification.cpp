#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kstab/counterexample.hpp"
#include "kstab/verification.hpp"

#include "oracles.hpp"

#include <random>

using namespace kstab;

namespace {

SymMatrix mat22(int a, int b, int c, int d) {
    RationalMatrix e(2, 2);
    e.at(0, 0) = a;
    e.at(0, 1) = b;
    e.at(1, 0) = c;
    e.at(1, 1) = d;
    return SymMatrix(std::move(e));
}

std::vector<double> random_points(std::mt19937_64& rng, std::size_t count, double lo,
                                  double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> pts;
    while (pts.size() < count) {
        double p = dist(rng);
        bool dup = false;
        for (double q : pts) dup = dup || std::abs(p - q) < 1e-9;
        if (!dup) pts.push_back(p);
    }
    return pts;
}

}  // namespace

TEST_CASE("matrix PSD check, numeric path") {
    PsdCheck good = check_psd_matrix(mat22(2, 1, 1, 2));
    CHECK(good.pass);
    CHECK(good.min_eigenvalue == doctest::Approx(1.0).epsilon(1e-9));
    CHECK_FALSE(good.exact_certificate);

    PsdCheck bad = check_psd_matrix(mat22(1, 2, 2, 1));
    CHECK_FALSE(bad.pass);
    CHECK(bad.min_eigenvalue == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("matrix PSD check, exact certificate via factor") {
    std::mt19937_64 rng(3);
    SymMatrix m = oracle::random_psd(rng, 5, 3);
    PsdCheck c = check_psd_matrix(m);
    CHECK(c.pass);
    CHECK(c.exact_certificate);
}

TEST_CASE("gram check passes on kernels built from PSD matrices") {
    std::mt19937_64 rng(7);
    for (int rep = 0; rep < 10; ++rep) {
        std::size_t n = 1 + rng() % 4;
        SymMatrix m = oracle::random_psd(rng, n, 3);
        TrapezoidKernel k{m, Rational(1, 4)};
        auto pts = random_points(rng, 12, 0.0, 2.0 * static_cast<double>(n) + 0.5);
        GramSample g = gram_check(k, pts);
        CHECK(g.pass);
        CHECK(g.min_eigenvalue >= -1e-8);
        // symmetric by construction
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = 0; j < i; ++j)
                CHECK(g.gram[i * pts.size() + j] == g.gram[j * pts.size() + i]);
    }
}

TEST_CASE("gram check fails on a negated kernel") {
    // -K has the Gram matrices of K negated; any point where K is positive
    // on the diagonal yields a negative eigenvalue.
    SymMatrix m = mat22(2, 1, 1, 2).scaled(Rational(-1));
    TrapezoidKernel k{m, Rational(1, 4)};
    GramSample g = gram_check(k, {1.5, 3.5});
    CHECK_FALSE(g.pass);
    CHECK(g.min_eigenvalue < -1e-6);
}

TEST_CASE("gram check rejects duplicate points") {
    TrapezoidKernel k{mat22(2, 1, 1, 2), Rational(1, 4)};
    CHECK_THROWS_AS(gram_check(k, {1.0, 1.0}), std::invalid_argument);
}

TEST_CASE("symmetry and continuity probe on the trapezoid kernel") {
    TrapezoidKernel k{mat22(2, 1, 1, 2), Rational(1, 4)};
    ProbeReport p = symmetry_continuity_probe(k, 2000, 1e-6);
    CHECK(p.symmetric);
    CHECK(p.max_symmetry_defect == 0.0);  // exact arithmetic path
    CHECK(p.within_lipschitz_bound);
    CHECK(p.lipschitz_bound > 0.0);
    CHECK(p.max_difference_quotient <= p.lipschitz_bound * (1 + 1e-9));
}

TEST_CASE("probe flags an asymmetric kernel") {
    // not expressible as SymMatrix; use a deliberately broken kernel
    struct Crooked : Kernel {
        Rational operator()(const Rational& x, const Rational& y) const override {
            return x >= 0 && x <= 1 && y >= 0 && y <= 1 ? x : Rational(0);
        }
        double eval(double x, double y) const override { return to_double((*this)(Rational(x), Rational(y))); }
        Interval support() const override { return {Rational(0), Rational(1)}; }
        bool bounded_support() const override { return true; }
    } k;
    ProbeReport p = symmetry_continuity_probe(k, 500, 1e-6);
    CHECK_FALSE(p.symmetric);
    CHECK(p.max_symmetry_defect > 0.1);
}

TEST_CASE("gram check on the block diagonal counterexample kernel") {
    Counterexample ce = build_counterexample(3);
    std::mt19937_64 rng(11);
    auto pts = random_points(rng, 20, 0.0, 170.0);
    GramSample g = gram_check(*ce.kernel, pts);
    CHECK(g.pass);
    // cross-block entries vanish: points in different block supports
    GramSample two = gram_check(*ce.kernel, {1.5, 10.5});
    CHECK(two.gram[0 * 2 + 1] == 0.0);
    CHECK(two.pass);
}

TEST_CASE("probe on the piecewise constant kernel reports symmetry only") {
    PiecewiseConstantKernel k{mat22(2, 1, 1, 2)};
    ProbeReport p = symmetry_continuity_probe(k, 1000, 1e-6);
    CHECK(p.symmetric);
    // no Lipschitz surrogate for a discontinuous kernel
    CHECK(p.lipschitz_bound == 0.0);
}
