#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kstab/bump.hpp"
#include "kstab/kernels.hpp"
#include "kstab/norms.hpp"

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

SymMatrix mat11(int a) {
    RationalMatrix e(1, 1);
    e.at(0, 0) = a;
    return SymMatrix(std::move(e));
}

}  // namespace

TEST_CASE("trapezoid bump branch values") {
    BumpFunction g = BumpFunction::trapezoid(Rational(1, 4));
    CHECK(g(Rational(0)) == Rational(1, 2));
    CHECK(g(Rational(1, 2)) == 1);
    CHECK(g(Rational(-1, 2)) == 0);
    CHECK(g(Rational(1)) == Rational(1, 2));
    CHECK(g(Rational(3, 2)) == 0);
    CHECK(g(Rational(-1, 8)) == Rational(1, 4));
}

TEST_CASE("indicator bump") {
    BumpFunction g = BumpFunction::indicator();
    CHECK(g(Rational(0)) == 1);
    CHECK(g(Rational(1)) == 1);
    CHECK(g(Rational(1, 2)) == 1);
    CHECK(g(Rational(-1, 100)) == 0);
    CHECK(g(Rational(101, 100)) == 0);
}

TEST_CASE("bump epsilon range is enforced") {
    CHECK_THROWS_AS(BumpFunction::trapezoid(Rational(1, 2)), std::invalid_argument);
    CHECK_THROWS_AS(BumpFunction::trapezoid(Rational(0)), std::invalid_argument);
}

TEST_CASE("bump integrates to one, any kind") {
    for (auto eps : {Rational(1, 4), Rational(1, 8), Rational(1, 3)}) {
        BumpFunction g = BumpFunction::trapezoid(eps);
        CHECK(g.antiderivative(Rational(2)) == 1);
        CHECK(g.antiderivative(Rational(-1)) == 0);
    }
    CHECK(BumpFunction::indicator().antiderivative(Rational(2)) == 1);
}

TEST_CASE("bump antiderivative matches quadrature at interior points") {
    BumpFunction g = BumpFunction::trapezoid(Rational(1, 3));
    for (double x : {-0.2, 0.1, 0.5, 0.9, 1.2}) {
        double q = oracle::integrate_1d([&](double t) { return g(t); },
                                        {-0.5, -1.0 / 3, 1.0 / 3, 2.0 / 3, 4.0 / 3, 1.5, x});
        // oracle integrates the full support; restrict by splitting at x
        double qx = oracle::integrate_1d([&](double t) { return t <= x ? g(t) : 0.0; },
                                         {-0.5, -1.0 / 3, 1.0 / 3, 2.0 / 3, 4.0 / 3, 1.5, x});
        CHECK(qx <= q + 1e-12);
        CHECK(to_double(g.antiderivative(Rational(x))) == doctest::Approx(qx).epsilon(1e-9));
    }
}

TEST_CASE("bump L1 distance equals epsilon") {
    for (auto eps : {Rational(1, 4), Rational(1, 8), Rational(1, 3)}) {
        CHECK(bump_l1_distance(eps) == eps);
        BumpFunction g = BumpFunction::indicator();
        BumpFunction ge = BumpFunction::trapezoid(eps);
        double e = to_double(eps);
        double q = oracle::integrate_1d([&](double x) { return std::abs(g(x) - ge(x)); },
                                        {-0.5, -e, 0.0, e, 1.0 - e, 1.0, 1.0 + e, 1.5});
        CHECK(q == doctest::Approx(to_double(eps)).epsilon(1e-10));
    }
}

TEST_CASE("piecewise constant kernel cell lookup") {
    PiecewiseConstantKernel k1{mat11(1)};
    CHECK(k1(Rational(3, 2), Rational(3, 2)) == 1);
    CHECK(k1(Rational(1, 2), Rational(3, 2)) == 0);
    PiecewiseConstantKernel k2{mat22(2, 1, 1, 2)};
    CHECK(k2(Rational(7, 2), Rational(3, 2)) == 1);
    CHECK(k2(Rational(3, 2), Rational(3, 2)) == 2);
    // closed-cell boundaries
    CHECK(k2(Rational(1), Rational(1)) == 2);
    CHECK(k2(Rational(2), Rational(4)) == 1);
    CHECK(k2(Rational(5, 2), Rational(3, 2)) == 0);
}

TEST_CASE("trapezoid kernel pointwise values") {
    TrapezoidKernel k{mat11(1), Rational(1, 4)};
    CHECK(k(Rational(3, 2), Rational(3, 2)) == 1);
    CHECK(k(Rational(1), Rational(3, 2)) == Rational(1, 2));
    CHECK(k(Rational(2, 5), Rational(3, 2)) == 0);
}

TEST_CASE("trapezoid kernel support") {
    for (auto eps : {Rational(1, 4), Rational(1, 8)}) {
        TrapezoidKernel k{mat22(2, 1, 1, 2), eps};
        std::mt19937_64 rng(7);
        for (int i = 0; i < 500; ++i) {
            Rational y = oracle::random_rational(rng, 0, 5, 16);
            Rational left = 1 - eps - oracle::random_rational(rng, 0, 2, 16) - Rational(1, 2);
            Rational right = Rational(4) + eps + oracle::random_rational(rng, 0, 2, 16);
            CHECK(k(left, y) == 0);
            CHECK(k(right, y) == 0);
            CHECK(k(y, left) == 0);
        }
    }
}

TEST_CASE("trapezoid kernel symmetry, exact at random rationals") {
    std::mt19937_64 rng(42);
    TrapezoidKernel k{oracle::random_psd(rng, 4, 3), Rational(1, 3)};
    for (int i = 0; i < 10000; ++i) {
        Rational x = oracle::random_rational(rng, 0, 9, 64);
        Rational y = oracle::random_rational(rng, 0, 9, 64);
        CHECK(k(x, y) == k(y, x));
    }
}

TEST_CASE("factor functions reproduce the kernel") {
    std::mt19937_64 rng(11);
    for (int rep = 0; rep < 20; ++rep) {
        std::size_t n = 1 + rng() % 5, m = 1 + rng() % 5;
        SymMatrix mat = oracle::random_psd(rng, n, m);
        TrapezoidKernel k{mat, Rational(1, 4)};
        for (int i = 0; i < 50; ++i) {
            Rational x = oracle::random_rational(rng, 0, static_cast<int>(2 * n + 1), 16);
            Rational y = oracle::random_rational(rng, 0, static_cast<int>(2 * n + 1), 16);
            Rational sum = 0;
            for (std::size_t r = 1; r <= mat.factor_rank(); ++r)
                sum += k.factor_function(r, x) * k.factor_function(r, y);
            CHECK(sum == k(x, y));
        }
    }
}

TEST_CASE("factor function plateau values") {
    RationalMatrix v(1, 1);
    v.at(0, 0) = 1;
    TrapezoidKernel k{SymMatrix::from_factor(std::move(v)), Rational(1, 4)};
    CHECK(k.factor_function(1, Rational(3, 2)) == 1);
    CHECK(k.factor_function(1, Rational(1)) == Rational(1, 2));
}

TEST_CASE("factor function requires a V factor") {
    TrapezoidKernel k{mat11(1), Rational(1, 4)};
    CHECK_THROWS_AS(k.factor_function(1, Rational(1)), std::logic_error);
}

TEST_CASE("trapezoid kernel Lipschitz surrogate") {
    TrapezoidKernel k{mat22(2, 1, 1, 2), Rational(1, 4)};
    double bound = to_double(k.lipschitz_bound());
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> pt(0.0, 5.0);
    const double delta = 1e-6;
    for (int i = 0; i < 2000; ++i) {
        double x = pt(rng), y = pt(rng);
        CHECK(std::abs(k.eval(x + delta, y) - k.eval(x, y)) <= bound * delta * (1 + 1e-9));
    }
}

TEST_CASE("pointwise convergence to the piecewise constant kernel") {
    SymMatrix m = mat22(2, 1, 1, 2);
    PiecewiseConstantKernel pwc{m};
    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; ++i) {
        // interior points of cells: stay 1/4 away from every integer
        std::uniform_int_distribution<int> cell(1, 2);
        Rational x = 2 * Rational(cell(rng)) - 1 + Rational(1, 4) + oracle::random_rational(rng, 0, 1, 8) / 2;
        Rational y = 2 * Rational(cell(rng)) - 1 + Rational(1, 4) + oracle::random_rational(rng, 0, 1, 8) / 2;
        Rational prev_err = 10;
        for (auto eps : {Rational(1, 4), Rational(1, 8), Rational(1, 16)}) {
            TrapezoidKernel tk{m, eps};
            Rational err = rat_abs(tk(x, y) - pwc(x, y));
            CHECK(err <= prev_err);
            prev_err = err;
        }
        TrapezoidKernel finest{m, Rational(1, 16)};
        CHECK(finest(x, y) == pwc(x, y));  // plateau reached at interior points
    }
}

TEST_CASE("block diagonal kernel basics") {
    auto b1 = std::make_shared<const TrapezoidKernel>(mat11(1), Rational(1, 3));
    auto b2 = std::make_shared<const TrapezoidKernel>(mat22(2, 1, 1, 2), Rational(1, 4));
    BlockDiagKernel k({b1, b2}, {Rational(0), Rational(3)});
    CHECK(k(Rational(3, 2), Rational(3, 2)) == 1);        // block 1 plateau
    CHECK(k(Rational(9, 2), Rational(9, 2)) == 2);        // block 2 cell (1,1)
    CHECK(k(Rational(3, 2), Rational(9, 2)) == 0);        // off-diagonal quadrant
    CHECK(k(Rational(100), Rational(100)) == 0);          // beyond all blocks
    CHECK(k(Rational(3, 2), Rational(3, 2)) == k(Rational(3, 2), Rational(3, 2)));
}

TEST_CASE("block diagonal symmetry at random points") {
    auto b1 = std::make_shared<const TrapezoidKernel>(mat22(2, 1, 1, 2), Rational(1, 3));
    auto b2 = std::make_shared<const TrapezoidKernel>(mat11(3), Rational(1, 4));
    BlockDiagKernel k({b1, b2}, {Rational(0), Rational(5)});
    std::mt19937_64 rng(13);
    for (int i = 0; i < 10000; ++i) {
        Rational x = oracle::random_rational(rng, 0, 8, 32);
        Rational y = oracle::random_rational(rng, 0, 8, 32);
        CHECK(k(x, y) == k(y, x));
    }
}

TEST_CASE("block diagonal rejects overlapping supports") {
    auto b1 = std::make_shared<const TrapezoidKernel>(mat11(1), Rational(1, 3));
    auto b2 = std::make_shared<const TrapezoidKernel>(mat11(1), Rational(1, 3));
    CHECK_THROWS_AS(BlockDiagKernel({b1, b2}, {Rational(0), Rational(1)}),
                    std::invalid_argument);
}
