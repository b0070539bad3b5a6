#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kstab/io.hpp"

#include "oracles.hpp"

#include <random>

using namespace kstab;

TEST_CASE("rational parsing and formatting") {
    CHECK(parse_rational("3/4") == Rational(3, 4));
    CHECK(parse_rational("-7") == Rational(-7));
    CHECK(format_rational(Rational(6, 8)) == "3/4");
    CHECK(format_rational(Rational(-2)) == "-2");
    CHECK(parse_rational(format_rational(Rational(22, 7))) == Rational(22, 7));
    CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
}

TEST_CASE("matrix round trip is bit exact") {
    std::mt19937_64 rng(3);
    for (int rep = 0; rep < 20; ++rep) {
        SymMatrix m = oracle::random_psd(rng, 1 + rng() % 6, 1 + rng() % 6, 8);
        std::string text = save_matrix(m);
        SymMatrix back = load_matrix(text);
        CHECK(back == m);
        CHECK(back.has_factor());
        CHECK(back.factor() == m.factor());
        CHECK(save_matrix(back) == text);
    }
}

TEST_CASE("matrix load rejects malformed text") {
    CHECK_THROWS_AS(load_matrix("matrix\nn 2\nentries 1 2 3"), ParseError);
    CHECK_THROWS_AS(load_matrix("notamatrix"), ParseError);
    CHECK_THROWS_AS(load_matrix("matrix\nn 2\nentries 1 2 2 1 extra"), ParseError);
    // asymmetric entries fail the SymMatrix constructor
    CHECK_THROWS_AS(load_matrix("matrix\nn 2\nentries 1 2 3 4"), std::invalid_argument);
    // factor that does not reproduce the matrix
    CHECK_THROWS_AS(load_matrix("matrix\nn 1\nentries 4\nfactor 1 1"), std::invalid_argument);
}

TEST_CASE("kernel round trips, all three kinds") {
    std::mt19937_64 rng(13);
    for (int rep = 0; rep < 10; ++rep) {
        SymMatrix m = oracle::random_psd(rng, 1 + rng() % 4, 2, 4);

        PiecewiseConstantKernel pwc{m};
        auto back_pwc = load_kernel(save_kernel(pwc));
        auto* p = dynamic_cast<PiecewiseConstantKernel*>(back_pwc.get());
        REQUIRE(p != nullptr);
        CHECK(p->matrix() == m);
        CHECK(save_kernel(*p) == save_kernel(pwc));

        Rational eps(1 + static_cast<int>(rng() % 5), 16);
        TrapezoidKernel trap{m, eps};
        auto back_trap = load_kernel(save_kernel(trap));
        auto* t = dynamic_cast<TrapezoidKernel*>(back_trap.get());
        REQUIRE(t != nullptr);
        CHECK(t->matrix() == m);
        CHECK(t->epsilon() == eps);
        CHECK(save_kernel(*t) == save_kernel(trap));
    }

    SymMatrix m2 = oracle::random_psd(rng, 2, 2, 4);
    auto b1 = std::make_shared<const TrapezoidKernel>(oracle::random_psd(rng, 1, 2, 4),
                                                      Rational(1, 3));
    auto b2 = std::make_shared<const TrapezoidKernel>(m2, Rational(1, 4));
    BlockDiagKernel bd({b1, b2}, {Rational(0), Rational(4)});
    std::string text = save_kernel(bd);
    auto back = load_kernel(text);
    auto* b = dynamic_cast<BlockDiagKernel*>(back.get());
    REQUIRE(b != nullptr);
    CHECK(b->block_count() == 2);
    CHECK(b->block(2).matrix() == m2);
    CHECK(b->layout(2).offset == 4);
    CHECK(save_kernel(*b) == text);
}

TEST_CASE("unbounded lazy kernels cannot be serialized") {
    auto layout = [](std::size_t h) {
        return BlockDiagKernel::Layout{Rational(3 * (h - 1)),
                                       Rational(3 * (h - 1)) + Rational(2, 3),
                                       Rational(3 * (h - 1)) + Rational(7, 3)};
    };
    auto factory = [](std::size_t) {
        RationalMatrix e(1, 1);
        e.at(0, 0) = 1;
        return std::make_shared<const TrapezoidKernel>(SymMatrix(std::move(e)), Rational(1, 3));
    };
    BlockDiagKernel k(layout, factory, std::nullopt);
    CHECK_THROWS_AS(save_kernel(k), std::invalid_argument);
}

TEST_CASE("inline matrix shorthand") {
    SymMatrix m = parse_inline_matrix("2,1;1,2");
    CHECK(m.dim() == 2);
    CHECK(m.at(0, 1) == 1);
    SymMatrix q = parse_inline_matrix(" 1/2 , -1/4 ; -1/4 , 1/2 ");
    CHECK(q.at(0, 0) == Rational(1, 2));
    CHECK(q.at(1, 0) == Rational(-1, 4));
    CHECK_THROWS_AS(parse_inline_matrix("1,2;3"), ParseError);
    CHECK_THROWS_AS(parse_inline_matrix(""), ParseError);
}

TEST_CASE("input round trip is bit exact") {
    std::mt19937_64 rng(29);
    for (int rep = 0; rep < 20; ++rep) {
        std::size_t segs = 1 + rng() % 6;
        std::vector<Rational> breaks{oracle::random_rational(rng, 0, 2, 8)};
        for (std::size_t i = 0; i < segs; ++i)
            breaks.push_back(breaks.back() + Rational(1) + oracle::random_rational(rng, 0, 1, 8));
        std::vector<Rational> vals;
        for (std::size_t i = 0; i < segs; ++i)
            vals.push_back(oracle::random_rational(rng, -1, 1, 16));
        BoundedInput u(breaks, vals);
        std::string text = save_input(u);
        BoundedInput back = load_input(text);
        CHECK(back.breakpoints() == u.breakpoints());
        CHECK(back.values() == u.values());
        CHECK(save_input(back) == text);
    }
    CHECK_THROWS_AS(load_input("input\nvalues 1"), ParseError);
}

TEST_CASE("norm report JSON carries exact and float views") {
    NormReport r;
    r.l1 = Rational(22, 7);
    r.op_inf1.push_back({Rational(6), Flavor::exact, {1, 1}});
    r.op_inf1.push_back({Rational(13, 2), Flavor::upper_bound, {}});
    auto j = norm_report_json(r);
    CHECK(j["schema"] == "1");
    CHECK(j["l1"]["rat"] == "22/7");
    CHECK(j["l1"]["float"].get<double>() == doctest::Approx(22.0 / 7.0));
    CHECK(j["op_inf1"].size() == 2);
    CHECK(j["op_inf1"][0]["value"]["rat"] == "6");
    CHECK(j["op_inf1"][0]["flavor"] == "exact");
    CHECK(j["op_inf1"][0]["witness"] == std::vector<int>{1, 1});
    CHECK(j["op_inf1"][1]["flavor"] == "upper_bound");
    CHECK_FALSE(j["op_inf1"][1].contains("witness"));
}

TEST_CASE("verdict JSON") {
    VerdictRecord v;
    v.verdict = Verdict::stable_not_l1;
    v.reason = "certified";
    auto j = verdict_json(v);
    CHECK(j["schema"] == "1");
    CHECK(j["verdict"] == "stable_not_l1");
    CHECK(j["reason"] == "certified");
}

TEST_CASE("counterexample spec JSON") {
    CounterexampleSpec spec;
    spec.h_max = 2;
    spec.block(1);
    spec.block(2);
    auto j = counterexample_spec_json(spec);
    CHECK(j["schema"] == "1");
    CHECK(j["h_max"] == 2);
    REQUIRE(j["blocks"].size() == 2);
    CHECK(j["blocks"][0]["h"] == 1);
    CHECK(j["blocks"][0]["n"] == 4);
    CHECK(j["blocks"][0]["l1"]["rat"] == "1");
    CHECK(j["blocks"][1]["offset"]["rat"] == "9");
    CHECK(j["blocks"][1]["epsilon"]["rat"] == "1/6");
}

TEST_CASE("series CSV uses exact rationals") {
    CounterexampleSpec spec;
    SeriesEvidence ev = series_evidence(spec, 3);
    std::string csv = series_csv(ev);
    CHECK(csv.rfind("H,l1_partial_sum,opnorm_upper_bound\n", 0) == 0);
    CHECK(csv.find("\n2,3/2,") != std::string::npos);
    CHECK(csv.find("\n3,11/6,") != std::string::npos);
}

TEST_CASE("operator output CSV") {
    OperatorOutput out;
    out.grid = {Rational(0), Rational(1, 2)};
    out.values = {Rational(0), Rational(3, 4)};
    out.l1 = Rational(1);
    CHECK(operator_output_csv(out) == "x,value\n0,0\n1/2,3/4\n");
}
