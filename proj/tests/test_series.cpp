#include "orbidisk/error.hpp"
#include "orbidisk/series.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace orbidisk;

namespace {

RingPtr ring1(long modulus, Rat t) { return SeriesRing::make(1, modulus, t, {Rat(1)}, {"y"}); }

TruncatedSeries random_series(std::mt19937& rng, const RingPtr& ring, bool zero_constant) {
    std::uniform_int_distribution<int> coef(-4, 4);
    std::uniform_int_distribution<int> den(1, 3);
    std::uniform_int_distribution<int> expo(0, static_cast<int>(ring->modulus()) * 2);
    TruncatedSeries::TermMap terms;
    for (int k = 0; k < 6; ++k) {
        Exponent e(ring->nvars());
        for (auto& x : e) {
            x = expo(rng);
        }
        if (zero_constant && std::all_of(e.begin(), e.end(), [](auto x) { return x == 0; })) {
            continue;
        }
        terms[e] += make_rat(coef(rng), den(rng));
    }
    return TruncatedSeries(ring, terms);
}

// n-th coefficient of (1+y)^s: s(s-1)...(s-n+1)/n!.
Rat binomial(const Rat& s, unsigned n) {
    Rat c = 1;
    for (unsigned k = 0; k < n; ++k) {
        c *= (s - Rat(k)) / Rat(k + 1);
    }
    return c;
}

}  // namespace

TEST(SeriesRing, GradesAndTruncation) {
    // weights 1 and 1/3, modulus 3: a y-step is grade 3, a u-step grade 1.
    auto r = SeriesRing::make(2, 3, Rat(2), {Rat(1), Rat(1, 3)});
    EXPECT_EQ(r->grade_scale(), 9);
    EXPECT_EQ(r->max_grade(), 18);
    EXPECT_EQ(r->degree({3, 3}), Rat(4, 3));
    EXPECT_THROW(r->to_exponent({Rat(1, 2), Rat(0)}), Error);
    EXPECT_THROW(r->to_exponent({Rat(-1), Rat(0)}), Error);
}

TEST(Series, BasicArithmetic) {
    auto r = ring1(3, Rat(3));
    const auto one = TruncatedSeries::constant(r, 1);
    const auto y = TruncatedSeries::variable(r, 0);
    EXPECT_EQ(y + TruncatedSeries(r), y);
    EXPECT_EQ((one + y) + (one - y), TruncatedSeries::constant(r, 2));
    const auto sq = (one + y) * (one + y);
    EXPECT_EQ(sq.coefficient({Rat(0)}), 1);
    EXPECT_EQ(sq.coefficient({Rat(1)}), 2);
    EXPECT_EQ(sq.coefficient({Rat(2)}), 1);
    EXPECT_EQ(sq.size(), 3u);
    const auto third = TruncatedSeries::monomial(r, {Rat(1, 3)});
    const auto two_thirds = TruncatedSeries::monomial(r, {Rat(2, 3)});
    EXPECT_EQ(third * two_thirds, y);
}

TEST(Series, TruncationDropsHighTerms) {
    auto r = ring1(1, Rat(2));
    const auto y = TruncatedSeries::variable(r, 0);
    EXPECT_TRUE((y * y * y).is_zero());
    EXPECT_TRUE(TruncatedSeries::monomial(r, {Rat(3)}).is_zero());
}

TEST(Series, RingMismatch) {
    const auto a = TruncatedSeries::variable(ring1(1, Rat(2)), 0);
    const auto b = TruncatedSeries::variable(ring1(1, Rat(3)), 0);
    try {
        (void)(a + b);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ring_mismatch);
    }
    EXPECT_THROW((void)(a * b), Error);
}

TEST(Series, ExpTaylorCoefficients) {
    auto r = ring1(1, Rat(7));
    const auto e = exp_series(TruncatedSeries::variable(r, 0));
    Rat fact = 1;
    for (unsigned k = 0; k <= 7; ++k) {
        if (k > 0) {
            fact *= k;
        }
        EXPECT_EQ(e.coefficient({Rat(k)}), 1 / fact) << k;
    }
    EXPECT_EQ(exp_series(TruncatedSeries(r)), TruncatedSeries::constant(r, 1));
    try {
        exp_series(TruncatedSeries::constant(r, 1));
        FAIL();
    } catch (const Error& err) {
        EXPECT_EQ(err.kind(), ErrorKind::nonzero_constant_term);
    }
}

TEST(Series, LogCoefficients) {
    auto r = ring1(1, Rat(6));
    const auto l = log1p(TruncatedSeries::variable(r, 0));
    for (int k = 1; k <= 6; ++k) {
        EXPECT_EQ(l.coefficient({Rat(k)}), make_rat(k % 2 ? 1 : -1, k));
    }
    EXPECT_TRUE(log1p(TruncatedSeries(r)).is_zero());
    EXPECT_THROW(log1p(TruncatedSeries::constant(r, 2)), Error);
}

TEST(Series, UnitPowMatchesBinomialSeries) {
    auto r = ring1(1, Rat(8));
    const auto u = TruncatedSeries::constant(r, 1) + TruncatedSeries::variable(r, 0);
    for (const Rat s : {Rat(1, 2), Rat(-1, 3), Rat(-2), Rat(5, 3)}) {
        const auto p = unit_pow(u, s);
        for (unsigned k = 0; k <= 8; ++k) {
            EXPECT_EQ(p.coefficient({Rat(k)}), binomial(s, k)) << s << " " << k;
        }
    }
}

TEST(Series, SubstituteExample) {
    // y^2 with y -> q(1 + t) gives q^2(1 + 2t + t^2).
    auto src = ring1(1, Rat(2));
    auto dst = SeriesRing::make(2, 1, Rat(4), {Rat(1), Rat(1)}, {"q", "t"});
    const auto y = TruncatedSeries::variable(src, 0);
    const auto one = TruncatedSeries::constant(dst, 1);
    const auto t = TruncatedSeries::variable(dst, 1);
    const auto g = substitute(y * y, {{Rat(1), {Rat(1), Rat(0)}, one + t}}, dst);
    EXPECT_EQ(g.size(), 3u);
    EXPECT_EQ(g.coefficient({Rat(2), Rat(0)}), 1);
    EXPECT_EQ(g.coefficient({Rat(2), Rat(1)}), 2);
    EXPECT_EQ(g.coefficient({Rat(2), Rat(2)}), 1);
}

TEST(Series, SubstituteIdentityAndFractional) {
    std::mt19937 rng(41);
    auto r = SeriesRing::make(2, 3, Rat(3), {Rat(1), Rat(1)});
    for (int trial = 0; trial < 10; ++trial) {
        const auto f = random_series(rng, r, false);
        std::vector<SubstitutionImage> id{{Rat(1), {Rat(1), Rat(0)}, TruncatedSeries::constant(r, 1)},
                                          {Rat(1), {Rat(0), Rat(1)}, TruncatedSeries::constant(r, 1)}};
        EXPECT_EQ(substitute(f, id, r), f);
    }
    // y^(1/3) with y -> x(1 + x) equals x^(1/3) (1 + x)^(1/3).
    auto src = ring1(3, Rat(3));
    auto dst = ring1(3, Rat(3));
    const auto one = TruncatedSeries::constant(dst, 1);
    const auto x = TruncatedSeries::variable(dst, 0);
    const auto g = substitute(TruncatedSeries::monomial(src, {Rat(1, 3)}), {{Rat(1), {Rat(1)}, one + x}}, dst);
    for (unsigned k = 0; k <= 2; ++k) {
        EXPECT_EQ(g.coefficient({Rat(1, 3) + Rat(k)}), binomial(Rat(1, 3), k));
    }
}

TEST(Series, SubstituteRejectsDegreeDecrease) {
    auto src = SeriesRing::make(1, 1, Rat(2), {Rat(2)});
    auto dst = ring1(1, Rat(2));
    const auto f = TruncatedSeries::variable(src, 0);
    try {
        substitute(f, {{Rat(1), {Rat(1)}, TruncatedSeries::constant(dst, 1)}}, dst);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::degree_decreasing_substitution);
    }
}

TEST(SeriesProperties, RingLaws) {
    std::mt19937 rng(1);
    auto r = SeriesRing::make(2, 2, Rat(3), {Rat(1), Rat(1, 2)});
    for (int trial = 0; trial < 25; ++trial) {
        const auto f = random_series(rng, r, false);
        const auto g = random_series(rng, r, false);
        const auto h = random_series(rng, r, false);
        EXPECT_EQ(f + g, g + f);
        EXPECT_EQ((f + g) + h, f + (g + h));
        EXPECT_EQ(f * g, g * f);
        EXPECT_EQ((f * g) * h, f * (g * h));
        EXPECT_EQ(f * (g + h), f * g + f * h);
        EXPECT_EQ(f * TruncatedSeries::constant(r, 1), f);
        EXPECT_TRUE((f - f).is_zero());
        const auto prod = f * g * h;
        for (const auto& [e, c] : prod.terms()) {
            EXPECT_NE(c, 0);
            EXPECT_LE(r->grade(e), r->max_grade());
        }
    }
}

TEST(SeriesProperties, ExpLogIdentities) {
    std::mt19937 rng(2);
    auto r = SeriesRing::make(2, 3, Rat(2), {Rat(1), Rat(1, 3)});
    const auto one = TruncatedSeries::constant(r, 1);
    for (int trial = 0; trial < 15; ++trial) {
        const auto f = random_series(rng, r, true);
        EXPECT_EQ(exp_series(f) * exp_series(-f), one);
        EXPECT_EQ(exp_series(log1p(f)), one + f);
        EXPECT_EQ(log1p(exp_series(f) - one), f);
        EXPECT_EQ(unit_pow(exp_series(f), Rat(1, 3)), exp_series(f * Rat(1, 3)));
    }
}

TEST(FixedPoint, ConstantMap) {
    auto r = ring1(1, Rat(3));
    const auto c = TruncatedSeries::constant(r, 5);
    const auto sol = solve_fixed_point({TruncatedSeries(r)}, [&](const SeriesTuple&) { return SeriesTuple{c}; });
    EXPECT_EQ(sol.front(), c);
}

TEST(FixedPoint, LambertSeries) {
    // y = q exp(-y); Lagrange inversion gives [q^n] y = (-1)^(n-1) n^(n-1) / n!.
    auto r = ring1(1, Rat(6));
    const auto q = TruncatedSeries::variable(r, 0);
    const auto sol = solve_fixed_point({TruncatedSeries(r)}, [&](const SeriesTuple& y) {
        return SeriesTuple{q * exp_series(-y[0])};
    });
    const auto& y = sol.front();
    const std::vector<Rat> hand{Rat(1), Rat(-1), Rat(3, 2), Rat(-8, 3), Rat(125, 24), Rat(-54, 5)};
    Rat fact = 1;
    for (unsigned n = 1; n <= 6; ++n) {
        fact *= n;
        Int power;
        mpz_ui_pow_ui(power.get_mpz_t(), n, n - 1);
        const Rat lagrange = Rat(n % 2 ? 1 : -1) * Rat(power) / fact;
        EXPECT_EQ(y.coefficient({Rat(n)}), lagrange) << n;
        EXPECT_EQ(y.coefficient({Rat(n)}), hand[n - 1]) << n;
    }
    EXPECT_EQ(y.size(), 6u);
    EXPECT_EQ(q * exp_series(-y), y);
}

TEST(FixedPoint, NonContractiveStepFails) {
    auto r = ring1(1, Rat(2));
    const auto one = TruncatedSeries::constant(r, 1);
    try {
        solve_fixed_point({TruncatedSeries(r)}, [&](const SeriesTuple& y) { return SeriesTuple{y[0] + one}; });
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::no_convergence);
    }
}

TEST(Series, Rendering) {
    auto r = SeriesRing::make(2, 3, Rat(3), {Rat(1), Rat(1)}, {"q", "t"});
    const auto f = TruncatedSeries::constant(r, 1) - TruncatedSeries::monomial(r, {Rat(1, 3), Rat(2)}, Rat(2, 5));
    EXPECT_EQ(f.to_string(), "1 - 2/5*q^(1/3)*t^2");
}
