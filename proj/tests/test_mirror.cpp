#include "orbidisk/error.hpp"
#include "orbidisk/mirror.hpp"

#include <gtest/gtest.h>

using namespace orbidisk;

namespace {

IntVector iv(std::initializer_list<long> xs) {
    IntVector out;
    for (long x : xs) {
        out.emplace_back(x);
    }
    return out;
}

RatVector rv(std::initializer_list<Rat> xs) { return RatVector(xs); }
Rat q(long p, long d = 1) { return make_rat(Int(p), Int(d)); }

StackyFan make(std::vector<IntVector> rays, std::vector<IndexSet> cones, std::vector<IntVector> extras = {}) {
    StackyFan f;
    f.dim = rays.front().size();
    f.rays = std::move(rays);
    f.extras = std::move(extras);
    f.max_cones = std::move(cones);
    return f;
}

StackyFan c2z3() { return make({iv({2, -1}), iv({-1, 2})}, {{0, 1}}, {iv({1, 0}), iv({0, 1})}); }
StackyFan o2() { return make({iv({1, 0}), iv({0, 1}), iv({-1, 2})}, {{0, 1}, {1, 2}}); }
StackyFan chart3d() {
    return make({iv({1, 0, 1}), iv({0, 1, 1}), iv({-1, -1, 1})}, {{0, 1, 2}}, {iv({0, 0, 1})});
}
StackyFan p2() { return make({iv({1, 0}), iv({0, 1}), iv({-1, -1})}, {{0, 1}, {1, 2}, {0, 2}}); }
StackyFan p1p1() {
    return make({iv({1, 0}), iv({0, 1}), iv({-1, 0}), iv({0, -1})}, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
}
StackyFan p2z3() {
    return with_age_one_extras(make({iv({-1, -1}), iv({2, -1}), iv({-1, 2})}, {{0, 1}, {1, 2}, {0, 2}}));
}
StackyFan f2() { return make({iv({1, 0}), iv({0, 1}), iv({-1, 2}), iv({0, -1})}, {{0, 1}, {1, 2}, {2, 3}, {0, 3}}); }

std::vector<DiskClassSymbol> basic_classes(const StackyFan& fan) {
    std::vector<DiskClassSymbol> out;
    for (std::size_t i = 0; i < fan.m(); ++i) {
        out.push_back(DiskClassSymbol::smooth_ray(i));
    }
    for (std::size_t j = fan.m(); j < fan.m_prime(); ++j) {
        out.push_back(DiskClassSymbol::orbi_point(fan.vec(j)));
    }
    return out;
}

void expect_identity(const MirrorChart& chart, const SeriesTuple& rt) {
    ASSERT_EQ(rt.size(), chart.q_ring->nvars());
    for (std::size_t i = 0; i < rt.size(); ++i) {
        EXPECT_EQ(rt[i], TruncatedSeries::variable(chart.q_ring, i)) << "component " << i << ": " << rt[i].to_string();
    }
}

std::size_t binomial(std::size_t n, std::size_t k) {
    std::size_t out = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        out = out * (n - k + i) / i;
    }
    return out;
}

}  // namespace

TEST(Mirror, GridCount) {
    const auto chart = make_chart(c2z3(), 1);
    EXPECT_EQ(chart.modulus, 3);
    EXPECT_EQ(enumerate_exponents(chart).size(), 10u);  // a + b <= 3
    for (long t = 0; t <= 3; ++t) {
        const auto c = make_chart(c2z3(), t);
        EXPECT_EQ(enumerate_exponents(c).size(), binomial(static_cast<std::size_t>(3 * t) + 2, 2));
    }
}

TEST(Mirror, ChartWeightsForC2Z3) {
    // The default basis makes both tau variables weight one.
    const auto chart = make_chart(c2z3(), 1);
    EXPECT_EQ(chart.r_prime(), 0u);
    EXPECT_EQ(chart.weights, rv({1, 1}));
    for (std::size_t b = 0; b < 2; ++b) {
        const auto& dual = chart.duals[b];
        EXPECT_EQ(chart.chart_exponent(dual.dual_coords), b == 0 ? rv({1, 0}) : rv({0, 1}));
    }
}

TEST(Mirror, OmegaForO2) {
    const auto chart = make_chart(o2(), 4);
    ASSERT_EQ(chart.seq.r, 1u);
    EXPECT_EQ(chart.seq.pairings(rv({1})), rv({1, -2, 1}));
    EXPECT_TRUE(omega_set(chart, 0).empty());
    EXPECT_TRUE(omega_set(chart, 2).empty());
    EXPECT_EQ(omega_set(chart, 1), (std::vector<RatVector>{rv({1}), rv({2}), rv({3}), rv({4})}));
}

TEST(Mirror, OmegaForC2Z3) {
    const auto chart = make_chart(c2z3(), 2);
    for (std::size_t j = 2; j < 4; ++j) {
        const auto omega = omega_set(chart, j);
        ASSERT_FALSE(omega.empty());
        EXPECT_EQ(omega.front(), chart.duals[j - 2].dual_coords);
        for (const auto& d : omega) {
            EXPECT_EQ(nu_of_relation(chart.fan, chart.seq.pairings(d)), chart.fan.vec(j));
        }
    }
    EXPECT_TRUE(omega_set(chart, 0).empty());
}

TEST(Mirror, CollapsedRatio) {
    EXPECT_EQ(collapsed_ratio(q(0)), 1);
    EXPECT_EQ(collapsed_ratio(q(1)), 1);
    EXPECT_EQ(collapsed_ratio(q(3)), q(1, 6));
    EXPECT_EQ(collapsed_ratio(q(-1, 3)), 1);
    EXPECT_EQ(collapsed_ratio(q(-4, 3)), q(-1, 3));  // (c - (-1))
    EXPECT_EQ(collapsed_ratio(q(2, 3)), q(3, 2));    // 1 / c
    EXPECT_EQ(collapsed_ratio(q(5, 3)), q(9, 10));   // 1 / (c (c - 1))
}

TEST(Mirror, ASeriesO2) {
    const auto chart = make_chart(o2(), 3);
    const auto a = a_series(chart, 1);
    const auto& r = chart.y_ring;
    const auto y = TruncatedSeries::variable(r, 0);
    EXPECT_EQ(a, -y - q(3, 2) * pow(y, 2) - q(10, 3) * pow(y, 3));
    EXPECT_TRUE(a_series(chart, 0).is_zero());
}

TEST(Mirror, ForwardAndInverseO2) {
    const auto chart = make_chart(o2(), 3);
    const auto fwd = mirror_map_forward(chart);
    const auto y = TruncatedSeries::variable(chart.y_ring, 0);
    EXPECT_EQ(y * fwd.q_units[0], y + 2 * pow(y, 2) + 5 * pow(y, 3));
    const auto inv = invert_mirror_map(chart, fwd);
    const auto x = TruncatedSeries::variable(chart.q_ring, 0);
    EXPECT_EQ(x * inv.y_units[0], x - 2 * pow(x, 2) + 3 * pow(x, 3));
}

TEST(Mirror, LeadingNormalizationOfExtras) {
    for (const auto& fan : {c2z3(), chart3d()}) {
        const auto chart = make_chart(fan, 2);
        for (std::size_t j = fan.m(); j < fan.m_prime(); ++j) {
            const auto a = a_series(chart, j);
            const auto u = TruncatedSeries::variable(chart.y_ring, chart.r_prime() + j - fan.m());
            EXPECT_EQ(a.coefficient(chart.chart_exponent(chart.duals[j - fan.m()].dual_coords)), 1);
            EXPECT_EQ(a.valuation(), u.valuation());
            const auto rest = a - u;
            for (const auto& [e, c] : rest.terms()) {
                EXPECT_GT(chart.y_ring->degree(e), chart.weights[chart.r_prime() + j - fan.m()]);
            }
        }
    }
}

TEST(Mirror, RoundTrips) {
    const std::vector<std::pair<StackyFan, Rat>> cases = {{c2z3(), 4}, {o2(), 8}, {chart3d(), 2}};
    for (const auto& [fan, t] : cases) {
        const auto chart = make_chart(fan, t);
        const auto fwd = mirror_map_forward(chart);
        const auto inv = invert_mirror_map(chart, fwd);
        expect_identity(chart, round_trip(chart, fwd, inv));
    }
}

TEST(Mirror, O2GeneratingFunctionIsOnePlusQ) {
    const auto sub = build_suborbifold(f2(), DiskClassSymbol::smooth_ray(1));
    const auto sol = solve_chart(sub, 8);
    const auto g = generating_series(sol, sub.basic_index);
    const auto x = TruncatedSeries::variable(sol.chart.q_ring, 0);
    EXPECT_EQ(g, TruncatedSeries::constant(sol.chart.q_ring, 1) + x);
}

TEST(Mirror, BasicClassNormalization) {
    for (const auto& fan : {p2(), p1p1(), p2z3()}) {
        for (const auto& beta : basic_classes(fan)) {
            const auto g = disk_generating_function(fan, beta, std::nullopt, 2);
            if (beta.kind == DiskClassSymbol::Kind::smooth) {
                EXPECT_EQ(g.series.constant_term(), 1);
                EXPECT_EQ(extract_invariant(g, {}, {}), 1);
            } else {
                EXPECT_EQ(g.series.constant_term(), 0);
                EXPECT_EQ(extract_invariant(g, {}, {{beta.point, 1}}), 1);
            }
        }
    }
}

TEST(Mirror, FanoSmoothClassesAreOne) {
    for (const auto& fan : {p2(), p1p1()}) {
        for (const auto& beta : basic_classes(fan)) {
            const auto g = disk_generating_function(fan, beta, std::nullopt, 3);
            EXPECT_EQ(g.series, TruncatedSeries::constant(g.series.ring_ptr(), 1));
        }
    }
}

TEST(Mirror, FacetIndependenceAtVertex) {
    const auto fan = p2z3();
    const auto beta = DiskClassSymbol::smooth_ray(2);
    const auto choices = facets_containing(polytope_facets(fan), minimal_face(fan, to_rat(fan.rays[2])));
    ASSERT_EQ(choices.size(), 2u);
    std::vector<std::vector<LabeledTerm>> specialized;
    for (auto f : choices) {
        const auto g = disk_generating_function(fan, beta, f, 4);
        const auto& chart = g.solution.chart;
        std::vector<std::size_t> taus;
        for (std::size_t b = 0; b < chart.num_extras(); ++b) {
            taus.push_back(chart.r_prime() + b);
        }
        auto g0 = g;
        g0.series = g.series.set_zero(taus);
        EXPECT_EQ(g0.series, TruncatedSeries::constant(chart.q_ring, 1));
        specialized.push_back(g0.labeled_terms());
    }
    ASSERT_EQ(specialized[0].size(), specialized[1].size());
    for (std::size_t i = 0; i < specialized[0].size(); ++i) {
        EXPECT_EQ(specialized[0][i].q, specialized[1][i].q);
        EXPECT_EQ(specialized[0][i].tau, specialized[1][i].tau);
        EXPECT_EQ(specialized[0][i].coefficient, specialized[1][i].coefficient);
    }
}

TEST(Mirror, TableEntriesForBeta112) {
    const auto fan = p2z3();
    const auto g = disk_generating_function(fan, DiskClassSymbol::orbi_point(iv({0, -1})), std::nullopt, 8);
    const IntVector t1 = iv({0, -1});
    const IntVector t2 = iv({1, -1});
    auto n = [&](long a, long b) { return extract_invariant(g, {}, {{t1, a}, {t2, b}}); };
    EXPECT_EQ(n(0, 0), 0);
    EXPECT_EQ(n(1, 0), 1);
    EXPECT_EQ(n(0, 2), q(1, 6));
    EXPECT_EQ(n(2, 1), q(-1, 18));
    EXPECT_EQ(n(4, 0), q(1, 648));
    EXPECT_EQ(n(1, 3), q(-1, 162));
    EXPECT_EQ(n(3, 2), q(1, 972));
    EXPECT_EQ(n(2, 2), 0);
    EXPECT_EQ(extract_invariant(g, {}, {{t1, 2}, {t2, 2}}, InvariantConvention::ordered), 0);
    EXPECT_EQ(extract_invariant(g, {}, {{t2, 2}}, InvariantConvention::ordered), q(1, 3));
}

TEST(Mirror, ExtractInvariantErrors) {
    const auto fan = p2z3();
    const auto g = disk_generating_function(fan, DiskClassSymbol::orbi_point(iv({0, -1})), std::nullopt, 3);
    try {
        extract_invariant(g, {}, {{iv({1, 0}), 1}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::unsupported_insertions);
    }
    try {
        extract_invariant(g, {}, {{iv({0, -1}), 4}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::order_too_low);
    }
    // The smooth sphere class meets v3, which the chart does not contain.
    const auto seq = fan_sequence(fan);
    RatVector line(fan.m_prime());
    line[0] = line[1] = line[2] = 1;
    EXPECT_EQ(extract_invariant(g, line, {}), 0);
}

TEST(Mirror, F2ExceptionalCorrection) {
    const auto fan = f2();
    const auto g = disk_generating_function(fan, DiskClassSymbol::smooth_ray(1), std::nullopt, 8);
    EXPECT_EQ(extract_invariant(g, {}, {}), 1);
    EXPECT_EQ(extract_invariant(g, rv({1, -2, 1, 0}), {}), 1);
    EXPECT_EQ(extract_invariant(g, rv({2, -4, 2, 0}), {}), 0);
    const auto terms = g.labeled_terms();
    ASSERT_EQ(terms.size(), 2u);
    EXPECT_EQ(terms[1].coefficient, 1);
    EXPECT_EQ(h2_coordinates(fan, g.parent_seq, rv({1, -2, 1, 0})), terms[1].q);
}

TEST(Mirror, PotentialOfP2) {
    const auto pot = assemble_potential(p2(), 0, 3);
    ASSERT_EQ(pot.terms.size(), 3u);
    EXPECT_TRUE(is_zero(pot.areas.at(iv({1, 0}))));
    EXPECT_TRUE(is_zero(pot.areas.at(iv({0, 1}))));
    const auto& far = pot.terms.at(iv({-1, -1}));
    ASSERT_EQ(far.size(), 1u);
    EXPECT_EQ(far[0].q, rv({1}));
    EXPECT_EQ(far[0].coefficient, 1);
    EXPECT_THROW(assemble_potential(p2(), 7, 3), Error);
}

TEST(Mirror, PotentialOfP2Z3) {
    const auto fan = p2z3();
    const auto pot = assemble_potential(fan, 0, 2, true);
    ASSERT_EQ(pot.terms.size(), 9u);
    // Sphere class v1 + v2 + v3 has area 1 in the single H_2 coordinate.
    EXPECT_EQ(pot.areas.at(iv({-1, 2})), rv({1}));
    EXPECT_EQ(pot.areas.at(iv({0, -1})), rv({0}));
    EXPECT_EQ(pot.areas.at(iv({1, 0})), rv({q(1, 3)}));
    EXPECT_EQ(pot.areas.at(iv({0, 1})), rv({q(2, 3)}));
    EXPECT_EQ(pot.areas.at(iv({-1, 0})), rv({q(1, 3)}));
    EXPECT_EQ(pot.areas.at(iv({-1, 1})), rv({q(2, 3)}));
    // tau = 0: each basic class contributes exactly its leading monomial.
    for (const auto& [point, terms] : pot.terms) {
        std::size_t tau_free = 0;
        for (const auto& t : terms) {
            if (t.tau.empty()) {
                ++tau_free;
                EXPECT_EQ(t.coefficient, 1);
                EXPECT_EQ(t.q, pot.areas.at(point));
            }
        }
        const bool smooth = fan.index_of(point) < fan.m();
        EXPECT_EQ(tau_free, smooth ? 1u : 0u) << to_string(to_rat(point)[0]);
    }
    const auto serial = assemble_potential(fan, 0, 2, false);
    for (const auto& [point, terms] : pot.terms) {
        const auto& other = serial.terms.at(point);
        ASSERT_EQ(terms.size(), other.size());
        for (std::size_t i = 0; i < terms.size(); ++i) {
            EXPECT_EQ(terms[i].coefficient, other[i].coefficient);
        }
    }
}
