#include "orbidisk/mirror.hpp"

#include "orbidisk/error.hpp"

#include <algorithm>
#include <future>
#include <numeric>

namespace orbidisk {

namespace {

std::int64_t cone_index(const StackyFan& fan, const IndexSet& cone) {
    IntMatrix a(fan.dim, cone.size());
    for (std::size_t k = 0; k < cone.size(); ++k) {
        for (std::size_t r = 0; r < fan.dim; ++r) {
            a.at(r, k) = fan.vec(cone[k])[r];
        }
    }
    Int prod = 1;
    for (const auto& d : smith_invariants(a)) {
        if (d != 0) {
            prod *= d;
        }
    }
    return to_i64(prod);
}

bool is_negative_integer(const Rat& x) { return is_integer(x) && x < 0; }
bool is_nonnegative_integer(const Rat& x) { return is_integer(x) && x >= 0; }

Rat factorial_rat(const Rat& x) { return Rat(factorial(to_int({x})[0].get_ui())); }

RatVector unit_vector(std::size_t n, std::size_t i) {
    RatVector v(n);
    v[i] = 1;
    return v;
}

}  // namespace

RatVector MirrorChart::chart_exponent(const RatVector& d) const {
    const auto pairings = seq.pairings(d);
    const std::size_t rp = r_prime();
    const std::size_t e = num_extras();
    RatVector out(rp + e);
    for (std::size_t a = 0; a < rp; ++a) {
        out[a] = d[a];
    }
    for (std::size_t b = 0; b < e; ++b) {
        const Rat& l = pairings[fan.m() + b];
        out[rp + b] = l;
        for (std::size_t a = 0; a < rp; ++a) {
            out[a] -= l * duals[b].dual_coords[a];
        }
    }
    return out;
}

Rat MirrorChart::degree(const RatVector& d) const { return std::accumulate(d.begin(), d.end(), Rat(0)); }

MirrorChart make_chart(const StackyFan& fan, const Rat& truncation, const std::optional<FanSequenceData>& seq) {
    MirrorChart chart;
    chart.fan = fan;
    chart.seq = seq ? *seq : fan_sequence(fan);
    chart.truncation = truncation;
    const std::size_t rp = chart.seq.r_prime;
    const std::size_t e = chart.num_extras();
    Int modulus = 1;
    for (const auto& cone : fan.max_cones) {
        modulus = lcm_int(modulus, Int(static_cast<long>(cone_index(fan, cone))));
    }
    for (std::size_t j = fan.m(); j < fan.m_prime(); ++j) {
        chart.duals.push_back(dual_class_data(fan, chart.seq, j));
        for (const auto& x : chart.duals.back().dual_coords) {
            modulus = lcm_int(modulus, x.get_den());
        }
    }
    chart.modulus = to_i64(modulus);
    if (e > 0) {
        IntMatrix scaled(e, e);
        for (std::size_t b = 0; b < e; ++b) {
            for (std::size_t j = 0; j < e; ++j) {
                scaled.at(b, j) = to_int({chart.duals[j].dual_coords[rp + b] * modulus})[0];
            }
        }
        if (determinant(scaled) == 0) {
            throw Error(ErrorKind::degenerate_exponent_matrix,
                        "the extended basis does not separate the dual classes; choose another basis_p");
        }
    }
    chart.weights.assign(rp, Rat(1));
    for (std::size_t b = 0; b < e; ++b) {
        const auto& dc = chart.duals[b].dual_coords;
        const Rat w = std::accumulate(dc.begin(), dc.end(), Rat(0));
        if (w <= 0) {
            throw Error(ErrorKind::degenerate_exponent_matrix, "dual class has non-positive weight");
        }
        chart.weights.push_back(w);
    }
    std::vector<std::string> ynames, qnames;
    for (std::size_t a = 0; a < rp; ++a) {
        ynames.push_back("y" + std::to_string(a + 1));
        qnames.push_back("q" + std::to_string(a + 1));
    }
    for (std::size_t b = 0; b < e; ++b) {
        ynames.push_back("u" + std::to_string(fan.m() + b));
        qnames.push_back("tau" + std::to_string(fan.m() + b));
    }
    chart.y_ring = SeriesRing::make(rp + e, chart.modulus, truncation, chart.weights, ynames);
    chart.q_ring = SeriesRing::make(rp + e, chart.modulus, truncation, chart.weights, qnames);
    return chart;
}

std::vector<RatVector> enumerate_exponents(const MirrorChart& chart) {
    const std::size_t r = chart.seq.r;
    const std::int64_t budget = to_i64(floor_rat(chart.truncation * chart.modulus));
    std::vector<RatVector> out;
    if (budget < 0) {
        return out;
    }
    std::vector<std::int64_t> num(r, 0);
    const Int m(static_cast<long>(chart.modulus));
    // Odometer over numerators with sum <= budget.
    while (true) {
        RatVector d(r);
        for (std::size_t a = 0; a < r; ++a) {
            d[a] = make_rat(Int(static_cast<long>(num[a])), m);
        }
        out.push_back(std::move(d));
        std::size_t k = 0;
        std::int64_t used = std::accumulate(num.begin(), num.end(), std::int64_t{0});
        while (k < r) {
            if (used < budget) {
                ++num[k];
                break;
            }
            used -= num[k];
            num[k] = 0;
            ++k;
        }
        if (k == r) {
            break;
        }
    }
    return out;
}

std::vector<RatVector> omega_set(const MirrorChart& chart, std::size_t j) {
    const auto& fan = chart.fan;
    if (j >= fan.m_prime()) {
        throw Error(ErrorKind::invalid_argument, "no vector " + std::to_string(j));
    }
    std::vector<RatVector> out;
    for (auto& d : enumerate_exponents(chart)) {
        const auto l = chart.seq.pairings(d);
        if (j < fan.m()) {
            if (!is_negative_integer(l[j])) {
                continue;
            }
            bool ok = true;
            for (std::size_t i = 0; i < fan.m_prime() && ok; ++i) {
                ok = i == j || is_nonnegative_integer(l[i]);
            }
            if (ok) {
                out.push_back(std::move(d));
            }
            continue;
        }
        if (std::any_of(l.begin(), l.end(), is_negative_integer)) {
            continue;
        }
        IndexSet integral;
        for (std::size_t i = 0; i < l.size(); ++i) {
            if (is_nonnegative_integer(l[i])) {
                integral.push_back(i);
            }
        }
        if (!is_anticone(fan, integral)) {
            continue;
        }
        if (nu_of_relation(fan, l) == fan.vec(j)) {
            out.push_back(std::move(d));
        }
    }
    return out;
}

Rat collapsed_ratio(const Rat& c) {
    const Int top = ceil_rat(c);
    Rat out = 1;
    if (top >= 1) {
        for (Int k = 0; k < top; ++k) {
            out /= c - Rat(k);
        }
    } else {
        for (Int k = top; k < 0; ++k) {
            out *= c - Rat(k);
        }
    }
    return out;
}

TruncatedSeries a_series(const MirrorChart& chart, std::size_t j) {
    const auto& fan = chart.fan;
    TruncatedSeries::TermMap terms;
    for (const auto& d : omega_set(chart, j)) {
        const auto l = chart.seq.pairings(d);
        Rat coef = 1;
        if (j < fan.m()) {
            const Rat k = -l[j];
            coef = factorial_rat(k - 1);
            if (to_int({k})[0] % 2 == 0) {
                coef = -coef;
            }
            for (std::size_t i = 0; i < l.size(); ++i) {
                if (i != j) {
                    coef /= factorial_rat(l[i]);
                }
            }
        } else {
            for (const auto& c : l) {
                coef *= collapsed_ratio(c);
            }
        }
        terms[chart.y_ring->to_exponent(chart.chart_exponent(d))] += coef;
    }
    return TruncatedSeries(chart.y_ring, std::move(terms));
}

MirrorMap mirror_map_forward(const MirrorChart& chart) {
    MirrorMap map;
    const auto& fan = chart.fan;
    for (std::size_t j = 0; j < fan.m_prime(); ++j) {
        map.a.push_back(a_series(chart, j));
    }
    for (std::size_t a = 0; a < chart.r_prime(); ++a) {
        TruncatedSeries s(chart.y_ring);
        for (std::size_t j = 0; j < fan.m(); ++j) {
            const Int& q = chart.seq.q_matrix.at(j, a);
            if (q != 0) {
                s += map.a[j] * Rat(q);
            }
        }
        map.q_units.push_back(exp_series(s));
    }
    for (std::size_t j = fan.m(); j < fan.m_prime(); ++j) {
        map.tau.push_back(map.a[j]);
    }
    return map;
}

std::vector<SubstitutionImage> InverseMirrorMap::images(const MirrorChart& chart) const {
    const std::size_t n = chart.q_ring->nvars();
    std::vector<SubstitutionImage> out;
    for (std::size_t a = 0; a < y_units.size(); ++a) {
        out.push_back({Rat(1), unit_vector(n, a), y_units[a]});
    }
    for (const auto& s : u) {
        out.push_back({Rat(1), RatVector(n), s});
    }
    return out;
}

TruncatedSeries at_inverse(const MirrorChart& chart, const InverseMirrorMap& inverse, const TruncatedSeries& f) {
    return substitute(f, inverse.images(chart), chart.q_ring);
}

InverseMirrorMap invert_mirror_map(const MirrorChart& chart, const MirrorMap& forward) {
    const auto& fan = chart.fan;
    const std::size_t rp = chart.r_prime();
    const std::size_t e = chart.num_extras();
    const auto& ring = chart.q_ring;
    SeriesTuple start;
    for (std::size_t a = 0; a < rp; ++a) {
        start.push_back(TruncatedSeries::constant(ring, 1));
    }
    for (std::size_t b = 0; b < e; ++b) {
        start.push_back(TruncatedSeries::variable(ring, rp + b));
    }
    auto split = [&](const SeriesTuple& x) {
        InverseMirrorMap inv;
        inv.y_units.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(rp));
        inv.u.assign(x.begin() + static_cast<std::ptrdiff_t>(rp), x.end());
        return inv;
    };
    auto step = [&](const SeriesTuple& x) {
        const auto inv = split(x);
        const auto images = inv.images(chart);
        SeriesTuple a_at(fan.m_prime(), TruncatedSeries(ring));
        for (std::size_t j = 0; j < fan.m_prime(); ++j) {
            if (!forward.a[j].is_zero()) {
                a_at[j] = substitute(forward.a[j], images, ring);
            }
        }
        SeriesTuple next;
        for (std::size_t a = 0; a < rp; ++a) {
            TruncatedSeries s(ring);
            for (std::size_t j = 0; j < fan.m(); ++j) {
                const Int& q = chart.seq.q_matrix.at(j, a);
                if (q != 0) {
                    s -= a_at[j] * Rat(q);
                }
            }
            next.push_back(exp_series(s));
        }
        for (std::size_t b = 0; b < e; ++b) {
            next.push_back(TruncatedSeries::variable(ring, rp + b) - a_at[fan.m() + b] + inv.u[b]);
        }
        return next;
    };
    return split(solve_fixed_point(std::move(start), step));
}

SeriesTuple round_trip(const MirrorChart& chart, const MirrorMap& forward, const InverseMirrorMap& inverse) {
    const auto images = inverse.images(chart);
    SeriesTuple out;
    for (std::size_t a = 0; a < chart.r_prime(); ++a) {
        const auto unit = substitute(forward.q_units[a], images, chart.q_ring) * inverse.y_units[a];
        out.push_back(TruncatedSeries::variable(chart.q_ring, a) * unit);
    }
    for (const auto& t : forward.tau) {
        out.push_back(substitute(t, images, chart.q_ring));
    }
    return out;
}

ChartSolution solve_chart(const Suborbifold& sub, const Rat& truncation) {
    ChartSolution sol;
    sol.sub = sub;
    sol.chart = make_chart(sub.fan, truncation);
    sol.forward = mirror_map_forward(sol.chart);
    sol.inverse = invert_mirror_map(sol.chart, sol.forward);
    for (const auto& a : sol.forward.a) {
        sol.a_at_inverse.push_back(a.is_zero() ? TruncatedSeries(sol.chart.q_ring)
                                               : at_inverse(sol.chart, sol.inverse, a));
    }
    return sol;
}

TruncatedSeries generating_series(const ChartSolution& solution, std::size_t k) {
    const auto& chart = solution.chart;
    const auto& fan = chart.fan;
    if (k < fan.m()) {
        return exp_series(-solution.a_at_inverse[k]);
    }
    if (k >= fan.m_prime()) {
        throw Error(ErrorKind::invalid_argument, "no vector " + std::to_string(k));
    }
    const auto& dual = chart.duals[k - fan.m()];
    TruncatedSeries s(chart.q_ring);
    for (std::size_t i = 0; i < fan.m(); ++i) {
        if (dual.c[i] != 0) {
            s += solution.a_at_inverse[i] * dual.c[i];
        }
    }
    return solution.inverse.u[k - fan.m()] * exp_series(-s);
}

bool labeled_less(const LabeledTerm& a, const LabeledTerm& b) {
    auto degree = [](const LabeledTerm& t) {
        Rat d = std::accumulate(t.q.begin(), t.q.end(), Rat(0));
        for (const auto& [p, k] : t.tau) {
            d += k;
        }
        return d;
    };
    const Rat da = degree(a);
    const Rat db = degree(b);
    if (da != db) {
        return da < db;
    }
    if (a.q != b.q) {
        return a.q < b.q;
    }
    return a.tau < b.tau;
}

RatVector DiskGeneratingFunction::parent_relation(const Exponent& e) const {
    const auto& chart = solution.chart;
    const auto coords = chart.q_ring->to_coords(e);
    RatVector d(chart.seq.r);
    for (std::size_t a = 0; a < chart.r_prime(); ++a) {
        d[a] = coords[a];
    }
    return solution.sub.push_relation(chart.seq.pairings(d));
}

std::vector<LabeledTerm> DiskGeneratingFunction::labeled_terms() const {
    const auto& chart = solution.chart;
    const std::size_t rp = chart.r_prime();
    std::vector<LabeledTerm> out;
    for (const auto& [e, c] : series.terms()) {
        LabeledTerm t;
        t.q = h2_coordinates(parent, parent_seq, parent_relation(e));
        const auto coords = chart.q_ring->to_coords(e);
        for (std::size_t b = 0; b < chart.num_extras(); ++b) {
            if (coords[rp + b] != 0) {
                t.tau[chart.fan.vec(chart.fan.m() + b)] = to_int({coords[rp + b]})[0].get_si();
            }
        }
        t.coefficient = c;
        out.push_back(std::move(t));
    }
    std::sort(out.begin(), out.end(), labeled_less);
    return out;
}

DiskGeneratingFunction disk_generating_function(const StackyFan& parent, const FanSequenceData& parent_seq,
                                                const DiskClassSymbol& beta, const ChartSolution& solution) {
    DiskGeneratingFunction g;
    g.parent = parent;
    g.parent_seq = parent_seq;
    g.beta = beta;
    g.solution = solution;
    std::optional<std::size_t> parent_index;
    if (beta.kind == DiskClassSymbol::Kind::smooth) {
        parent_index = beta.ray;
    } else {
        parent_index = parent.index_of(beta.point);
    }
    const auto k = parent_index ? solution.sub.sub_index_of_parent(*parent_index) : std::nullopt;
    if (!k) {
        throw Error(ErrorKind::invalid_facet, "basic class does not lie over the chart's facet");
    }
    g.basic_index = *k;
    g.series = generating_series(solution, *k);
    return g;
}

DiskGeneratingFunction disk_generating_function(const StackyFan& parent, const DiskClassSymbol& beta,
                                                std::optional<std::size_t> facet, const Rat& truncation) {
    const auto sub = build_suborbifold(parent, beta, facet);
    return disk_generating_function(parent, fan_sequence(parent), beta, solve_chart(sub, truncation));
}

Rat extract_invariant(const DiskGeneratingFunction& g, const RatVector& alpha, const std::map<IntVector, long>& insertions,
                      InvariantConvention convention) {
    const auto& chart = g.solution.chart;
    const auto& sub = g.solution.sub;
    const std::size_t rp = chart.r_prime();
    RatVector coords(chart.q_ring->nvars());
    Rat multiplicity = 1;
    for (const auto& [point, count] : insertions) {
        if (count < 0) {
            throw Error(ErrorKind::invalid_argument, "negative insertion count");
        }
        if (count == 0) {
            continue;
        }
        const auto k = chart.fan.index_of(point);
        if (!k || *k < chart.fan.m()) {
            throw Error(ErrorKind::unsupported_insertions,
                        "twisted sector at " + to_string(to_rat(point)[0]) + ",... is not in this chart's Box");
        }
        coords[rp + *k - chart.fan.m()] = count;
        multiplicity *= Rat(factorial(static_cast<unsigned long>(count)));
    }
    if (!alpha.empty()) {
        if (alpha.size() != g.parent.m_prime()) {
            throw Error(ErrorKind::invalid_argument, "curve class needs one entry per parent vector");
        }
        for (std::size_t i = g.parent.m(); i < g.parent.m_prime(); ++i) {
            if (alpha[i] != 0) {
                throw Error(ErrorKind::invalid_argument, "curve class pairs with an extra divisor");
            }
        }
        RatVector sub_relation(sub.vector_map.size());
        for (std::size_t i = 0; i < alpha.size(); ++i) {
            const auto k = sub.sub_index_of_parent(i);
            if (!k) {
                if (alpha[i] != 0) {
                    return 0;  // disks in this class avoid the chart
                }
                continue;
            }
            sub_relation[*k] = alpha[i];
        }
        const auto d = chart.seq.coords_of_relation(sub_relation);
        for (std::size_t a = 0; a < rp; ++a) {
            if (d[a] < 0) {
                return 0;
            }
            coords[a] = d[a];
        }
    }
    Rat degree = 0;
    for (std::size_t i = 0; i < coords.size(); ++i) {
        degree += coords[i] * chart.weights[i];
    }
    if (degree > chart.truncation) {
        throw Error(ErrorKind::order_too_low, "requested coefficient has degree " + to_string(degree) +
                                                  " above the truncation " + to_string(chart.truncation));
    }
    for (const auto& x : coords) {
        if (!is_integer(x * chart.modulus)) {
            return 0;
        }
    }
    const Rat c = g.series.coefficient(coords);
    return convention == InvariantConvention::ordered ? c * multiplicity : c;
}

RatVector h2_coordinates(const StackyFan& fan, const FanSequenceData& seq, const RatVector& relation) {
    RatVector d = seq.coords_of_relation(relation);
    for (std::size_t j = fan.m(); j < fan.m_prime(); ++j) {
        if (relation[j] == 0) {
            continue;
        }
        const auto dual = dual_class_data(fan, seq, j);
        for (std::size_t a = 0; a < d.size(); ++a) {
            d[a] -= relation[j] * dual.dual_coords[a];
        }
    }
    d.resize(seq.r_prime);
    return d;
}

PotentialData assemble_potential(const StackyFan& parent, std::size_t cone, const Rat& truncation, bool parallel,
                                 const std::optional<FanSequenceData>& seq) {
    require_valid(parent);
    if (cone >= parent.max_cones.size() || parent.max_cones[cone].size() != parent.dim) {
        throw Error(ErrorKind::normalization_cone_invalid,
                    "cone " + std::to_string(cone) + " is not a full-dimensional maximal cone");
    }
    const auto parent_seq = seq ? *seq : fan_sequence(parent);
    PotentialData out;
    out.cone = cone;
    out.truncation = truncation;

    std::vector<DiskClassSymbol> classes;
    for (std::size_t i = 0; i < parent.m(); ++i) {
        classes.push_back(DiskClassSymbol::smooth_ray(i));
    }
    for (std::size_t j = parent.m(); j < parent.m_prime(); ++j) {
        classes.push_back(DiskClassSymbol::orbi_point(parent.vec(j)));
    }
    // Default facet per class; one chart per facet.
    std::vector<Suborbifold> subs;
    std::map<std::size_t, std::size_t> chart_of_facet;
    std::vector<std::size_t> class_chart;
    for (const auto& beta : classes) {
        auto sub = build_suborbifold(parent, beta);
        auto [it, fresh] = chart_of_facet.emplace(sub.facet, subs.size());
        if (fresh) {
            subs.push_back(std::move(sub));
        }
        class_chart.push_back(it->second);
        out.facets[beta.boundary(parent)] = it->first;
    }
    std::vector<ChartSolution> solutions(subs.size());
    if (parallel) {
        std::vector<std::future<ChartSolution>> jobs;
        for (const auto& sub : subs) {
            jobs.push_back(std::async(std::launch::async, [&sub, &truncation] { return solve_chart(sub, truncation); }));
        }
        for (std::size_t i = 0; i < jobs.size(); ++i) {
            solutions[i] = jobs[i].get();
        }
    } else {
        for (std::size_t i = 0; i < subs.size(); ++i) {
            solutions[i] = solve_chart(subs[i], truncation);
        }
    }

    // Areas: beta_k - sum_i x_i beta_i over the normalization cone is a class.
    const auto& sigma = parent.max_cones[cone];
    RatMatrix basis(parent.dim, RatVector(sigma.size()));
    for (std::size_t k = 0; k < sigma.size(); ++k) {
        for (std::size_t r = 0; r < parent.dim; ++r) {
            basis[r][k] = parent.vec(sigma[k])[r];
        }
    }
    for (std::size_t c = 0; c < classes.size(); ++c) {
        const std::size_t k = c;  // classes are listed in vector order
        const IntVector b = classes[c].boundary(parent);
        const auto x = *solve_rational(basis, to_rat(b));
        RatVector relation(parent.m_prime());
        relation[k] += 1;
        for (std::size_t i = 0; i < sigma.size(); ++i) {
            relation[sigma[i]] -= x[i];
        }
        const auto area = h2_coordinates(parent, parent_seq, relation);
        out.areas[b] = area;
        const auto g = disk_generating_function(parent, parent_seq, classes[c], solutions[class_chart[c]]);
        auto terms = g.labeled_terms();
        for (auto& t : terms) {
            for (std::size_t a = 0; a < area.size(); ++a) {
                t.q[a] += area[a];
            }
        }
        std::sort(terms.begin(), terms.end(), labeled_less);
        out.terms[b] = std::move(terms);
    }
    return out;
}

}  // namespace orbidisk
