#include "orbidisk/verify.hpp"

#include "orbidisk/error.hpp"

#include <sstream>

namespace orbidisk {

namespace {

const IntVector& tau112() {
    static const IntVector p{Int(0), Int(-1)};
    return p;
}
const IntVector& tau122() {
    static const IntVector p{Int(1), Int(-1)};
    return p;
}

InvariantTable read_table(const TruncatedSeries& g, long amax, long bmax, bool transpose) {
    InvariantTable out(static_cast<std::size_t>(bmax + 1), std::vector<Rat>(static_cast<std::size_t>(amax + 1)));
    for (long b = 0; b <= bmax; ++b) {
        for (long a = 0; a <= amax; ++a) {
            out[b][a] = transpose ? g.coefficient(RatVector{Rat(b), Rat(a)}) : g.coefficient(RatVector{Rat(a), Rat(b)});
        }
    }
    return out;
}

std::string cell(long a, long b) { return "(" + std::to_string(a) + "," + std::to_string(b) + ")"; }

}  // namespace

StackyFan p2z3_fan() {
    StackyFan f;
    f.dim = 2;
    f.rays = {IntVector{Int(-1), Int(-1)}, IntVector{Int(2), Int(-1)}, IntVector{Int(-1), Int(2)}};
    f.max_cones = {{0, 1}, {1, 2}, {0, 2}};
    return with_age_one_extras(f);
}

TruncatedSeries pipeline_in_oracle_ring(const DiskGeneratingFunction& g, const RingPtr& ring) {
    TruncatedSeries::TermMap terms;
    for (const auto& t : g.labeled_terms()) {
        if (!is_zero(t.q)) {
            throw Error(ErrorKind::invalid_argument, "term carries a Kahler parameter; not a C^2/Z_3 chart");
        }
        RatVector e(2);
        for (const auto& [p, k] : t.tau) {
            if (p == tau112()) {
                e[0] = k;
            } else if (p == tau122()) {
                e[1] = k;
            } else {
                throw Error(ErrorKind::unsupported_insertions, "sector outside the beta_112 chart");
            }
        }
        if (e[0] + e[1] <= ring->truncation()) {
            terms[ring->to_exponent(e)] = t.coefficient;
        }
    }
    return TruncatedSeries(ring, std::move(terms));
}

P2Z3Report verify_p2z3(long amax, long bmax) {
    if (amax < 0 || bmax < 0) {
        throw Error(ErrorKind::invalid_argument, "table bounds must be nonnegative");
    }
    P2Z3Report r;
    r.amax = amax;
    r.bmax = bmax;
    const auto fan = p2z3_fan();
    const auto seq = fan_sequence(fan);
    const auto b112 = DiskClassSymbol::orbi_point(tau112());
    const auto b122 = DiskClassSymbol::orbi_point(tau122());
    const auto sub = build_suborbifold(fan, b112);
    // Enough weight for tau-degree amax + bmax in either variable.
    const auto probe = make_chart(sub.fan, 1);
    Rat wmax = 0;
    for (const auto& w : probe.weights) {
        wmax = std::max(wmax, w);
    }
    r.truncation = Rat(amax + bmax) * wmax;
    const auto sol = solve_chart(sub, r.truncation);
    const auto g112 = disk_generating_function(fan, seq, b112, sol);
    const auto g122 = disk_generating_function(fan, seq, b122, sol);

    const auto ring = oracle_ring(amax + bmax);
    const auto s112 = pipeline_in_oracle_ring(g112, ring);
    const auto s122 = pipeline_in_oracle_ring(g122, ring);
    const auto oracle = oracle_generating_functions(amax + bmax);
    r.oracle_series_match = s112 == oracle.g112 && s122 == oracle.g122;

    r.pipeline = read_table(s112, amax, bmax, false);
    r.pipeline_122 = read_table(s122, amax, bmax, true);
    r.oracle = read_table(oracle.g112, amax, bmax, false);
    r.symmetric = r.pipeline == r.pipeline_122;

    const auto& paper = paper_table();
    for (long b = 0; b <= bmax; ++b) {
        for (long a = 0; a <= amax; ++a) {
            const Rat& got = r.pipeline[b][a];
            if (got != r.oracle[b][a]) {
                r.mismatches.push_back("oracle " + cell(a, b) + ": pipeline " + to_string(got) + ", oracle " +
                                       to_string(r.oracle[b][a]));
            }
            if (a < 7 && b < 7) {
                ++r.paper_checked;
                if (got == paper[b][a]) {
                    ++r.paper_matched;
                } else {
                    r.mismatches.push_back("paper " + cell(a, b) + ": pipeline " + to_string(got) + ", paper " +
                                           to_string(paper[b][a]));
                }
            }
        }
    }

    r.diagonal_zero = true;
    for (long k = 0; k <= std::min(amax, bmax); ++k) {
        r.diagonal_zero = r.diagonal_zero && r.pipeline[k][k] == 0;
    }
    r.reciprocal_integral = true;
    r.divisible_by_six = true;
    r.sign_alternates = true;
    for (long a = 0; a <= amax; ++a) {
        int column_sign = 0;
        for (long b = 0; b <= bmax; ++b) {
            const Rat& x = r.pipeline[b][a];
            if (x == 0) {
                continue;
            }
            const Rat inv = 1 / x;
            if (!is_integer(inv)) {
                r.reciprocal_integral = false;
            } else if (a + b >= 2 && inv.get_num() % 6 != 0) {
                r.divisible_by_six = false;
            }
            const int s = ((x > 0) ? 1 : -1) * (b % 2 == 0 ? 1 : -1);
            if (column_sign != 0 && s != column_sign) {
                r.sign_alternates = false;
            }
            column_sign = s;
        }
    }
    return r;
}

std::string render_report(const P2Z3Report& r) {
    std::ostringstream os;
    auto mark = [](bool ok) { return ok ? "pass" : "FAIL"; };
    os << "P^2/Z_3 invariant table, a <= " << r.amax << ", b <= " << r.bmax << ", truncation " << to_string(r.truncation)
       << "\n";
    os << "paper window: " << r.paper_matched << "/" << r.paper_checked << " exact matches\n";
    os << "oracle series (beta_112, beta_122): " << mark(r.oracle_series_match) << "\n";
    os << "symmetry beta_112 vs beta_122 transposed: " << mark(r.symmetric) << "\n";
    os << "n_(k,k) = 0: " << mark(r.diagonal_zero) << "\n";
    os << "reciprocal integrality: " << mark(r.reciprocal_integral) << "\n";
    os << "reciprocals divisible by 6 (a+b >= 2): " << mark(r.divisible_by_six) << "\n";
    os << "sign alternates in b: " << mark(r.sign_alternates) << "\n";
    for (const auto& m : r.mismatches) {
        os << "mismatch " << m << "\n";
    }
    os << "\n| b \\ a |";
    for (long a = 0; a <= r.amax; ++a) {
        os << " " << a << " |";
    }
    os << "\n|---|";
    for (long a = 0; a <= r.amax; ++a) {
        os << "---|";
    }
    os << "\n";
    for (long b = 0; b <= r.bmax; ++b) {
        os << "| " << b << " |";
        for (long a = 0; a <= r.amax; ++a) {
            os << " " << to_string(r.pipeline[b][a]) << " |";
        }
        os << "\n";
    }
    os << (r.ok() ? "PASS" : "FAIL") << "\n";
    return os.str();
}

}  // namespace orbidisk
