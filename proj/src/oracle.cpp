#include "orbidisk/oracle.hpp"

#include "orbidisk/error.hpp"

namespace orbidisk {

Cyclotomic6 Cyclotomic6::zeta_pow(long k) {
    Cyclotomic6 out{1, 0};
    const Cyclotomic6 z{0, 1};
    for (long i = 0; i < ((k % 6) + 6) % 6; ++i) {
        out = out * z;
    }
    return out;
}

CycloSeries CycloSeries::constant(RingPtr ring, const Cyclotomic6& c) {
    return {TruncatedSeries::constant(ring, c.a), TruncatedSeries::constant(ring, c.b)};
}

Cyclotomic6 CycloSeries::coefficient(long i, long j) const {
    const RatVector e{Rat(i), Rat(j)};
    return {re.coefficient(e), im.coefficient(e)};
}

CycloSeries operator*(const CycloSeries& f, const CycloSeries& g) {
    const auto bd = f.im * g.im;
    return {f.re * g.re - bd, f.re * g.im + f.im * g.re + bd};
}

RingPtr oracle_ring(long t) {
    if (t < 0) {
        throw Error(ErrorKind::invalid_argument, "truncation must be nonnegative");
    }
    return SeriesRing::make(2, 1, Rat(t), {Rat(1), Rat(1)}, {"tau1", "tau2"});
}

namespace {

// exp(c * tau_var / 3) expanded term by term.
CycloSeries exp_linear(const RingPtr& ring, std::size_t var, const Cyclotomic6& c) {
    CycloSeries out = CycloSeries::constant(ring, {0, 0});
    Cyclotomic6 coef{1, 0};
    const long top = to_i64(floor_rat(ring->truncation()));
    for (long n = 0; n <= top; ++n) {
        RatVector e(2);
        e[var] = n;
        out.re += TruncatedSeries::monomial(ring, e, coef.a);
        out.im += TruncatedSeries::monomial(ring, e, coef.b);
        coef = coef * c * Cyclotomic6{make_rat(1, 3 * (n + 1)), 0};
    }
    return out;
}

}  // namespace

CycloSeries kappa(long k, const RingPtr& ring) {
    if (k < 0 || k > 2) {
        throw Error(ErrorKind::invalid_argument, "kappa index must be 0, 1 or 2");
    }
    const auto c = Cyclotomic6::zeta_pow(2 * k + 1);
    return CycloSeries::constant(ring, c) * exp_linear(ring, 0, c) * exp_linear(ring, 1, c * c);
}

ElementarySymmetric elementary_symmetric(const RingPtr& ring) {
    const auto k0 = kappa(0, ring);
    const auto k1 = kappa(1, ring);
    const auto k2 = kappa(2, ring);
    return {k0 + k1 + k2, k0 * k1 + k0 * k2 + k1 * k2, k0 * k1 * k2};
}

OracleFunctions oracle_generating_functions(long t) {
    const auto s = elementary_symmetric(oracle_ring(t));
    if (!s.s1.is_rational() || !s.s2.is_rational()) {
        throw Error(ErrorKind::nonrational_coefficient, "a zeta component survived in the symmetric functions");
    }
    return {s.s2.re, -s.s1.re};
}

InvariantTable oracle_table(long amax, long bmax) {
    const auto g = oracle_generating_functions(amax + bmax).g112;
    InvariantTable out(static_cast<std::size_t>(bmax + 1), std::vector<Rat>(static_cast<std::size_t>(amax + 1)));
    for (long b = 0; b <= bmax; ++b) {
        for (long a = 0; a <= amax; ++a) {
            out[b][a] = g.coefficient(RatVector{Rat(a), Rat(b)});
        }
    }
    return out;
}

const InvariantTable& paper_table() {
    static const InvariantTable table = [] {
        const std::vector<std::vector<const char*>> text = {
            {"0", "1", "0", "0", "1/648", "0", "0"},
            {"0", "0", "-1/18", "0", "0", "-1/29160", "0"},
            {"1/6", "0", "0", "1/972", "0", "0", "1/3149280"},
            {"0", "-1/162", "0", "0", "-1/104976", "0", "0"},
            {"0", "0", "1/11664", "0", "0", "1/18895680", "0"},
            {"-1/9720", "0", "0", "-1/1574640", "0", "0", "-1/5101833600"},
            {"0", "1/524880", "0", "0", "1/340122240", "0", "0"},
        };
        InvariantTable out;
        for (const auto& row : text) {
            out.emplace_back();
            for (const char* s : row) {
                out.back().push_back(parse_rational(s));
            }
        }
        return out;
    }();
    return table;
}

}  // namespace orbidisk
