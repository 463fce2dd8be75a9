#pragma once

// Closed-form reference for the C^2/Z_3 chart of P^2/Z_3: the kappa_k
// products expanded exactly over Q(zeta), zeta a primitive 6th root of unity.

#include "orbidisk/series.hpp"

#include <array>

namespace orbidisk {

/// a + b zeta with zeta^2 = zeta - 1.
struct Cyclotomic6 {
    Rat a;
    Rat b;

    static Cyclotomic6 zeta_pow(long k);
    bool is_rational() const { return b == 0; }
    /// Image under zeta -> zeta^{-1} = 1 - zeta.
    Cyclotomic6 conjugate() const { return {a + b, -b}; }

    friend Cyclotomic6 operator+(const Cyclotomic6& x, const Cyclotomic6& y) { return {x.a + y.a, x.b + y.b}; }
    friend Cyclotomic6 operator-(const Cyclotomic6& x, const Cyclotomic6& y) { return {x.a - y.a, x.b - y.b}; }
    friend Cyclotomic6 operator*(const Cyclotomic6& x, const Cyclotomic6& y) {
        return {x.a * y.a - x.b * y.b, x.a * y.b + x.b * y.a + x.b * y.b};
    }
    friend bool operator==(const Cyclotomic6& x, const Cyclotomic6& y) { return x.a == y.a && x.b == y.b; }
};

/// Series in (tau_1, tau_2) with coefficients re + im * zeta.
struct CycloSeries {
    TruncatedSeries re;
    TruncatedSeries im;

    static CycloSeries constant(RingPtr ring, const Cyclotomic6& c);
    Cyclotomic6 coefficient(long i, long j) const;
    bool is_rational() const { return im.is_zero(); }

    friend CycloSeries operator+(const CycloSeries& f, const CycloSeries& g) { return {f.re + g.re, f.im + g.im}; }
    friend CycloSeries operator-(const CycloSeries& f, const CycloSeries& g) { return {f.re - g.re, f.im - g.im}; }
    friend CycloSeries operator*(const CycloSeries& f, const CycloSeries& g);
    friend bool operator==(const CycloSeries& f, const CycloSeries& g) { return f.re == g.re && f.im == g.im; }
};

/// tau_1, tau_2 with unit weights, truncated at total order t.
RingPtr oracle_ring(long t);

CycloSeries kappa(long k, const RingPtr& ring);

struct ElementarySymmetric {
    CycloSeries s1;
    CycloSeries s2;
    CycloSeries s3;
};

ElementarySymmetric elementary_symmetric(const RingPtr& ring);

/// g112 = sigma_2 and g122 = -sigma_1; throws nonrational_coefficient if a
/// zeta part survives.
struct OracleFunctions {
    TruncatedSeries g112;
    TruncatedSeries g122;
};

OracleFunctions oracle_generating_functions(long t);

/// table[b][a]: coefficient of tau_1^a tau_2^b in g112.
using InvariantTable = std::vector<std::vector<Rat>>;

InvariantTable oracle_table(long amax, long bmax);

/// The published 7x7 window, indexed [b][a].
const InvariantTable& paper_table();

}  // namespace orbidisk
