#pragma once

// Truncated multivariate power series with exponents in (1/M) Z^r_{>=0},
// truncated by a weighted total order.

#include "orbidisk/arith.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace orbidisk {

/// Integerized exponent: M * coords.
using Exponent = std::vector<std::int64_t>;

class SeriesRing {
public:
    SeriesRing(std::size_t nvars, std::int64_t modulus, Rat truncation, RatVector weights,
               std::vector<std::string> names = {});

    static std::shared_ptr<const SeriesRing> make(std::size_t nvars, std::int64_t modulus, Rat truncation,
                                                  RatVector weights, std::vector<std::string> names = {});

    std::size_t nvars() const noexcept { return nvars_; }
    std::int64_t modulus() const noexcept { return modulus_; }
    const Rat& truncation() const noexcept { return truncation_; }
    const RatVector& weights() const noexcept { return weights_; }
    const std::vector<std::string>& names() const noexcept { return names_; }

    /// Integer grade of an exponent; weighted degree = grade / grade_scale.
    std::int64_t grade(const Exponent& e) const;
    std::int64_t max_grade() const noexcept { return max_grade_; }
    std::int64_t grade_scale() const noexcept { return grade_scale_; }
    Rat degree(const Exponent& e) const;

    /// Throws ring_mismatch if some coordinate is not in (1/M)Z or is negative.
    Exponent to_exponent(const RatVector& coords) const;
    RatVector to_coords(const Exponent& e) const;

    /// Same variables, modulus and weights; truncation may differ.
    bool same_grading(const SeriesRing& other) const;
    friend bool operator==(const SeriesRing& a, const SeriesRing& b);

private:
    std::size_t nvars_;
    std::int64_t modulus_;
    Rat truncation_;
    RatVector weights_;
    std::vector<std::string> names_;
    std::vector<std::int64_t> grades_;
    std::int64_t grade_scale_ = 1;
    std::int64_t max_grade_ = 0;
};

using RingPtr = std::shared_ptr<const SeriesRing>;

class TruncatedSeries {
public:
    using TermMap = std::map<Exponent, Rat>;

    explicit TruncatedSeries(RingPtr ring) : ring_(std::move(ring)) {}
    /// Terms above the truncation and zero coefficients are dropped.
    TruncatedSeries(RingPtr ring, TermMap terms);

    static TruncatedSeries constant(RingPtr ring, const Rat& c);
    static TruncatedSeries variable(RingPtr ring, std::size_t i);
    static TruncatedSeries monomial(RingPtr ring, const RatVector& coords, const Rat& c = 1);

    const RingPtr& ring_ptr() const noexcept { return ring_; }
    const SeriesRing& ring() const noexcept { return *ring_; }
    const TermMap& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    std::size_t size() const noexcept { return terms_.size(); }

    Rat coefficient(const Exponent& e) const;
    Rat coefficient(const RatVector& coords) const;
    Rat constant_term() const;
    /// Least grade of a stored term; max_grade + 1 for the zero series.
    std::int64_t valuation() const;

    /// Drops every term whose exponent is positive in any listed variable.
    TruncatedSeries set_zero(const std::vector<std::size_t>& vars) const;
    /// Same series viewed in a ring with equal grading; excess terms dropped.
    TruncatedSeries in_ring(RingPtr other) const;

    TruncatedSeries operator-() const;
    TruncatedSeries& operator+=(const TruncatedSeries& g);
    TruncatedSeries& operator-=(const TruncatedSeries& g);
    TruncatedSeries& operator*=(const Rat& c);

    friend TruncatedSeries operator+(TruncatedSeries f, const TruncatedSeries& g) { return f += g; }
    friend TruncatedSeries operator-(TruncatedSeries f, const TruncatedSeries& g) { return f -= g; }
    friend TruncatedSeries operator*(TruncatedSeries f, const Rat& c) { return f *= c; }
    friend TruncatedSeries operator*(const Rat& c, TruncatedSeries f) { return f *= c; }
    friend TruncatedSeries operator*(const TruncatedSeries& f, const TruncatedSeries& g);
    friend bool operator==(const TruncatedSeries& f, const TruncatedSeries& g);

    /// Human-readable rendering, e.g. "1 + 2*q^(1/3)*t1^2".
    std::string to_string() const;

private:
    void check_ring(const TruncatedSeries& g) const;

    RingPtr ring_;
    TermMap terms_;
};

TruncatedSeries add(const TruncatedSeries& f, const TruncatedSeries& g);
TruncatedSeries mul(const TruncatedSeries& f, const TruncatedSeries& g);
TruncatedSeries pow(const TruncatedSeries& f, unsigned long n);

/// exp(f) for f without constant term.
TruncatedSeries exp_series(const TruncatedSeries& f);
/// log(1 + f) for f without constant term.
TruncatedSeries log1p(const TruncatedSeries& f);
/// u^s for a unit u with constant term 1.
TruncatedSeries unit_pow(const TruncatedSeries& u, const Rat& s);

/// Variable a of the source ring is replaced by scalar * z^monomial * factor.
/// Fractional powers require scalar == 1 and factor with constant term 1.
struct SubstitutionImage {
    Rat scalar = 1;
    RatVector monomial;
    TruncatedSeries factor;
};

TruncatedSeries substitute(const TruncatedSeries& f, const std::vector<SubstitutionImage>& images, RingPtr target);

using SeriesTuple = std::vector<TruncatedSeries>;

/// Iterates step from initial until a fixed point. Throws no_convergence when
/// max_iterations rounds pass without stabilizing (0 picks a bound from the
/// first ring's grade count).
SeriesTuple solve_fixed_point(SeriesTuple initial, const std::function<SeriesTuple(const SeriesTuple&)>& step,
                              std::size_t max_iterations = 0);

}  // namespace orbidisk
