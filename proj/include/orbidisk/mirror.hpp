#pragma once

// Omega sets, A-series, the toric mirror map and its inverse, disk
// generating functions and the assembled potential.

#include "orbidisk/series.hpp"
#include "orbidisk/stacky.hpp"
#include "orbidisk/suborb.hpp"

#include <map>
#include <optional>

namespace orbidisk {

/// Mirror coordinates of a toric CY chart. The y-ring has variables
/// y_1..y_{r'} (weight 1) and u_j = y^{D_j^dual} for extras j (weight
/// w_j = sum_a <p_a, D_j^dual>); the q-ring mirrors it with q_a, tau_j.
struct MirrorChart {
    StackyFan fan;
    FanSequenceData seq;
    std::vector<DualClassData> duals;  ///< extras, index j - m
    std::int64_t modulus = 1;
    RatVector weights;
    Rat truncation;
    RingPtr y_ring;
    RingPtr q_ring;

    std::size_t r_prime() const noexcept { return seq.r_prime; }
    std::size_t num_extras() const noexcept { return fan.m_prime() - fan.m(); }
    /// Exponent of y^d in the chart variables: (alpha_1..alpha_{r'}, l_m..l_{m'-1}).
    RatVector chart_exponent(const RatVector& d) const;
    /// Weighted degree sum_a d_a.
    Rat degree(const RatVector& d) const;
};

/// Throws degenerate_exponent_matrix when the extra part of the basis does
/// not separate the D_j^dual.
MirrorChart make_chart(const StackyFan& fan, const Rat& truncation,
                       const std::optional<FanSequenceData>& seq = std::nullopt);

/// Every d with d_a in (1/M)Z_{>=0} and sum_a d_a <= T.
std::vector<RatVector> enumerate_exponents(const MirrorChart& chart);
std::vector<RatVector> omega_set(const MirrorChart& chart, std::size_t j);
/// The collapsed factorial ratio for extras: prod_{k>=ceil c}(c-k) / prod_{k>=0}(c-k).
Rat collapsed_ratio(const Rat& c);
TruncatedSeries a_series(const MirrorChart& chart, std::size_t j);

struct MirrorMap {
    SeriesTuple a;         ///< A_j(y) for all m' vectors
    SeriesTuple q_units;   ///< q_a = y_a * q_units[a]
    SeriesTuple tau;       ///< tau_j = A_j(y)
};

MirrorMap mirror_map_forward(const MirrorChart& chart);

/// y_a = q_a * y_units[a] and u_j = u[j] as series in the q-ring.
struct InverseMirrorMap {
    SeriesTuple y_units;
    SeriesTuple u;
    std::vector<SubstitutionImage> images(const MirrorChart& chart) const;
};

InverseMirrorMap invert_mirror_map(const MirrorChart& chart, const MirrorMap& forward);
/// f(y(q, tau)) for f in the y-ring.
TruncatedSeries at_inverse(const MirrorChart& chart, const InverseMirrorMap& inverse, const TruncatedSeries& f);

/// forward(inverse(q, tau)) as (q_1..q_{r'}, tau_j) series; identity when exact.
SeriesTuple round_trip(const MirrorChart& chart, const MirrorMap& forward, const InverseMirrorMap& inverse);

/// A solved chart over one facet: shared by every basic class on that facet.
struct ChartSolution {
    Suborbifold sub;
    MirrorChart chart;
    MirrorMap forward;
    InverseMirrorMap inverse;
    SeriesTuple a_at_inverse;  ///< A_j(y(q, tau))
};

ChartSolution solve_chart(const Suborbifold& sub, const Rat& truncation);
/// The theorem's generating function for the basic class with sub index k.
TruncatedSeries generating_series(const ChartSolution& solution, std::size_t k);

/// A monomial of a generating function in the parent's labels.
struct LabeledTerm {
    RatVector q;                    ///< parent H_2 coordinates
    std::map<IntVector, long> tau;  ///< Box point -> power
    Rat coefficient;
};

/// Sort key: total degree, then q, then tau.
bool labeled_less(const LabeledTerm& a, const LabeledTerm& b);

struct DiskGeneratingFunction {
    StackyFan parent;
    FanSequenceData parent_seq;
    DiskClassSymbol beta;
    ChartSolution solution;
    std::size_t basic_index = 0;
    TruncatedSeries series{nullptr};  ///< in solution.chart.q_ring

    /// Parent relation vector of the class with sub q-exponent e.
    RatVector parent_relation(const Exponent& e) const;
    std::vector<LabeledTerm> labeled_terms() const;
};

DiskGeneratingFunction disk_generating_function(const StackyFan& parent, const DiskClassSymbol& beta,
                                                std::optional<std::size_t> facet, const Rat& truncation);
DiskGeneratingFunction disk_generating_function(const StackyFan& parent, const FanSequenceData& parent_seq,
                                                const DiskClassSymbol& beta, const ChartSolution& solution);

/// raw: the coefficient of q^alpha prod tau^a (the paper table's numbers);
/// ordered: multiplied by prod a! (the invariant over ordered insertion tuples).
enum class InvariantConvention { raw, ordered };

/// alpha is a parent relation vector (empty for zero), insertions map Box
/// points to multiplicities. Throws unsupported_insertions for sectors
/// outside the chart and order_too_low beyond the truncation.
Rat extract_invariant(const DiskGeneratingFunction& g, const RatVector& alpha, const std::map<IntVector, long>& insertions,
                      InvariantConvention convention = InvariantConvention::raw);

/// H_2 coordinates of a class: the first r' p-coordinates of
/// d - sum_j <D_j, d> D_j^dual.
RatVector h2_coordinates(const StackyFan& fan, const FanSequenceData& seq, const RatVector& relation);

struct PotentialData {
    std::size_t cone = 0;
    Rat truncation;
    std::map<IntVector, RatVector> areas;  ///< boundary point -> area exponent
    std::map<IntVector, std::vector<LabeledTerm>> terms;
    std::map<IntVector, std::size_t> facets;  ///< boundary point -> facet used
};

/// Throws normalization_cone_invalid for a bad cone index or a cone that is
/// not full-dimensional. With parallel set, facet charts are solved concurrently.
PotentialData assemble_potential(const StackyFan& parent, std::size_t cone, const Rat& truncation,
                                 bool parallel = false, const std::optional<FanSequenceData>& parent_seq = std::nullopt);

}  // namespace orbidisk
