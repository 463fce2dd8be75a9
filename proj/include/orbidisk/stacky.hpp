#pragma once

// Stacky fans and their combinatorics: fan sequence, divisor classes, Box
// elements, anticones, Gorenstein and semi-Fano tests, fan polytope faces.

#include "orbidisk/arith.hpp"
#include "orbidisk/lattice.hpp"

#include <optional>
#include <string>
#include <vector>

namespace orbidisk {

using IndexSet = std::vector<std::size_t>;

struct StackyFan {
    std::size_t dim = 0;
    std::vector<IntVector> rays;    ///< b_0 .. b_{m-1}
    std::vector<IntVector> extras;  ///< b_m .. b_{m'-1}
    std::vector<IndexSet> max_cones;

    std::size_t m() const noexcept { return rays.size(); }
    std::size_t m_prime() const noexcept { return rays.size() + extras.size(); }
    const IntVector& vec(std::size_t i) const { return i < rays.size() ? rays.at(i) : extras.at(i - rays.size()); }
    std::vector<IntVector> all_vectors() const;
    /// n x m' matrix whose columns are the b_i.
    IntMatrix fan_map() const;
    /// Index of a ray or extra vector equal to v, if any.
    std::optional<std::size_t> index_of(const IntVector& v) const;

    friend bool operator==(const StackyFan&, const StackyFan&) = default;
};

struct ValidationIssue {
    std::string check;
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool ok() const noexcept { return issues.empty(); }
    std::string summary() const;
};

ValidationReport validate(const StackyFan& fan);
/// Throws validation_failure carrying the report summary.
void require_valid(const StackyFan& fan);

/// Every codimension-one face of an n-dimensional cone is shared by exactly two.
bool is_complete(const StackyFan& fan);

/// Minimal cone of the fan containing a rational point, with the positive
/// coefficients over that cone's rays. nullopt outside the support.
struct ConeLocation {
    IndexSet carrier;
    RatVector coefficients;  ///< aligned with carrier
};
std::optional<ConeLocation> locate(const StackyFan& fan, const RatVector& point);

struct BoxElement {
    IndexSet carrier;
    RatVector coords;  ///< aligned with carrier, each in (0, 1)
    IntVector point;
    Rat age;
};

/// All Box elements, the zero element first, the rest ordered by point.
std::vector<BoxElement> box_elements(const StackyFan& fan);
/// Box elements of one maximal cone (exactly |det| of them when full-dimensional).
std::vector<BoxElement> box_elements_of_cone(const StackyFan& fan, std::size_t cone);
/// The Box element at a lattice point, or nullopt if the point is not in Box.
std::optional<BoxElement> box_element_at(const StackyFan& fan, const IntVector& point);

/// Same fan with the extra vectors replaced by all nonzero age-one Box elements.
StackyFan with_age_one_extras(StackyFan fan);

struct AnticoneSet {
    std::vector<IndexSet> members;  ///< sorted
    bool contains(const IndexSet& sorted_set) const;
};

AnticoneSet anticones(const StackyFan& fan);
/// True when the complement of `set` lies inside some maximal cone.
bool is_anticone(const StackyFan& fan, const IndexSet& set);
/// Complements of the maximal cones; enough to test membership in the
/// closed extended Kahler cone.
std::vector<IndexSet> minimal_anticones(const StackyFan& fan);

struct FanSequenceData {
    std::size_t r = 0;
    std::size_t r_prime = 0;
    IntMatrix kernel_basis;  ///< r x m', rows span the relation lattice
    IntMatrix divisors;      ///< m' x r, row i is D_i in kernel-dual coordinates
    IntMatrix basis_p;       ///< r x r, row a is p_a; extended part last
    IntMatrix q_matrix;      ///< m' x r with D_i = sum_a Q_ia p_a

    /// Curve classes d are stored by p-coordinates d_a = <p_a, d>.
    /// Returns the relation vector (<D_i, d>)_i.
    RatVector pairings(const RatVector& d) const;
    /// p-coordinates of the class with the given relation vector.
    RatVector coords_of_relation(const RatVector& relation) const;
};

/// basis_p rows are rational coefficient vectors over D_0..D_{m'-1} whose
/// combinations must be integral. Without one, a bounded search is run;
/// throws no_valid_basis when it fails or when the supplied basis violates
/// the cone conditions.
FanSequenceData fan_sequence(const StackyFan& fan, const std::optional<std::vector<RatVector>>& basis_p = std::nullopt);

/// Certifies a basis (rows in kernel-dual coordinates); empty string when
/// valid, else a description of the first failed condition.
std::string check_basis(const StackyFan& fan, const IntMatrix& divisors, const IntMatrix& basis);

struct DualClassData {
    IndexSet anticone;        ///< I_j
    RatVector c;              ///< length m', c_ji on the minimal cone, zero elsewhere
    RatVector dual_relation;  ///< (<D_i, D_j^dual>)_i
    RatVector dual_coords;    ///< p-coordinates of D_j^dual
};

DualClassData dual_class_data(const StackyFan& fan, const FanSequenceData& seq, std::size_t j);

/// nu(d) = sum_i ceil(<D_i, d>) b_i for a relation vector.
IntVector nu_of_relation(const StackyFan& fan, const RatVector& relation);

struct GorensteinResult {
    bool ok = false;
    std::vector<IntVector> support;  ///< u_sigma per maximal cone while ok
    std::optional<std::size_t> offending_cone;
};

GorensteinResult gorenstein_check(const StackyFan& fan);

struct WallClass {
    IndexSet wall;  ///< shared rays
    std::size_t cone_a = 0;
    std::size_t cone_b = 0;
    RatVector relation;  ///< length m', primitive integral, positive on the opposite rays
    Rat c1;
};

std::vector<WallClass> wall_curve_classes(const StackyFan& fan);

struct SemiFanoResult {
    bool ok = false;
    std::vector<WallClass> walls;
    std::optional<WallClass> witness;  ///< first wall with c1 < 0
    std::vector<WallClass> flat_walls; ///< walls with c1 == 0
};

/// Throws not_complete for fans whose support is not all of N_R.
SemiFanoResult semifano_check(const StackyFan& fan);

struct DiskClassSymbol {
    enum class Kind { smooth, orbi };
    Kind kind = Kind::smooth;
    std::size_t ray = 0;  ///< smooth kind
    IntVector point;      ///< orbi kind: the Box point
    RatVector alpha;      ///< relation vector of the sphere part; empty means zero

    static DiskClassSymbol smooth_ray(std::size_t i) { return {Kind::smooth, i, {}, {}}; }
    static DiskClassSymbol orbi_point(IntVector p) { return {Kind::orbi, 0, std::move(p), {}}; }
    /// Lattice point of the boundary: b_i or nu.
    IntVector boundary(const StackyFan& fan) const;

    friend bool operator==(const DiskClassSymbol&, const DiskClassSymbol&) = default;
};

Rat maslov_index(const StackyFan& fan, const DiskClassSymbol& beta);

struct Facet {
    RatVector normal;  ///< <normal, b> = 1 on the facet, <= 1 on the polytope
    IndexSet rays;     ///< rays lying on the facet
};

struct Face {
    IndexSet facets;
    IndexSet rays;
};

/// Facets of conv{b_0..b_{m-1}}, ordered lexicographically by ray sets.
std::vector<Facet> polytope_facets(const StackyFan& fan);
/// All nonempty proper faces as intersections of facets.
std::vector<Face> fan_polytope_faces(const StackyFan& fan);
/// Throws point_not_on_boundary for interior points.
Face minimal_face(const StackyFan& fan, const RatVector& b);
std::vector<std::size_t> facets_containing(const std::vector<Facet>& facets, const Face& face);

}  // namespace orbidisk
