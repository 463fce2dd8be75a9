#pragma once

// Toric Calabi-Yau suborbifold attached to a basic disk class and a facet
// of the fan polytope containing its boundary point.

#include "orbidisk/stacky.hpp"

#include <optional>

namespace orbidisk {

struct Suborbifold {
    StackyFan fan;
    std::size_t facet = 0;  ///< index into polytope_facets(parent)
    Facet facet_data;
    Face face;              ///< minimal face containing b_d
    /// Parent index of each sub vector (rays first, then extras).
    std::vector<std::size_t> vector_map;
    std::size_t parent_size = 0;  ///< m' of the parent
    /// Index in the sub fan of the vector corresponding to the basic class.
    std::size_t basic_index = 0;
    IntVector cy_normal;

    /// Zero-padded inclusion of a relation among sub vectors.
    RatVector push_relation(const RatVector& sub_relation) const;
    std::optional<std::size_t> sub_index_of_parent(std::size_t parent_index) const;
};

/// Checks completeness, Gorenstein and semi-Fano, then builds the suborbifold
/// for a basic class. facet indexes polytope_facets(fan); default is the first
/// facet containing the minimal face. Throws invalid_facet or interior_point.
Suborbifold build_suborbifold(const StackyFan& fan, const DiskClassSymbol& beta,
                              std::optional<std::size_t> facet = std::nullopt);

/// Suborbifold over a facet, without the class checks; basic_index is unset.
Suborbifold suborbifold_on_facet(const StackyFan& fan, std::size_t facet);

/// The primitive u with <u, b> = 1 on every ray and extra vector; throws
/// no_such_hyperplane otherwise.
IntVector cy_check(const StackyFan& fan);

struct PushedClass {
    RatVector relation;  ///< parent relation vector
    RatVector coords;    ///< parent p-coordinates
};

PushedClass push_curve_class(const Suborbifold& sub, const FanSequenceData& sub_seq,
                             const FanSequenceData& parent_seq, const RatVector& sub_coords);

}  // namespace orbidisk
