#include "orbidisk/suborb.hpp"

#include "orbidisk/error.hpp"

#include <algorithm>
#include <set>

namespace orbidisk {

RatVector Suborbifold::push_relation(const RatVector& sub_relation) const {
    if (sub_relation.size() != vector_map.size()) {
        throw Error(ErrorKind::invalid_argument, "relation length does not match the suborbifold");
    }
    RatVector out(parent_size);
    for (std::size_t k = 0; k < vector_map.size(); ++k) {
        out[vector_map[k]] = sub_relation[k];
    }
    return out;
}

std::optional<std::size_t> Suborbifold::sub_index_of_parent(std::size_t parent_index) const {
    const auto it = std::find(vector_map.begin(), vector_map.end(), parent_index);
    if (it == vector_map.end()) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - vector_map.begin());
}

IntVector cy_check(const StackyFan& fan) {
    std::vector<IntVector> rows = fan.all_vectors();
    const IntMatrix a = IntMatrix::from_rows(rows, fan.dim);
    if (rank(a) != fan.dim) {
        throw Error(ErrorKind::no_such_hyperplane, "vectors do not span, the hyperplane is not unique");
    }
    const auto u = solve_rational(a, RatVector(rows.size(), Rat(1)));
    if (!u) {
        throw Error(ErrorKind::no_such_hyperplane, "vectors do not lie on a common affine hyperplane {u = 1}");
    }
    if (!std::all_of(u->begin(), u->end(), [](const Rat& x) { return is_integer(x); })) {
        throw Error(ErrorKind::no_such_hyperplane, "the hyperplane {u = 1} has a non-integral normal");
    }
    return to_int(*u);
}

Suborbifold build_suborbifold(const StackyFan& fan, const DiskClassSymbol& beta, std::optional<std::size_t> facet) {
    require_valid(fan);
    if (!is_complete(fan)) {
        throw Error(ErrorKind::not_complete, "suborbifold construction needs a complete fan");
    }
    if (const auto g = gorenstein_check(fan); !g.ok) {
        throw Error(ErrorKind::validation_failure,
                    "fan is not Gorenstein (cone " + std::to_string(*g.offending_cone) + ")");
    }
    if (const auto sf = semifano_check(fan); !sf.ok) {
        std::string wall;
        for (auto i : sf.witness->wall) {
            wall += (wall.empty() ? "" : ",") + std::to_string(i);
        }
        throw Error(ErrorKind::validation_failure,
                    "fan is not semi-Fano: wall {" + wall + "} has c1 = " + to_string(sf.witness->c1));
    }
    if (std::any_of(beta.alpha.begin(), beta.alpha.end(), [](const Rat& x) { return x != 0; })) {
        throw Error(ErrorKind::invalid_argument, "suborbifold needs a basic class");
    }
    const IntVector b = beta.boundary(fan);
    std::size_t parent_basic = 0;
    if (beta.kind == DiskClassSymbol::Kind::smooth) {
        parent_basic = beta.ray;
    } else {
        const auto e = box_element_at(fan, b);
        if (!e || e->age != 1) {
            throw Error(ErrorKind::invalid_argument, "orbi class needs an age-one Box element");
        }
        const auto idx = fan.index_of(b);
        if (!idx || *idx < fan.m()) {
            throw Error(ErrorKind::invalid_argument, "Box element is not among the extra vectors");
        }
        parent_basic = *idx;
    }

    const auto facets = polytope_facets(fan);
    Face face;
    try {
        face = minimal_face(fan, to_rat(b));
    } catch (const Error& err) {
        if (err.kind() == ErrorKind::point_not_on_boundary) {
            throw Error(ErrorKind::interior_point, "b_d lies in the interior of the fan polytope");
        }
        throw;
    }
    const auto candidates = facets_containing(facets, face);
    std::size_t chosen = candidates.front();
    if (facet) {
        if (*facet >= facets.size() || std::find(candidates.begin(), candidates.end(), *facet) == candidates.end()) {
            throw Error(ErrorKind::invalid_facet, "facet " + std::to_string(*facet) + " does not contain the minimal face");
        }
        chosen = *facet;
    }
    Suborbifold sub = suborbifold_on_facet(fan, chosen);
    sub.face = face;
    sub.basic_index = *sub.sub_index_of_parent(parent_basic);
    return sub;
}

Suborbifold suborbifold_on_facet(const StackyFan& fan, std::size_t facet) {
    const auto facets = polytope_facets(fan);
    if (facet >= facets.size()) {
        throw Error(ErrorKind::invalid_facet, "no facet " + std::to_string(facet));
    }
    Suborbifold sub;
    sub.facet = facet;
    sub.facet_data = facets[facet];
    const IndexSet& on_facet = sub.facet_data.rays;

    std::vector<RatVector> gens;
    for (auto i : on_facet) {
        gens.push_back(to_rat(fan.rays[i]));
    }
    std::vector<std::size_t> extras;
    for (std::size_t i = 0; i < fan.m_prime(); ++i) {
        if (std::binary_search(on_facet.begin(), on_facet.end(), i)) {
            continue;
        }
        if (cone_contains(gens, to_rat(fan.vec(i))).contained) {
            extras.push_back(i);
        }
    }

    sub.fan.dim = fan.dim;
    sub.parent_size = fan.m_prime();
    for (auto i : on_facet) {
        sub.fan.rays.push_back(fan.rays[i]);
        sub.vector_map.push_back(i);
    }
    for (auto i : extras) {
        sub.fan.extras.push_back(fan.vec(i));
        sub.vector_map.push_back(i);
    }
    // Faces of parent cones lying over the facet, kept when maximal.
    std::set<IndexSet> faces;
    for (const auto& cone : fan.max_cones) {
        IndexSet face;
        for (auto i : cone) {
            if (std::binary_search(on_facet.begin(), on_facet.end(), i)) {
                face.push_back(static_cast<std::size_t>(
                    std::lower_bound(on_facet.begin(), on_facet.end(), i) - on_facet.begin()));
            }
        }
        if (!face.empty()) {
            faces.insert(face);
        }
    }
    for (const auto& f : faces) {
        const bool maximal = std::none_of(faces.begin(), faces.end(), [&](const IndexSet& g) {
            return g != f && std::includes(g.begin(), g.end(), f.begin(), f.end());
        });
        if (maximal) {
            sub.fan.max_cones.push_back(f);
        }
    }
    for (std::size_t k = sub.fan.m(); k < sub.fan.m_prime(); ++k) {
        if (!locate(sub.fan, to_rat(sub.fan.vec(k)))) {
            throw Error(ErrorKind::validation_failure,
                        "the subfan over the chosen facet is not convex; no suborbifold inside the fan");
        }
    }
    sub.cy_normal = cy_check(sub.fan);
    return sub;
}

PushedClass push_curve_class(const Suborbifold& sub, const FanSequenceData& sub_seq,
                             const FanSequenceData& parent_seq, const RatVector& sub_coords) {
    PushedClass out;
    out.relation = sub.push_relation(sub_seq.pairings(sub_coords));
    out.coords = parent_seq.coords_of_relation(out.relation);
    return out;
}

}  // namespace orbidisk
