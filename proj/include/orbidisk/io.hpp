#pragma once

// Fan files, invariant tables and potentials as exact text.

#include "orbidisk/mirror.hpp"

#include <string>

namespace orbidisk {

struct FanFile {
    StackyFan fan;  ///< extras already expanded when auto_extras is set
    bool auto_extras = true;
    std::optional<std::vector<RatVector>> basis_p;
    std::optional<std::size_t> normalization_cone;

    friend bool operator==(const FanFile&, const FanFile&) = default;
};

/// Throws parse for malformed text, unknown fields or out-of-range cone indices.
FanFile parse_fan_file(const std::string& text);
FanFile load_fan_file(const std::string& path);
std::string serialize_fan_file(const FanFile& file);

/// "ray:2" or "box:1,-1".
DiskClassSymbol parse_class(const std::string& text, const StackyFan& fan);
std::string class_label(const DiskClassSymbol& beta);

struct InvariantEntry {
    RatVector alpha;                      ///< <D_i, alpha> for every parent vector
    std::map<IntVector, long> insertions;  ///< Box point -> multiplicity
    Rat value;

    friend bool operator==(const InvariantEntry&, const InvariantEntry&) = default;
};

struct InvariantOutput {
    DiskClassSymbol beta;
    std::size_t facet = 0;
    IndexSet facet_rays;
    Rat order;
    InvariantConvention convention = InvariantConvention::raw;
    std::vector<InvariantEntry> entries;  ///< by weighted degree, then alpha, then insertions

    friend bool operator==(const InvariantOutput& a, const InvariantOutput& b);
};

InvariantOutput compute_invariants(const FanFile& file, const DiskClassSymbol& beta, std::optional<std::size_t> facet,
                                   const Rat& order, InvariantConvention convention = InvariantConvention::raw);

enum class OutputFormat { json, csv, markdown };
OutputFormat parse_format(const std::string& name);

std::string serialize_invariants(const InvariantOutput& out, OutputFormat format);
/// Inverse of the json serialization.
InvariantOutput parse_invariants(const std::string& json_text);

/// q^{1/3}*tau(1,0)^2 style rendering of one term, without the coefficient.
std::string render_monomial(const LabeledTerm& term);
std::string serialize_potential(const PotentialData& pot, OutputFormat format);

/// Facet index in polytope_facets(fan) whose rays are exactly `rays`.
std::size_t facet_from_rays(const StackyFan& fan, IndexSet rays);

}  // namespace orbidisk
