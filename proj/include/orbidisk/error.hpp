#pragma once

#include <stdexcept>
#include <string>

namespace orbidisk {

enum class ErrorKind {
    parse,
    invalid_argument,
    ambiguous_solution,
    ring_mismatch,
    nonzero_constant_term,
    degree_decreasing_substitution,
    no_convergence,
    no_valid_basis,
    not_complete,
    point_not_on_boundary,
    not_an_extra_vector,
    invalid_facet,
    interior_point,
    no_such_hyperplane,
    degenerate_exponent_matrix,
    unsupported_insertions,
    order_too_low,
    normalization_cone_invalid,
    nonrational_coefficient,
    validation_failure,
};

const char* error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace orbidisk
