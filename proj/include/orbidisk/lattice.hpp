#pragma once

// Exact integer/rational linear algebra: normal forms, kernels, solves and
// polyhedral cone membership.

#include "orbidisk/arith.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace orbidisk {

class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static IntMatrix identity(std::size_t n);
    /// All rows must have length `cols`; `cols` is needed when `rows` is empty.
    static IntMatrix from_rows(const std::vector<IntVector>& rows, std::size_t cols);
    static IntMatrix from_rows(const std::vector<IntVector>& rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

    Int& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Int& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    IntVector row(std::size_t i) const;
    IntVector col(std::size_t j) const;
    std::vector<IntVector> row_list() const;
    IntMatrix transposed() const;

    friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
    friend bool operator==(const IntMatrix& a, const IntMatrix& b) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Int> data_;
};

using RatMatrix = std::vector<RatVector>;

IntVector mat_vec(const IntMatrix& a, const IntVector& x);
RatVector mat_vec(const IntMatrix& a, const RatVector& x);
/// Row vector times matrix: x^T a.
RatVector vec_mat(const RatVector& x, const IntMatrix& a);
Rat dot(const RatVector& a, const RatVector& b);
Rat dot(const IntVector& a, const RatVector& b);
Int dot(const IntVector& a, const IntVector& b);
bool is_zero(const RatVector& v);
bool is_zero(const IntVector& v);

struct HermiteResult {
    IntMatrix h;  ///< row Hermite normal form
    IntMatrix u;  ///< unimodular transform with u * a == h
};

/// Row HNF: pivots positive, entries above each pivot reduced into [0, pivot).
HermiteResult hermite_normal_form(const IntMatrix& a);

/// Nonzero elementary divisors d_1 | d_2 | ... of `a`.
IntVector smith_invariants(const IntMatrix& a);

std::size_t rank(const IntMatrix& a);
std::size_t rank(const RatMatrix& a);

Int determinant(const IntMatrix& a);

/// Rows form a saturated Z-basis of {x in Z^cols : a x = 0}, in Hermite form.
IntMatrix integer_kernel(const IntMatrix& a);

/// Solves a x = b over Q. Returns nullopt when inconsistent; throws
/// ambiguous_solution when consistent but not unique.
std::optional<RatVector> solve_rational(const RatMatrix& a, const RatVector& b);
std::optional<RatVector> solve_rational(const IntMatrix& a, const RatVector& b);

/// Some integral solution of a x = b, or nullopt.
std::optional<IntVector> solve_integer(const IntMatrix& a, const IntVector& b);

/// Inverse of a nonsingular square rational matrix; throws otherwise.
RatMatrix inverse(const RatMatrix& a);

struct ConeMembership {
    bool contained = false;
    RatVector coefficients;  ///< certificate lambda >= 0 with sum lambda_i g_i == point
};

/// Exact test point in cone(generators). Linearly independent generators use
/// a direct solve; general sets go through Fourier-Motzkin elimination.
ConeMembership cone_contains(const std::vector<RatVector>& generators, const RatVector& point);

/// Constraints eq_lhs x == eq_rhs and le_lhs x <= le_rhs over Q^num_vars.
struct LinearSystem {
    std::size_t num_vars = 0;
    RatMatrix eq_lhs;
    RatVector eq_rhs;
    RatMatrix le_lhs;
    RatVector le_rhs;
};

/// Fourier-Motzkin feasibility with back-substituted witness.
std::optional<RatVector> find_feasible_point(const LinearSystem& system);

struct ParallelepipedPoint {
    IntVector point;
    RatVector coords;  ///< each in [0, 1)
};

/// Lattice points of {sum t_i g_i : t_i in [0,1)} for linearly independent
/// integer generators; exactly |det| of them relative to Z^n cap span(g).
std::vector<ParallelepipedPoint> parallelepiped_points(const std::vector<IntVector>& generators);

}  // namespace orbidisk
