#include "orbidisk/lattice.hpp"

#include "orbidisk/error.hpp"

#include <algorithm>
#include <utility>

namespace orbidisk {

IntMatrix IntMatrix::identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m.at(i, i) = 1;
    }
    return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<IntVector>& rows, std::size_t cols) {
    IntMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols) {
            throw Error(ErrorKind::invalid_argument, "ragged matrix rows");
        }
        for (std::size_t j = 0; j < cols; ++j) {
            m.at(i, j) = rows[i][j];
        }
    }
    return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<IntVector>& rows) {
    return from_rows(rows, rows.empty() ? 0 : rows.front().size());
}

IntVector IntMatrix::row(std::size_t i) const {
    return IntVector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                     data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

IntVector IntMatrix::col(std::size_t j) const {
    IntVector out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        out[i] = at(i, j);
    }
    return out;
}

std::vector<IntVector> IntMatrix::row_list() const {
    std::vector<IntVector> out;
    out.reserve(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        out.push_back(row(i));
    }
    return out;
}

IntMatrix IntMatrix::transposed() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            t.at(j, i) = at(i, j);
        }
    }
    return t;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols() != b.rows()) {
        throw Error(ErrorKind::invalid_argument, "matrix shape mismatch in product");
    }
    IntMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            if (a.at(i, k) == 0) {
                continue;
            }
            for (std::size_t j = 0; j < b.cols(); ++j) {
                c.at(i, j) += a.at(i, k) * b.at(k, j);
            }
        }
    }
    return c;
}

IntVector mat_vec(const IntMatrix& a, const IntVector& x) {
    IntVector out(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            out[i] += a.at(i, j) * x[j];
        }
    }
    return out;
}

RatVector mat_vec(const IntMatrix& a, const RatVector& x) {
    RatVector out(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            out[i] += Rat(a.at(i, j)) * x[j];
        }
    }
    return out;
}

RatVector vec_mat(const RatVector& x, const IntMatrix& a) {
    RatVector out(a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        if (x[i] == 0) {
            continue;
        }
        for (std::size_t j = 0; j < a.cols(); ++j) {
            out[j] += x[i] * Rat(a.at(i, j));
        }
    }
    return out;
}

Rat dot(const RatVector& a, const RatVector& b) {
    Rat s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

Rat dot(const IntVector& a, const RatVector& b) {
    Rat s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += Rat(a[i]) * b[i];
    }
    return s;
}

Int dot(const IntVector& a, const IntVector& b) {
    Int s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

bool is_zero(const RatVector& v) {
    return std::all_of(v.begin(), v.end(), [](const Rat& x) { return x == 0; });
}

bool is_zero(const IntVector& v) {
    return std::all_of(v.begin(), v.end(), [](const Int& x) { return x == 0; });
}

namespace {

Int floor_div(const Int& a, const Int& b) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

void swap_rows(IntMatrix& m, std::size_t i, std::size_t k) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
        std::swap(m.at(i, j), m.at(k, j));
    }
}

// row_i -= q * row_k
void sub_row(IntMatrix& m, std::size_t i, std::size_t k, const Int& q) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
        m.at(i, j) -= q * m.at(k, j);
    }
}

void negate_row(IntMatrix& m, std::size_t i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
        m.at(i, j) = -m.at(i, j);
    }
}

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(RatMatrix& m, std::size_t ncols) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < ncols && row < m.size(); ++col) {
        std::size_t sel = row;
        while (sel < m.size() && m[sel][col] == 0) {
            ++sel;
        }
        if (sel == m.size()) {
            continue;
        }
        std::swap(m[row], m[sel]);
        const Rat inv = 1 / m[row][col];
        for (auto& x : m[row]) {
            x *= inv;
        }
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (i == row || m[i][col] == 0) {
                continue;
            }
            const Rat f = m[i][col];
            for (std::size_t j = 0; j < m[i].size(); ++j) {
                m[i][j] -= f * m[row][j];
            }
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

RatMatrix to_rat_matrix(const IntMatrix& a) {
    RatMatrix m(a.rows(), RatVector(a.cols()));
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            m[i][j] = a.at(i, j);
        }
    }
    return m;
}

}  // namespace

HermiteResult hermite_normal_form(const IntMatrix& a) {
    IntMatrix h = a;
    IntMatrix u = IntMatrix::identity(a.rows());
    std::size_t row = 0;
    for (std::size_t col = 0; col < h.cols() && row < h.rows(); ++col) {
        while (true) {
            // Smallest nonzero magnitude at or below `row` becomes the pivot.
            std::size_t best = h.rows();
            for (std::size_t i = row; i < h.rows(); ++i) {
                if (h.at(i, col) != 0 && (best == h.rows() || abs(h.at(i, col)) < abs(h.at(best, col)))) {
                    best = i;
                }
            }
            if (best == h.rows()) {
                break;
            }
            if (best != row) {
                swap_rows(h, row, best);
                swap_rows(u, row, best);
            }
            bool done = true;
            for (std::size_t i = row + 1; i < h.rows(); ++i) {
                if (h.at(i, col) == 0) {
                    continue;
                }
                const Int q = floor_div(h.at(i, col), h.at(row, col));
                sub_row(h, i, row, q);
                sub_row(u, i, row, q);
                if (h.at(i, col) != 0) {
                    done = false;
                }
            }
            if (done) {
                break;
            }
        }
        if (h.at(row, col) == 0) {
            continue;
        }
        if (h.at(row, col) < 0) {
            negate_row(h, row);
            negate_row(u, row);
        }
        for (std::size_t i = 0; i < row; ++i) {
            const Int q = floor_div(h.at(i, col), h.at(row, col));
            if (q != 0) {
                sub_row(h, i, row, q);
                sub_row(u, i, row, q);
            }
        }
        ++row;
    }
    return {std::move(h), std::move(u)};
}

IntVector smith_invariants(const IntMatrix& a) {
    IntMatrix m = a;
    // Alternate row and column Hermite reduction until diagonal.
    for (int guard = 0; guard < 1000; ++guard) {
        m = hermite_normal_form(m).h;
        m = hermite_normal_form(m.transposed()).h;
        bool diagonal = true;
        for (std::size_t i = 0; i < m.rows() && diagonal; ++i) {
            for (std::size_t j = 0; j < m.cols(); ++j) {
                if (i != j && m.at(i, j) != 0) {
                    diagonal = false;
                    break;
                }
            }
        }
        if (diagonal) {
            break;
        }
    }
    IntVector d;
    for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i) {
        if (m.at(i, i) != 0) {
            d.push_back(abs(m.at(i, i)));
        }
    }
    for (std::size_t i = 0; i < d.size(); ++i) {
        for (std::size_t j = i + 1; j < d.size(); ++j) {
            const Int g = gcd_int(d[i], d[j]);
            const Int l = d[i] * d[j] / g;
            d[i] = g;
            d[j] = l;
        }
    }
    return d;
}

std::size_t rank(const IntMatrix& a) {
    const auto h = hermite_normal_form(a).h;
    std::size_t r = 0;
    for (std::size_t i = 0; i < h.rows(); ++i) {
        if (!is_zero(h.row(i))) {
            ++r;
        }
    }
    return r;
}

std::size_t rank(const RatMatrix& a) {
    if (a.empty()) {
        return 0;
    }
    RatMatrix m = a;
    return rref(m, m.front().size()).size();
}

Int determinant(const IntMatrix& a) {
    if (a.rows() != a.cols()) {
        throw Error(ErrorKind::invalid_argument, "determinant of non-square matrix");
    }
    const std::size_t n = a.rows();
    if (n == 0) {
        return 1;
    }
    // Fraction-free Bareiss elimination.
    IntMatrix m = a;
    Int sign = 1;
    Int prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m.at(k, k) == 0) {
            std::size_t sel = k + 1;
            while (sel < n && m.at(sel, k) == 0) {
                ++sel;
            }
            if (sel == n) {
                return 0;
            }
            swap_rows(m, k, sel);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                m.at(i, j) = (m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j)) / prev;
            }
        }
        prev = m.at(k, k);
    }
    return sign * m.at(n - 1, n - 1);
}

IntMatrix integer_kernel(const IntMatrix& a) {
    const std::size_t n = a.cols();
    if (a.rows() == 0) {
        return IntMatrix::identity(n);
    }
    const auto [h, u] = hermite_normal_form(a.transposed());
    std::vector<IntVector> basis;
    for (std::size_t i = 0; i < h.rows(); ++i) {
        if (is_zero(h.row(i))) {
            basis.push_back(u.row(i));
        }
    }
    if (basis.empty()) {
        return IntMatrix(0, n);
    }
    const auto canon = hermite_normal_form(IntMatrix::from_rows(basis, n)).h;
    std::vector<IntVector> rows;
    for (std::size_t i = 0; i < canon.rows(); ++i) {
        if (!is_zero(canon.row(i))) {
            rows.push_back(canon.row(i));
        }
    }
    return IntMatrix::from_rows(rows, n);
}

std::optional<RatVector> solve_rational(const RatMatrix& a, const RatVector& b) {
    if (a.size() != b.size()) {
        throw Error(ErrorKind::invalid_argument, "solve_rational: row count mismatch");
    }
    const std::size_t ncols = a.empty() ? 0 : a.front().size();
    RatMatrix m = a;
    for (std::size_t i = 0; i < m.size(); ++i) {
        m[i].push_back(b[i]);
    }
    const auto pivots = rref(m, ncols);
    for (std::size_t i = pivots.size(); i < m.size(); ++i) {
        if (m[i][ncols] != 0) {
            return std::nullopt;
        }
    }
    if (pivots.size() != ncols) {
        throw Error(ErrorKind::ambiguous_solution, "system is underdetermined");
    }
    RatVector x(ncols);
    for (std::size_t i = 0; i < pivots.size(); ++i) {
        x[pivots[i]] = m[i][ncols];
    }
    return x;
}

std::optional<RatVector> solve_rational(const IntMatrix& a, const RatVector& b) {
    RatMatrix m = to_rat_matrix(a);
    if (a.rows() > 0 && a.cols() == 0) {
        m.assign(a.rows(), RatVector{});
    }
    return solve_rational(m, b);
}

std::optional<IntVector> solve_integer(const IntMatrix& a, const IntVector& b) {
    // With v a^T = h (row HNF), a v^T = h^T; solve h^T y = b by forward
    // substitution over the pivot columns, then x = v^T y.
    const std::size_t n = a.cols();
    const auto [h, v] = hermite_normal_form(a.transposed());
    IntVector y(n);
    std::size_t col = 0;
    for (std::size_t p = 0; p < h.rows(); ++p) {
        while (col < h.cols() && h.at(p, col) == 0) {
            ++col;
        }
        if (col == h.cols()) {
            break;
        }
        Int rhs = b[col];
        for (std::size_t q = 0; q < p; ++q) {
            rhs -= h.at(q, col) * y[q];
        }
        if (rhs % h.at(p, col) != 0) {
            return std::nullopt;
        }
        y[p] = rhs / h.at(p, col);
    }
    IntVector x(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t p = 0; p < n; ++p) {
            x[i] += v.at(p, i) * y[p];
        }
    }
    if (mat_vec(a, x) != b) {
        return std::nullopt;
    }
    return x;
}

RatMatrix inverse(const RatMatrix& a) {
    const std::size_t n = a.size();
    RatMatrix m = a;
    for (std::size_t i = 0; i < n; ++i) {
        if (m[i].size() != n) {
            throw Error(ErrorKind::invalid_argument, "inverse of non-square matrix");
        }
        for (std::size_t j = 0; j < n; ++j) {
            m[i].push_back(i == j ? Rat(1) : Rat(0));
        }
    }
    const auto pivots = rref(m, n);
    if (pivots.size() != n) {
        throw Error(ErrorKind::invalid_argument, "singular matrix");
    }
    RatMatrix inv(n, RatVector(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            inv[i][j] = m[i][n + j];
        }
    }
    return inv;
}

ConeMembership cone_contains(const std::vector<RatVector>& generators, const RatVector& point) {
    ConeMembership result;
    const std::size_t k = generators.size();
    if (is_zero(point)) {
        result.contained = true;
        result.coefficients.assign(k, Rat(0));
        return result;
    }
    if (k == 0) {
        return result;
    }
    const std::size_t n = point.size();
    RatMatrix columns(n, RatVector(k));
    for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            columns[i][j] = generators[j][i];
        }
    }
    if (rank(generators) == k) {
        const auto lambda = solve_rational(columns, point);
        if (lambda && std::all_of(lambda->begin(), lambda->end(), [](const Rat& x) { return x >= 0; })) {
            result.contained = true;
            result.coefficients = *lambda;
        }
        return result;
    }
    LinearSystem sys;
    sys.num_vars = k;
    sys.eq_lhs = columns;
    sys.eq_rhs = point;
    for (std::size_t j = 0; j < k; ++j) {
        RatVector row(k);
        row[j] = -1;
        sys.le_lhs.push_back(row);
        sys.le_rhs.emplace_back(0);
    }
    if (auto lambda = find_feasible_point(sys)) {
        result.contained = true;
        result.coefficients = std::move(*lambda);
    }
    return result;
}

namespace {

struct Constraint {
    RatVector a;  // a x <= d
    Rat d;
};

// Scales so the first nonzero coefficient has magnitude one; used for dedupe.
Constraint normalized(Constraint c) {
    for (const auto& x : c.a) {
        if (x != 0) {
            const Rat s = abs(x);
            for (auto& y : c.a) {
                y /= s;
            }
            c.d /= s;
            break;
        }
    }
    return c;
}

bool constraint_less(const Constraint& l, const Constraint& r) {
    if (l.a != r.a) {
        return l.a < r.a;
    }
    return l.d < r.d;
}

// Drops trivially true rows and duplicates. False when a row reads 0 <= negative.
bool tidy(std::vector<Constraint>& cs) {
    std::vector<Constraint> kept;
    for (auto& c : cs) {
        if (is_zero(c.a)) {
            if (c.d < 0) {
                return false;
            }
            continue;
        }
        kept.push_back(normalized(std::move(c)));
    }
    std::sort(kept.begin(), kept.end(), constraint_less);
    kept.erase(std::unique(kept.begin(), kept.end(),
                           [](const Constraint& l, const Constraint& r) { return l.a == r.a && l.d == r.d; }),
               kept.end());
    cs = std::move(kept);
    return true;
}

}  // namespace

std::optional<RatVector> find_feasible_point(const LinearSystem& system) {
    const std::size_t n = system.num_vars;
    // Equalities: express pivot variables through the free ones.
    RatMatrix eq = system.eq_lhs;
    for (std::size_t i = 0; i < eq.size(); ++i) {
        eq[i].push_back(system.eq_rhs[i]);
    }
    const auto pivots = rref(eq, n);
    for (std::size_t i = pivots.size(); i < eq.size(); ++i) {
        if (eq[i][n] != 0) {
            return std::nullopt;
        }
    }
    std::vector<bool> is_pivot(n, false);
    for (auto p : pivots) {
        is_pivot[p] = true;
    }
    std::vector<std::size_t> free_vars;
    for (std::size_t j = 0; j < n; ++j) {
        if (!is_pivot[j]) {
            free_vars.push_back(j);
        }
    }
    const std::size_t k = free_vars.size();
    // x_{pivot i} = eq[i][n] - sum_f eq[i][f] x_f
    std::vector<Constraint> current;
    for (std::size_t r = 0; r < system.le_lhs.size(); ++r) {
        Constraint c{RatVector(k), system.le_rhs[r]};
        const auto& row = system.le_lhs[r];
        for (std::size_t f = 0; f < k; ++f) {
            c.a[f] = row[free_vars[f]];
        }
        for (std::size_t i = 0; i < pivots.size(); ++i) {
            const Rat& coef = row[pivots[i]];
            if (coef == 0) {
                continue;
            }
            c.d -= coef * eq[i][n];
            for (std::size_t f = 0; f < k; ++f) {
                c.a[f] -= coef * eq[i][free_vars[f]];
            }
        }
        current.push_back(std::move(c));
    }
    if (!tidy(current)) {
        return std::nullopt;
    }
    std::vector<std::vector<Constraint>> stages;
    for (std::size_t s = 0; s < k; ++s) {
        stages.push_back(current);
        std::vector<Constraint> next, lower, upper;
        for (auto& c : current) {
            if (c.a[s] > 0) {
                upper.push_back(c);
            } else if (c.a[s] < 0) {
                lower.push_back(c);
            } else {
                next.push_back(c);
            }
        }
        for (const auto& lo : lower) {
            for (const auto& up : upper) {
                const Rat wl = up.a[s];
                const Rat wu = -lo.a[s];
                Constraint c{RatVector(k), wl * lo.d + wu * up.d};
                for (std::size_t f = 0; f < k; ++f) {
                    c.a[f] = wl * lo.a[f] + wu * up.a[f];
                }
                c.a[s] = 0;
                next.push_back(std::move(c));
            }
        }
        if (!tidy(next)) {
            return std::nullopt;
        }
        current = std::move(next);
    }
    RatVector y(k);
    for (std::size_t s = k; s-- > 0;) {
        std::optional<Rat> lo, hi;
        for (const auto& c : stages[s]) {
            if (c.a[s] == 0) {
                continue;
            }
            Rat rest = c.d;
            for (std::size_t f = s + 1; f < k; ++f) {
                rest -= c.a[f] * y[f];
            }
            const Rat bound = rest / c.a[s];
            if (c.a[s] > 0) {
                if (!hi || bound < *hi) {
                    hi = bound;
                }
            } else if (!lo || bound > *lo) {
                lo = bound;
            }
        }
        y[s] = lo ? *lo : (hi ? *hi : Rat(0));
        if (lo && hi && *lo > *hi) {
            return std::nullopt;
        }
    }
    RatVector x(n);
    for (std::size_t f = 0; f < k; ++f) {
        x[free_vars[f]] = y[f];
    }
    for (std::size_t i = 0; i < pivots.size(); ++i) {
        Rat v = eq[i][n];
        for (std::size_t f = 0; f < k; ++f) {
            v -= eq[i][free_vars[f]] * y[f];
        }
        x[pivots[i]] = v;
    }
    return x;
}

std::vector<ParallelepipedPoint> parallelepiped_points(const std::vector<IntVector>& generators) {
    std::vector<ParallelepipedPoint> out;
    const std::size_t k = generators.size();
    if (k == 0) {
        return out;
    }
    const std::size_t n = generators.front().size();
    const IntMatrix g = IntMatrix::from_rows(generators, n);
    if (rank(g) != k) {
        throw Error(ErrorKind::invalid_argument, "parallelepiped generators are linearly dependent");
    }
    // Saturated basis of Z^n cap span(g): annihilator of the annihilator.
    const IntMatrix ann = integer_kernel(g);
    const IntMatrix basis = ann.rows() == 0 ? IntMatrix::identity(n) : integer_kernel(ann);
    RatMatrix basis_t(n, RatVector(k));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            basis_t[j][i] = basis.at(i, j);
        }
    }
    // Generators in basis coordinates (integral since basis is saturated).
    IntMatrix coords(k, k);
    for (std::size_t i = 0; i < k; ++i) {
        const auto c = solve_rational(basis_t, to_rat(generators[i]));
        const auto ci = to_int(*c);
        for (std::size_t j = 0; j < k; ++j) {
            coords.at(i, j) = ci[j];
        }
    }
    const auto h = hermite_normal_form(coords).h;
    RatMatrix coords_t(k, RatVector(k));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            coords_t[j][i] = coords.at(i, j);
        }
    }
    // Coset representatives 0 <= x_i < h_ii of Z^k / rowspace(coords).
    std::vector<Int> bound(k);
    for (std::size_t i = 0; i < k; ++i) {
        bound[i] = h.at(i, i);
    }
    IntVector x(k, Int(0));
    while (true) {
        const auto t = solve_rational(coords_t, to_rat(x));
        ParallelepipedPoint pp;
        pp.coords.resize(k);
        RatVector point(n);
        for (std::size_t i = 0; i < k; ++i) {
            pp.coords[i] = frac_part((*t)[i]);
            for (std::size_t j = 0; j < n; ++j) {
                point[j] += pp.coords[i] * Rat(generators[i][j]);
            }
        }
        pp.point = to_int(point);
        out.push_back(std::move(pp));
        std::size_t i = 0;
        while (i < k) {
            x[i] += 1;
            if (x[i] < bound[i]) {
                break;
            }
            x[i] = 0;
            ++i;
        }
        if (i == k) {
            break;
        }
    }
    return out;
}

}  // namespace orbidisk
