#include "orbidisk/stacky.hpp"

#include "orbidisk/error.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace orbidisk {

namespace {

std::string fmt(const IntVector& v) {
    std::ostringstream out;
    out << "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        out << (i ? "," : "") << v[i].get_str();
    }
    out << ")";
    return out.str();
}

std::string fmt(const IndexSet& s) {
    std::ostringstream out;
    out << "{";
    for (std::size_t i = 0; i < s.size(); ++i) {
        out << (i ? "," : "") << s[i];
    }
    out << "}";
    return out.str();
}

RatMatrix column_matrix(const StackyFan& fan, const IndexSet& idx) {
    RatMatrix a(fan.dim, RatVector(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) {
        const auto& b = fan.vec(idx[k]);
        for (std::size_t r = 0; r < fan.dim; ++r) {
            a[r][k] = b[r];
        }
    }
    return a;
}

IndexSet complement(const IndexSet& s, std::size_t n) {
    IndexSet out;
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::binary_search(s.begin(), s.end(), i)) {
            out.push_back(i);
        }
    }
    return out;
}

IndexSet sorted(IndexSet s) {
    std::sort(s.begin(), s.end());
    return s;
}

IndexSet intersection(const IndexSet& a, const IndexSet& b) {
    IndexSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool subset_of(const IndexSet& a, const IndexSet& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

// Nonzero point in cone(sigma) cap cone(tau) outside cone(sigma cap tau)?
bool cones_overlap_badly(const StackyFan& fan, const IndexSet& sigma, const IndexSet& tau) {
    const IndexSet common = intersection(sigma, tau);
    const std::size_t ks = sigma.size();
    const std::size_t kt = tau.size();
    LinearSystem sys;
    sys.num_vars = ks + kt;
    for (std::size_t r = 0; r < fan.dim; ++r) {
        RatVector row(ks + kt);
        for (std::size_t k = 0; k < ks; ++k) {
            row[k] = fan.vec(sigma[k])[r];
        }
        for (std::size_t k = 0; k < kt; ++k) {
            row[ks + k] = -Rat(fan.vec(tau[k])[r]);
        }
        sys.eq_lhs.push_back(row);
        sys.eq_rhs.emplace_back(0);
    }
    RatVector normalize(ks + kt);
    bool any = false;
    for (std::size_t k = 0; k < ks; ++k) {
        if (!std::binary_search(common.begin(), common.end(), sigma[k])) {
            normalize[k] = 1;
            any = true;
        }
    }
    for (std::size_t k = 0; k < kt; ++k) {
        if (!std::binary_search(common.begin(), common.end(), tau[k])) {
            normalize[ks + k] = 1;
            any = true;
        }
    }
    if (!any) {
        return false;
    }
    sys.eq_lhs.push_back(normalize);
    sys.eq_rhs.emplace_back(1);
    for (std::size_t k = 0; k < ks + kt; ++k) {
        RatVector row(ks + kt);
        row[k] = -1;
        sys.le_lhs.push_back(row);
        sys.le_rhs.emplace_back(0);
    }
    return find_feasible_point(sys).has_value();
}

BoxElement make_box_element(const IndexSet& cone, const ParallelepipedPoint& p) {
    BoxElement e;
    e.point = p.point;
    e.age = 0;
    for (std::size_t k = 0; k < cone.size(); ++k) {
        if (p.coords[k] != 0) {
            e.carrier.push_back(cone[k]);
            e.coords.push_back(p.coords[k]);
            e.age += p.coords[k];
        }
    }
    return e;
}

template <typename F>
void for_each_subset(std::size_t n, std::size_t k, F&& f) {
    if (k > n) {
        return;
    }
    IndexSet idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        f(idx);
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1) {
            --i;
        }
        if (i == 0) {
            return;
        }
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

RatVector row_as_rat(const IntMatrix& m, std::size_t i) { return to_rat(m.row(i)); }

}  // namespace

std::vector<IntVector> StackyFan::all_vectors() const {
    std::vector<IntVector> out = rays;
    out.insert(out.end(), extras.begin(), extras.end());
    return out;
}

IntMatrix StackyFan::fan_map() const {
    IntMatrix a(dim, m_prime());
    for (std::size_t i = 0; i < m_prime(); ++i) {
        for (std::size_t r = 0; r < dim; ++r) {
            a.at(r, i) = vec(i)[r];
        }
    }
    return a;
}

std::optional<std::size_t> StackyFan::index_of(const IntVector& v) const {
    for (std::size_t i = 0; i < m_prime(); ++i) {
        if (vec(i) == v) {
            return i;
        }
    }
    return std::nullopt;
}

std::string ValidationReport::summary() const {
    if (issues.empty()) {
        return "valid";
    }
    std::ostringstream out;
    for (std::size_t i = 0; i < issues.size(); ++i) {
        out << (i ? "; " : "") << issues[i].check << ": " << issues[i].detail;
    }
    return out.str();
}

ValidationReport validate(const StackyFan& fan) {
    ValidationReport report;
    auto fail = [&](std::string check, std::string detail) {
        report.issues.push_back({std::move(check), std::move(detail)});
    };
    if (fan.dim == 0) {
        fail("shape", "lattice dimension must be positive");
        return report;
    }
    if (fan.rays.empty()) {
        fail("shape", "no rays");
        return report;
    }
    for (std::size_t i = 0; i < fan.m_prime(); ++i) {
        if (fan.vec(i).size() != fan.dim) {
            fail("shape", "vector " + std::to_string(i) + " has wrong length");
            return report;
        }
        if (is_zero(fan.vec(i))) {
            fail("shape", "vector " + std::to_string(i) + " is zero");
        }
        for (std::size_t k = 0; k < i; ++k) {
            if (fan.vec(k) == fan.vec(i)) {
                fail("shape", "vectors " + std::to_string(k) + " and " + std::to_string(i) + " coincide");
            }
        }
    }
    if (fan.max_cones.empty()) {
        fail("shape", "no maximal cones");
        return report;
    }
    bool cones_ok = true;
    for (std::size_t c = 0; c < fan.max_cones.size(); ++c) {
        const auto& cone = fan.max_cones[c];
        if (cone.empty()) {
            fail("shape", "maximal cone " + std::to_string(c) + " is empty");
            cones_ok = false;
            continue;
        }
        if (!std::is_sorted(cone.begin(), cone.end()) ||
            std::adjacent_find(cone.begin(), cone.end()) != cone.end() || cone.back() >= fan.m()) {
            fail("shape", "maximal cone " + std::to_string(c) + " has bad ray indices " + fmt(cone));
            cones_ok = false;
            continue;
        }
        if (rank(column_matrix(fan, cone)) != cone.size()) {
            fail("simplicial", "cone " + fmt(cone) + " has linearly dependent generators");
            cones_ok = false;
        }
    }
    if (!cones_ok) {
        return report;
    }
    for (std::size_t i = 0; i < fan.max_cones.size(); ++i) {
        for (std::size_t j = i + 1; j < fan.max_cones.size(); ++j) {
            const auto& a = fan.max_cones[i];
            const auto& b = fan.max_cones[j];
            if (a == b) {
                fail("fan condition", "cone " + fmt(a) + " listed twice");
            } else if (cones_overlap_badly(fan, a, b)) {
                fail("fan condition", "cones " + fmt(a) + " and " + fmt(b) + " meet outside a common face");
            }
        }
    }
    std::vector<bool> used(fan.m(), false);
    for (const auto& cone : fan.max_cones) {
        for (auto i : cone) {
            used[i] = true;
        }
    }
    for (std::size_t i = 0; i < fan.m(); ++i) {
        if (!used[i]) {
            fail("shape", "ray " + std::to_string(i) + " lies in no maximal cone");
        }
    }
    for (std::size_t j = fan.m(); j < fan.m_prime(); ++j) {
        if (!locate(fan, to_rat(fan.vec(j)))) {
            fail("support", "extra vector " + fmt(fan.vec(j)) + " lies outside the support");
        }
    }
    const auto map = fan.fan_map();
    if (rank(map) != fan.dim) {
        fail("surjectivity", "vectors do not span N_R");
    } else {
        for (const auto& d : smith_invariants(map)) {
            if (d != 1) {
                fail("surjectivity", "vectors generate a sublattice of index divisible by " + d.get_str());
                break;
            }
        }
    }
    return report;
}

void require_valid(const StackyFan& fan) {
    const auto report = validate(fan);
    if (!report.ok()) {
        throw Error(ErrorKind::validation_failure, report.summary());
    }
}

bool is_complete(const StackyFan& fan) {
    std::map<IndexSet, int> facets;
    for (const auto& cone : fan.max_cones) {
        if (cone.size() != fan.dim) {
            return false;
        }
        for (std::size_t skip = 0; skip < cone.size(); ++skip) {
            IndexSet face;
            for (std::size_t k = 0; k < cone.size(); ++k) {
                if (k != skip) {
                    face.push_back(cone[k]);
                }
            }
            ++facets[face];
        }
    }
    return std::all_of(facets.begin(), facets.end(), [](const auto& kv) { return kv.second == 2; });
}

std::optional<ConeLocation> locate(const StackyFan& fan, const RatVector& point) {
    if (is_zero(point)) {
        return ConeLocation{};
    }
    for (const auto& cone : fan.max_cones) {
        const auto x = solve_rational(column_matrix(fan, cone), point);
        if (!x || std::any_of(x->begin(), x->end(), [](const Rat& t) { return t < 0; })) {
            continue;
        }
        ConeLocation loc;
        for (std::size_t k = 0; k < cone.size(); ++k) {
            if ((*x)[k] > 0) {
                loc.carrier.push_back(cone[k]);
                loc.coefficients.push_back((*x)[k]);
            }
        }
        return loc;
    }
    return std::nullopt;
}

std::vector<BoxElement> box_elements_of_cone(const StackyFan& fan, std::size_t cone) {
    const auto& idx = fan.max_cones.at(cone);
    std::vector<IntVector> gens;
    for (auto i : idx) {
        gens.push_back(fan.vec(i));
    }
    std::vector<BoxElement> out;
    for (const auto& p : parallelepiped_points(gens)) {
        out.push_back(make_box_element(idx, p));
    }
    return out;
}

std::vector<BoxElement> box_elements(const StackyFan& fan) {
    std::map<IntVector, BoxElement> seen;
    for (std::size_t c = 0; c < fan.max_cones.size(); ++c) {
        for (auto& e : box_elements_of_cone(fan, c)) {
            seen.emplace(e.point, std::move(e));
        }
    }
    std::vector<BoxElement> out;
    const IntVector zero(fan.dim, Int(0));
    if (auto it = seen.find(zero); it != seen.end()) {
        out.push_back(it->second);
        seen.erase(it);
    }
    for (auto& [p, e] : seen) {
        out.push_back(std::move(e));
    }
    return out;
}

std::optional<BoxElement> box_element_at(const StackyFan& fan, const IntVector& point) {
    const auto loc = locate(fan, to_rat(point));
    if (!loc) {
        return std::nullopt;
    }
    BoxElement e;
    e.point = point;
    e.carrier = loc->carrier;
    e.coords = loc->coefficients;
    e.age = 0;
    for (const auto& t : e.coords) {
        if (t >= 1) {
            return std::nullopt;
        }
        e.age += t;
    }
    return e;
}

StackyFan with_age_one_extras(StackyFan fan) {
    fan.extras.clear();
    const auto elements = box_elements(fan);
    for (const auto& e : elements) {
        if (e.age == 1) {
            fan.extras.push_back(e.point);
        }
    }
    return fan;
}

bool AnticoneSet::contains(const IndexSet& sorted_set) const {
    return std::binary_search(members.begin(), members.end(), sorted_set);
}

bool is_anticone(const StackyFan& fan, const IndexSet& set) {
    const IndexSet comp = complement(sorted(set), fan.m_prime());
    return std::any_of(fan.max_cones.begin(), fan.max_cones.end(),
                       [&](const IndexSet& cone) { return subset_of(comp, cone); });
}

AnticoneSet anticones(const StackyFan& fan) {
    std::set<IndexSet> faces;
    for (const auto& cone : fan.max_cones) {
        const std::size_t k = cone.size();
        for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
            IndexSet face;
            for (std::size_t i = 0; i < k; ++i) {
                if (mask & (std::size_t{1} << i)) {
                    face.push_back(cone[i]);
                }
            }
            faces.insert(face);
        }
    }
    AnticoneSet out;
    for (const auto& f : faces) {
        out.members.push_back(complement(f, fan.m_prime()));
    }
    std::sort(out.members.begin(), out.members.end());
    return out;
}

std::vector<IndexSet> minimal_anticones(const StackyFan& fan) {
    std::vector<IndexSet> out;
    for (const auto& cone : fan.max_cones) {
        out.push_back(complement(cone, fan.m_prime()));
    }
    return out;
}

RatVector FanSequenceData::pairings(const RatVector& d) const {
    RatVector out(q_matrix.rows());
    for (std::size_t i = 0; i < q_matrix.rows(); ++i) {
        for (std::size_t a = 0; a < r; ++a) {
            out[i] += Rat(q_matrix.at(i, a)) * d[a];
        }
    }
    return out;
}

RatVector FanSequenceData::coords_of_relation(const RatVector& relation) const {
    // relation = K^T x; coordinates are P x.
    const auto x = solve_rational(kernel_basis.transposed(), relation);
    if (!x) {
        throw Error(ErrorKind::invalid_argument, "vector is not a relation among the fan vectors");
    }
    return mat_vec(basis_p, *x);
}

namespace {

// Relation vector of D_j^dual for extra j.
RatVector dual_relation_of(const StackyFan& fan, std::size_t j) {
    const auto loc = locate(fan, to_rat(fan.vec(j)));
    if (!loc) {
        throw Error(ErrorKind::invalid_argument, "extra vector outside the support");
    }
    RatVector rel(fan.m_prime());
    rel[j] = 1;
    for (std::size_t k = 0; k < loc->carrier.size(); ++k) {
        rel[loc->carrier[k]] = -loc->coefficients[k];
    }
    return rel;
}

std::vector<RatVector> divisor_rows(const IntMatrix& divisors, const IndexSet& idx) {
    std::vector<RatVector> out;
    for (auto i : idx) {
        out.push_back(row_as_rat(divisors, i));
    }
    return out;
}

// Kernel coordinates of a relation vector.
RatVector kernel_coords(const IntMatrix& kernel, const RatVector& relation) {
    const auto x = solve_rational(kernel.transposed(), relation);
    if (!x) {
        throw Error(ErrorKind::invalid_argument, "vector is not a relation");
    }
    return *x;
}

IntMatrix search_basis(const StackyFan& fan, const IntMatrix& kernel, const IntMatrix& divisors) {
    const std::size_t r = kernel.rows();
    const std::size_t m = fan.m();
    const std::size_t e = fan.m_prime() - m;
    const std::size_t r_prime = r - e;
    std::vector<RatVector> dual_kernel;  // D_j^dual in kernel coordinates, extras j
    for (std::size_t j = m; j < fan.m_prime(); ++j) {
        dual_kernel.push_back(kernel_coords(kernel, dual_relation_of(fan, j)));
    }
    auto ext_pairings = [&](const IntVector& x) {
        RatVector s(e);
        for (std::size_t j = 0; j < e; ++j) {
            s[j] = dot(x, dual_kernel[j]);
        }
        return s;
    };
    std::vector<IntVector> p_ext;
    if (e > 0) {
        std::vector<IntVector> gens;
        for (std::size_t j = m; j < fan.m_prime(); ++j) {
            gens.push_back(divisors.row(j));
        }
        const IntMatrix g = IntMatrix::from_rows(gens, r);
        const IntMatrix ann = integer_kernel(g);
        const IntMatrix lattice = ann.rows() == 0 ? IntMatrix::identity(r) : integer_kernel(ann);
        std::vector<IntVector> candidates;
        for (const auto& v : gens) {
            Int gcd = 0;
            for (const auto& x : v) {
                gcd = gcd_int(gcd, x);
            }
            IntVector prim;
            for (const auto& x : v) {
                prim.push_back(x / gcd);
            }
            candidates.push_back(prim);
        }
        for (const auto& p : parallelepiped_points(gens)) {
            if (!is_zero(p.point)) {
                candidates.push_back(p.point);
            }
        }
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
        std::stable_sort(candidates.begin(), candidates.end(), [&](const IntVector& a, const IntVector& b) {
            const auto sa = ext_pairings(a);
            const auto sb = ext_pairings(b);
            return std::accumulate(sa.begin(), sa.end(), Rat(0)) < std::accumulate(sb.begin(), sb.end(), Rat(0));
        });
        // Coordinates of candidates in the saturated lattice basis.
        RatMatrix lattice_t(r, RatVector(e));
        for (std::size_t i = 0; i < e; ++i) {
            for (std::size_t k = 0; k < r; ++k) {
                lattice_t[k][i] = lattice.at(i, k);
            }
        }
        std::vector<IntVector> coords;
        for (const auto& c : candidates) {
            coords.push_back(to_int(*solve_rational(lattice_t, to_rat(c))));
        }
        // Among unimodular choices keep the one with the smallest extra
        // weights sum_b <p_b, D_j^dual>; the search is capped.
        std::optional<IndexSet> best;
        std::pair<Rat, Rat> best_score;
        std::size_t accepted = 0;
        for_each_subset(candidates.size(), e, [&](const IndexSet& pick) {
            if (accepted >= 64) {
                return;
            }
            IntMatrix z(e, e);
            for (std::size_t i = 0; i < e; ++i) {
                for (std::size_t k = 0; k < e; ++k) {
                    z.at(i, k) = coords[pick[i]][k];
                }
            }
            if (abs(determinant(z)) != 1) {
                return;
            }
            ++accepted;
            RatVector w(e);
            for (auto i : pick) {
                const auto s = ext_pairings(candidates[i]);
                for (std::size_t j = 0; j < e; ++j) {
                    w[j] += s[j];
                }
            }
            const std::pair<Rat, Rat> score{*std::max_element(w.begin(), w.end()),
                                            std::accumulate(w.begin(), w.end(), Rat(0))};
            if (!best || score < best_score) {
                best = pick;
                best_score = score;
            }
        });
        for (auto i : best.value_or(IndexSet{})) {
            p_ext.push_back(candidates[i]);
        }
        if (!best) {
            throw Error(ErrorKind::no_valid_basis, "no integral basis of the extended divisor lattice found");
        }
    }
    std::vector<IntVector> h2_part;
    if (r_prime > 0) {
        // Columns of w beyond the first e complete p_ext to a basis of Z^r.
        std::vector<IntVector> comp;
        if (e == 0) {
            comp = IntMatrix::identity(r).row_list();
        } else {
            const auto hr = hermite_normal_form(IntMatrix::from_rows(p_ext, r).transposed());
            RatMatrix u(r, RatVector(r));
            for (std::size_t i = 0; i < r; ++i) {
                for (std::size_t k = 0; k < r; ++k) {
                    u[i][k] = hr.u.at(i, k);
                }
            }
            const auto w = inverse(u);
            for (std::size_t k = e; k < r; ++k) {
                RatVector col(r);
                for (std::size_t i = 0; i < r; ++i) {
                    col[i] = w[i][k];
                }
                comp.push_back(to_int(col));
            }
        }
        RatMatrix ext_matrix_t(e, RatVector(e));  // (S^T)_{jb} = <p_ext_b, D_j^dual>
        for (std::size_t b = 0; b < e; ++b) {
            const auto s = ext_pairings(p_ext[b]);
            for (std::size_t j = 0; j < e; ++j) {
                ext_matrix_t[j][b] = s[j];
            }
        }
        const auto anticone_sets = minimal_anticones(fan);
        struct Candidate {
            IntVector z;
            IntVector p;
        };
        std::vector<Candidate> valid;
        const int box = 3;
        IntVector z(r_prime, Int(-box));
        while (true) {
            if (!is_zero(z)) {
                IntVector p(r, Int(0));
                for (std::size_t k = 0; k < r_prime; ++k) {
                    for (std::size_t i = 0; i < r; ++i) {
                        p[i] += z[k] * comp[k][i];
                    }
                }
                if (e > 0) {
                    const auto s = ext_pairings(p);
                    RatVector neg(e);
                    for (std::size_t j = 0; j < e; ++j) {
                        neg[j] = -s[j];
                    }
                    const auto t = *solve_rational(ext_matrix_t, neg);
                    for (std::size_t b = 0; b < e; ++b) {
                        const Int tb = ceil_rat(t[b]);
                        for (std::size_t i = 0; i < r; ++i) {
                            p[i] += tb * p_ext[b][i];
                        }
                    }
                }
                const bool ok = std::all_of(anticone_sets.begin(), anticone_sets.end(), [&](const IndexSet& I) {
                    return cone_contains(divisor_rows(divisors, I), to_rat(p)).contained;
                });
                if (ok) {
                    valid.push_back({z, p});
                }
            }
            std::size_t k = 0;
            while (k < r_prime) {
                z[k] += 1;
                if (z[k] <= box) {
                    break;
                }
                z[k] = -box;
                ++k;
            }
            if (k == r_prime) {
                break;
            }
        }
        auto l1 = [](const IntVector& v) {
            Int s = 0;
            for (const auto& x : v) {
                s += abs(x);
            }
            return s;
        };
        std::stable_sort(valid.begin(), valid.end(), [&](const Candidate& a, const Candidate& b) {
            const Int la = l1(a.z);
            const Int lb = l1(b.z);
            if (la != lb) {
                return la < lb;
            }
            return a.z > b.z;
        });
        bool found = false;
        for_each_subset(valid.size(), r_prime, [&](const IndexSet& pick) {
            if (found) {
                return;
            }
            IntMatrix zm(r_prime, r_prime);
            for (std::size_t i = 0; i < r_prime; ++i) {
                for (std::size_t k = 0; k < r_prime; ++k) {
                    zm.at(i, k) = valid[pick[i]].z[k];
                }
            }
            if (abs(determinant(zm)) == 1) {
                for (auto i : pick) {
                    h2_part.push_back(valid[i].p);
                }
                found = true;
            }
        });
        if (!found) {
            throw Error(ErrorKind::no_valid_basis, "basis search exhausted; supply basis_p");
        }
    }
    std::vector<IntVector> rows = h2_part;
    rows.insert(rows.end(), p_ext.begin(), p_ext.end());
    return IntMatrix::from_rows(rows, r);
}

}  // namespace

std::string check_basis(const StackyFan& fan, const IntMatrix& divisors, const IntMatrix& basis) {
    const std::size_t r = divisors.cols();
    if (basis.rows() != r || basis.cols() != r) {
        return "basis must have " + std::to_string(r) + " vectors";
    }
    if (abs(determinant(basis)) != 1) {
        return "p vectors do not form an integral basis";
    }
    const auto anticone_sets = minimal_anticones(fan);
    for (std::size_t a = 0; a < r; ++a) {
        for (const auto& I : anticone_sets) {
            if (!cone_contains(divisor_rows(divisors, I), row_as_rat(basis, a)).contained) {
                return "p_" + std::to_string(a + 1) + " lies outside the cone of D_i over anticone " + fmt(I);
            }
        }
    }
    const std::size_t e = fan.m_prime() - fan.m();
    IndexSet ext(e);
    std::iota(ext.begin(), ext.end(), fan.m());
    for (std::size_t a = r - e; a < r; ++a) {
        if (!cone_contains(divisor_rows(divisors, ext), row_as_rat(basis, a)).contained) {
            return "p_" + std::to_string(a + 1) + " is not a nonnegative combination of extra divisors";
        }
    }
    return {};
}

FanSequenceData fan_sequence(const StackyFan& fan, const std::optional<std::vector<RatVector>>& basis_p) {
    FanSequenceData seq;
    const std::size_t mp = fan.m_prime();
    seq.kernel_basis = integer_kernel(fan.fan_map());
    seq.r = seq.kernel_basis.rows();
    seq.r_prime = seq.r - (mp - fan.m());
    seq.divisors = IntMatrix(mp, seq.r);
    for (std::size_t i = 0; i < mp; ++i) {
        for (std::size_t a = 0; a < seq.r; ++a) {
            seq.divisors.at(i, a) = seq.kernel_basis.at(a, i);
        }
    }
    if (seq.r == 0) {
        seq.basis_p = IntMatrix(0, 0);
        seq.q_matrix = IntMatrix(mp, 0);
        return seq;
    }
    if (basis_p) {
        std::vector<IntVector> rows;
        for (const auto& c : *basis_p) {
            if (c.size() != mp) {
                throw Error(ErrorKind::invalid_argument, "basis_p entries need one coefficient per fan vector");
            }
            RatVector p(seq.r);
            for (std::size_t i = 0; i < mp; ++i) {
                for (std::size_t a = 0; a < seq.r; ++a) {
                    p[a] += c[i] * seq.divisors.at(i, a);
                }
            }
            if (!std::all_of(p.begin(), p.end(), [](const Rat& x) { return is_integer(x); })) {
                throw Error(ErrorKind::no_valid_basis, "basis_p vector is not integral");
            }
            rows.push_back(to_int(p));
        }
        seq.basis_p = IntMatrix::from_rows(rows, seq.r);
    } else {
        seq.basis_p = search_basis(fan, seq.kernel_basis, seq.divisors);
    }
    if (const auto why = check_basis(fan, seq.divisors, seq.basis_p); !why.empty()) {
        throw Error(ErrorKind::no_valid_basis, why);
    }
    RatMatrix p_rat(seq.r, RatVector(seq.r));
    for (std::size_t a = 0; a < seq.r; ++a) {
        for (std::size_t b = 0; b < seq.r; ++b) {
            p_rat[a][b] = seq.basis_p.at(a, b);
        }
    }
    const auto p_inv = inverse(p_rat);
    seq.q_matrix = IntMatrix(mp, seq.r);
    for (std::size_t i = 0; i < mp; ++i) {
        for (std::size_t a = 0; a < seq.r; ++a) {
            Rat q = 0;
            for (std::size_t b = 0; b < seq.r; ++b) {
                q += Rat(seq.divisors.at(i, b)) * p_inv[b][a];
            }
            seq.q_matrix.at(i, a) = to_int({q})[0];
        }
    }
    return seq;
}

DualClassData dual_class_data(const StackyFan& fan, const FanSequenceData& seq, std::size_t j) {
    if (j < fan.m() || j >= fan.m_prime()) {
        throw Error(ErrorKind::not_an_extra_vector, "index " + std::to_string(j) + " is not an extra vector");
    }
    DualClassData out;
    out.dual_relation = dual_relation_of(fan, j);
    out.c.assign(fan.m_prime(), Rat(0));
    IndexSet carrier;
    for (std::size_t i = 0; i < fan.m(); ++i) {
        if (out.dual_relation[i] != 0) {
            out.c[i] = -out.dual_relation[i];
            carrier.push_back(i);
        }
    }
    out.anticone = complement(carrier, fan.m_prime());
    out.dual_coords = seq.coords_of_relation(out.dual_relation);
    return out;
}

IntVector nu_of_relation(const StackyFan& fan, const RatVector& relation) {
    IntVector nu(fan.dim, Int(0));
    for (std::size_t i = 0; i < fan.m_prime(); ++i) {
        const Int c = ceil_rat(relation[i]);
        if (c == 0) {
            continue;
        }
        for (std::size_t r = 0; r < fan.dim; ++r) {
            nu[r] += c * fan.vec(i)[r];
        }
    }
    return nu;
}

GorensteinResult gorenstein_check(const StackyFan& fan) {
    GorensteinResult out;
    for (std::size_t c = 0; c < fan.max_cones.size(); ++c) {
        std::vector<IntVector> rows;
        for (auto i : fan.max_cones[c]) {
            rows.push_back(fan.vec(i));
        }
        const auto u = solve_integer(IntMatrix::from_rows(rows, fan.dim), IntVector(rows.size(), Int(1)));
        if (!u) {
            out.support.clear();
            out.offending_cone = c;
            return out;
        }
        out.support.push_back(*u);
    }
    out.ok = true;
    return out;
}

std::vector<WallClass> wall_curve_classes(const StackyFan& fan) {
    std::vector<WallClass> out;
    for (std::size_t a = 0; a < fan.max_cones.size(); ++a) {
        for (std::size_t b = a + 1; b < fan.max_cones.size(); ++b) {
            const auto& sa = fan.max_cones[a];
            const auto& sb = fan.max_cones[b];
            if (sa.size() != fan.dim || sb.size() != fan.dim) {
                continue;
            }
            const IndexSet common = intersection(sa, sb);
            if (common.size() + 1 != fan.dim) {
                continue;
            }
            IndexSet uni;
            std::set_union(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(uni));
            IntMatrix cols(fan.dim, uni.size());
            for (std::size_t k = 0; k < uni.size(); ++k) {
                for (std::size_t r = 0; r < fan.dim; ++r) {
                    cols.at(r, k) = fan.vec(uni[k])[r];
                }
            }
            const auto ker = integer_kernel(cols);
            if (ker.rows() != 1) {
                continue;
            }
            WallClass w;
            w.wall = common;
            w.cone_a = a;
            w.cone_b = b;
            w.relation.assign(fan.m_prime(), Rat(0));
            const auto opposite = std::find_if(uni.begin(), uni.end(), [&](std::size_t i) {
                return !std::binary_search(common.begin(), common.end(), i);
            });
            const auto pos = static_cast<std::size_t>(opposite - uni.begin());
            const int sign = ker.at(0, pos) < 0 ? -1 : 1;
            w.c1 = 0;
            for (std::size_t k = 0; k < uni.size(); ++k) {
                w.relation[uni[k]] = Rat(ker.at(0, k) * sign);
                w.c1 += w.relation[uni[k]];
            }
            out.push_back(std::move(w));
        }
    }
    return out;
}

SemiFanoResult semifano_check(const StackyFan& fan) {
    if (!is_complete(fan)) {
        throw Error(ErrorKind::not_complete, "semi-Fano test needs a complete fan");
    }
    SemiFanoResult out;
    out.walls = wall_curve_classes(fan);
    for (const auto& w : out.walls) {
        if (w.c1 < 0 && !out.witness) {
            out.witness = w;
        }
        if (w.c1 == 0) {
            out.flat_walls.push_back(w);
        }
    }
    out.ok = !out.witness.has_value();
    return out;
}

IntVector DiskClassSymbol::boundary(const StackyFan& fan) const {
    return kind == Kind::smooth ? fan.rays.at(ray) : point;
}

Rat maslov_index(const StackyFan& fan, const DiskClassSymbol& beta) {
    Rat c1 = 0;
    if (!beta.alpha.empty()) {
        if (beta.alpha.size() != fan.m_prime()) {
            throw Error(ErrorKind::invalid_argument, "curve class has wrong length");
        }
        for (std::size_t i = fan.m(); i < fan.m_prime(); ++i) {
            if (beta.alpha[i] != 0) {
                throw Error(ErrorKind::invalid_argument, "curve class has extra-vector components");
            }
        }
        for (std::size_t i = 0; i < fan.m(); ++i) {
            c1 += beta.alpha[i];
        }
    }
    if (beta.kind == DiskClassSymbol::Kind::smooth) {
        return 2 + 2 * c1;
    }
    const auto e = box_element_at(fan, beta.point);
    if (!e) {
        throw Error(ErrorKind::invalid_argument, "point " + fmt(beta.point) + " is not a Box element");
    }
    return 2 * e->age + 2 * c1;
}

std::vector<Facet> polytope_facets(const StackyFan& fan) {
    if (!is_complete(fan)) {
        throw Error(ErrorKind::not_complete, "fan polytope faces need a complete fan");
    }
    const std::size_t n = fan.dim;
    std::map<RatVector, IndexSet> found;
    for_each_subset(fan.m(), n, [&](const IndexSet& pick) {
        RatMatrix rows;
        for (auto i : pick) {
            rows.push_back(to_rat(fan.rays[i]));
        }
        if (rank(rows) != n) {
            return;
        }
        const auto u = *solve_rational(rows, RatVector(n, Rat(1)));
        if (found.count(u)) {
            return;
        }
        IndexSet on;
        for (std::size_t k = 0; k < fan.m(); ++k) {
            const Rat v = dot(fan.rays[k], u);
            if (v > 1) {
                return;
            }
            if (v == 1) {
                on.push_back(k);
            }
        }
        found.emplace(u, on);
    });
    std::vector<Facet> out;
    for (auto& [u, on] : found) {
        out.push_back({u, on});
    }
    std::sort(out.begin(), out.end(), [](const Facet& a, const Facet& b) { return a.rays < b.rays; });
    return out;
}

std::vector<Face> fan_polytope_faces(const StackyFan& fan) {
    const auto facets = polytope_facets(fan);
    std::set<IndexSet> seen;
    std::vector<IndexSet> frontier;
    for (const auto& f : facets) {
        if (seen.insert(f.rays).second) {
            frontier.push_back(f.rays);
        }
    }
    while (!frontier.empty()) {
        std::vector<IndexSet> next;
        for (const auto& rays : frontier) {
            for (const auto& f : facets) {
                auto meet = intersection(rays, f.rays);
                if (!meet.empty() && seen.insert(meet).second) {
                    next.push_back(meet);
                }
            }
        }
        frontier = std::move(next);
    }
    std::vector<Face> out;
    for (const auto& rays : seen) {
        Face face;
        face.rays = rays;
        face.facets = facets_containing(facets, face);
        out.push_back(std::move(face));
    }
    return out;
}

Face minimal_face(const StackyFan& fan, const RatVector& b) {
    const auto facets = polytope_facets(fan);
    Face face;
    bool first = true;
    for (std::size_t f = 0; f < facets.size(); ++f) {
        const Rat v = dot(facets[f].normal, b);
        if (v > 1) {
            throw Error(ErrorKind::invalid_argument, "point lies outside the fan polytope");
        }
        if (v == 1) {
            face.facets.push_back(f);
            face.rays = first ? facets[f].rays : intersection(face.rays, facets[f].rays);
            first = false;
        }
    }
    if (face.facets.empty()) {
        throw Error(ErrorKind::point_not_on_boundary, "point lies in the interior of the fan polytope");
    }
    return face;
}

std::vector<std::size_t> facets_containing(const std::vector<Facet>& facets, const Face& face) {
    std::vector<std::size_t> out;
    for (std::size_t f = 0; f < facets.size(); ++f) {
        if (subset_of(face.rays, facets[f].rays)) {
            out.push_back(f);
        }
    }
    return out;
}

}  // namespace orbidisk
