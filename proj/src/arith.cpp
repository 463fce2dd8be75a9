#include "orbidisk/arith.hpp"

#include "orbidisk/error.hpp"

#include <cctype>
#include <limits>

namespace orbidisk {

const char* error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::parse: return "parse-error";
        case ErrorKind::invalid_argument: return "invalid-argument";
        case ErrorKind::ambiguous_solution: return "ambiguous-solution";
        case ErrorKind::ring_mismatch: return "ring-mismatch";
        case ErrorKind::nonzero_constant_term: return "nonzero-constant-term";
        case ErrorKind::degree_decreasing_substitution: return "degree-decreasing-substitution";
        case ErrorKind::no_convergence: return "no-convergence";
        case ErrorKind::no_valid_basis: return "no-valid-basis-found";
        case ErrorKind::not_complete: return "not-complete";
        case ErrorKind::point_not_on_boundary: return "point-not-on-boundary";
        case ErrorKind::not_an_extra_vector: return "not-an-extra-vector";
        case ErrorKind::invalid_facet: return "invalid-facet";
        case ErrorKind::interior_point: return "interior-point";
        case ErrorKind::no_such_hyperplane: return "no-such-hyperplane";
        case ErrorKind::degenerate_exponent_matrix: return "degenerate-exponent-matrix";
        case ErrorKind::unsupported_insertions: return "unsupported-insertions";
        case ErrorKind::order_too_low: return "order-too-low";
        case ErrorKind::normalization_cone_invalid: return "normalization-cone-invalid";
        case ErrorKind::nonrational_coefficient: return "nonrational-coefficient";
        case ErrorKind::validation_failure: return "validation-failure";
    }
    return "unknown";
}

Rat make_rat(const Int& num, const Int& den) {
    if (den == 0) {
        throw Error(ErrorKind::invalid_argument, "zero denominator");
    }
    Rat r(num, den);
    r.canonicalize();
    return r;
}

bool is_integer(const Rat& x) { return x.get_den() == 1; }

Int floor_rat(const Rat& x) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return q;
}

Int ceil_rat(const Rat& x) {
    Int q;
    mpz_cdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return q;
}

Rat frac_part(const Rat& x) { return x - Rat(floor_rat(x)); }

Int gcd_int(const Int& a, const Int& b) {
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

Int lcm_int(const Int& a, const Int& b) {
    Int l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

Int factorial(unsigned long n) {
    Int f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return f;
}

std::string to_string(const Rat& x) { return x.get_str(); }
std::string to_string(const Int& x) { return x.get_str(); }

Rat parse_rational(std::string_view text) {
    auto valid_int = [](std::string_view s) {
        std::size_t i = 0;
        if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
            ++i;
        }
        if (i == s.size()) {
            return false;
        }
        for (; i < s.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(s[i]))) {
                return false;
            }
        }
        return true;
    };
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
        text.remove_prefix(1);
    }
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
        text.remove_suffix(1);
    }
    const auto slash = text.find('/');
    const auto num_text = text.substr(0, slash);
    const auto den_text = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
    if (!valid_int(num_text) || !valid_int(den_text) || den_text.front() == '-' || den_text.front() == '+') {
        throw Error(ErrorKind::parse, "malformed rational '" + std::string(text) + "'");
    }
    auto strip_plus = [](std::string_view s) { return s.front() == '+' ? s.substr(1) : s; };
    Int num{std::string(strip_plus(num_text))};
    Int den{std::string(den_text)};
    if (den == 0) {
        throw Error(ErrorKind::parse, "zero denominator in '" + std::string(text) + "'");
    }
    return make_rat(num, den);
}

RatVector to_rat(const IntVector& v) {
    RatVector out;
    out.reserve(v.size());
    for (const auto& x : v) {
        out.emplace_back(x);
    }
    return out;
}

IntVector to_int(const RatVector& v) {
    IntVector out;
    out.reserve(v.size());
    for (const auto& x : v) {
        if (!is_integer(x)) {
            throw Error(ErrorKind::invalid_argument, "non-integral entry " + to_string(x));
        }
        out.push_back(x.get_num());
    }
    return out;
}

std::int64_t to_i64(const Int& x) {
    if (!x.fits_slong_p()) {
        throw Error(ErrorKind::invalid_argument, "integer out of 64-bit range: " + x.get_str());
    }
    return x.get_si();
}

}  // namespace orbidisk
