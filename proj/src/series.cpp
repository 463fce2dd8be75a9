#include "orbidisk/series.hpp"

#include "orbidisk/error.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace orbidisk {

SeriesRing::SeriesRing(std::size_t nvars, std::int64_t modulus, Rat truncation, RatVector weights,
                       std::vector<std::string> names)
    : nvars_(nvars), modulus_(modulus), truncation_(std::move(truncation)), weights_(std::move(weights)),
      names_(std::move(names)) {
    if (modulus_ <= 0) {
        throw Error(ErrorKind::invalid_argument, "series modulus must be positive");
    }
    if (truncation_ < 0) {
        throw Error(ErrorKind::invalid_argument, "negative truncation order");
    }
    if (weights_.size() != nvars_) {
        throw Error(ErrorKind::invalid_argument, "one weight per variable required");
    }
    if (names_.empty()) {
        for (std::size_t i = 0; i < nvars_; ++i) {
            names_.push_back("x" + std::to_string(i + 1));
        }
    }
    if (names_.size() != nvars_) {
        throw Error(ErrorKind::invalid_argument, "one name per variable required");
    }
    Int scale = 1;
    for (const auto& w : weights_) {
        if (w <= 0) {
            throw Error(ErrorKind::invalid_argument, "series weights must be positive");
        }
        const Rat unit = w / Rat(modulus_);
        scale = lcm_int(scale, unit.get_den());
    }
    grade_scale_ = to_i64(scale);
    for (const auto& w : weights_) {
        const Rat g = w * Rat(scale) / Rat(modulus_);
        grades_.push_back(to_i64(g.get_num()));
    }
    max_grade_ = to_i64(floor_rat(truncation_ * Rat(scale)));
}

RingPtr SeriesRing::make(std::size_t nvars, std::int64_t modulus, Rat truncation, RatVector weights,
                         std::vector<std::string> names) {
    return std::make_shared<const SeriesRing>(nvars, modulus, std::move(truncation), std::move(weights),
                                              std::move(names));
}

std::int64_t SeriesRing::grade(const Exponent& e) const {
    std::int64_t g = 0;
    for (std::size_t i = 0; i < nvars_; ++i) {
        g += grades_[i] * e[i];
    }
    return g;
}

Rat SeriesRing::degree(const Exponent& e) const { return make_rat(Int(static_cast<long>(grade(e))), grade_scale_); }

Exponent SeriesRing::to_exponent(const RatVector& coords) const {
    if (coords.size() != nvars_) {
        throw Error(ErrorKind::ring_mismatch, "exponent has wrong length");
    }
    Exponent e(nvars_);
    for (std::size_t i = 0; i < nvars_; ++i) {
        const Rat scaled = coords[i] * Rat(modulus_);
        if (!is_integer(scaled) || scaled < 0) {
            throw Error(ErrorKind::ring_mismatch,
                        "exponent " + orbidisk::to_string(coords[i]) + " outside (1/" + std::to_string(modulus_) +
                            ")Z>=0");
        }
        e[i] = to_i64(scaled.get_num());
    }
    return e;
}

RatVector SeriesRing::to_coords(const Exponent& e) const {
    RatVector c(nvars_);
    for (std::size_t i = 0; i < nvars_; ++i) {
        c[i] = make_rat(Int(static_cast<long>(e[i])), modulus_);
    }
    return c;
}

bool SeriesRing::same_grading(const SeriesRing& other) const {
    return nvars_ == other.nvars_ && modulus_ == other.modulus_ && weights_ == other.weights_;
}

bool operator==(const SeriesRing& a, const SeriesRing& b) {
    return a.same_grading(b) && a.truncation_ == b.truncation_;
}

TruncatedSeries::TruncatedSeries(RingPtr ring, TermMap terms) : ring_(std::move(ring)) {
    for (auto& [e, c] : terms) {
        if (c != 0 && ring_->grade(e) <= ring_->max_grade()) {
            terms_.emplace(e, std::move(c));
        }
    }
}

TruncatedSeries TruncatedSeries::constant(RingPtr ring, const Rat& c) {
    TruncatedSeries s(std::move(ring));
    if (c != 0) {
        s.terms_.emplace(Exponent(s.ring_->nvars(), 0), c);
    }
    return s;
}

TruncatedSeries TruncatedSeries::variable(RingPtr ring, std::size_t i) {
    RatVector coords(ring->nvars());
    coords.at(i) = 1;
    return monomial(std::move(ring), coords);
}

TruncatedSeries TruncatedSeries::monomial(RingPtr ring, const RatVector& coords, const Rat& c) {
    TruncatedSeries s(std::move(ring));
    auto e = s.ring_->to_exponent(coords);
    if (c != 0 && s.ring_->grade(e) <= s.ring_->max_grade()) {
        s.terms_.emplace(std::move(e), c);
    }
    return s;
}

Rat TruncatedSeries::coefficient(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Rat(0) : it->second;
}

Rat TruncatedSeries::coefficient(const RatVector& coords) const { return coefficient(ring_->to_exponent(coords)); }

Rat TruncatedSeries::constant_term() const { return coefficient(Exponent(ring_->nvars(), 0)); }

std::int64_t TruncatedSeries::valuation() const {
    std::int64_t v = ring_->max_grade() + 1;
    for (const auto& [e, c] : terms_) {
        v = std::min(v, ring_->grade(e));
    }
    return v;
}

TruncatedSeries TruncatedSeries::set_zero(const std::vector<std::size_t>& vars) const {
    TruncatedSeries out(ring_);
    for (const auto& [e, c] : terms_) {
        if (std::none_of(vars.begin(), vars.end(), [&](std::size_t v) { return e[v] != 0; })) {
            out.terms_.emplace(e, c);
        }
    }
    return out;
}

TruncatedSeries TruncatedSeries::in_ring(RingPtr other) const {
    if (!ring_->same_grading(*other)) {
        throw Error(ErrorKind::ring_mismatch, "rings differ in grading");
    }
    return TruncatedSeries(std::move(other), terms_);
}

void TruncatedSeries::check_ring(const TruncatedSeries& g) const {
    if (ring_ != g.ring_ && !(*ring_ == *g.ring_)) {
        throw Error(ErrorKind::ring_mismatch, "operands live in different series rings");
    }
}

TruncatedSeries TruncatedSeries::operator-() const {
    TruncatedSeries out = *this;
    for (auto& [e, c] : out.terms_) {
        c = -c;
    }
    return out;
}

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& g) {
    check_ring(g);
    for (const auto& [e, c] : g.terms_) {
        auto [it, inserted] = terms_.emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) {
                terms_.erase(it);
            }
        }
    }
    return *this;
}

TruncatedSeries& TruncatedSeries::operator-=(const TruncatedSeries& g) { return *this += -g; }

TruncatedSeries& TruncatedSeries::operator*=(const Rat& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [e, x] : terms_) {
        x *= c;
    }
    return *this;
}

TruncatedSeries operator*(const TruncatedSeries& f, const TruncatedSeries& g) {
    f.check_ring(g);
    const SeriesRing& ring = f.ring();
    const std::int64_t cap = ring.max_grade();
    struct Entry {
        std::int64_t grade;
        const Exponent* e;
        const Rat* c;
    };
    auto entries = [&](const TruncatedSeries& s) {
        std::vector<Entry> v;
        v.reserve(s.size());
        for (const auto& [e, c] : s.terms()) {
            v.push_back({ring.grade(e), &e, &c});
        }
        std::sort(v.begin(), v.end(), [](const Entry& a, const Entry& b) { return a.grade < b.grade; });
        return v;
    };
    const auto fe = entries(f);
    const auto ge = entries(g);
    TruncatedSeries::TermMap acc;
    Exponent sum(ring.nvars());
    for (const auto& a : fe) {
        for (const auto& b : ge) {
            if (a.grade + b.grade > cap) {
                break;
            }
            for (std::size_t i = 0; i < sum.size(); ++i) {
                sum[i] = (*a.e)[i] + (*b.e)[i];
            }
            acc[sum] += *a.c * *b.c;
        }
    }
    return TruncatedSeries(f.ring_ptr(), std::move(acc));
}

bool operator==(const TruncatedSeries& f, const TruncatedSeries& g) {
    f.check_ring(g);
    return f.terms_ == g.terms_;
}

std::string TruncatedSeries::to_string() const {
    if (terms_.empty()) {
        return "0";
    }
    std::vector<std::pair<std::int64_t, const TermMap::value_type*>> order;
    for (const auto& t : terms_) {
        order.emplace_back(ring_->grade(t.first), &t);
    }
    std::stable_sort(order.begin(), order.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::ostringstream out;
    bool first = true;
    for (const auto& [g, term] : order) {
        const auto& [e, c] = *term;
        Rat mag = abs(c);
        if (first) {
            out << (c < 0 ? "-" : "");
        } else {
            out << (c < 0 ? " - " : " + ");
        }
        first = false;
        std::vector<std::string> factors;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) {
                continue;
            }
            const Rat p = make_rat(Int(static_cast<long>(e[i])), ring_->modulus());
            std::string f = ring_->names()[i];
            if (p != 1) {
                f += is_integer(p) ? "^" + orbidisk::to_string(p) : "^(" + orbidisk::to_string(p) + ")";
            }
            factors.push_back(f);
        }
        if (factors.empty()) {
            out << orbidisk::to_string(mag);
            continue;
        }
        if (mag != 1) {
            out << orbidisk::to_string(mag) << "*";
        }
        for (std::size_t i = 0; i < factors.size(); ++i) {
            out << (i ? "*" : "") << factors[i];
        }
    }
    return out.str();
}

TruncatedSeries add(const TruncatedSeries& f, const TruncatedSeries& g) { return f + g; }

TruncatedSeries mul(const TruncatedSeries& f, const TruncatedSeries& g) { return f * g; }

TruncatedSeries pow(const TruncatedSeries& f, unsigned long n) {
    TruncatedSeries result = TruncatedSeries::constant(f.ring_ptr(), 1);
    TruncatedSeries base = f;
    while (n > 0) {
        if (n & 1UL) {
            result = result * base;
        }
        n >>= 1;
        if (n > 0) {
            base = base * base;
        }
    }
    return result;
}

namespace {

// Number of nested factors worth keeping: beyond this every power of f is
// truncated away.
std::int64_t horner_depth(const TruncatedSeries& f) {
    const std::int64_t v = f.valuation();
    if (v > f.ring().max_grade()) {
        return 0;
    }
    return f.ring().max_grade() / v;
}

void require_no_constant(const TruncatedSeries& f, const char* what) {
    if (f.constant_term() != 0) {
        throw Error(ErrorKind::nonzero_constant_term, std::string(what) + " needs a series without constant term");
    }
}

}  // namespace

TruncatedSeries exp_series(const TruncatedSeries& f) {
    require_no_constant(f, "exp");
    const auto one = TruncatedSeries::constant(f.ring_ptr(), 1);
    const std::int64_t n = horner_depth(f);
    TruncatedSeries r = one;
    // 1 + f(1 + f/2(1 + f/3(...)))
    for (std::int64_t k = n; k >= 1; --k) {
        r = one + (f * r) * make_rat(1, Int(static_cast<long>(k)));
    }
    return r;
}

TruncatedSeries log1p(const TruncatedSeries& f) {
    require_no_constant(f, "log1p");
    const std::int64_t n = horner_depth(f);
    if (n == 0) {
        return TruncatedSeries(f.ring_ptr());
    }
    auto coef = [](std::int64_t k) { return make_rat(k % 2 ? 1 : -1, Int(static_cast<long>(k))); };
    // f(1 - f(1/2 - f(1/3 - ...)))
    TruncatedSeries r = TruncatedSeries::constant(f.ring_ptr(), coef(n));
    for (std::int64_t k = n - 1; k >= 1; --k) {
        r = TruncatedSeries::constant(f.ring_ptr(), coef(k)) + f * r;
    }
    return f * r;
}

TruncatedSeries unit_pow(const TruncatedSeries& u, const Rat& s) {
    if (u.constant_term() != 1) {
        throw Error(ErrorKind::nonzero_constant_term, "unit_pow needs constant term 1");
    }
    if (is_integer(s) && s >= 0) {
        return pow(u, s.get_num().get_ui());
    }
    const auto one = TruncatedSeries::constant(u.ring_ptr(), 1);
    return exp_series(log1p(u - one) * s);
}

namespace {

struct PowerTable {
    const SubstitutionImage* image = nullptr;
    std::int64_t source_modulus = 1;
    RingPtr target;
    bool fractional = false;
    TruncatedSeries base{nullptr};        // factor, or its M-th root when fractional
    std::vector<TruncatedSeries> powers;  // base^k
    std::map<std::int64_t, std::pair<TruncatedSeries, std::int64_t>> cache;

    const TruncatedSeries& base_power(std::int64_t k) {
        if (powers.empty()) {
            powers.push_back(TruncatedSeries::constant(target, 1));
        }
        while (static_cast<std::int64_t>(powers.size()) <= k) {
            powers.push_back(powers.back() * base);
        }
        return powers[static_cast<std::size_t>(k)];
    }

    // image^(e / source_modulus) with its valuation.
    const std::pair<TruncatedSeries, std::int64_t>& get(std::int64_t e) {
        auto it = cache.find(e);
        if (it != cache.end()) {
            return it->second;
        }
        const Rat c = make_rat(Int(static_cast<long>(e)), source_modulus);
        Rat scalar;
        if (is_integer(c)) {
            mpz_class num, den;
            mpz_pow_ui(num.get_mpz_t(), image->scalar.get_num_mpz_t(), c.get_num().get_ui());
            mpz_pow_ui(den.get_mpz_t(), image->scalar.get_den_mpz_t(), c.get_num().get_ui());
            scalar = make_rat(num, den);
        } else if (image->scalar == 1) {
            scalar = 1;
        } else {
            throw Error(ErrorKind::invalid_argument, "fractional power of a non-unit scalar");
        }
        RatVector mono_coords(image->monomial.size());
        for (std::size_t i = 0; i < mono_coords.size(); ++i) {
            mono_coords[i] = c * image->monomial[i];
        }
        const auto mono = target->to_exponent(mono_coords);
        const TruncatedSeries& part = fractional ? base_power(e) : base_power(c.get_num().get_si());
        TruncatedSeries::TermMap shifted;
        for (const auto& [x, coef] : part.terms()) {
            Exponent y = x;
            for (std::size_t i = 0; i < y.size(); ++i) {
                y[i] += mono[i];
            }
            shifted.emplace(std::move(y), coef * scalar);
        }
        TruncatedSeries value(target, std::move(shifted));
        const std::int64_t v = value.valuation();
        return cache.emplace(e, std::make_pair(std::move(value), v)).first->second;
    }
};

struct TermRef {
    const Exponent* e;
    const Rat* c;
};

TruncatedSeries substitute_rec(std::size_t k, std::vector<TermRef>::const_iterator begin,
                               std::vector<TermRef>::const_iterator end, std::int64_t low,
                               std::vector<PowerTable>& tables, const RingPtr& target) {
    if (k == tables.size()) {
        return TruncatedSeries::constant(target, *begin->c);
    }
    TruncatedSeries result(target);
    auto it = begin;
    while (it != end) {
        const std::int64_t e = (*it->e)[k];
        auto group_end = it;
        while (group_end != end && (*group_end->e)[k] == e) {
            ++group_end;
        }
        if (e == 0) {
            result += substitute_rec(k + 1, it, group_end, low, tables, target);
        } else {
            const auto& [power, v] = tables[k].get(e);
            if (low + v <= target->max_grade()) {
                result += power * substitute_rec(k + 1, it, group_end, low + v, tables, target);
            }
        }
        it = group_end;
    }
    return result;
}

}  // namespace

TruncatedSeries substitute(const TruncatedSeries& f, const std::vector<SubstitutionImage>& images, RingPtr target) {
    const SeriesRing& source = f.ring();
    if (images.size() != source.nvars()) {
        throw Error(ErrorKind::invalid_argument, "one image per variable required");
    }
    std::vector<bool> fractional(source.nvars(), false);
    std::vector<bool> used(source.nvars(), false);
    for (const auto& [e, c] : f.terms()) {
        for (std::size_t i = 0; i < e.size(); ++i) {
            used[i] = used[i] || e[i] != 0;
            fractional[i] = fractional[i] || e[i] % source.modulus() != 0;
        }
    }
    std::vector<PowerTable> tables(source.nvars());
    for (std::size_t a = 0; a < source.nvars(); ++a) {
        const auto& img = images[a];
        if (img.monomial.size() != target->nvars()) {
            throw Error(ErrorKind::ring_mismatch, "image monomial has wrong length");
        }
        if (img.factor.ring_ptr() == nullptr || !img.factor.ring().same_grading(*target)) {
            throw Error(ErrorKind::ring_mismatch, "image factor is not in the target ring");
        }
        auto& t = tables[a];
        t.image = &img;
        t.source_modulus = source.modulus();
        t.target = target;
        t.fractional = fractional[a];
        if (!used[a]) {
            continue;
        }
        const auto factor = img.factor.in_ring(target);
        if (!factor.is_zero()) {
            // Image degree must dominate the variable's weight.
            Rat mono_degree = 0;
            for (std::size_t i = 0; i < target->nvars(); ++i) {
                mono_degree += img.monomial[i] * target->weights()[i];
            }
            const Rat image_degree =
                mono_degree + make_rat(Int(static_cast<long>(factor.valuation())), target->grade_scale());
            if (image_degree < source.weights()[a]) {
                throw Error(ErrorKind::degree_decreasing_substitution,
                            "image of " + source.names()[a] + " has degree " + to_string(image_degree) +
                                " below weight " + to_string(source.weights()[a]));
            }
        }
        if (t.fractional) {
            t.base = unit_pow(factor, make_rat(1, Int(static_cast<long>(source.modulus()))));
        } else {
            t.base = factor;
        }
    }
    std::vector<TermRef> refs;
    refs.reserve(f.size());
    for (const auto& [e, c] : f.terms()) {
        refs.push_back({&e, &c});
    }
    if (refs.empty()) {
        return TruncatedSeries(target);
    }
    return substitute_rec(0, refs.cbegin(), refs.cend(), 0, tables, target);
}

SeriesTuple solve_fixed_point(SeriesTuple initial, const std::function<SeriesTuple(const SeriesTuple&)>& step,
                              std::size_t max_iterations) {
    if (max_iterations == 0) {
        const std::int64_t levels = initial.empty() ? 0 : initial.front().ring().max_grade();
        max_iterations = static_cast<std::size_t>(levels) + 2;
    }
    SeriesTuple x = std::move(initial);
    for (std::size_t it = 0; it < max_iterations; ++it) {
        SeriesTuple next = step(x);
        if (next == x) {
            return x;
        }
        x = std::move(next);
    }
    throw Error(ErrorKind::no_convergence,
                "fixed point not reached after " + std::to_string(max_iterations) + " iterations");
}

}  // namespace orbidisk
