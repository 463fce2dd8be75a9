#include "orbidisk/io.hpp"

#include "orbidisk/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace orbidisk {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::parse, what); }

long as_long(const json& j, const std::string& where) {
    if (!j.is_number_integer()) {
        bad(where + ": expected an integer");
    }
    return j.get<long>();
}

Rat as_rat(const json& j, const std::string& where) {
    if (j.is_number_integer()) {
        return Rat(j.get<long>());
    }
    if (j.is_string()) {
        try {
            return parse_rational(j.get<std::string>());
        } catch (const Error&) {
            bad(where + ": bad rational '" + j.get<std::string>() + "'");
        }
    }
    bad(where + ": expected an integer or a \"p/q\" string");
}

IntVector int_vector(const json& j, std::size_t dim, const std::string& where) {
    if (!j.is_array() || j.size() != dim) {
        bad(where + ": expected " + std::to_string(dim) + " integers");
    }
    IntVector out;
    for (const auto& x : j) {
        out.emplace_back(as_long(x, where));
    }
    return out;
}

json int_json(const IntVector& v) {
    json out = json::array();
    for (const auto& x : v) {
        out.push_back(to_i64(x));
    }
    return out;
}

json rat_json(const RatVector& v) {
    json out = json::array();
    for (const auto& x : v) {
        out.push_back(to_string(x));
    }
    return out;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        out += (i ? sep : "") + parts[i];
    }
    return out;
}

std::string point_text(const IntVector& p) {
    std::vector<std::string> parts;
    for (const auto& x : p) {
        parts.push_back(to_string(x));
    }
    return "(" + join(parts, ",") + ")";
}

std::string insertions_text(const std::map<IntVector, long>& ins) {
    std::vector<std::string> parts;
    for (const auto& [p, k] : ins) {
        parts.push_back(point_text(p) + "^" + std::to_string(k));
    }
    return parts.empty() ? "-" : join(parts, " ");
}

std::string alpha_text(const RatVector& alpha) {
    std::vector<std::string> parts;
    for (const auto& x : alpha) {
        parts.push_back(to_string(x));
    }
    return join(parts, " ");
}

std::string convention_name(InvariantConvention c) { return c == InvariantConvention::raw ? "raw" : "ordered"; }

std::string term_text(const LabeledTerm& t, bool first) {
    const std::string mono = render_monomial(t);
    Rat c = t.coefficient;
    std::string sign;
    if (c < 0) {
        sign = first ? "-" : " - ";
        c = -c;
    } else if (!first) {
        sign = " + ";
    }
    if (mono == "1") {
        return sign + to_string(c);
    }
    return sign + (c == 1 ? "" : to_string(c) + "*") + mono;
}

}  // namespace

FanFile parse_fan_file(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        bad(std::string("malformed fan file: ") + e.what());
    }
    if (!j.is_object()) {
        bad("fan file must be an object");
    }
    static const std::vector<std::string> known = {"dim",           "rays",    "max_cones",
                                                   "extra_vectors", "basis_p", "normalization_cone"};
    for (const auto& [key, value] : j.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            bad("unknown field '" + key + "'");
        }
    }
    for (const char* key : {"dim", "rays", "max_cones"}) {
        if (!j.contains(key)) {
            bad(std::string("missing field '") + key + "'");
        }
    }
    FanFile out;
    const long dim = as_long(j["dim"], "dim");
    if (dim < 1) {
        bad("dim must be positive");
    }
    out.fan.dim = static_cast<std::size_t>(dim);
    if (!j["rays"].is_array() || j["rays"].empty()) {
        bad("rays must be a nonempty list");
    }
    for (const auto& r : j["rays"]) {
        out.fan.rays.push_back(int_vector(r, out.fan.dim, "rays"));
    }
    if (!j["max_cones"].is_array()) {
        bad("max_cones must be a list");
    }
    for (const auto& c : j["max_cones"]) {
        if (!c.is_array() || c.empty()) {
            bad("max_cones: each cone is a nonempty index list");
        }
        IndexSet cone;
        for (const auto& i : c) {
            const long k = as_long(i, "max_cones");
            if (k < 0 || static_cast<std::size_t>(k) >= out.fan.rays.size()) {
                bad("max_cones: ray index " + std::to_string(k) + " out of range");
            }
            cone.push_back(static_cast<std::size_t>(k));
        }
        std::sort(cone.begin(), cone.end());
        if (std::adjacent_find(cone.begin(), cone.end()) != cone.end()) {
            bad("max_cones: repeated ray index");
        }
        out.fan.max_cones.push_back(std::move(cone));
    }
    if (j.contains("extra_vectors") && !(j["extra_vectors"].is_string() && j["extra_vectors"] == "auto-age1")) {
        if (!j["extra_vectors"].is_array()) {
            bad("extra_vectors must be \"auto-age1\" or a list of vectors");
        }
        out.auto_extras = false;
        for (const auto& e : j["extra_vectors"]) {
            out.fan.extras.push_back(int_vector(e, out.fan.dim, "extra_vectors"));
        }
    }
    if (out.auto_extras) {
        out.fan = with_age_one_extras(out.fan);
    }
    if (j.contains("basis_p")) {
        if (!j["basis_p"].is_array()) {
            bad("basis_p must be a list of coefficient vectors");
        }
        std::vector<RatVector> basis;
        for (const auto& row : j["basis_p"]) {
            if (!row.is_array() || row.size() != out.fan.m_prime()) {
                bad("basis_p: each entry needs one coefficient per ray and extra vector");
            }
            RatVector v;
            for (const auto& x : row) {
                v.push_back(as_rat(x, "basis_p"));
            }
            basis.push_back(std::move(v));
        }
        out.basis_p = std::move(basis);
    }
    if (j.contains("normalization_cone")) {
        const long c = as_long(j["normalization_cone"], "normalization_cone");
        if (c < 0 || static_cast<std::size_t>(c) >= out.fan.max_cones.size()) {
            bad("normalization_cone out of range");
        }
        out.normalization_cone = static_cast<std::size_t>(c);
    }
    return out;
}

FanFile load_fan_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        bad("cannot read " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_fan_file(ss.str());
}

std::string serialize_fan_file(const FanFile& file) {
    json j;
    j["dim"] = file.fan.dim;
    j["rays"] = json::array();
    for (const auto& r : file.fan.rays) {
        j["rays"].push_back(int_json(r));
    }
    j["max_cones"] = file.fan.max_cones;
    if (file.auto_extras) {
        j["extra_vectors"] = "auto-age1";
    } else {
        j["extra_vectors"] = json::array();
        for (const auto& e : file.fan.extras) {
            j["extra_vectors"].push_back(int_json(e));
        }
    }
    if (file.basis_p) {
        j["basis_p"] = json::array();
        for (const auto& row : *file.basis_p) {
            j["basis_p"].push_back(rat_json(row));
        }
    }
    if (file.normalization_cone) {
        j["normalization_cone"] = *file.normalization_cone;
    }
    return j.dump(2) + "\n";
}

DiskClassSymbol parse_class(const std::string& text, const StackyFan& fan) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        bad("class must look like ray:<index> or box:<x>,<y>,...");
    }
    const std::string kind = text.substr(0, colon);
    const std::string rest = text.substr(colon + 1);
    std::vector<long> nums;
    std::stringstream ss(rest);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            nums.push_back(std::stol(item, &used));
            if (used != item.size()) {
                bad("bad integer '" + item + "' in class");
            }
        } catch (const std::logic_error&) {
            bad("bad integer '" + item + "' in class");
        }
    }
    if (kind == "ray") {
        if (nums.size() != 1 || nums[0] < 0 || static_cast<std::size_t>(nums[0]) >= fan.m()) {
            bad("ray index out of range");
        }
        return DiskClassSymbol::smooth_ray(static_cast<std::size_t>(nums[0]));
    }
    if (kind == "box") {
        if (nums.size() != fan.dim) {
            bad("box point needs " + std::to_string(fan.dim) + " coordinates");
        }
        IntVector p;
        for (long x : nums) {
            p.emplace_back(x);
        }
        return DiskClassSymbol::orbi_point(std::move(p));
    }
    bad("unknown class kind '" + kind + "'");
}

std::string class_label(const DiskClassSymbol& beta) {
    if (beta.kind == DiskClassSymbol::Kind::smooth) {
        return "ray:" + std::to_string(beta.ray);
    }
    std::vector<std::string> parts;
    for (const auto& x : beta.point) {
        parts.push_back(to_string(x));
    }
    return "box:" + join(parts, ",");
}

bool operator==(const InvariantOutput& a, const InvariantOutput& b) {
    return a.beta == b.beta && a.facet == b.facet && a.facet_rays == b.facet_rays && a.order == b.order &&
           a.convention == b.convention && a.entries == b.entries;
}

std::size_t facet_from_rays(const StackyFan& fan, IndexSet rays) {
    std::sort(rays.begin(), rays.end());
    const auto facets = polytope_facets(fan);
    for (std::size_t i = 0; i < facets.size(); ++i) {
        if (facets[i].rays == rays) {
            return i;
        }
    }
    std::vector<std::string> parts;
    for (auto r : rays) {
        parts.push_back(std::to_string(r));
    }
    throw Error(ErrorKind::invalid_facet, "no facet of the fan polytope has vertices {" + join(parts, ",") + "}");
}

InvariantOutput compute_invariants(const FanFile& file, const DiskClassSymbol& beta, std::optional<std::size_t> facet,
                                   const Rat& order, InvariantConvention convention) {
    const auto& fan = file.fan;
    const auto parent_seq = fan_sequence(fan, file.basis_p);
    const auto sub = build_suborbifold(fan, beta, facet);
    const auto g = disk_generating_function(fan, parent_seq, beta, solve_chart(sub, order));
    const auto& chart = g.solution.chart;
    const std::size_t rp = chart.r_prime();

    InvariantOutput out;
    out.beta = beta;
    out.facet = sub.facet;
    out.facet_rays = sub.facet_data.rays;
    out.order = order;
    out.convention = convention;
    std::vector<std::pair<Rat, InvariantEntry>> keyed;
    for (const auto& [e, c] : g.series.terms()) {
        InvariantEntry entry;
        entry.alpha = g.parent_relation(e);
        const auto coords = chart.q_ring->to_coords(e);
        Rat value = c;
        for (std::size_t b = 0; b < chart.num_extras(); ++b) {
            if (coords[rp + b] != 0) {
                const long k = to_int({coords[rp + b]})[0].get_si();
                entry.insertions[chart.fan.vec(chart.fan.m() + b)] = k;
                if (convention == InvariantConvention::ordered) {
                    value *= Rat(factorial(static_cast<unsigned long>(k)));
                }
            }
        }
        entry.value = value;
        keyed.emplace_back(chart.q_ring->degree(e), std::move(entry));
    }
    std::sort(keyed.begin(), keyed.end(), [](const auto& x, const auto& y) {
        if (x.first != y.first) {
            return x.first < y.first;
        }
        if (x.second.alpha != y.second.alpha) {
            return x.second.alpha < y.second.alpha;
        }
        return x.second.insertions < y.second.insertions;
    });
    for (auto& [d, entry] : keyed) {
        out.entries.push_back(std::move(entry));
    }
    return out;
}

OutputFormat parse_format(const std::string& name) {
    if (name == "json") {
        return OutputFormat::json;
    }
    if (name == "csv") {
        return OutputFormat::csv;
    }
    if (name == "markdown") {
        return OutputFormat::markdown;
    }
    bad("unknown format '" + name + "'");
}

std::string serialize_invariants(const InvariantOutput& out, OutputFormat format) {
    std::ostringstream os;
    switch (format) {
    case OutputFormat::json: {
        json j;
        j["class"] = class_label(out.beta);
        j["facet"] = {{"index", out.facet}, {"rays", out.facet_rays}};
        j["order"] = to_string(out.order);
        j["convention"] = convention_name(out.convention);
        j["entries"] = json::array();
        for (const auto& e : out.entries) {
            json ins = json::array();
            for (const auto& [p, k] : e.insertions) {
                ins.push_back({{"point", int_json(p)}, {"multiplicity", k}});
            }
            j["entries"].push_back({{"alpha", rat_json(e.alpha)}, {"insertions", ins}, {"value", to_string(e.value)}});
        }
        os << j.dump(2) << "\n";
        break;
    }
    case OutputFormat::csv:
        os << "alpha,insertions,value\n";
        for (const auto& e : out.entries) {
            os << alpha_text(e.alpha) << "," << insertions_text(e.insertions) << "," << to_string(e.value) << "\n";
        }
        break;
    case OutputFormat::markdown:
        os << "class " << class_label(out.beta) << ", facet " << out.facet << " {";
        for (std::size_t i = 0; i < out.facet_rays.size(); ++i) {
            os << (i ? "," : "") << out.facet_rays[i];
        }
        os << "}, order " << to_string(out.order) << ", " << convention_name(out.convention) << "\n\n";
        os << "| alpha | insertions | value |\n|---|---|---|\n";
        for (const auto& e : out.entries) {
            os << "| " << alpha_text(e.alpha) << " | " << insertions_text(e.insertions) << " | " << to_string(e.value)
               << " |\n";
        }
        break;
    }
    return os.str();
}

InvariantOutput parse_invariants(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
        InvariantOutput out;
        const std::string label = j.at("class").get<std::string>();
        const auto colon = label.find(':');
        if (label.substr(0, colon) == "ray") {
            out.beta = DiskClassSymbol::smooth_ray(std::stoul(label.substr(colon + 1)));
        } else {
            IntVector p;
            std::stringstream ss(label.substr(colon + 1));
            std::string item;
            while (std::getline(ss, item, ',')) {
                p.emplace_back(std::stol(item));
            }
            out.beta = DiskClassSymbol::orbi_point(std::move(p));
        }
        out.facet = j.at("facet").at("index").get<std::size_t>();
        out.facet_rays = j.at("facet").at("rays").get<IndexSet>();
        out.order = parse_rational(j.at("order").get<std::string>());
        out.convention = j.at("convention") == "raw" ? InvariantConvention::raw : InvariantConvention::ordered;
        for (const auto& e : j.at("entries")) {
            InvariantEntry entry;
            for (const auto& x : e.at("alpha")) {
                entry.alpha.push_back(parse_rational(x.get<std::string>()));
            }
            for (const auto& ins : e.at("insertions")) {
                IntVector p;
                for (const auto& x : ins.at("point")) {
                    p.emplace_back(x.get<long>());
                }
                entry.insertions[p] = ins.at("multiplicity").get<long>();
            }
            entry.value = parse_rational(e.at("value").get<std::string>());
            out.entries.push_back(std::move(entry));
        }
        return out;
    } catch (const json::exception& e) {
        bad(std::string("malformed invariant output: ") + e.what());
    }
}

std::string render_monomial(const LabeledTerm& term) {
    std::vector<std::string> parts;
    for (std::size_t a = 0; a < term.q.size(); ++a) {
        const Rat& x = term.q[a];
        if (x == 0) {
            continue;
        }
        std::string name = term.q.size() == 1 ? "q" : "q" + std::to_string(a + 1);
        if (x != 1) {
            name += is_integer(x) ? "^" + to_string(x) : "^{" + to_string(x) + "}";
        }
        parts.push_back(name);
    }
    for (const auto& [p, k] : term.tau) {
        parts.push_back("tau" + point_text(p) + (k == 1 ? "" : "^" + std::to_string(k)));
    }
    return parts.empty() ? "1" : join(parts, "*");
}

std::string serialize_potential(const PotentialData& pot, OutputFormat format) {
    std::ostringstream os;
    switch (format) {
    case OutputFormat::json: {
        json j;
        j["cone"] = pot.cone;
        j["order"] = to_string(pot.truncation);
        j["monomials"] = json::array();
        for (const auto& [z, terms] : pot.terms) {
            json ts = json::array();
            std::string series;
            for (const auto& t : terms) {
                json tau = json::array();
                for (const auto& [p, k] : t.tau) {
                    tau.push_back({{"point", int_json(p)}, {"power", k}});
                }
                ts.push_back({{"q", rat_json(t.q)}, {"tau", tau}, {"coefficient", to_string(t.coefficient)}});
                series += term_text(t, series.empty());
            }
            j["monomials"].push_back({{"z", int_json(z)},
                                      {"facet", pot.facets.at(z)},
                                      {"area", rat_json(pot.areas.at(z))},
                                      {"series", series.empty() ? "0" : series},
                                      {"terms", ts}});
        }
        os << j.dump(2) << "\n";
        break;
    }
    case OutputFormat::csv:
        os << "z,q,tau,coefficient\n";
        for (const auto& [z, terms] : pot.terms) {
            for (const auto& t : terms) {
                std::map<IntVector, long> tau(t.tau.begin(), t.tau.end());
                os << point_text(z) << "," << alpha_text(t.q) << "," << insertions_text(tau) << ","
                   << to_string(t.coefficient) << "\n";
            }
        }
        break;
    case OutputFormat::markdown:
        os << "normalization cone " << pot.cone << ", order " << to_string(pot.truncation) << "\n\n";
        os << "| z | facet | series |\n|---|---|---|\n";
        for (const auto& [z, terms] : pot.terms) {
            std::string series;
            for (const auto& t : terms) {
                series += term_text(t, series.empty());
            }
            os << "| z^" << point_text(z) << " | " << pot.facets.at(z) << " | " << (series.empty() ? "0" : series)
               << " |\n";
        }
        break;
    }
    return os.str();
}

}  // namespace orbidisk
