// orbidisk: orbi-disk invariants and potentials of toric orbifolds.

#include "orbidisk/error.hpp"
#include "orbidisk/io.hpp"
#include "orbidisk/verify.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <iostream>

using namespace orbidisk;
using nlohmann::json;

namespace {

enum Exit { ok = 0, validation = 1, parse = 2, computation = 3 };

std::string vec_text(const IntVector& v) {
    std::string out = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        out += (i ? "," : "") + to_string(v[i]);
    }
    return out + ")";
}

std::string set_text(const IndexSet& s) {
    std::string out = "{";
    for (std::size_t i = 0; i < s.size(); ++i) {
        out += (i ? "," : "") + std::to_string(s[i]);
    }
    return out + "}";
}

int cmd_validate(const std::string& path) {
    const auto file = load_fan_file(path);
    const auto& fan = file.fan;
    bool pass = true;
    const auto report = validate(fan);
    if (report.ok()) {
        std::cout << "validate: pass\n";
    } else {
        pass = false;
        for (const auto& issue : report.issues) {
            std::cout << "validate: FAIL " << issue.check << ": " << issue.detail << "\n";
        }
        return Exit::validation;  // later checks assume a valid fan
    }
    const auto g = gorenstein_check(fan);
    std::cout << "gorenstein: " << (g.ok ? "pass" : "FAIL at cone " + std::to_string(*g.offending_cone)) << "\n";
    pass = pass && g.ok;
    if (is_complete(fan)) {
        const auto sf = semifano_check(fan);
        if (sf.ok) {
            std::cout << "semi-Fano: pass (" << sf.walls.size() << " walls, " << sf.flat_walls.size() << " with c1 = 0)\n";
        } else {
            std::cout << "semi-Fano: FAIL wall " << set_text(sf.witness->wall) << " between cones " << sf.witness->cone_a
                      << " and " << sf.witness->cone_b << " has c1 = " << to_string(sf.witness->c1) << "\n";
            pass = false;
        }
    } else {
        std::cout << "semi-Fano: not applicable (fan is not complete)\n";
    }
    const auto box = box_elements(fan);
    std::size_t age_one = 0;
    for (const auto& b : box) {
        age_one += b.age == 1 ? 1 : 0;
    }
    std::cout << "box: " << box.size() - 1 << " twisted sectors, " << age_one << " of age 1\n";
    return pass ? Exit::ok : Exit::validation;
}

int cmd_box(const std::string& path, OutputFormat format) {
    const auto fan = load_fan_file(path).fan;
    const auto box = box_elements(fan);
    if (format == OutputFormat::json) {
        json out = json::array();
        for (const auto& b : box) {
            json coords = json::array();
            for (const auto& c : b.coords) {
                coords.push_back(to_string(c));
            }
            json point = json::array();
            for (const auto& x : b.point) {
                point.push_back(to_i64(x));
            }
            out.push_back({{"point", point}, {"carrier", b.carrier}, {"coords", coords}, {"age", to_string(b.age)}});
        }
        std::cout << out.dump(2) << "\n";
        return Exit::ok;
    }
    if (format == OutputFormat::csv) {
        std::cout << "point,carrier,age\n";
    } else {
        std::cout << "| point | carrier | age |\n|---|---|---|\n";
    }
    for (const auto& b : box) {
        if (format == OutputFormat::csv) {
            std::cout << vec_text(b.point) << "," << set_text(b.carrier) << "," << to_string(b.age) << "\n";
        } else {
            std::cout << "| " << vec_text(b.point) << " | " << set_text(b.carrier) << " | " << to_string(b.age) << " |\n";
        }
    }
    return Exit::ok;
}

std::optional<std::size_t> facet_option(const StackyFan& fan, const std::vector<std::size_t>& rays) {
    if (rays.empty()) {
        return std::nullopt;
    }
    return facet_from_rays(fan, rays);
}

int cmd_suborbifold(const std::string& path, const std::string& cls, const std::vector<std::size_t>& facet) {
    const auto fan = load_fan_file(path).fan;
    const auto beta = parse_class(cls, fan);
    const auto sub = build_suborbifold(fan, beta, facet_option(fan, facet));
    json out;
    out["class"] = class_label(beta);
    out["facet"] = {{"index", sub.facet}, {"rays", sub.facet_data.rays}};
    out["minimal_face"] = sub.face.rays;
    auto vectors = [](const std::vector<IntVector>& vs) {
        json a = json::array();
        for (const auto& v : vs) {
            json p = json::array();
            for (const auto& x : v) {
                p.push_back(to_i64(x));
            }
            a.push_back(p);
        }
        return a;
    };
    out["rays"] = vectors(sub.fan.rays);
    out["extra_vectors"] = vectors(sub.fan.extras);
    out["max_cones"] = sub.fan.max_cones;
    out["parent_index"] = sub.vector_map;
    out["basic_index"] = sub.basic_index;
    out["cy_normal"] = vectors({sub.cy_normal})[0];
    std::cout << out.dump(2) << "\n";
    return Exit::ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Orbi-disk invariants of compact semi-Fano Gorenstein toric orbifolds"};
    app.require_subcommand(1);

    std::string file;
    std::string cls;
    std::string order = "4";
    std::string format = "json";
    std::string convention = "raw";
    std::vector<std::size_t> facet;
    std::optional<std::size_t> cone;
    bool parallel = false;
    long amax = 6;
    long bmax = 6;

    auto* validate_cmd = app.add_subcommand("validate", "check a fan file: validity, Gorenstein, semi-Fano, Box census");
    validate_cmd->add_option("file", file, "fan file")->required();

    auto* box_cmd = app.add_subcommand("box", "list the Box elements with their ages");
    box_cmd->add_option("file", file, "fan file")->required();
    box_cmd->add_option("--format", format, "json, csv or markdown");

    auto* sub_cmd = app.add_subcommand("suborbifold", "the toric Calabi-Yau chart of a basic class");
    sub_cmd->add_option("file", file, "fan file")->required();
    sub_cmd->add_option("--class", cls, "ray:<i> or box:<x>,<y>,...")->required();
    sub_cmd->add_option("--facet", facet, "ray indices of the facet to use")->delimiter(',');

    auto* inv_cmd = app.add_subcommand("invariants", "orbi-disk invariants of one basic class");
    inv_cmd->add_option("file", file, "fan file")->required();
    inv_cmd->add_option("--class", cls, "ray:<i> or box:<x>,<y>,...")->required();
    inv_cmd->add_option("--facet", facet, "ray indices of the facet to use")->delimiter(',');
    inv_cmd->add_option("--order", order, "weighted truncation order (rational)");
    inv_cmd->add_option("--format", format, "json, csv or markdown");
    inv_cmd->add_option("--convention", convention, "raw coefficients or ordered (times prod a!)")
        ->check(CLI::IsMember({"raw", "ordered"}));

    auto* pot_cmd = app.add_subcommand("potential", "the orbi-disk potential");
    pot_cmd->add_option("file", file, "fan file")->required();
    pot_cmd->add_option("--cone", cone, "normalization cone (index into max_cones)");
    pot_cmd->add_option("--order", order, "weighted truncation order (rational)");
    pot_cmd->add_option("--format", format, "json, csv or markdown");
    pot_cmd->add_option("--parallel", parallel, "solve facet charts concurrently");

    auto* verify_cmd = app.add_subcommand("verify-p2z3", "reproduce the P^2/Z_3 invariant table three ways");
    verify_cmd->add_option("--amax", amax, "largest power of tau_112")->check(CLI::Range(0L, 40L));
    verify_cmd->add_option("--bmax", bmax, "largest power of tau_122")->check(CLI::Range(0L, 40L));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? Exit::ok : Exit::parse;
    }

    try {
        if (*validate_cmd) {
            return cmd_validate(file);
        }
        if (*box_cmd) {
            return cmd_box(file, parse_format(format));
        }
        if (*sub_cmd) {
            return cmd_suborbifold(file, cls, facet);
        }
        if (*inv_cmd) {
            const auto fmt = parse_format(format);
            const auto f = load_fan_file(file);
            const auto beta = parse_class(cls, f.fan);
            const auto out = compute_invariants(f, beta, facet_option(f.fan, facet), parse_rational(order),
                                                convention == "raw" ? InvariantConvention::raw
                                                                    : InvariantConvention::ordered);
            std::cout << serialize_invariants(out, fmt);
            return Exit::ok;
        }
        if (*pot_cmd) {
            const auto fmt = parse_format(format);
            const auto f = load_fan_file(file);
            const auto c = cone ? *cone : f.normalization_cone.value_or(0);
            const auto seq = fan_sequence(f.fan, f.basis_p);
            std::cout << serialize_potential(assemble_potential(f.fan, c, parse_rational(order), parallel, seq), fmt);
            return Exit::ok;
        }
        if (*verify_cmd) {
            const auto report = verify_p2z3(amax, bmax);
            std::cout << render_report(report);
            return report.ok() ? Exit::ok : Exit::validation;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.kind()) {
        case ErrorKind::parse:
            return Exit::parse;
        case ErrorKind::validation_failure:
        case ErrorKind::not_complete:
            return Exit::validation;
        default:
            return Exit::computation;
        }
    }
    return Exit::computation;
}
