#pragma once

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "orlicz/error.hpp"
#include "orlicz/geometry.hpp"
#include "orlicz/grid.hpp"
#include "orlicz/log_concave.hpp"
#include "orlicz/measure.hpp"
#include "orlicz/prototype.hpp"
#include "orlicz/weight.hpp"

namespace orlicz::io {

using json = nlohmann::ordered_json;

inline std::string read_text(const std::filesystem::path& p) {
    std::ifstream in(p);
    require(in.good(), ErrorCode::Parse, "cannot open " + p.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text(const std::filesystem::path& p, const std::string& text) {
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p);
    require(out.good(), ErrorCode::Parse, "cannot write " + p.string());
    out << text;
}

inline json parse_json(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Parse, what + ": " + e.what());
    }
}

/// Shortest text that round-trips the double; "inf" for +infinity.
inline std::string format_number(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (std::isnan(x)) return "nan";
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

inline double parse_number(const std::string& tok) {
    std::string t;
    for (char c : tok)
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (t == "inf" || t == "+inf" || t == "Infinity") return kInf;
    try {
        std::size_t used = 0;
        const double v = std::stod(t, &used);
        require(used == t.size(), ErrorCode::Parse, "bad number '" + tok + "'");
        return v;
    } catch (const std::logic_error&) {
        throw Error(ErrorCode::Parse, "bad number '" + tok + "'");
    }
}

inline double number_or_inf(const json& j) {
    if (j.is_string()) return parse_number(j.get<std::string>());
    require(j.is_number(), ErrorCode::Parse, "expected a number");
    return j.get<double>();
}

// ---- weights -------------------------------------------------------------------------------

inline WeightFunction weight_from_json(const json& j, int dim) {
    require(j.contains("kind"), ErrorCode::Parse, "weight spec needs a kind");
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "constant") return WeightFunction::constant(dim);
    if (kind == "power") return WeightFunction::power(dim, j.value("q", 0.0));
    if (kind == "gaussian_density") return WeightFunction::gaussian_density(dim);
    if (kind == "stretched_exp") return WeightFunction::stretched_exp(dim, j.value("alpha", 0.5));
    throw Error(ErrorCode::Parse, "unknown weight kind '" + kind + "'");
}

/// "constant", "power:q=2", "stretched_exp:alpha=0.5", inline JSON text, or a path to a JSON file.
inline WeightFunction parse_weight(const std::string& spec, int dim) {
    if (!spec.empty() && spec.front() == '{') return weight_from_json(parse_json(spec, "weight spec"), dim);
    if (spec.size() > 5 && spec.substr(spec.size() - 5) == ".json")
        return weight_from_json(parse_json(read_text(spec), spec), dim);
    json j;
    const auto colon = spec.find(':');
    j["kind"] = spec.substr(0, colon);
    if (colon != std::string::npos) {
        std::stringstream rest(spec.substr(colon + 1));
        std::string kv;
        while (std::getline(rest, kv, ',')) {
            const auto eq = kv.find('=');
            require(eq != std::string::npos, ErrorCode::Parse, "weight parameter '" + kv + "' is not key=value");
            j[kv.substr(0, eq)] = parse_number(kv.substr(eq + 1));
        }
    }
    return weight_from_json(j, dim);
}

inline json weight_to_json(const WeightFunction& w) {
    json j;
    switch (w.kind()) {
    case WeightKind::Constant: j["kind"] = "constant"; break;
    case WeightKind::Power: j = {{"kind", "power"}, {"q", w.parameter()}}; break;
    case WeightKind::GaussianDensity: j["kind"] = "gaussian_density"; break;
    case WeightKind::StretchedExp: j = {{"kind", "stretched_exp"}, {"alpha", w.parameter()}}; break;
    case WeightKind::User: j = {{"kind", "user"}, {"name", w.name()}}; break;
    }
    return j;
}

// ---- bodies --------------------------------------------------------------------------------

inline Vec vec_from_json(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    require(j.is_array() && !j.empty() && j.size() <= 2, ErrorCode::Parse, "expected a point [x] or [x, y]");
    return {j[0].get<double>(), j.size() > 1 ? j[1].get<double>() : 0.0};
}

inline json vec_to_json(const Vec& v, int dim) {
    return dim == 1 ? json::array({v[0]}) : json::array({v[0], v[1]});
}

/// {"type": "interval", "lo", "hi"} | {"type": "box", "half_widths": [a, b]} |
/// {"type": "regular_polygon", "radius", "sides"} | {"type": "disc", "radius"} |
/// {"type": "polygon", "vertices": [[x, y], ...]}
inline ConvexBody body_from_json(const json& j) {
    const auto type = j.value("type", std::string("polygon"));
    if (type == "interval") return ConvexBody::interval(j.at("lo").get<double>(), j.at("hi").get<double>());
    if (type == "box") {
        const auto& h = j.at("half_widths");
        return ConvexBody::box(h.at(0).get<double>(), h.at(1).get<double>());
    }
    if (type == "regular_polygon")
        return ConvexBody::regular_polygon(j.at("radius").get<double>(), j.at("sides").get<int>(), j.value("phase", 0.0));
    if (type == "disc") return detail::disc_polygon(j.at("radius").get<double>(), j.value("sides", 512));
    if (type == "polygon") {
        std::vector<Vec> pts;
        for (const auto& p : j.at("vertices")) pts.push_back(vec_from_json(p));
        return ConvexBody::from_points(2, pts);
    }
    throw Error(ErrorCode::Parse, "unknown body type '" + type + "'");
}

inline json body_to_json(const ConvexBody& k) {
    json j;
    if (k.dim() == 1) {
        j["type"] = "interval";
        j["lo"] = k.lo();
        j["hi"] = k.hi();
        return j;
    }
    j["type"] = "polygon";
    j["vertices"] = json::array();
    for (const auto& v : k.vertices()) j["vertices"].push_back(vec_to_json(v, 2));
    return j;
}

inline ConvexBody parse_body(const std::string& spec) {
    if (!spec.empty() && spec.front() == '{') return body_from_json(parse_json(spec, "body spec"));
    return body_from_json(parse_json(read_text(spec), spec));
}

// ---- grids and grid data -------------------------------------------------------------------

inline Grid grid_from_json(const json& j) {
    return Grid(j.at("dim").get<int>(), j.at("R").get<double>(), j.at("m").get<int>());
}

inline json grid_to_json(const Grid& g) {
    return json{{"dim", g.dim()}, {"R", g.half_width(0)}, {"m", g.points(0)}};
}

/// "R,m" as used by --grid.
inline Grid parse_grid(const std::string& spec, int dim) {
    const auto comma = spec.find(',');
    require(comma != std::string::npos, ErrorCode::Parse, "grid override must read R,m");
    const double R = parse_number(spec.substr(0, comma));
    const double m = parse_number(spec.substr(comma + 1));
    require(m == std::floor(m), ErrorCode::Parse, "grid point count must be an integer");
    return Grid(dim, R, static_cast<int>(m));
}

/// Node values separated by commas or newlines, row-major, "inf" for masked nodes.
inline std::vector<double> parse_values_csv(const std::string& text) {
    std::vector<double> out;
    std::string tok;
    for (char c : text) {
        if (c == ',' || c == '\n' || c == '\r' || c == ';') {
            if (tok.find_first_not_of(" \t") != std::string::npos) out.push_back(parse_number(tok));
            tok.clear();
        } else {
            tok += c;
        }
    }
    if (tok.find_first_not_of(" \t") != std::string::npos) out.push_back(parse_number(tok));
    return out;
}

inline std::string values_to_csv(const SampledConvexFunction& f) {
    std::string out;
    const Grid& g = f.grid();
    for (int i0 = 0; i0 < g.points(0); ++i0) {
        for (int i1 = 0; i1 < g.points(1); ++i1) {
            if (i1) out += ',';
            out += format_number(f.value(i0, i1));
        }
        out += '\n';
    }
    return out;
}

// ---- functions -----------------------------------------------------------------------------

/// Function spec; relative "values_file" paths resolve against base_dir. A "restrict" body
/// may be attached to radial-power and max-affine kinds.
inline LogConcaveFunction function_from_json(const json& j, const std::filesystem::path& base_dir = {}) {
    require(j.contains("kind"), ErrorCode::Parse, "function spec needs a kind");
    const auto kind = j.at("kind").get<std::string>();
    const int dim = j.value("dim", j.contains("grid") ? j["grid"].value("dim", 1) : 1);
    std::optional<Prototype> p;
    if (kind == "exponential_cone") p = Prototype::exponential_cone(dim, j.value("t", 1.0));
    else if (kind == "gaussian") p = Prototype::gaussian(dim);
    else if (kind == "radial_power") p = Prototype::radial_power(dim, j.at("c").get<double>(), j.at("p").get<double>());
    else if (kind == "indicator") p = Prototype::indicator(body_from_json(j.at("body")));
    else if (kind == "scaled_indicator")
        p = Prototype::scaled_indicator(j.at("c").get<double>(), body_from_json(j.at("body")));
    else if (kind == "max_affine") {
        std::vector<Vec> slopes;
        for (const auto& s : j.at("slopes")) slopes.push_back(vec_from_json(s));
        p = Prototype::max_affine(dim, slopes, j.at("offsets").get<std::vector<double>>());
    } else if (kind == "grid") {
        const Grid g = grid_from_json(j.at("grid"));
        std::vector<double> values;
        if (j.contains("values")) {
            for (const auto& v : j["values"]) values.push_back(number_or_inf(v));
        } else {
            require(j.contains("values_file"), ErrorCode::Parse, "grid function needs values or values_file");
            auto path = std::filesystem::path(j["values_file"].get<std::string>());
            if (path.is_relative()) path = base_dir / path;
            values = parse_values_csv(read_text(path));
        }
        require(values.size() == g.size(), ErrorCode::Parse,
                "grid function has " + std::to_string(values.size()) + " values, expected " + std::to_string(g.size()));
        return LogConcaveFunction(SampledConvexFunction(g, std::move(values), Provenance::GridData, "file"));
    } else {
        throw Error(ErrorCode::Parse, "unknown function kind '" + kind + "'");
    }
    if (j.contains("restrict")) p = p->restricted_to(body_from_json(j["restrict"]));
    return LogConcaveFunction(*p);
}

inline LogConcaveFunction load_function(const std::string& path) {
    const std::filesystem::path p(path);
    return function_from_json(parse_json(read_text(p), path), p.parent_path());
}

/// Spec that reproduces f under function_from_json (grid values inline, "inf" as a string).
inline json function_to_json(const LogConcaveFunction& f) {
    json j;
    if (!f.is_prototype()) {
        const auto& s = f.sampled();
        j["kind"] = "grid";
        j["grid"] = grid_to_json(s.grid());
        j["values"] = json::array();
        for (std::size_t k = 0; k < s.values().size(); ++k) {
            if (s.finite(k)) j["values"].push_back(s.value(k));
            else j["values"].push_back("inf");
        }
        return j;
    }
    const auto& p = f.prototype();
    j["dim"] = p.dim();
    switch (p.kind()) {
    case PrototypeKind::RadialPower:
        j["kind"] = "radial_power";
        j["c"] = p.coefficient();
        j["p"] = p.exponent();
        break;
    case PrototypeKind::Indicator:
        j["kind"] = "scaled_indicator";
        j["c"] = p.scale();
        j["body"] = body_to_json(*p.body());
        return j;
    case PrototypeKind::MaxAffine:
        j["kind"] = "max_affine";
        j["slopes"] = json::array();
        for (const auto& s : p.slopes()) j["slopes"].push_back(vec_to_json(s, p.dim()));
        j["offsets"] = p.offsets();
        break;
    }
    if (p.body()) j["restrict"] = body_to_json(*p.body());
    return j;
}

// ---- measures ------------------------------------------------------------------------------

/// CSV with header mass,x1[,x2].
inline DiscreteMeasure parse_measure_csv(const std::string& text, Ambient ambient = Ambient::Euclidean) {
    std::stringstream in(text);
    std::string line;
    int dim = 0;
    std::vector<Atom> atoms;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos || line[0] == '#') continue;
        if (dim == 0) {
            require(line.rfind("mass", 0) == 0, ErrorCode::Parse, "measure CSV must start with a mass,x1[,x2] header");
            dim = static_cast<int>(std::count(line.begin(), line.end(), ','));
            require(dim == 1 || dim == 2, ErrorCode::Parse, "measure CSV header must be mass,x1 or mass,x1,x2");
            continue;
        }
        const auto vals = parse_values_csv(line);
        require(static_cast<int>(vals.size()) == dim + 1, ErrorCode::Parse, "measure row has the wrong column count");
        atoms.push_back({Vec{vals[1], dim == 2 ? vals[2] : 0.0}, vals[0]});
    }
    require(dim != 0, ErrorCode::Parse, "measure CSV has no header");
    return DiscreteMeasure(ambient, dim, std::move(atoms));
}

inline DiscreteMeasure load_measure(const std::string& path, Ambient ambient = Ambient::Euclidean) {
    return parse_measure_csv(read_text(path), ambient);
}

inline std::string measure_to_csv(const DiscreteMeasure& m) {
    std::string out = m.dim() == 1 ? "mass,x1\n" : "mass,x1,x2\n";
    for (const auto& a : m.atoms()) {
        out += format_number(a.mass) + "," + format_number(a.x[0]);
        if (m.dim() == 2) out += "," + format_number(a.x[1]);
        out += '\n';
    }
    return out;
}

inline json measure_to_json(const DiscreteMeasure& m) {
    json j;
    j["ambient"] = m.ambient() == Ambient::Euclidean ? "euclidean" : "sphere";
    j["dim"] = m.dim();
    j["total_mass"] = m.total_mass();
    j["atoms"] = json::array();
    for (const auto& a : m.atoms()) j["atoms"].push_back(json{{"x", vec_to_json(a.x, m.dim())}, {"mass", a.mass}});
    return j;
}

inline DiscreteMeasure measure_from_json(const json& j) {
    const Ambient amb = j.value("ambient", std::string("euclidean")) == "sphere" ? Ambient::Sphere : Ambient::Euclidean;
    std::vector<Atom> atoms;
    for (const auto& a : j.at("atoms")) atoms.push_back({vec_from_json(a.at("x")), a.at("mass").get<double>()});
    return DiscreteMeasure(amb, j.at("dim").get<int>(), std::move(atoms));
}

/// Flattens a JSON report into key,value rows (nested keys joined with '.').
inline std::string flatten_csv(const json& j) {
    std::string out = "key,value\n";
    auto rec = [&](auto&& self, const json& node, const std::string& prefix) -> void {
        if (node.is_object()) {
            for (auto it = node.begin(); it != node.end(); ++it)
                self(self, it.value(), prefix.empty() ? it.key() : prefix + "." + it.key());
        } else if (node.is_array()) {
            for (std::size_t i = 0; i < node.size(); ++i) self(self, node[i], prefix + "." + std::to_string(i));
        } else if (node.is_number_float()) {
            out += prefix + "," + format_number(node.get<double>()) + "\n";
        } else if (node.is_string()) {
            out += prefix + "," + node.get<std::string>() + "\n";
        } else {
            out += prefix + "," + node.dump() + "\n";
        }
    };
    rec(rec, j, "");
    return out;
}

} // namespace orlicz::io
