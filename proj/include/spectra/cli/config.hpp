// config.hpp — JSON run configuration, built-in figure presets and
// command-line overrides.
//
// Document layout (all keys optional except model/preset):
//   { "model": "four_level" | "five_level",
//     "preset": "fig2a" ... "fig4b",
//     "system": { <FourLevelSystem or FiveLevelSystem fields> },
//     "drive_sign": "closed_form" | "equations_of_motion",   (four-level)
//     "grid": { "min": 0, "max": 6, "points": 2000 },
//     "oracle_check": false, "oracle_tolerance": 1e-3, "dark_threshold": 1e-6,
//     "output": { "path": "out.csv", "format": "csv" | "json" } }
// Complex values are a number or a [re, im] pair. A preset supplies the
// model, system and grid; anything else in the document overrides it.

#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "spectra/errors.hpp"
#include "spectra/five_level.hpp"
#include "spectra/four_level.hpp"

namespace spectra::cli {

using nlohmann::json;

struct ConfigError : Error {
    using Error::Error;
};

struct ParseError : ConfigError {
    using ConfigError::ConfigError;
};

struct SchemaError : ConfigError {
    SchemaError(const std::string& what, std::string ptr) : ConfigError(what + " at " + ptr), pointer(std::move(ptr)) {}
    std::string pointer;  // JSON pointer of the offending value
};

struct IoError : Error {
    using Error::Error;
};

struct OracleMismatch : Error {
    OracleMismatch(const std::string& what, double dev) : Error(what), deviation(dev) {}
    double deviation;
};

enum class Model { four_level, five_level };
enum class Format { csv, json };

struct Grid {
    double min = 0.0;
    double max = 6.0;
    std::size_t points = 2000;

    std::vector<double> values() const {
        std::vector<double> v(points);
        const double h = (max - min) / static_cast<double>(points - 1);
        for (std::size_t i = 0; i < points; ++i) v[i] = min + h * static_cast<double>(i);
        v.back() = max;
        return v;
    }
};

struct OutputSpec {
    std::string path;  // empty: stdout
    Format format = Format::csv;
};

struct RunConfig {
    Model model = Model::four_level;
    std::string preset;  // empty when not built from a preset
    FourLevelSystem four;
    FiveLevelSystem five;
    DriveSign drive_sign = DriveSign::closed_form;
    Grid grid;
    bool oracle_check = false;
    double oracle_tolerance = 1e-3;
    double dark_threshold = 1e-6;
    OutputSpec output;
};

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

inline const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{"fig2a", "fig2b", "fig2c", "fig2d",
                                                "fig3a", "fig3b", "fig4a", "fig4b"};
    return names;
}

/// Model, system and grid of a named preset.
inline json preset_document(const std::string& name) {
    const double d = 1.0 / (2.0 * std::numbers::pi);
    static const std::map<std::string, double> fig2_rabi{{"fig2a", 0.5}, {"fig2b", 2.5}, {"fig2c", 3.0}, {"fig2d", 4.0}};
    if (auto it = fig2_rabi.find(name); it != fig2_rabi.end()) {
        // Ω in the caption is read as the bare Rabi frequency 2|g|.
        return {{"model", "four_level"},
                {"system",
                 {{"eps1", 2.5}, {"eps2", 3.0}, {"eps3", 0.0}, {"eps4", -0.5}, {"omega_laser", 1.0},
                  {"gamma1", 1.0}, {"gamma2", 1.0}, {"delta1", 0.0}, {"delta2", 0.0},
                  {"g", it->second / 2.0}, {"c1_0", 1.0}, {"c2_0", 0.0}, {"d31_sq", d}, {"d42_sq", d}}},
                {"grid", {{"min", 0.0}, {"max", 6.0}, {"points", 2000}}}};
    }
    static const std::map<std::string, std::pair<double, double>> fig34{
        {"fig3a", {1.0, 1.0}}, {"fig3b", {1.0, 0.0}}, {"fig4a", {5.0, 1.0}}, {"fig4b", {5.0, 0.0}}};
    if (auto it = fig34.find(name); it != fig34.end()) {
        const double c = 1.0 / std::sqrt(2.0);
        return {{"model", "five_level"},
                {"system",
                 {{"eps2", 8.0}, {"eps4", 8.0}, {"eps_f", 1.0}, {"nu1", 0.0}, {"nu2", 0.0},
                  {"v12", 1.0}, {"v34", 1.5}, {"delta2", 0.0}, {"delta4", 0.0},
                  {"gamma2", 1.0}, {"gamma4", 1.0}, {"q", it->second.first},
                  {"c1_0", c}, {"c3_0", c}, {"df2_sq", 1.0}, {"df4_sq", 1.0},
                  {"cos_theta", it->second.second}, {"independent_channels", false}}},
                {"grid", {{"min", 2.0}, {"max", 12.0}, {"points", 2000}}}};
    }
    throw SchemaError("unknown preset '" + name + "'", "/preset");
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace detail {

inline std::string child(const std::string& ptr, const std::string& key) { return ptr + "/" + key; }

inline void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& ptr) {
    if (!obj.is_object()) throw SchemaError("expected an object", ptr.empty() ? "/" : ptr);
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (auto a : allowed) ok = ok || it.key() == a;
        if (!ok) throw SchemaError("unknown key '" + it.key() + "'", child(ptr, it.key()));
    }
}

inline double number(const json& v, const std::string& ptr) {
    if (!v.is_number()) throw SchemaError("expected a number", ptr);
    return v.get<double>();
}

inline Complex complex_value(const json& v, const std::string& ptr) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return {v[0].get<double>(), v[1].get<double>()};
    throw SchemaError("expected a number or a [re, im] pair", ptr);
}

inline bool boolean(const json& v, const std::string& ptr) {
    if (!v.is_boolean()) throw SchemaError("expected a boolean", ptr);
    return v.get<bool>();
}

inline std::string string(const json& v, const std::string& ptr) {
    if (!v.is_string()) throw SchemaError("expected a string", ptr);
    return v.get<std::string>();
}

inline FourLevelSystem parse_four(const json& s, const std::string& ptr) {
    reject_unknown(s, {"eps1", "eps2", "eps3", "eps4", "omega_laser", "gamma1", "gamma2", "delta1", "delta2",
                       "g", "c1_0", "c2_0", "d31_sq", "d42_sq"},
                   ptr);
    FourLevelSystem f;
    const std::pair<const char*, double*> reals[] = {
        {"eps1", &f.eps1}, {"eps2", &f.eps2}, {"eps3", &f.eps3}, {"eps4", &f.eps4},
        {"omega_laser", &f.omega_laser}, {"gamma1", &f.gamma1}, {"gamma2", &f.gamma2},
        {"delta1", &f.delta1}, {"delta2", &f.delta2}, {"d31_sq", &f.d31_sq}, {"d42_sq", &f.d42_sq}};
    for (auto [key, dst] : reals)
        if (s.contains(key)) *dst = number(s[key], child(ptr, key));
    const std::pair<const char*, Complex*> complexes[] = {{"g", &f.g}, {"c1_0", &f.c1_0}, {"c2_0", &f.c2_0}};
    for (auto [key, dst] : complexes)
        if (s.contains(key)) *dst = complex_value(s[key], child(ptr, key));
    return f;
}

inline FiveLevelSystem parse_five(const json& s, const std::string& ptr) {
    reject_unknown(s, {"eps2", "eps4", "eps_f", "nu1", "nu2", "v12", "v34", "delta2", "delta4", "gamma2",
                       "gamma4", "q", "c1_0", "c3_0", "df2_sq", "df4_sq", "cos_theta", "independent_channels"},
                   ptr);
    FiveLevelSystem f;
    const std::pair<const char*, double*> reals[] = {
        {"eps2", &f.eps2}, {"eps4", &f.eps4}, {"eps_f", &f.eps_f}, {"nu1", &f.nu1}, {"nu2", &f.nu2},
        {"delta2", &f.delta2}, {"delta4", &f.delta4}, {"gamma2", &f.gamma2}, {"gamma4", &f.gamma4},
        {"q", &f.q}, {"df2_sq", &f.df2_sq}, {"df4_sq", &f.df4_sq}, {"cos_theta", &f.cos_theta}};
    for (auto [key, dst] : reals)
        if (s.contains(key)) *dst = number(s[key], child(ptr, key));
    const std::pair<const char*, Complex*> complexes[] = {
        {"v12", &f.v12}, {"v34", &f.v34}, {"c1_0", &f.c1_0}, {"c3_0", &f.c3_0}};
    for (auto [key, dst] : complexes)
        if (s.contains(key)) *dst = complex_value(s[key], child(ptr, key));
    if (s.contains("independent_channels"))
        f.independent_channels = boolean(s["independent_channels"], child(ptr, "independent_channels"));
    return f;
}

// Recursive merge: objects merge key by key, everything else replaces.
inline void merge_into(json& base, const json& over) {
    for (auto it = over.begin(); it != over.end(); ++it) {
        if (it.value().is_object() && base.contains(it.key()) && base[it.key()].is_object())
            merge_into(base[it.key()], it.value());
        else
            base[it.key()] = it.value();
    }
}

}  // namespace detail

/// Schema check, preset expansion and validation of a parsed document.
inline RunConfig parse_config(const json& doc) {
    detail::reject_unknown(doc, {"model", "preset", "system", "drive_sign", "grid", "oracle_check",
                                 "oracle_tolerance", "dark_threshold", "output"},
                           "");
    json resolved = json::object();
    RunConfig cfg;
    if (doc.contains("preset")) {
        cfg.preset = detail::string(doc["preset"], "/preset");
        resolved = preset_document(cfg.preset);
        if (doc.contains("model") && doc["model"] != resolved["model"])
            throw SchemaError("model does not match preset '" + cfg.preset + "'", "/model");
    }
    detail::merge_into(resolved, doc);

    if (!resolved.contains("model")) throw SchemaError("missing required key 'model' (or 'preset')", "/model");
    const std::string model = detail::string(resolved["model"], "/model");
    if (model == "four_level") cfg.model = Model::four_level;
    else if (model == "five_level") cfg.model = Model::five_level;
    else throw SchemaError("model must be 'four_level' or 'five_level'", "/model");

    const json system = resolved.contains("system") ? resolved["system"] : json::object();
    if (cfg.model == Model::four_level) cfg.four = detail::parse_four(system, "/system");
    else cfg.five = detail::parse_five(system, "/system");

    if (resolved.contains("drive_sign")) {
        if (cfg.model != Model::four_level)
            throw SchemaError("drive_sign applies to the four-level model only", "/drive_sign");
        const std::string s = detail::string(resolved["drive_sign"], "/drive_sign");
        if (s == "closed_form") cfg.drive_sign = DriveSign::closed_form;
        else if (s == "equations_of_motion") cfg.drive_sign = DriveSign::equations_of_motion;
        else throw SchemaError("drive_sign must be 'closed_form' or 'equations_of_motion'", "/drive_sign");
    }

    if (cfg.model == Model::five_level) cfg.grid = {2.0, 12.0, 2000};
    if (resolved.contains("grid")) {
        const json& g = resolved["grid"];
        detail::reject_unknown(g, {"min", "max", "points"}, "/grid");
        if (g.contains("min")) cfg.grid.min = detail::number(g["min"], "/grid/min");
        if (g.contains("max")) cfg.grid.max = detail::number(g["max"], "/grid/max");
        if (g.contains("points")) {
            if (!g["points"].is_number_integer()) throw SchemaError("expected an integer", "/grid/points");
            const auto p = g["points"].get<long long>();
            if (p < 2) throw ValidationError("grid.points must be >= 2");
            cfg.grid.points = static_cast<std::size_t>(p);
        }
    }
    if (resolved.contains("oracle_check")) cfg.oracle_check = detail::boolean(resolved["oracle_check"], "/oracle_check");
    if (resolved.contains("oracle_tolerance"))
        cfg.oracle_tolerance = detail::number(resolved["oracle_tolerance"], "/oracle_tolerance");
    if (resolved.contains("dark_threshold"))
        cfg.dark_threshold = detail::number(resolved["dark_threshold"], "/dark_threshold");
    if (resolved.contains("output")) {
        const json& o = resolved["output"];
        detail::reject_unknown(o, {"path", "format"}, "/output");
        if (o.contains("path")) cfg.output.path = detail::string(o["path"], "/output/path");
        if (o.contains("format")) {
            const std::string f = detail::string(o["format"], "/output/format");
            if (f == "csv") cfg.output.format = Format::csv;
            else if (f == "json") cfg.output.format = Format::json;
            else throw SchemaError("format must be 'csv' or 'json'", "/output/format");
        }
    }

    if (!std::isfinite(cfg.grid.min) || !std::isfinite(cfg.grid.max) || !(cfg.grid.min < cfg.grid.max))
        throw ValidationError("grid.min < grid.max violated");
    if (!(cfg.oracle_tolerance > 0.0)) throw ValidationError("oracle_tolerance must be > 0");
    if (!(cfg.dark_threshold >= 0.0)) throw ValidationError("dark_threshold must be >= 0");
    if (cfg.model == Model::four_level) cfg.four.validate();
    else cfg.five.validate();
    return cfg;
}

inline RunConfig parse_config_text(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    return parse_config(doc);
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

/// Applies `key=value` to a config document. The value is parsed as JSON
/// (falling back to a plain string); dotted keys address nested objects and
/// a bare key that is not a top-level setting addresses "system".
inline void apply_override(json& doc, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0)
        throw SchemaError("override must have the form key=value", "/" + std::string(assignment));
    const std::string key(assignment.substr(0, eq));
    const std::string text(assignment.substr(eq + 1));
    json value;
    try {
        value = json::parse(text);
    } catch (const json::parse_error&) {
        value = text;
    }

    std::vector<std::string> path;
    std::stringstream ks(key);
    for (std::string part; std::getline(ks, part, '.');) path.push_back(part);
    static const std::vector<std::string> top{"model", "preset", "system", "drive_sign", "grid",
                                              "oracle_check", "oracle_tolerance", "dark_threshold", "output"};
    if (path.size() == 1 && std::find(top.begin(), top.end(), path[0]) == top.end())
        path.insert(path.begin(), "system");

    json* node = &doc;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        if (!node->contains(path[i])) (*node)[path[i]] = json::object();
        node = &(*node)[path[i]];
        if (!node->is_object()) throw SchemaError("cannot descend into non-object", "/" + path[i]);
    }
    (*node)[path.back()] = value;
}

// ---------------------------------------------------------------------------
// Serialization of the resolved configuration
// ---------------------------------------------------------------------------

inline json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline json to_json(const FourLevelSystem& s) {
    return {{"eps1", s.eps1}, {"eps2", s.eps2}, {"eps3", s.eps3}, {"eps4", s.eps4},
            {"omega_laser", s.omega_laser}, {"gamma1", s.gamma1}, {"gamma2", s.gamma2},
            {"delta1", s.delta1}, {"delta2", s.delta2}, {"g", complex_json(s.g)},
            {"c1_0", complex_json(s.c1_0)}, {"c2_0", complex_json(s.c2_0)},
            {"d31_sq", s.d31_sq}, {"d42_sq", s.d42_sq}};
}

inline json to_json(const FiveLevelSystem& s) {
    return {{"eps2", s.eps2}, {"eps4", s.eps4}, {"eps_f", s.eps_f}, {"nu1", s.nu1}, {"nu2", s.nu2},
            {"v12", complex_json(s.v12)}, {"v34", complex_json(s.v34)},
            {"delta2", s.delta2}, {"delta4", s.delta4}, {"gamma2", s.gamma2}, {"gamma4", s.gamma4},
            {"q", s.q}, {"c1_0", complex_json(s.c1_0)}, {"c3_0", complex_json(s.c3_0)},
            {"df2_sq", s.df2_sq}, {"df4_sq", s.df4_sq}, {"cos_theta", s.cos_theta},
            {"independent_channels", s.independent_channels}};
}

inline json to_json(const RunConfig& c) {
    json j;
    j["model"] = c.model == Model::four_level ? "four_level" : "five_level";
    if (!c.preset.empty()) j["preset"] = c.preset;
    if (c.model == Model::four_level) {
        j["system"] = to_json(c.four);
        j["drive_sign"] = c.drive_sign == DriveSign::closed_form ? "closed_form" : "equations_of_motion";
    } else {
        j["system"] = to_json(c.five);
    }
    j["grid"] = {{"min", c.grid.min}, {"max", c.grid.max}, {"points", c.grid.points}};
    j["oracle_check"] = c.oracle_check;
    j["oracle_tolerance"] = c.oracle_tolerance;
    j["dark_threshold"] = c.dark_threshold;
    j["output"] = {{"path", c.output.path}, {"format", c.output.format == Format::csv ? "csv" : "json"}};
    return j;
}

}  // namespace spectra::cli
