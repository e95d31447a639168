// emit.hpp — CSV / JSON serialization of sweep results.

#pragma once

#include <cstdio>
#include <fstream>
#include <iostream>
#include <ostream>
#include <string>

#include "spectra/cli/config.hpp"
#include "spectra/cli/sweep.hpp"

namespace spectra::cli {

inline constexpr const char* csv_header = "omega_k,s_total,s_ch_a,s_ch_b,s_interference,intensity,oracle_s_total";

/// 17 significant digits, enough to round-trip any double.
inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_csv(std::ostream& os, const SweepResult& r) {
    os << csv_header << '\n';
    for (const auto& row : r.rows) {
        os << format_number(row.omega_k) << ',' << format_number(row.s_total) << ',' << format_number(row.s_ch_a)
           << ',' << format_number(row.s_ch_b) << ',' << format_number(row.s_interference) << ','
           << format_number(row.intensity) << ',';
        if (row.oracle_s_total) os << format_number(*row.oracle_s_total);
        os << '\n';
    }
}

inline json to_json(const SweepResult& r, const RunConfig& cfg) {
    json cols = {{"omega_k", json::array()}, {"s_total", json::array()}, {"s_ch_a", json::array()},
                 {"s_ch_b", json::array()}, {"s_interference", json::array()}, {"intensity", json::array()},
                 {"oracle_s_total", json::array()}};
    for (const auto& row : r.rows) {
        cols["omega_k"].push_back(row.omega_k);
        cols["s_total"].push_back(row.s_total);
        cols["s_ch_a"].push_back(row.s_ch_a);
        cols["s_ch_b"].push_back(row.s_ch_b);
        cols["s_interference"].push_back(row.s_interference);
        cols["intensity"].push_back(row.intensity);
        cols["oracle_s_total"].push_back(row.oracle_s_total ? json(*row.oracle_s_total) : json(nullptr));
    }
    auto extrema = [](const std::vector<Extremum>& v) {
        json a = json::array();
        for (const auto& e : v) a.push_back({{"omega_k", e.omega_k}, {"s_total", e.s_total}});
        return a;
    };
    json violations = json::array();
    for (const auto& z : r.pole_bound_violations) violations.push_back(complex_json(z));
    json summary = {{"local_maxima", extrema(r.peaks.local_maxima)},
                    {"minima", extrema(r.peaks.minima)},
                    {"dark_line_candidates", r.peaks.dark_line_candidates},
                    {"min_ratio", r.peaks.min_ratio},
                    {"pole_bound_violations", violations},
                    {"oracle_max_deviation", r.oracle_max_deviation ? json(*r.oracle_max_deviation) : json(nullptr)},
                    {"oracle_scale", r.oracle_scale ? json(*r.oracle_scale) : json(nullptr)},
                    {"oracle_ok", r.oracle_ok}};
    return {{"columns", cols}, {"metadata", to_json(cfg)}, {"summary", summary}};
}

inline void write(std::ostream& os, const SweepResult& r, const RunConfig& cfg, Format format) {
    if (format == Format::csv) write_csv(os, r);
    else os << to_json(r, cfg).dump(2) << '\n';
}

/// Writes to `path`, or to stdout when the path is empty or "-".
inline void emit(const SweepResult& r, const RunConfig& cfg, Format format, const std::string& path) {
    if (path.empty() || path == "-") {
        write(std::cout, r, cfg, format);
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    write(out, r, cfg, format);
    if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace spectra::cli
