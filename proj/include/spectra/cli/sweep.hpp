// sweep.hpp — evaluate a configured spectrum on its grid, locate extrema
// and optionally compare against the time-domain oracle.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spectra/cli/config.hpp"
#include "spectra/five_level.hpp"
#include "spectra/four_level.hpp"
#include "spectra/oracle.hpp"

namespace spectra::cli {

struct SweepRow {
    double omega_k = 0.0;
    double s_total = 0.0;
    double s_ch_a = 0.0;  // 1→3 (four-level) or 2→f (five-level)
    double s_ch_b = 0.0;  // 2→4 (four-level) or 4→f (five-level)
    double s_interference = 0.0;
    double intensity = 0.0;
    std::optional<double> oracle_s_total;  // oracle value times the fitted constant
};

struct Extremum {
    double omega_k;
    double s_total;
};

struct PeakReport {
    std::vector<Extremum> local_maxima;
    std::vector<Extremum> minima;
    std::vector<double> dark_line_candidates;
    double min_ratio = 0.0;  // min s_total / max s_total over the grid
};

struct SweepResult {
    std::vector<SweepRow> rows;
    PeakReport peaks;
    std::optional<double> oracle_max_deviation;
    std::optional<double> oracle_scale;
    bool oracle_ok = true;
    std::vector<Complex> pole_bound_violations;
};

/// Strict interior extrema and points below dark_threshold × max.
inline PeakReport find_peaks(std::span<const double> omega, std::span<const double> s, double dark_threshold) {
    PeakReport r;
    if (s.empty()) return r;
    const double hi = *std::max_element(s.begin(), s.end());
    const double lo = *std::min_element(s.begin(), s.end());
    r.min_ratio = hi > 0.0 ? lo / hi : 0.0;
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
        if (s[i] > s[i - 1] && s[i] > s[i + 1]) r.local_maxima.push_back({omega[i], s[i]});
        if (s[i] < s[i - 1] && s[i] < s[i + 1]) r.minima.push_back({omega[i], s[i]});
    }
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s[i] < dark_threshold * hi) r.dark_line_candidates.push_back(omega[i]);
    return r;
}

/// Fits c minimizing Σ(c·o − s)², then returns max |c·o_i − s_i| / max(|s_i|, 1e-6·max|s|).
inline double normalized_deviation(std::span<const double> closed, std::span<const double> oracle,
                                   double* scale_out = nullptr) {
    double so = 0.0, oo = 0.0, peak = 0.0;
    for (std::size_t i = 0; i < closed.size(); ++i) {
        so += closed[i] * oracle[i];
        oo += oracle[i] * oracle[i];
        peak = std::max(peak, std::abs(closed[i]));
    }
    const double c = oo > 0.0 ? so / oo : 1.0;
    if (scale_out) *scale_out = c;
    double worst = 0.0;
    for (std::size_t i = 0; i < closed.size(); ++i) {
        const double diff = std::abs(c * oracle[i] - closed[i]);
        const double denom = std::max(std::abs(closed[i]), 1e-6 * peak);
        const double dev = denom > 0.0 ? diff / denom : (diff > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
        worst = std::max(worst, dev);
    }
    return worst;
}

inline SweepResult run_sweep(const RunConfig& cfg) {
    SweepResult out;
    const std::vector<double> grid = cfg.grid.values();
    out.rows.resize(grid.size());
    std::vector<double> closed(grid.size());

    if (cfg.model == Model::four_level) {
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const SpectrumSample s = spectrum_four(cfg.four, grid[i], cfg.drive_sign);
            out.rows[i] = {s.omega_k, s.s_total, s.s_ch13, s.s_ch24, 0.0, s.intensity, std::nullopt};
            closed[i] = s.s_total;
        }
    } else {
        const FiveLevelSpectrum spectrum(cfg.five);
        out.pole_bound_violations = spectrum.pole_bound_violations();
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const SpectrumDecomposition d = spectrum(grid[i]);
            out.rows[i] = {d.omega_k, d.s_total, d.s_ch2f, d.s_ch4f, d.s_int, d.intensity, std::nullopt};
            closed[i] = d.s_total;
        }
    }
    out.peaks = find_peaks(grid, closed, cfg.dark_threshold);

    if (cfg.oracle_check) {
        std::vector<double> oracle(grid.size());
        if (cfg.model == Model::four_level) {
            const auto o = oracle_spectrum(evolve_four(cfg.four), cfg.four, grid);
            oracle = o.s_total;
        } else {
            const auto o = oracle_spectrum(evolve_five(cfg.five), cfg.five, grid);
            for (std::size_t i = 0; i < grid.size(); ++i) oracle[i] = o.rows[i].s_total;
        }
        double c = 1.0;
        out.oracle_max_deviation = normalized_deviation(closed, oracle, &c);
        out.oracle_scale = c;
        for (std::size_t i = 0; i < grid.size(); ++i) out.rows[i].oracle_s_total = c * oracle[i];
        out.oracle_ok = *out.oracle_max_deviation <= cfg.oracle_tolerance;
    }
    return out;
}

/// Throws OracleMismatch when an oracle comparison ran and failed.
inline void require_oracle_agreement(const SweepResult& r, double tolerance) {
    if (r.oracle_max_deviation && *r.oracle_max_deviation > tolerance)
        throw OracleMismatch("oracle deviation " + std::to_string(*r.oracle_max_deviation) + " exceeds tolerance " +
                                 std::to_string(tolerance),
                             *r.oracle_max_deviation);
}

}  // namespace spectra::cli
