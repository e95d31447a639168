// oracle.hpp — time-domain check of the closed forms: integrate the
// effective amplitude equations, rebuild photon amplitudes by quadrature
// and account for where the probability went.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <vector>

#include "spectra/errors.hpp"
#include "spectra/five_level.hpp"
#include "spectra/four_level.hpp"
#include "spectra/numerics.hpp"

namespace spectra {

struct OracleOptions {
    double tail_fraction = defaults::tail_fraction;
    double ode_tolerance = defaults::ode_tolerance;
    double step_scale = 0.04;      // dt · ‖generator‖∞
    double initial_horizon = 60.0;  // in units of 1/min(Γ > 0)
    double growth = 1.5;
    double horizon_cap = 4e4;
};

// ---------------------------------------------------------------------------
// Trajectories
// ---------------------------------------------------------------------------

/// State (C₁, D₂) with C₂ = e^{iνt}·D₂; generator from effective_generator.
inline AmplitudeTrajectory evolve_four(const FourLevelSystem& sys, double t_max, std::size_t n_steps,
                                       double ode_tolerance = defaults::ode_tolerance) {
    const Complex y0[2] = {sys.c1_0, sys.c2_0};
    return integrate_linear_ode(effective_generator(sys), y0, t_max, n_steps, ode_tolerance);
}

/// State (C₁e^{iν₁t}, C₂, C₃e^{i(ν₂+s)t}, C₄e^{ist}), evolving as y' = iM·y.
inline AmplitudeTrajectory evolve_five(const FiveLevelSystem& sys, double t_max, std::size_t n_steps,
                                       double ode_tolerance = defaults::ode_tolerance) {
    const Complex y0[4] = {sys.c1_0, 0.0, sys.c3_0, 0.0};
    return integrate_linear_ode(Complex{0.0, 1.0} * effective_generator(sys), y0, t_max, n_steps, ode_tolerance);
}

namespace detail {

inline bool components_decayed(const AmplitudeTrajectory& traj, std::span<const std::size_t> emitting, double tail) {
    for (std::size_t k : emitting) {
        double peak = 0.0;
        for (std::size_t i = 0; i < traj.size(); ++i) peak = std::max(peak, std::abs(traj.state(i)[k]));
        if (peak > 0.0 && std::abs(traj.back()[k]) > 0.5 * tail * peak) return false;
    }
    return true;
}

// Integrates with dt = step_scale/‖G‖∞, extending the horizon by `growth`
// until every emitting component has decayed or the cap is reached.
inline AmplitudeTrajectory evolve_until_decayed(const Matrix& gen, std::span<const Complex> y0, double min_gamma,
                                                std::span<const std::size_t> emitting, const OracleOptions& opt) {
    const double dt = opt.step_scale / std::max(gen.norm_inf(), 1e-12);
    double horizon = std::min(opt.initial_horizon / min_gamma, opt.horizon_cap);
    auto steps = static_cast<std::size_t>(std::max(10.0, std::ceil(horizon / dt)));
    AmplitudeTrajectory traj = integrate_linear_ode(gen, y0, static_cast<double>(steps) * dt, steps, opt.ode_tolerance);
    traj.dt = dt;
    while (!components_decayed(traj, emitting, opt.tail_fraction) && traj.t_max() < opt.horizon_cap) {
        const double extra = std::min((opt.growth - 1.0) * traj.t_max(), opt.horizon_cap - traj.t_max());
        const auto more = static_cast<std::size_t>(std::max(10.0, std::ceil(extra / dt)));
        const std::vector<Complex> last(traj.back().begin(), traj.back().end());
        AmplitudeTrajectory next = integrate_linear_ode(gen, last, static_cast<double>(more) * dt, more, opt.ode_tolerance);
        next.dt = dt;
        traj.append(next);
    }
    return traj;
}

}  // namespace detail

/// Horizon chosen automatically (see OracleOptions).
inline AmplitudeTrajectory evolve_four(const FourLevelSystem& sys, const OracleOptions& opt = {}) {
    const Complex y0[2] = {sys.c1_0, sys.c2_0};
    std::vector<std::size_t> emitting;
    double min_gamma = std::numeric_limits<double>::infinity();
    const double gammas[2] = {sys.gamma1, sys.gamma2};
    for (std::size_t k = 0; k < 2; ++k) {
        if (!(gammas[k] > 0.0)) continue;
        emitting.push_back(k);
        min_gamma = std::min(min_gamma, gammas[k]);
    }
    if (emitting.empty()) throw ValidationError("evolve_four: no decaying level");
    return detail::evolve_until_decayed(effective_generator(sys), y0, min_gamma, emitting, opt);
}

inline AmplitudeTrajectory evolve_five(const FiveLevelSystem& sys, const OracleOptions& opt = {}) {
    if (!(sys.gamma2 > 0.0) || !(sys.gamma4 > 0.0)) throw ValidationError("evolve_five: gamma2, gamma4 must be > 0");
    const Complex y0[4] = {sys.c1_0, 0.0, sys.c3_0, 0.0};
    const std::size_t emitting[2] = {1, 3};
    return detail::evolve_until_decayed(Complex{0.0, 1.0} * effective_generator(sys), y0,
                                        std::min(sys.gamma2, sys.gamma4), emitting, opt);
}

/// (C₁, C₂) at stored index i, undoing the rotating frame of evolve_four.
inline LevelAmplitudes four_level_state(const FourLevelSystem& sys, const AmplitudeTrajectory& traj, std::size_t i) {
    const auto y = traj.state(i);
    return {y[0], std::polar(1.0, sys.nu() * traj.time(i)) * y[1]};
}

// ---------------------------------------------------------------------------
// Spectra from trajectories
// ---------------------------------------------------------------------------

/// Asymptotic photon amplitudes −i·√d·∫ e^{−iν_k t} C(t) dt on a grid.
inline std::vector<Complex> oracle_photon_amplitudes(const AmplitudeTrajectory& traj, const FourLevelSystem& sys,
                                                     Channel channel, std::span<const double> grid,
                                                     double tail_fraction = defaults::tail_fraction) {
    const bool one = channel == Channel::one_three;
    const double weight = std::sqrt(one ? sys.d31_sq : sys.d42_sq);
    std::vector<Complex> out(grid.size());
    if (weight == 0.0) return out;
    std::vector<double> phases(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        phases[i] = one ? -sys.nu1k(grid[i]) : sys.nu() - sys.nu2k(grid[i]);
    const auto samples = traj.component(one ? 0 : 1);
    const auto q = time_quadrature(samples, traj.dt, phases, tail_fraction);
    for (std::size_t i = 0; i < grid.size(); ++i) out[i] = Complex{0.0, -weight} * q[i].value;
    return out;
}

struct FourLevelOracleSpectrum {
    std::vector<double> omega_k;
    std::vector<Complex> amp13, amp24;
    std::vector<double> s_ch13, s_ch24, s_total;
};

inline FourLevelOracleSpectrum oracle_spectrum(const AmplitudeTrajectory& traj, const FourLevelSystem& sys,
                                               std::span<const double> grid,
                                               double tail_fraction = defaults::tail_fraction) {
    FourLevelOracleSpectrum out;
    out.omega_k.assign(grid.begin(), grid.end());
    out.amp13 = oracle_photon_amplitudes(traj, sys, Channel::one_three, grid, tail_fraction);
    out.amp24 = oracle_photon_amplitudes(traj, sys, Channel::two_four, grid, tail_fraction);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out.s_ch13.push_back(std::norm(out.amp13[i]));
        out.s_ch24.push_back(std::norm(out.amp24[i]));
        out.s_total.push_back(out.s_ch13.back() + out.s_ch24.back());
    }
    return out;
}

struct FiveLevelOracleSpectrum {
    std::vector<double> omega_k;
    std::vector<Complex> a_2f, b_4f;
    std::vector<SpectrumDecomposition> rows;  // recombined exactly as spectrum_five
};

inline FiveLevelOracleSpectrum oracle_spectrum(const AmplitudeTrajectory& traj, const FiveLevelSystem& sys,
                                               std::span<const double> grid,
                                               double tail_fraction = defaults::tail_fraction) {
    FiveLevelOracleSpectrum out;
    out.omega_k.assign(grid.begin(), grid.end());
    std::vector<double> phases(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) phases[i] = -(sys.eps2 - sys.eps_f - grid[i]);
    const auto qa = time_quadrature(traj.component(1), traj.dt, phases, tail_fraction);
    const auto qb = time_quadrature(traj.component(3), traj.dt, phases, tail_fraction);
    const Complex mi{0.0, -1.0};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out.a_2f.push_back(mi * qa[i].value);
        out.b_4f.push_back(mi * qb[i].value);
        out.rows.push_back(recombine(sys, grid[i], out.a_2f.back(), out.b_4f.back()));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Probability bookkeeping
// ---------------------------------------------------------------------------

struct ConservationReport {
    double survival_probability = 0.0;
    double decayed_probability = 0.0;
    double spectral_integral = 0.0;
    double defect = 0.0;
};

/// ∫ y†(−G − G†)y dt, the probability lost under y' = G·y.
inline double decayed_probability(const AmplitudeTrajectory& traj, const Matrix& generator,
                                  double tail_fraction = defaults::tail_fraction) {
    const std::size_t n = traj.dimension;
    Matrix loss(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) loss(i, j) = -(generator(i, j) + std::conj(generator(j, i)));
    std::vector<Complex> rate(traj.size());
    std::vector<Complex> ly(n);
    for (std::size_t t = 0; t < traj.size(); ++t) {
        const auto y = traj.state(t);
        loss.apply(y.data(), ly.data());
        Complex acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += std::conj(y[i]) * ly[i];
        rate[t] = acc.real();
    }
    return time_quadrature(rate, traj.dt, 0.0, tail_fraction).value.real();
}

/// Trapezoid integral of a sampled density over its (possibly non-uniform) grid.
inline double spectral_integral(std::span<const double> omega, std::span<const double> density) {
    if (omega.size() != density.size()) throw ValidationError("spectral_integral: grid and density sizes differ");
    double acc = 0.0;
    for (std::size_t i = 1; i < omega.size(); ++i)
        acc += 0.5 * (omega[i] - omega[i - 1]) * (density[i] + density[i - 1]);
    return acc;
}

/// Four-level: nothing survives, so decayed and spectral totals are both
/// compared to 1. Pass an empty density to skip the spectral check.
inline ConservationReport conservation_report(const FourLevelSystem& sys, const AmplitudeTrajectory& traj,
                                              std::span<const double> omega, std::span<const double> density) {
    ConservationReport r;
    r.decayed_probability = decayed_probability(traj, effective_generator(sys));
    r.defect = std::abs(r.decayed_probability - 1.0);
    if (!density.empty()) {
        r.spectral_integral = spectral_integral(omega, density);
        r.defect = std::max({r.defect, std::abs(r.spectral_integral - 1.0),
                             std::abs(r.spectral_integral - r.decayed_probability)});
    }
    return r;
}

/// Five-level: survival is |C₁(∞)|² + |C₃(∞)|² at the end of the
/// trajectory; survival + decayed (and survival + spectral, if given) are
/// compared to 1.
inline ConservationReport conservation_report(const FiveLevelSystem& sys, const AmplitudeTrajectory& traj,
                                              std::span<const double> omega, std::span<const double> density) {
    ConservationReport r;
    const auto end = traj.back();
    r.survival_probability = std::norm(end[0]) + std::norm(end[2]);
    r.decayed_probability = decayed_probability(traj, Complex{0.0, 1.0} * effective_generator(sys));
    r.defect = std::abs(r.survival_probability + r.decayed_probability - 1.0);
    if (!density.empty()) {
        r.spectral_integral = spectral_integral(omega, density);
        r.defect = std::max(r.defect, std::abs(r.survival_probability + r.spectral_integral - 1.0));
    }
    return r;
}

}  // namespace spectra
