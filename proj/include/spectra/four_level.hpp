// four_level.hpp — driven four-level atom: dressed amplitudes, photon
// amplitudes, emission spectrum and dark-line analysis.
//
// Units: ħ = 1, all energies and rates in units of a reference width Γ.
// The drive enters only through the effective coupling g = √n·β.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "spectra/errors.hpp"
#include "spectra/numerics.hpp"

namespace spectra {

enum class Channel { one_three, two_four };

/// Sign of the g*·C1 drive term feeding level 2.
///
/// `closed_form` follows the printed dressed-state solution and spectrum.
/// `equations_of_motion` is the sign produced by integrating the amplitude
/// equations directly (what the oracle integrates). They agree whenever
/// c1_0·c2_0 = 0.
enum class DriveSign { closed_form, equations_of_motion };

struct FourLevelConvention {
    DriveSign sign = DriveSign::closed_form;
    bool negate_rabi = false;  // use −Ω instead of the principal root
};

struct FourLevelSystem {
    double eps1 = 0.0, eps2 = 0.0, eps3 = 0.0, eps4 = 0.0;
    double omega_laser = 0.0;
    double gamma1 = 1.0, gamma2 = 1.0;
    double delta1 = 0.0, delta2 = 0.0;
    Complex g{0.0};
    Complex c1_0{1.0}, c2_0{0.0};
    double d31_sq = 1.0 / (2.0 * std::numbers::pi);
    double d42_sq = 1.0 / (2.0 * std::numbers::pi);

    double nu() const { return eps2 - eps1 - omega_laser; }
    double nu1k(double omega_k) const { return eps1 - eps3 - omega_k; }
    double nu2k(double omega_k) const { return eps2 - eps4 - omega_k; }

    void validate() const {
        const double vals[] = {eps1, eps2, eps3, eps4, omega_laser, gamma1, gamma2, delta1, delta2,
                               g.real(), g.imag(), c1_0.real(), c1_0.imag(), c2_0.real(), c2_0.imag(),
                               d31_sq, d42_sq};
        for (double v : vals)
            if (!std::isfinite(v)) throw ValidationError("four-level parameters must be finite");
        if (gamma1 < 0.0 || gamma2 < 0.0) throw ValidationError("widths gamma1, gamma2 must be >= 0");
        if (!(gamma1 + gamma2 > 0.0)) throw ValidationError("gamma1 + gamma2 must be > 0");
        if (d31_sq < 0.0 || d42_sq < 0.0) throw ValidationError("dipole weights d31_sq, d42_sq must be >= 0");
        const double norm = std::norm(c1_0) + std::norm(c2_0);
        if (std::abs(norm - 1.0) > 1e-12)
            throw ValidationError("normalization |c1_0|^2 + |c2_0|^2 = 1 violated (got " + std::to_string(norm) + ")");
    }
};

namespace detail {

inline double sigma(DriveSign s) { return s == DriveSign::closed_form ? 1.0 : -1.0; }

// sin(z)/z
inline Complex sinc(Complex z) {
    if (std::abs(z) < 1e-3) {
        const Complex z2 = z * z;
        return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
    }
    return std::sin(z) / z;
}

// ν − Δ₁ + Δ₂ + (i/2)(Γ₁ − Γ₂)
inline Complex rabi_detuning(const FourLevelSystem& s) {
    return {s.nu() - s.delta1 + s.delta2, 0.5 * (s.gamma1 - s.gamma2)};
}

inline Complex rabi_for(const FourLevelSystem& s, const FourLevelConvention& conv);

}  // namespace detail

/// Ω = sqrt[(ν − Δ₁ + Δ₂ + (i/2)(Γ₁ − Γ₂))² + 4|g|²], principal branch.
inline Complex complex_rabi(const FourLevelSystem& sys) {
    const Complex x = detail::rabi_detuning(sys);
    return std::sqrt(x * x + 4.0 * std::norm(sys.g));
}

inline Complex detail::rabi_for(const FourLevelSystem& s, const FourLevelConvention& conv) {
    const Complex om = complex_rabi(s);
    return conv.negate_rabi ? -om : om;
}

/// Rotating-frame generator for (C₁, D₂) with C₂ = e^{iνt}·D₂; y' = G·y.
inline Matrix effective_generator(const FourLevelSystem& sys) {
    const Complex i{0.0, 1.0};
    return Matrix{{-(0.5 * sys.gamma1 + i * sys.delta1), -i * sys.g},
                  {-i * std::conj(sys.g), -(0.5 * sys.gamma2 + i * (sys.delta2 + sys.nu()))}};
}

struct LevelAmplitudes {
    Complex c1, c2;
};

/// Dressed amplitudes (C₁(t), C₂(t)). sin(Ωt/2)/Ω is evaluated as
/// (t/2)·sinc(Ωt/2), which also covers the Ω → 0 limit.
inline LevelAmplitudes amplitude_at(const FourLevelSystem& sys, double t, FourLevelConvention conv = {}) {
    if (!(t >= 0.0)) throw ValidationError("amplitude_at: t must be >= 0");
    const Complex i{0.0, 1.0};
    const Complex om = detail::rabi_for(sys, conv);
    const Complex x = detail::rabi_detuning(sys);
    const Complex half = 0.5 * om * t;
    const Complex c = std::cos(half);
    const Complex s = 0.5 * t * detail::sinc(half);
    const double decay = -0.25 * (sys.gamma1 + sys.gamma2) * t;
    const Complex e1 = std::exp(Complex{decay, -0.5 * (sys.nu() + sys.delta1 + sys.delta2) * t});
    const Complex e2 = std::exp(Complex{decay, 0.5 * (sys.nu() - sys.delta1 - sys.delta2) * t});
    const double sg = detail::sigma(conv.sign);
    return {e1 * ((c + i * x * s) * sys.c1_0 - 2.0 * i * sys.g * sys.c2_0 * s),
            e2 * ((c - i * x * s) * sys.c2_0 + sg * 2.0 * i * std::conj(sys.g) * sys.c1_0 * s)};
}

/// Photon amplitude C₃ₖ(t) or C₄ₖ(t), with β replaced by √d_sq.
/// Pass t = +infinity for the asymptotic amplitude.
inline Complex photon_amplitude(const FourLevelSystem& sys, Channel channel, double omega_k, double t,
                                FourLevelConvention conv = {}) {
    if (!(t >= 0.0)) throw ValidationError("photon_amplitude: t must be >= 0");
    const Complex i{0.0, 1.0};
    const Complex om = detail::rabi_for(sys, conv);
    const Complex x = detail::rabi_detuning(sys);
    const double scale = std::max({1.0, std::abs(x), 2.0 * std::abs(sys.g)});
    if (std::abs(om) < defaults::degeneracy_tolerance * scale)
        throw DegenerateRoots("photon_amplitude: complex Rabi frequency vanishes, the two poles coincide");

    auto e = [&](Complex den) -> Complex {
        if (std::isinf(t)) return -1.0 / den;
        return (std::exp(-i * den * t) - 1.0) / den;
    };

    const double gsum = sys.gamma1 + sys.gamma2;
    if (channel == Channel::one_three) {
        const double beta = std::sqrt(sys.d31_sq);
        const Complex z{sys.nu() + sys.delta1 + sys.delta2, -0.5 * gsum};
        const Complex nk = sys.nu1k(omega_k);
        const Complex dm = nk + 0.5 * (z - om);
        const Complex dp = nk + 0.5 * (z + om);
        const Complex drive = 2.0 * sys.g * sys.c2_0;
        return beta / (2.0 * om) * (((x + om) * sys.c1_0 - drive) * e(dm) - ((x - om) * sys.c1_0 - drive) * e(dp));
    }
    const double beta = std::sqrt(sys.d42_sq);
    const Complex y{sys.nu() - sys.delta1 - sys.delta2, 0.5 * gsum};
    const Complex nk = sys.nu2k(omega_k);
    const Complex dp = nk - 0.5 * (y + om);
    const Complex dm = nk - 0.5 * (y - om);
    const Complex drive = detail::sigma(conv.sign) * 2.0 * std::conj(sys.g) * sys.c1_0;
    return -beta / (2.0 * om) * (((x - om) * sys.c2_0 - drive) * e(dp) - ((x + om) * sys.c2_0 - drive) * e(dm));
}

struct SpectrumSample {
    double omega_k = 0.0;
    double s_total = 0.0;
    double s_ch13 = 0.0;
    double s_ch24 = 0.0;
    double intensity = 0.0;  // ω³·s_total for ω > 0, else 0
};

inline SpectrumSample spectrum_four(const FourLevelSystem& sys, double omega_k, DriveSign sign = DriveSign::closed_form) {
    const double w = omega_k;
    const Complex a_p{sys.eps1 - sys.eps3 - w + sys.delta1, -0.5 * sys.gamma1};
    const Complex b_p{sys.eps2 - sys.eps3 - sys.omega_laser - w + sys.delta2, -0.5 * sys.gamma2};
    const Complex a{sys.eps1 - sys.eps4 + sys.omega_laser - w + sys.delta1, -0.5 * sys.gamma1};
    const Complex b{sys.eps2 - sys.eps4 - w + sys.delta2, -0.5 * sys.gamma2};
    const double g2 = std::norm(sys.g);

    SpectrumSample out;
    out.omega_k = w;
    out.s_ch13 = sys.d31_sq * std::norm(b_p * sys.c1_0 - sys.g * sys.c2_0) / std::norm(a_p * b_p - g2);
    out.s_ch24 = sys.d42_sq * std::norm(a * sys.c2_0 + detail::sigma(sign) * std::conj(sys.g) * sys.c1_0) /
                 std::norm(a * b - g2);
    out.s_total = out.s_ch13 + out.s_ch24;
    out.intensity = w > 0.0 ? w * w * w * out.s_total : 0.0;
    return out;
}

/// Complex frequency where the channel's spectral numerator vanishes.
inline Complex spectral_zero(const FourLevelSystem& sys, Channel channel, DriveSign sign = DriveSign::closed_form) {
    if (channel == Channel::one_three) {
        if (sys.c1_0 == Complex{0.0}) throw ZeroInitialAmplitude("spectral_zero: channel 1->3 needs c1_0 != 0");
        return Complex{sys.eps2 - sys.eps3 - sys.omega_laser + sys.delta2, -0.5 * sys.gamma2} - sys.g * sys.c2_0 / sys.c1_0;
    }
    if (sys.c2_0 == Complex{0.0}) throw ZeroInitialAmplitude("spectral_zero: channel 2->4 needs c2_0 != 0");
    return Complex{sys.eps1 - sys.eps4 + sys.omega_laser + sys.delta1, -0.5 * sys.gamma1} +
           detail::sigma(sign) * std::conj(sys.g) * sys.c1_0 / sys.c2_0;
}

/// A spectral zero is a dark line when it sits on the real axis.
inline bool is_dark_line(Complex zero, double zero_tolerance = 1e-9) { return std::abs(zero.imag()) <= zero_tolerance; }

struct DarkLineReport {
    bool frequency_clause = false;  // ε₃ − ε₄ + ω = ν
    bool shift_clause = false;      // Δ₂ = −Δ₁
    bool width_clause = false;      // Γ₁ = Γ₂
    bool coupling_clause = false;   // g = Δ₂ − iΓ₂/2
    std::optional<double> predicted_frequency;
    double candidate_frequency = 0.0;  // ε₂ − ε₃ − ω, where the scan is centred
    double measured_min_ratio = 0.0;
    double measured_min_frequency = 0.0;

    bool conditions_met() const { return frequency_clause && shift_clause && width_clause && coupling_clause; }
};

/// Checks the dark-line conditions and scans s_total on a 4001-point grid
/// of half-width 10·max(Γ₁, Γ₂, 1) centred on ε₂ − ε₃ − ω.
inline DarkLineReport dark_line_check(const FourLevelSystem& sys, double condition_tolerance = 1e-9,
                                      DriveSign sign = DriveSign::closed_form) {
    DarkLineReport r;
    r.frequency_clause = std::abs(sys.eps3 - sys.eps4 + sys.omega_laser - sys.nu()) <= condition_tolerance;
    r.shift_clause = std::abs(sys.delta2 + sys.delta1) <= condition_tolerance;
    r.width_clause = std::abs(sys.gamma1 - sys.gamma2) <= condition_tolerance;
    r.coupling_clause = std::abs(sys.g - Complex{sys.delta2, -0.5 * sys.gamma2}) <= condition_tolerance;
    r.candidate_frequency = sys.eps2 - sys.eps3 - sys.omega_laser;
    if (r.conditions_met()) r.predicted_frequency = r.candidate_frequency;

    constexpr int half_points = 2000;
    const double half_width = 10.0 * std::max({sys.gamma1, sys.gamma2, 1.0});
    const double h = half_width / half_points;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int k = -half_points; k <= half_points; ++k) {
        const double w = r.candidate_frequency + k * h;
        const double s = spectrum_four(sys, w, sign).s_total;
        if (s < lo) {
            lo = s;
            r.measured_min_frequency = w;
        }
        hi = std::max(hi, s);
    }
    r.measured_min_ratio = hi > 0.0 ? lo / hi : 0.0;
    return r;
}

}  // namespace spectra
