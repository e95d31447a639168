// five_level.hpp — two driven transitions decaying to a common final level:
// characteristic quartics, pole validation, channel amplitudes and the
// dipole-geometry recombination.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "spectra/errors.hpp"
#include "spectra/numerics.hpp"

namespace spectra {

struct FiveLevelSystem {
    double eps2 = 0.0, eps4 = 0.0, eps_f = 0.0;
    double nu1 = 0.0, nu2 = 0.0;
    Complex v12{0.0}, v34{0.0};
    double delta2 = 0.0, delta4 = 0.0;
    double gamma2 = 1.0, gamma4 = 1.0;
    double q = 0.0;
    Complex c1_0{1.0}, c3_0{0.0};
    double df2_sq = 1.0, df4_sq = 1.0;
    double cos_theta = 0.0;
    // Drops the (q+i) cross damping and the interference term: the two
    // decay channels become independent processes.
    bool independent_channels = false;

    double shift() const { return eps2 - eps4; }

    /// (√(Γ₂Γ₄)/2)(q + i), or 0 for independent channels.
    Complex cross_damping() const {
        if (independent_channels) return 0.0;
        return 0.5 * std::sqrt(gamma2 * gamma4) * Complex{q, 1.0};
    }

    void validate() const {
        const double vals[] = {eps2, eps4, eps_f, nu1, nu2, v12.real(), v12.imag(), v34.real(), v34.imag(),
                               delta2, delta4, gamma2, gamma4, q, c1_0.real(), c1_0.imag(), c3_0.real(),
                               c3_0.imag(), df2_sq, df4_sq, cos_theta};
        for (double v : vals)
            if (!std::isfinite(v)) throw ValidationError("five-level parameters must be finite");
        if (!(gamma2 > 0.0) || !(gamma4 > 0.0)) throw ValidationError("widths gamma2, gamma4 must be > 0");
        if (df2_sq < 0.0 || df4_sq < 0.0) throw ValidationError("dipole weights df2_sq, df4_sq must be >= 0");
        if (cos_theta < -1.0 || cos_theta > 1.0) throw ValidationError("cos_theta must lie in [-1, 1]");
        const double norm = std::norm(c1_0) + std::norm(c3_0);
        if (std::abs(norm - 1.0) > 1e-12)
            throw ValidationError("normalization |c1_0|^2 + |c3_0|^2 = 1 violated (got " + std::to_string(norm) + ")");
    }
};

enum class CharPoly { f, f_tilde };

/// Expanded quartic, leading coefficient 1.
inline Polynomial char_poly(const FiveLevelSystem& sys, CharPoly which) {
    const Complex k = sys.cross_damping();
    const double s = sys.shift();
    const Polynomial x{Complex{0.0}, Complex{1.0}};
    auto lin = [&](Complex c) { return x + Polynomial{c}; };  // x + c
    const Complex level2{sys.delta2, -0.5 * sys.gamma2};
    const Complex level4{sys.delta4, -0.5 * sys.gamma4};
    const Polynomial v12sq{Complex{std::norm(sys.v12)}};
    const Polynomial v34sq{Complex{std::norm(sys.v34)}};

    if (which == CharPoly::f) {
        const Polynomial a = lin(-sys.nu1) * lin(level2) - v12sq;
        const Polynomial b = lin(-s - sys.nu2) * lin(-s + level4) - v34sq;
        return a * b - (k * k) * (lin(-sys.nu1) * lin(-s - sys.nu2));
    }
    const Polynomial a = lin(-sys.nu2) * lin(level4) - v34sq;
    const Polynomial b = lin(s - sys.nu1) * lin(s + level2) - v12sq;
    return a * b - (k * k) * (lin(-sys.nu2) * lin(s - sys.nu1));
}

/// Generator M for y = (C₁e^{iν₁t}, C₂, C₃e^{i(ν₂+s)t}, C₄e^{ist}),
/// s = ε₂ − ε₄, with y' = i·M·y and det(x·I − M) = f(x).
inline Matrix effective_generator(const FiveLevelSystem& sys) {
    const double s = sys.shift();
    const Complex k = sys.cross_damping();
    return Matrix{{sys.nu1, -sys.v12, 0.0, 0.0},
                  {-std::conj(sys.v12), Complex{-sys.delta2, 0.5 * sys.gamma2}, 0.0, k},
                  {0.0, 0.0, s + sys.nu2, -sys.v34},
                  {0.0, k, -std::conj(sys.v34), Complex{s - sys.delta4, 0.5 * sys.gamma4}}};
}

/// Roots outside the open strip 0 < Im x < (Γ₂+Γ₄)/2.
/// Both edges are tested with a tolerance of tol·scale.
inline std::vector<Complex> roots_outside_pole_bound(const FiveLevelSystem& sys, const RootSet& rs, double tol = 1e-9) {
    const double upper = 0.5 * (sys.gamma2 + sys.gamma4);
    const double margin = tol * rs.scale();
    std::vector<Complex> bad;
    for (const auto& r : rs.roots)
        if (!(r.imag() > margin) || !(r.imag() < upper - margin)) bad.push_back(r);
    return bad;
}

/// Roots of f and f̃. Raises PoleBoundViolation carrying the first root
/// outside the strip, DegenerateRoots for confluent roots.
inline std::pair<RootSet, RootSet> channel_roots(const FiveLevelSystem& sys) {
    RootSet rf = poly_roots(char_poly(sys, CharPoly::f));
    RootSet rt = poly_roots(char_poly(sys, CharPoly::f_tilde));
    require_distinct(rf);
    require_distinct(rt);
    for (const RootSet* rs : {&rf, &rt}) {
        const auto bad = roots_outside_pole_bound(sys, *rs);
        if (!bad.empty())
            throw PoleBoundViolation("root (" + std::to_string(bad.front().real()) + ", " +
                                         std::to_string(bad.front().imag()) + ") outside 0 < Im x < " +
                                         std::to_string(0.5 * (sys.gamma2 + sys.gamma4)),
                                     bad.front());
    }
    return {std::move(rf), std::move(rt)};
}

struct ChannelAmplitudes {
    Complex a_2f, b_4f;
    RootSet roots_f, roots_ftilde;
};

struct SpectrumDecomposition {
    double omega_k = 0.0;
    double s_ch2f = 0.0;
    double s_ch4f = 0.0;
    double s_int = 0.0;
    double s_total = 0.0;
    double intensity = 0.0;  // ω³·s_total for ω > 0, else 0
};

/// S = |d_f2|²|a|² + |d_f4|²|b|² + 2 cosθ |d_f2||d_f4| Re(a·b̄).
inline SpectrumDecomposition recombine(const FiveLevelSystem& sys, double omega_k, Complex a, Complex b) {
    SpectrumDecomposition d;
    d.omega_k = omega_k;
    d.s_ch2f = sys.df2_sq * std::norm(a);
    d.s_ch4f = sys.df4_sq * std::norm(b);
    if (sys.cos_theta != 0.0 && !sys.independent_channels)
        d.s_int = 2.0 * sys.cos_theta * std::sqrt(sys.df2_sq * sys.df4_sq) * (a * std::conj(b)).real();
    d.s_total = d.s_ch2f + d.s_ch4f + d.s_int;
    d.intensity = omega_k > 0.0 ? omega_k * omega_k * omega_k * d.s_total : 0.0;
    return d;
}

/// Roots computed once, then evaluated per frequency. Construction raises
/// DegenerateRoots but only records pole-bound violations, so spectra of
/// systems that saturate the bound can still be evaluated.
class FiveLevelSpectrum {
public:
    explicit FiveLevelSpectrum(const FiveLevelSystem& sys)
        : sys_(sys),
          rf_(poly_roots(char_poly(sys, CharPoly::f))),
          rt_(poly_roots(char_poly(sys, CharPoly::f_tilde))) {
        require_distinct(rf_);
        require_distinct(rt_);
        violations_ = roots_outside_pole_bound(sys, rf_);
        const auto more = roots_outside_pole_bound(sys, rt_);
        violations_.insert(violations_.end(), more.begin(), more.end());

        const Complex k = sys.cross_damping();
        const double s = sys.shift();
        const Complex level2{sys.delta2, -0.5 * sys.gamma2};
        const Complex level4{sys.delta4, -0.5 * sys.gamma4};
        const double v12sq = std::norm(sys.v12), v34sq = std::norm(sys.v34);
        const Complex v12c = std::conj(sys.v12), v34c = std::conj(sys.v34);
        for (std::size_t j = 0; j < 4; ++j) {
            const Complex x = rf_.roots[j];
            const Complex xt = rt_.roots[j];
            Complex pf = 1.0, pt = 1.0;
            for (std::size_t l = 0; l < 4; ++l) {
                if (l == j) continue;
                pf *= x - rf_.roots[l];
                pt *= xt - rt_.roots[l];
            }
            const Complex n = sys.c1_0 * v12c * ((x - s - sys.nu2) * (x - s + level4) - v34sq) +
                              sys.c3_0 * k * v34c * (x - sys.nu1);
            const Complex nt = sys.c1_0 * k * v12c * (xt - sys.nu2) +
                               sys.c3_0 * v34c * ((xt + s - sys.nu1) * (xt + s + level2) - v12sq);
            residue_f_[j] = n / pf;
            residue_t_[j] = nt / pt;
        }
    }

    const FiveLevelSystem& system() const { return sys_; }
    const RootSet& roots_f() const { return rf_; }
    const RootSet& roots_f_tilde() const { return rt_; }
    const std::vector<Complex>& pole_bound_violations() const { return violations_; }

    /// (a_2f, b_4f) at ω_k.
    std::pair<Complex, Complex> amplitude_pair(double omega_k) const {
        const double n1 = sys_.eps2 - sys_.eps_f - omega_k;
        const double n2 = sys_.eps4 - sys_.eps_f - omega_k;
        Complex a = 0.0, b = 0.0;
        for (std::size_t j = 0; j < 4; ++j) {
            a += residue_f_[j] / (n1 - rf_.roots[j]);
            b += residue_t_[j] / (n2 - rt_.roots[j]);
        }
        return {a, b};
    }

    ChannelAmplitudes amplitudes(double omega_k) const {
        const auto [a, b] = amplitude_pair(omega_k);
        return {a, b, rf_, rt_};
    }

    SpectrumDecomposition operator()(double omega_k) const {
        const auto [a, b] = amplitude_pair(omega_k);
        return recombine(sys_, omega_k, a, b);
    }

private:
    FiveLevelSystem sys_;
    RootSet rf_, rt_;
    std::array<Complex, 4> residue_f_{}, residue_t_{};
    std::vector<Complex> violations_;
};

inline ChannelAmplitudes channel_amplitudes(const FiveLevelSystem& sys, double omega_k) {
    return FiveLevelSpectrum(sys).amplitudes(omega_k);
}

inline SpectrumDecomposition spectrum_five(const FiveLevelSystem& sys, double omega_k) {
    return FiveLevelSpectrum(sys)(omega_k);
}

}  // namespace spectra
