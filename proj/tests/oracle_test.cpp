#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "spectra/five_level.hpp"
#include "spectra/four_level.hpp"
#include "spectra/oracle.hpp"

using namespace spectra;

namespace {

FourLevelSystem fig2(double rabi, Complex c1 = 1.0, Complex c2 = 0.0) {
    FourLevelSystem s;
    s.eps1 = 2.5;
    s.eps2 = 3.0;
    s.eps3 = 0.0;
    s.eps4 = -0.5;
    s.omega_laser = 1.0;
    s.g = rabi / 2.0;
    s.c1_0 = c1;
    s.c2_0 = c2;
    return s;
}

FiveLevelSystem fig34(double q, double cos_theta) {
    FiveLevelSystem s;
    s.eps2 = s.eps4 = 8.0;
    s.eps_f = 1.0;
    s.v12 = 1.0;
    s.v34 = 1.5;
    s.q = q;
    s.c1_0 = s.c3_0 = 1.0 / std::sqrt(2.0);
    s.cos_theta = cos_theta;
    return s;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return v;
}

double max_rel(const std::vector<double>& got, const std::vector<double>& want) {
    double peak = *std::max_element(want.begin(), want.end()), worst = 0.0;
    for (std::size_t i = 0; i < got.size(); ++i)
        worst = std::max(worst, std::abs(got[i] - want[i]) / std::max(want[i], 1e-6 * peak));
    return worst;
}

}  // namespace

TEST(EvolveFour, UncoupledDecayRates) {
    FourLevelSystem s = fig2(0.0, 0.6, 0.8);
    s.gamma1 = 0.5;
    s.gamma2 = 2.0;
    const auto traj = evolve_four(s, 4.0, 800);
    for (std::size_t i : {std::size_t{0}, std::size_t{200}, std::size_t{800}}) {
        const double t = traj.time(i);
        const auto a = four_level_state(s, traj, i);
        EXPECT_NEAR(std::abs(a.c1), 0.6 * std::exp(-0.25 * t), 1e-9);
        EXPECT_NEAR(std::abs(a.c2), 0.8 * std::exp(-1.0 * t), 1e-9);
    }
    EXPECT_DOUBLE_EQ(traj.t_max(), 4.0);
    EXPECT_TRUE(traj.norm_nonincreasing());
}

TEST(EvolveFour, RabiPeakSpacing) {
    // Strong drive on resonance: |C₁|² peaks every 2π/|Ω|.
    const FourLevelSystem s = fig2(4.0);
    const auto traj = evolve_four(s, 8.0, 8000);
    std::vector<double> peaks;
    for (std::size_t i = 1; i + 1 < traj.size(); ++i) {
        const double p = std::norm(traj.state(i)[0]);
        if (p > std::norm(traj.state(i - 1)[0]) && p > std::norm(traj.state(i + 1)[0])) peaks.push_back(traj.time(i));
    }
    ASSERT_GE(peaks.size(), 2u);
    const double period = 2.0 * std::numbers::pi / std::abs(complex_rabi(s));
    EXPECT_NEAR(peaks[1] - peaks[0], period, 0.05 * period);
}

TEST(EvolveFive, UndrivenLevelsKeepPopulation) {
    FiveLevelSystem s = fig34(1.0, 1.0);
    s.v12 = s.v34 = 0.0;
    const auto traj = evolve_five(s, 10.0, 1000);
    const auto end = traj.back();
    EXPECT_NEAR(std::abs(end[0]), std::abs(s.c1_0), 1e-12);
    EXPECT_NEAR(std::abs(end[2]), std::abs(s.c3_0), 1e-12);
    EXPECT_EQ(end[1], Complex{0.0});
    EXPECT_EQ(end[3], Complex{0.0});
}

TEST(EvolveFive, SymmetricDriveGivesEqualUpperAmplitudes) {
    FiveLevelSystem s = fig34(3.0, 1.0);
    s.v34 = s.v12;
    const auto traj = evolve_five(s, 6.0, 3000);
    for (std::size_t i = 0; i < traj.size(); i += 250)
        EXPECT_LT(std::abs(traj.state(i)[1] - traj.state(i)[3]), 1e-12);
}

TEST(EvolveFive, DarkCombinationIsTrapped) {
    // With q = 0 and equal widths the upper-level damping has rank one, so
    // the antisymmetric sector of a symmetric system never decays.
    FiveLevelSystem s = fig34(0.0, 1.0);
    s.v34 = s.v12;
    s.c1_0 = 1.0 / std::sqrt(2.0);
    s.c3_0 = -1.0 / std::sqrt(2.0);
    const auto dark = evolve_five(s, 40.0, 8000);
    for (std::size_t i = 0; i < dark.size(); i += 500) {
        double norm = 0.0;
        for (Complex y : dark.state(i)) norm += std::norm(y);
        EXPECT_NEAR(norm, 1.0, 1e-9);
    }
    s.c3_0 = -s.c3_0;
    const auto bright = evolve_five(s, 40.0, 8000);
    double left = 0.0;
    for (Complex y : bright.back()) left += std::norm(y);
    EXPECT_LT(left, 1e-6);
}

TEST(EvolveAuto, ReachesDecayedTail) {
    const auto traj = evolve_four(fig2(2.5));
    const double peak = 1.0;
    EXPECT_LT(std::abs(traj.back()[0]), 1e-6 * peak);
    EXPECT_LT(std::abs(traj.back()[1]), 1e-6 * peak);
    const auto t5 = evolve_five(fig34(1.0, 1.0));
    EXPECT_LT(std::abs(t5.back()[1]), 1e-6);
    EXPECT_LT(std::abs(t5.back()[3]), 1e-6);
}

TEST(EvolveAuto, RejectsUndampedSystem) {
    FourLevelSystem s = fig2(2.5);
    s.gamma1 = s.gamma2 = 0.0;
    EXPECT_THROW(evolve_four(s), ValidationError);
}

TEST(OracleSpectrum, ZeroTrajectoryGivesZero) {
    FourLevelSystem s = fig2(2.5);
    AmplitudeTrajectory traj;
    traj.dt = 0.1;
    traj.dimension = 2;
    traj.data.assign(2 * 100, Complex{0.0});
    const auto grid = linspace(0.0, 6.0, 7);
    const auto o = oracle_spectrum(traj, s, grid);
    for (double v : o.s_total) EXPECT_EQ(v, 0.0);
}

TEST(EvolveFour, EndpointMatchesDressedAmplitudes) {
    for (double rabi : {0.5, 2.5, 3.0, 4.0}) {
        const FourLevelSystem s = fig2(rabi);
        const auto traj = evolve_four(s, 7.0, 7000);
        const auto o = four_level_state(s, traj, traj.size() - 1);
        const auto eom = amplitude_at(s, 7.0, {DriveSign::equations_of_motion});
        const auto printed = amplitude_at(s, 7.0);
        EXPECT_LT(std::abs(o.c1 - eom.c1), 1e-6) << rabi;
        EXPECT_LT(std::abs(o.c2 - eom.c2), 1e-6) << rabi;
        EXPECT_LT(std::abs(o.c1 - printed.c1), 1e-6) << rabi;
        // The printed level-2 amplitude carries the opposite drive sign.
        EXPECT_LT(std::abs(o.c2 + printed.c2), 1e-6) << rabi;
    }
}

TEST(OracleSpectrum, FiveLevelChannelAmplitudes) {
    const FiveLevelSystem s = fig34(1.0, 1.0);
    const auto grid = linspace(2.0, 12.0, 50);
    const auto o = oracle_spectrum(evolve_five(s), s, grid);
    const FiveLevelSpectrum spec(s);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto [a, b] = spec.amplitude_pair(grid[i]);
        EXPECT_LT(std::abs(o.a_2f[i] - a), 1e-3 * std::abs(a)) << grid[i];
        EXPECT_LT(std::abs(o.b_4f[i] - b), 1e-3 * std::abs(b)) << grid[i];
    }
}

TEST(OracleSpectrum, FourLevelMatchesClosedForm) {
    for (double rabi : {0.5, 2.5, 4.0}) {
        const FourLevelSystem s = fig2(rabi);
        const auto grid = linspace(0.0, 6.0, 200);
        const auto o = oracle_spectrum(evolve_four(s), s, grid);
        std::vector<double> closed;
        for (double w : grid) closed.push_back(spectrum_four(s, w).s_total);
        EXPECT_LT(max_rel(o.s_total, closed), 1e-4) << rabi;
    }
}

TEST(OracleSpectrum, SuperpositionFollowsEquationsOfMotionSign) {
    FourLevelSystem s = fig2(2.5, 1.0 / std::sqrt(2.0), Complex{0.0, 1.0} / std::sqrt(2.0));
    s.g = Complex{1.0, -0.6};
    const auto grid = linspace(0.0, 6.0, 120);
    const auto o = oracle_spectrum(evolve_four(s), s, grid);
    std::vector<double> eom, printed;
    for (double w : grid) {
        eom.push_back(spectrum_four(s, w, DriveSign::equations_of_motion).s_ch24);
        printed.push_back(spectrum_four(s, w, DriveSign::closed_form).s_ch24);
    }
    EXPECT_LT(max_rel(o.s_ch24, eom), 1e-4);
    EXPECT_GT(max_rel(o.s_ch24, printed), 1e-2);
}

TEST(OracleSpectrum, FiveLevelMatchesClosedForm) {
    for (double cos_theta : {1.0, 0.0}) {
        const FiveLevelSystem s = fig34(1.0, cos_theta);
        const auto grid = linspace(2.0, 12.0, 200);
        const auto o = oracle_spectrum(evolve_five(s), s, grid);
        const FiveLevelSpectrum spec(s);
        std::vector<double> closed, got;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            closed.push_back(spec(grid[i]).s_total);
            got.push_back(o.rows[i].s_total);
        }
        EXPECT_LT(max_rel(got, closed), 1e-3) << cos_theta;
    }
}

TEST(Conservation, FourLevelTimeAndFrequency) {
    const FourLevelSystem s = fig2(2.5);
    const auto traj = evolve_four(s);
    const auto grid = linspace(-297.0, 303.0, 120001);
    std::vector<double> dens;
    for (double w : grid) dens.push_back(spectrum_four(s, w).s_total);
    const auto r = conservation_report(s, traj, grid, dens);
    EXPECT_NEAR(r.decayed_probability, 1.0, 1e-6);
    EXPECT_NEAR(r.spectral_integral, 1.0, 1e-2);
    EXPECT_LT(r.defect, 1e-2);
}

TEST(Conservation, FiveLevelSurvivalPlusDecay) {
    for (double q : {1.0, 5.0}) {
        FiveLevelSystem s = fig34(q, 1.0);
        s.df2_sq = s.gamma2 / (2.0 * std::numbers::pi);
        s.df4_sq = s.gamma4 / (2.0 * std::numbers::pi);
        const auto traj = evolve_five(s);
        const auto grid = linspace(-295.0, 305.0, 600001);
        const FiveLevelSpectrum spec(s);
        std::vector<double> dens;
        for (double w : grid) dens.push_back(spec(w).s_total);
        const auto r = conservation_report(s, traj, grid, dens);
        EXPECT_LT(r.survival_probability, 1e-10);
        EXPECT_NEAR(r.decayed_probability, 1.0, 1e-6);
        EXPECT_NEAR(r.spectral_integral, 1.0, 1e-2);
        EXPECT_LT(r.defect, 1e-2);
    }
}

TEST(Conservation, CrossDampingAssumesParallelDipoles) {
    // The cross-damping term is kept for any geometry, so orthogonal dipoles
    // with q ≠ 0 emit more than the decayed population.
    FiveLevelSystem s = fig34(5.0, 0.0);
    s.df2_sq = s.df4_sq = 1.0 / (2.0 * std::numbers::pi);
    const auto grid = linspace(-295.0, 305.0, 600001);
    const FiveLevelSpectrum spec(s);
    std::vector<double> dens;
    for (double w : grid) dens.push_back(spec(w).s_total);
    EXPECT_GT(spectral_integral(grid, dens), 1.5);
}

TEST(Conservation, FiveLevelUndriven) {
    FiveLevelSystem s = fig34(1.0, 1.0);
    s.v12 = s.v34 = 0.0;
    s.nu1 = 0.1;  // distinct roots for the closed form
    s.nu2 = -0.1;
    const auto traj = evolve_five(s, 10.0, 1000);
    const auto grid = linspace(2.0, 12.0, 201);
    const FiveLevelSpectrum spec(s);
    std::vector<double> dens;
    for (double w : grid) dens.push_back(spec(w).s_total);
    const auto r = conservation_report(s, traj, grid, dens);
    EXPECT_NEAR(r.survival_probability, 1.0, 1e-12);
    EXPECT_EQ(r.decayed_probability, 0.0);
    EXPECT_EQ(r.spectral_integral, 0.0);
    EXPECT_LT(r.defect, 1e-12);
}

TEST(Conservation, AntiparallelCancellationEmitsNothing) {
    FiveLevelSystem s = fig34(1.0, -1.0);
    s.v34 = s.v12;
    const auto grid = linspace(-95.0, 105.0, 40001);
    const FiveLevelSpectrum spec(s);
    std::vector<double> total, a, b;
    for (double w : grid) {
        const auto d = spec(w);
        total.push_back(d.s_total);
        a.push_back(d.s_ch2f);
        b.push_back(d.s_ch4f);
    }
    const double ia = spectral_integral(grid, a);
    EXPECT_GT(ia, 0.1);
    EXPECT_GT(spectral_integral(grid, b), 0.1);
    EXPECT_LT(std::abs(spectral_integral(grid, total)), 1e-12 * ia);
}

TEST(Conservation, SpectralIntegralRejectsMismatchedSizes) {
    const std::vector<double> a{0.0, 1.0}, b{1.0};
    EXPECT_THROW(spectral_integral(a, b), ValidationError);
    EXPECT_DOUBLE_EQ(spectral_integral(a, std::vector<double>{1.0, 3.0}), 2.0);
}

TEST(Refinement, StepDoublingWithinErrorEstimate) {
    const FourLevelSystem s = fig2(4.0);
    const auto base = evolve_four(s, 20.0, 2000);
    const auto finer = evolve_four(s, 20.0, 4000);
    ASSERT_GT(base.step_error_estimate, 0.0);
    for (std::size_t k = 0; k < 2; ++k)
        EXPECT_LT(std::abs(base.back()[k] - finer.back()[k]), 16.0 * base.step_error_estimate);
}

TEST(Refinement, StepAndHorizonDoubling) {
    const FourLevelSystem s = fig2(2.5);
    const auto grid = linspace(0.0, 6.0, 60);
    const auto base = oracle_spectrum(evolve_four(s, 60.0, 6000), s, grid);
    const auto finer = oracle_spectrum(evolve_four(s, 60.0, 12000), s, grid);
    const auto longer = oracle_spectrum(evolve_four(s, 120.0, 12000), s, grid);
    EXPECT_LT(max_rel(base.s_total, finer.s_total), 1e-5);
    EXPECT_LT(max_rel(base.s_total, longer.s_total), 1e-6);
}

TEST(Refinement, FiveLevelHorizonDoubling) {
    const FiveLevelSystem s = fig34(1.0, 1.0);
    const auto grid = linspace(2.0, 12.0, 60);
    const auto base = evolve_five(s);
    const std::size_t n = base.size() - 1;
    const auto longer = evolve_five(s, 2.0 * base.t_max(), 2 * n);
    const auto a = oracle_spectrum(base, s, grid), b = oracle_spectrum(longer, s, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        EXPECT_LT(std::abs(a.a_2f[i] - b.a_2f[i]), 1e-6 * std::abs(b.a_2f[i]));
        EXPECT_LT(std::abs(a.b_4f[i] - b.b_4f[i]), 1e-6 * std::abs(b.b_4f[i]));
    }
}
