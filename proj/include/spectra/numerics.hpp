// numerics.hpp — complex polynomials, all-roots solver, fixed-step RK4 for
// linear systems, and oscillatory time quadrature.
//
// Everything here is header-only and free of external dependencies. Values
// are immutable after construction and every function is pure, so frequency
// sweeps can share them across threads.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spectra/errors.hpp"

namespace spectra {

using Complex = std::complex<double>;

namespace defaults {
inline constexpr double root_tolerance = 1e-10;
inline constexpr double ode_tolerance = 1e-8;
inline constexpr double tail_fraction = 1e-6;
inline constexpr double degeneracy_tolerance = 1e-7;
inline constexpr std::size_t max_root_degree = 8;
}  // namespace defaults

// ---------------------------------------------------------------------------
// Polynomials
// ---------------------------------------------------------------------------

/// Complex polynomial, coefficients in ascending degree.
class Polynomial {
public:
    Polynomial() : coeffs_{Complex{0.0}} {}
    explicit Polynomial(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
        if (coeffs_.empty()) coeffs_.push_back(0.0);
    }
    Polynomial(std::initializer_list<Complex> coeffs) : Polynomial(std::vector<Complex>(coeffs)) {}

    /// Π (x − r) for the given roots.
    static Polynomial from_roots(std::span<const Complex> roots) {
        Polynomial p{Complex{1.0}};
        for (const auto& r : roots) p = p * Polynomial{-r, Complex{1.0}};
        return p;
    }

    std::size_t degree() const { return coeffs_.size() - 1; }
    const std::vector<Complex>& coeffs() const { return coeffs_; }
    const Complex& operator[](std::size_t k) const { return coeffs_[k]; }
    const Complex& leading() const { return coeffs_.back(); }

    double max_coefficient_magnitude() const {
        double m = 0.0;
        for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
        return m;
    }

    Polynomial derivative() const {
        if (coeffs_.size() == 1) return Polynomial{};
        std::vector<Complex> d(coeffs_.size() - 1);
        for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = static_cast<double>(k) * coeffs_[k];
        return Polynomial(std::move(d));
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        std::vector<Complex> c(std::max(a.coeffs_.size(), b.coeffs_.size()));
        for (std::size_t k = 0; k < a.coeffs_.size(); ++k) c[k] += a.coeffs_[k];
        for (std::size_t k = 0; k < b.coeffs_.size(); ++k) c[k] += b.coeffs_[k];
        return Polynomial(std::move(c));
    }
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + Complex{-1.0} * b; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        std::vector<Complex> c(a.coeffs_.size() + b.coeffs_.size() - 1);
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
        return Polynomial(std::move(c));
    }
    friend Polynomial operator*(Complex s, const Polynomial& p) {
        auto c = p.coeffs_;
        for (auto& v : c) v *= s;
        return Polynomial(std::move(c));
    }

private:
    std::vector<Complex> coeffs_;
};

/// Horner evaluation.
inline Complex poly_eval(const Polynomial& p, Complex x) {
    const auto& c = p.coeffs();
    Complex acc = c.back();
    for (std::size_t k = c.size() - 1; k-- > 0;) acc = acc * x + c[k];
    return acc;
}

struct RootSet {
    std::vector<Complex> roots;      // ascending real part, then imaginary part
    std::vector<double> residuals;   // |p(root)|
    double min_pairwise_separation = std::numeric_limits<double>::infinity();

    double scale() const {
        double s = 1.0;
        for (const auto& r : roots) s = std::max(s, std::abs(r));
        return s;
    }
};

/// Throws DegenerateRoots if two roots are closer than tol × scale.
inline void require_distinct(const RootSet& rs, double tol = defaults::degeneracy_tolerance) {
    if (rs.min_pairwise_separation < tol * rs.scale())
        throw DegenerateRoots("roots separated by " + std::to_string(rs.min_pairwise_separation) +
                              " (< " + std::to_string(tol * rs.scale()) + ")");
}

namespace detail {

inline std::pair<Complex, Complex> horner_with_derivative(const std::vector<Complex>& c, Complex x) {
    Complex p = c.back();
    Complex dp = 0.0;
    for (std::size_t k = c.size() - 1; k-- > 0;) {
        dp = dp * x + p;
        p = p * x + c[k];
    }
    return {p, dp};
}

}  // namespace detail

/// All roots by Aberth–Ehrlich simultaneous iteration, Newton-polished.
inline RootSet poly_roots(const Polynomial& p, double tol = defaults::root_tolerance) {
    const std::size_t n = p.degree();
    if (n < 1 || n > defaults::max_root_degree)
        throw NonConvergence("poly_roots: degree " + std::to_string(n) + " outside [1, 8]");
    if (!(std::abs(p.leading()) > 1e-300))
        throw DegenerateLeadingCoefficient("poly_roots: leading coefficient vanishes");

    std::vector<Complex> monic(p.coeffs());
    const Complex lead = p.leading();
    for (auto& c : monic) c /= lead;

    std::vector<Complex> z(n);
    if (n == 1) {
        z[0] = -monic[0];
    } else {
        // Fujiwara bound; start on a circle around the centroid.
        double radius = 0.0;
        for (std::size_t k = 1; k <= n; ++k) {
            double v = std::abs(monic[n - k]);
            if (k == n) v *= 0.5;
            radius = std::max(radius, std::pow(v, 1.0 / static_cast<double>(k)));
        }
        radius = std::max(2.0 * radius, 1e-3);
        const Complex centre = -monic[n - 1] / static_cast<double>(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n) + 0.7;
            z[k] = centre + std::polar(radius, angle);
        }

        constexpr int max_sweeps = 500;
        for (int sweep = 0; sweep < max_sweeps; ++sweep) {
            double largest_step = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                auto [val, dval] = detail::horner_with_derivative(monic, z[k]);
                if (val == Complex{0.0}) continue;
                Complex repulsion = 0.0;
                for (std::size_t j = 0; j < n; ++j)
                    if (j != k) repulsion += 1.0 / (z[k] - z[j]);
                Complex w;
                if (dval == Complex{0.0}) {
                    w = Complex{1e-8 * std::max(1.0, std::abs(z[k])), 0.0};
                } else {
                    const Complex ratio = val / dval;
                    w = ratio / (1.0 - ratio * repulsion);
                }
                z[k] -= w;
                largest_step = std::max(largest_step, std::abs(w) / std::max(1.0, std::abs(z[k])));
            }
            if (largest_step < 4.0 * std::numeric_limits<double>::epsilon()) break;
        }

        for (auto& r : z) {
            for (int it = 0; it < 3; ++it) {
                auto [val, dval] = detail::horner_with_derivative(monic, r);
                if (dval == Complex{0.0}) break;
                const Complex cand = r - val / dval;
                if (std::abs(poly_eval(Polynomial(monic), cand)) < std::abs(val)) r = cand;
                else break;
            }
        }
    }

    std::sort(z.begin(), z.end(), [](const Complex& a, const Complex& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });

    RootSet out;
    out.roots = z;
    const double bound = tol * std::max(1.0, p.max_coefficient_magnitude());
    for (const auto& r : z) {
        const double res = std::abs(poly_eval(p, r));
        if (!(res <= bound))
            throw NonConvergence("poly_roots: residual " + std::to_string(res) + " exceeds " + std::to_string(bound));
        out.residuals.push_back(res);
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            out.min_pairwise_separation = std::min(out.min_pairwise_separation, std::abs(z[i] - z[j]));
    return out;
}

// ---------------------------------------------------------------------------
// Small dense complex matrices
// ---------------------------------------------------------------------------

class Matrix {
public:
    Matrix() = default;
    explicit Matrix(std::size_t n) : n_(n), a_(n * n) {}
    Matrix(std::initializer_list<std::initializer_list<Complex>> rows) : n_(rows.size()), a_(rows.size() * rows.size()) {
        std::size_t i = 0;
        for (const auto& row : rows) {
            if (row.size() != n_) throw ValidationError("Matrix: rows must form a square matrix");
            std::size_t j = 0;
            for (const auto& v : row) a_[i * n_ + j++] = v;
            ++i;
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t size() const { return n_; }
    Complex& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

    /// Max absolute row sum.
    double norm_inf() const {
        double m = 0.0;
        for (std::size_t i = 0; i < n_; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n_; ++j) s += std::abs((*this)(i, j));
            m = std::max(m, s);
        }
        return m;
    }

    void apply(const Complex* x, Complex* y) const {
        for (std::size_t i = 0; i < n_; ++i) {
            Complex acc = 0.0;
            for (std::size_t j = 0; j < n_; ++j) acc += a_[i * n_ + j] * x[j];
            y[i] = acc;
        }
    }
    std::vector<Complex> apply(std::span<const Complex> x) const {
        std::vector<Complex> y(n_);
        apply(x.data(), y.data());
        return y;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        Matrix c(a.n_);
        for (std::size_t i = 0; i < a.n_; ++i)
            for (std::size_t k = 0; k < a.n_; ++k) {
                const Complex aik = a(i, k);
                if (aik == Complex{0.0}) continue;
                for (std::size_t j = 0; j < a.n_; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }
    friend Matrix operator+(Matrix a, const Matrix& b) {
        for (std::size_t k = 0; k < a.a_.size(); ++k) a.a_[k] += b.a_[k];
        return a;
    }
    friend Matrix operator*(Complex s, Matrix m) {
        for (auto& v : m.a_) v *= s;
        return m;
    }

private:
    std::size_t n_ = 0;
    std::vector<Complex> a_;
};

/// det(x·I − M) by cofactor expansion over polynomial entries (n ≤ 8).
inline Polynomial characteristic_polynomial(const Matrix& m) {
    const std::size_t n = m.size();
    if (n == 0 || n > 8) throw ValidationError("characteristic_polynomial: dimension must be 1..8");

    auto entry = [&](std::size_t i, std::size_t j) {
        if (i == j) return Polynomial{-m(i, i), Complex{1.0}};
        return Polynomial{-m(i, j)};
    };
    auto is_zero = [&](std::size_t i, std::size_t j) { return i != j && m(i, j) == Complex{0.0}; };

    auto expand = [&](auto&& self, std::vector<std::size_t>& rows, std::size_t col) -> Polynomial {
        if (rows.size() == 1) return entry(rows[0], col);
        Polynomial acc{Complex{0.0}};
        for (std::size_t k = 0; k < rows.size(); ++k) {
            const std::size_t r = rows[k];
            if (is_zero(r, col)) continue;
            rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(k));
            Polynomial minor = self(self, rows, col + 1);
            rows.insert(rows.begin() + static_cast<std::ptrdiff_t>(k), r);
            const Polynomial term = entry(r, col) * minor;
            acc = (k % 2 == 0) ? acc + term : acc - term;
        }
        return acc;
    };

    std::vector<std::size_t> rows(n);
    for (std::size_t i = 0; i < n; ++i) rows[i] = i;
    Polynomial p = expand(expand, rows, 0);
    // Pad to full degree in case trailing cofactors vanished.
    auto c = p.coeffs();
    c.resize(n + 1);
    c[n] = 1.0;
    return Polynomial(std::move(c));
}

// ---------------------------------------------------------------------------
// Fixed-step RK4 for y' = G(t) y
// ---------------------------------------------------------------------------

/// Uniform-grid trajectory, states stored row-major (one row per time point).
struct AmplitudeTrajectory {
    double dt = 0.0;
    std::size_t dimension = 0;
    std::vector<Complex> data;
    double step_error_estimate = 0.0;

    std::size_t size() const { return dimension == 0 ? 0 : data.size() / dimension; }
    double time(std::size_t i) const { return static_cast<double>(i) * dt; }
    double t_max() const { return size() == 0 ? 0.0 : time(size() - 1); }

    std::vector<double> times() const {
        std::vector<double> t(size());
        for (std::size_t i = 0; i < t.size(); ++i) t[i] = time(i);
        return t;
    }
    std::span<const Complex> state(std::size_t i) const {
        return {data.data() + i * dimension, dimension};
    }
    std::span<const Complex> back() const { return state(size() - 1); }

    std::vector<Complex> component(std::size_t k) const {
        std::vector<Complex> c(size());
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = data[i * dimension + k];
        return c;
    }

    /// Appends a continuation whose first state equals this trajectory's last.
    void append(const AmplitudeTrajectory& next) {
        if (next.dimension != dimension || std::abs(next.dt - dt) > 1e-15 * dt)
            throw ValidationError("AmplitudeTrajectory::append: grid mismatch");
        data.insert(data.end(), next.data.begin() + static_cast<std::ptrdiff_t>(dimension), next.data.end());
        step_error_estimate += next.step_error_estimate;
    }

    /// ‖y(t)‖ never increases by more than `slack` between stored steps.
    bool norm_nonincreasing(double slack = 1e-12) const {
        double prev = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < size(); ++i) {
            double nrm = 0.0;
            for (const auto& v : state(i)) nrm += std::norm(v);
            if (nrm > prev + slack) return false;
            prev = nrm;
        }
        return true;
    }
};

template <class F>
concept GeneratorFunction = std::invocable<F, double> && std::convertible_to<std::invoke_result_t<F, double>, Matrix>;

namespace detail {

inline void validate_ode_args(std::size_t dim, std::size_t y0_size, double t_max, std::size_t n_steps) {
    if (n_steps < 10) throw ValidationError("integrate_linear_ode: n_steps must be >= 10");
    if (!(t_max > 0.0)) throw ValidationError("integrate_linear_ode: t_max must be > 0");
    if (dim != y0_size) throw ValidationError("integrate_linear_ode: generator dimension does not match y0");
}

inline double max_abs_diff(std::span<const Complex> a, std::span<const Complex> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace detail

/// Classical RK4 for a time-dependent generator. Every tenth step is
/// repeated as two half steps; the largest disagreement must stay below
/// `ode_tolerance`. The reported estimate is that local bound accumulated
/// over all steps.
template <GeneratorFunction F>
AmplitudeTrajectory integrate_linear_ode(F&& generator, std::span<const Complex> y0, double t_max, std::size_t n_steps,
                                         double ode_tolerance = defaults::ode_tolerance) {
    const std::size_t dim = y0.size();
    detail::validate_ode_args(static_cast<Matrix>(generator(0.0)).size(), dim, t_max, n_steps);

    AmplitudeTrajectory traj;
    traj.dt = t_max / static_cast<double>(n_steps);
    traj.dimension = dim;
    traj.data.reserve((n_steps + 1) * dim);
    traj.data.insert(traj.data.end(), y0.begin(), y0.end());

    std::vector<Complex> k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
    auto rk4_step = [&](std::span<const Complex> y, double t, double h, std::vector<Complex>& out) {
        const Matrix g0 = generator(t);
        const Matrix gm = generator(t + 0.5 * h);
        const Matrix g1 = generator(t + h);
        g0.apply(y.data(), k1.data());
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
        gm.apply(tmp.data(), k2.data());
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
        gm.apply(tmp.data(), k3.data());
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + h * k3[i];
        g1.apply(tmp.data(), k4.data());
        out.resize(dim);
        for (std::size_t i = 0; i < dim; ++i) out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    };

    std::vector<Complex> y(y0.begin(), y0.end()), next, half, twice;
    double worst_local = 0.0;
    for (std::size_t s = 0; s < n_steps; ++s) {
        const double t = static_cast<double>(s) * traj.dt;
        rk4_step(y, t, traj.dt, next);
        if (s % 10 == 0) {
            rk4_step(y, t, 0.5 * traj.dt, half);
            rk4_step(half, t + 0.5 * traj.dt, 0.5 * traj.dt, twice);
            worst_local = std::max(worst_local, detail::max_abs_diff(next, twice));
        }
        y.swap(next);
        traj.data.insert(traj.data.end(), y.begin(), y.end());
    }
    if (worst_local > ode_tolerance)
        throw StepErrorExceeded("integrate_linear_ode: step-halving disagreement " + std::to_string(worst_local) +
                                " exceeds tolerance " + std::to_string(ode_tolerance));
    traj.step_error_estimate = worst_local * static_cast<double>(n_steps);
    return traj;
}

/// Constant generator: the RK4 step is the degree-4 Taylor polynomial of
/// exp(hG), applied as one precomputed matrix.
inline AmplitudeTrajectory integrate_linear_ode(const Matrix& generator, std::span<const Complex> y0, double t_max,
                                                std::size_t n_steps, double ode_tolerance = defaults::ode_tolerance) {
    const std::size_t dim = y0.size();
    detail::validate_ode_args(generator.size(), dim, t_max, n_steps);

    auto taylor4 = [&](double h) {
        const Matrix hg = Complex{h} * generator;
        Matrix term = Matrix::identity(dim);
        Matrix acc = term;
        for (int k = 1; k <= 4; ++k) {
            term = Complex{1.0 / k} * (hg * term);
            acc = acc + term;
        }
        return acc;
    };

    AmplitudeTrajectory traj;
    traj.dt = t_max / static_cast<double>(n_steps);
    traj.dimension = dim;
    const Matrix full = taylor4(traj.dt);
    const Matrix half = taylor4(0.5 * traj.dt);

    traj.data.resize((n_steps + 1) * dim);
    std::copy(y0.begin(), y0.end(), traj.data.begin());
    std::vector<Complex> a(dim), b(dim);
    double worst_local = 0.0;
    for (std::size_t s = 0; s < n_steps; ++s) {
        const Complex* y = traj.data.data() + s * dim;
        Complex* out = traj.data.data() + (s + 1) * dim;
        full.apply(y, out);
        if (s % 10 == 0) {
            half.apply(y, a.data());
            half.apply(a.data(), b.data());
            worst_local = std::max(worst_local, detail::max_abs_diff({out, dim}, b));
        }
    }
    if (worst_local > ode_tolerance)
        throw StepErrorExceeded("integrate_linear_ode: step-halving disagreement " + std::to_string(worst_local) +
                                " exceeds tolerance " + std::to_string(ode_tolerance));
    traj.step_error_estimate = worst_local * static_cast<double>(n_steps);
    return traj;
}

// ---------------------------------------------------------------------------
// Quadrature of e^{i·phase·t}·s(t) on a uniform grid
// ---------------------------------------------------------------------------

struct QuadratureResult {
    Complex value;
    double error_estimate = 0.0;
};

namespace detail {

// ∫₀¹ e^{iθu}(1−u) du and ∫₀¹ e^{iθu} u du.
inline std::pair<Complex, Complex> linear_phase_weights(double theta) {
    const Complex it{0.0, theta};
    if (std::abs(theta) < 0.5) {
        Complex e = 0.0, w1 = 0.0, term = 1.0;  // term = (iθ)^n / n!
        for (int n = 0; n < 24; ++n) {
            e += term / static_cast<double>(n + 1);
            w1 += term / static_cast<double>(n + 2);
            term *= it / static_cast<double>(n + 1);
        }
        return {e - w1, w1};
    }
    const Complex ex = std::exp(it);
    const Complex e = (ex - 1.0) / it;
    const Complex w1 = ex / it + (ex - 1.0) / (theta * theta);
    return {e - w1, w1};
}

}  // namespace detail

/// ∫₀^{t_max} e^{i·phase·t} s(t) dt for each phase, samples on t_k = k·dt.
///
/// Each segment integrates the linear interpolant of s against the exact
/// phase factor (plain trapezoid at phase 0). One Richardson step against
/// the 2·dt rule is applied while the per-step phase stays below 0.5 rad;
/// the error estimate is |I_h − I_2h| / 3.
inline std::vector<QuadratureResult> time_quadrature(std::span<const Complex> samples, double dt,
                                                     std::span<const double> phases,
                                                     double tail_fraction = defaults::tail_fraction) {
    const std::size_t n = samples.empty() ? 0 : samples.size() - 1;  // intervals
    if (n < 2) throw ValidationError("time_quadrature: need at least three samples");
    if (!(dt > 0.0)) throw ValidationError("time_quadrature: dt must be > 0");

    double peak = 0.0;
    for (const auto& s : samples) peak = std::max(peak, std::abs(s));
    std::vector<QuadratureResult> out(phases.size());
    if (peak == 0.0) return out;
    if (std::abs(samples.back()) > tail_fraction * peak)
        throw TailNotDecayed("time_quadrature: |s(t_max)| / max|s| = " +
                             std::to_string(std::abs(samples.back()) / peak) + " exceeds tail fraction " +
                             std::to_string(tail_fraction));

    const std::size_t m = n / 2;           // coarse intervals
    const bool odd = (n % 2) == 1;
    constexpr std::size_t block = 2048;    // samples per cache block
    constexpr std::size_t resync = 256;    // exact phase refresh interval

    std::vector<Complex> even_sum(phases.size()), odd_sum(phases.size());
    for (std::size_t lo = 1; lo < n; lo += block) {
        const std::size_t hi = std::min(n, lo + block);
        for (std::size_t p = 0; p < phases.size(); ++p) {
            const double phi = phases[p];
            const Complex step = std::polar(1.0, phi * dt);
            Complex z;
            Complex ev = 0.0, od = 0.0;
            for (std::size_t k = lo; k < hi; ++k) {
                if (k == lo || (k - lo) % resync == 0) z = std::polar(1.0, phi * dt * static_cast<double>(k));
                const Complex term = samples[k] * z;
                if (k % 2 == 0) ev += term;
                else od += term;
                z *= step;
            }
            even_sum[p] += ev;
            odd_sum[p] += od;
        }
    }

    for (std::size_t p = 0; p < phases.size(); ++p) {
        const double phi = phases[p];
        const double theta = phi * dt;
        const auto [w0, w1] = detail::linear_phase_weights(theta);
        const Complex back_rot = std::polar(1.0, -theta);
        const Complex interior = w0 + w1 * back_rot;
        const Complex zn = std::polar(1.0, phi * dt * static_cast<double>(n));
        const Complex fine = dt * (w0 * samples[0] + interior * (even_sum[p] + odd_sum[p]) +
                                   w1 * back_rot * samples[n] * zn);

        // 2·dt rule over [0, t_{2m}], plus the last fine segment when n is odd.
        const auto [v0, v1] = detail::linear_phase_weights(2.0 * theta);
        const Complex back_rot2 = std::polar(1.0, -2.0 * theta);
        const Complex interior2 = v0 + v1 * back_rot2;
        const Complex z2m = std::polar(1.0, phi * dt * static_cast<double>(2 * m));
        Complex coarse_interior = even_sum[p];
        if (odd) coarse_interior -= samples[2 * m] * z2m;
        Complex coarse = 2.0 * dt * (v0 * samples[0] + interior2 * coarse_interior + v1 * back_rot2 * samples[2 * m] * z2m);
        if (odd) coarse += dt * z2m * (w0 * samples[2 * m] + w1 * samples[n]);

        const Complex diff = fine - coarse;
        out[p].error_estimate = std::abs(diff) / 3.0;
        out[p].value = (std::abs(2.0 * theta) <= 0.5) ? fine + diff / 3.0 : fine;
    }
    return out;
}

inline QuadratureResult time_quadrature(std::span<const Complex> samples, double dt, double phase,
                                        double tail_fraction = defaults::tail_fraction) {
    const double phases[1] = {phase};
    return time_quadrature(samples, dt, std::span<const double>(phases, 1), tail_fraction).front();
}

}  // namespace spectra
