#pragma once

#include <cmath>
#include <complex>
#include <string>

#include "liouville/errors.hpp"
#include "liouville/geometry.hpp"

namespace liouville {

// Series truncation policy shared by the exponentially convergent sums below:
// stop once the next term drops below 1e-16 of the running magnitude.
namespace series {
inline constexpr double rel_cut = 1e-16;
inline constexpr long max_terms = 1000000;
} // namespace series

// ---------------------------------------------------------------------------
// Infinite-volume cylinder Green's function and its continuation.
// ---------------------------------------------------------------------------

// g(t,x) = -pi|t|/2 - log|1 - e^{-pi|t| + i pi x}| for (t,x) outside {0} x 2Z.
inline double green_euclidean(const CylinderPoint& p, double delta_lc = 1e-9) {
    const double r = std::hypot(p.t, d1(p.x));
    if (r <= delta_lc)
        throw singular_point("green_euclidean: point within delta_lc of a coincidence");
    const double at = std::abs(p.t);
    const complex z = 1.0 - std::exp(complex(-pi * at, pi * p.x));
    return -0.5 * pi * at - std::log(std::abs(z));
}

inline double green_euclidean(double t, double x, double delta_lc = 1e-9) {
    return green_euclidean(CylinderPoint(t, x), delta_lc);
}

// Analytic continuation to the open right half-plane in the time coordinate,
// with the principal branch of log on C \ (-inf, 0]. The theory guarantees
// both log arguments stay in the open right half-plane; that is checked here
// and treated as an internal failure if violated.
inline complex green_analytic(const ComplexTimePoint& p) {
    if (!(p.tau.real() > 0))
        throw domain_error("green_analytic: Re(tau) must be positive");
    const complex zp = 1.0 - std::exp(-pi * p.tau + complex(0.0, pi * p.x));
    const complex zm = 1.0 - std::exp(-pi * p.tau - complex(0.0, pi * p.x));
    if (!(zp.real() > 0.0) || !(zm.real() > 0.0))
        throw internal_error("green_analytic: log argument left the right half-plane");
    return -0.5 * pi * p.tau - 0.5 * std::log(zp) - 0.5 * std::log(zm);
}

inline complex green_analytic(complex tau, double x) {
    return green_analytic(ComplexTimePoint(tau, x));
}

// Boundary value on the imaginary axis: g(i t, x), defined for t +- x off 2Z.
inline complex green_boundary(double t, double x, double delta_lc = 1e-9) {
    if (boundary_lightcone_distance(t, x) <= delta_lc)
        throw light_cone_point("green_boundary: (t,x) within delta_lc of the light-cone set");
    const complex zp = 1.0 - std::exp(complex(0.0, -pi * (t + x)));
    const complex zm = 1.0 - std::exp(complex(0.0, -pi * (t - x)));
    return complex(0.0, -0.5 * pi * t) - 0.5 * std::log(zp) - 0.5 * std::log(zm);
}

// Reflected convention: for Re(tau) < 0 evaluate at -Re(tau) + i Im(tau); on
// the imaginary axis take the boundary value. This is the time-ordering
// convention, not a continuation across the axis.
inline complex green_reflected(complex tau, double x, double delta_lc = 1e-9) {
    if (tau.real() > 0) return green_analytic(tau, x);
    if (tau.real() < 0) return green_analytic(complex(-tau.real(), tau.imag()), x);
    return green_boundary(tau.imag(), x, delta_lc);
}

// ---------------------------------------------------------------------------
// Lattice and Fourier identities from the torus analysis.
// ---------------------------------------------------------------------------

// sum_k e^{i k theta} / (k^2 + a^2), evaluated through the Poisson-summed
// representation (pi/a) sum_k e^{-a |2 pi k + theta|}. Real and positive.
inline double lattice_sum_1d(double a, double theta) {
    if (!(a > 0)) throw domain_error("lattice_sum_1d: a must be positive");
    const long k0 = std::lround(-theta / (2.0 * pi));
    double acc = std::exp(-a * std::abs(2.0 * pi * static_cast<double>(k0) + theta));
    for (long j = 1; j < series::max_terms; ++j) {
        const double up = std::exp(-a * std::abs(2.0 * pi * static_cast<double>(k0 + j) + theta));
        const double dn = std::exp(-a * std::abs(2.0 * pi * static_cast<double>(k0 - j) + theta));
        acc += up + dn;
        if (up + dn < series::rel_cut * acc) break;
    }
    return pi / a * acc;
}

// Closed form of (1/pi) sum_{m != 0} e^{i m theta} / m^2 on [-2pi, 2pi].
inline double zeta_cos_identity(double theta) {
    if (std::abs(theta) > 2.0 * pi + 1e-12)
        throw domain_error("zeta_cos_identity: |theta| must be <= 2*pi");
    return pi / 3.0 - std::abs(theta) + theta * theta / (2.0 * pi);
}

// ---------------------------------------------------------------------------
// Heat kernel on the torus M_T, in spectral and image (theta-dual) form.
// The kernel factorizes into 1D theta functions in each coordinate.
// ---------------------------------------------------------------------------

enum class HeatKernelMode { spectral, image, automatic };

namespace detail {

// (1/2L) sum_m exp(-s pi^2 m^2 / L^2) cos(pi m x / L)
inline double theta1d_spectral(double L, double s, double x) {
    double acc = 1.0;
    for (long m = 1; m < series::max_terms; ++m) {
        const double term =
            2.0 * std::exp(-s * pi * pi * m * m / (L * L)) * std::cos(pi * m * x / L);
        acc += term;
        if (std::exp(-s * pi * pi * m * m / (L * L)) < 0.5 * series::rel_cut * std::abs(acc) &&
            m > 2)
            break;
    }
    return acc / (2.0 * L);
}

// (1 / (2 sqrt(pi s))) sum_k exp(-(x - 2Lk)^2 / (4 s))
inline double theta1d_image(double L, double s, double x) {
    const long k0 = std::lround(x / (2.0 * L));
    auto term = [&](long k) {
        const double d = x - 2.0 * L * static_cast<double>(k);
        return std::exp(-d * d / (4.0 * s));
    };
    double acc = term(k0);
    for (long j = 1; j < series::max_terms; ++j) {
        const double t = term(k0 + j) + term(k0 - j);
        acc += t;
        if (t < series::rel_cut * acc && j > 1) break;
    }
    return acc / (2.0 * std::sqrt(pi * s));
}

inline double theta1d(double L, double s, double x, HeatKernelMode mode) {
    if (mode == HeatKernelMode::automatic)
        mode = s < L * L / pi ? HeatKernelMode::image : HeatKernelMode::spectral;
    return mode == HeatKernelMode::image ? theta1d_image(L, s, x) : theta1d_spectral(L, s, x);
}

} // namespace detail

// p_s(x, y) on M_T; x lives on the time circle of half-length T, y on the
// spatial circle of half-length 1. Nonnegative, unit total mass.
inline double heat_kernel(const TorusSpec& spec, double s, double x, double y,
                          HeatKernelMode mode = HeatKernelMode::automatic) {
    if (!(s > 0)) throw domain_error("heat_kernel: s must be positive");
    if (mode == HeatKernelMode::automatic) {
        const double l = std::min(spec.T, 1.0);
        mode = s < l * l / pi ? HeatKernelMode::image : HeatKernelMode::spectral;
    }
    return detail::theta1d(spec.T, s, x, mode) * detail::theta1d(1.0, s, y, mode);
}

// ---------------------------------------------------------------------------
// Torus Green's functions.
// ---------------------------------------------------------------------------

// Truncated double Fourier sum G_{T,N}(u,v); real by the (m,n) <-> (-m,-n)
// pairing, symmetric in (u,v) by evenness of the cosine.
inline double torus_green_truncated(const TorusSpec& spec, const CylinderPoint& u,
                                    const CylinderPoint& v) {
    const double alpha = pi * (u.t - v.t) / spec.T;
    const double beta = pi * (u.x - v.x);
    const double T2 = spec.T * spec.T;
    double acc = 0.0;
    for (long m = -spec.N; m <= spec.N; ++m) {
        for (long n = -spec.N; n <= spec.N; ++n) {
            if (m == 0 && n == 0) continue;
            const double lambda = pi * pi * (static_cast<double>(m) * m / T2 +
                                             static_cast<double>(n) * n);
            acc += std::cos(alpha * m + beta * n) / lambda;
        }
    }
    return pi / (2.0 * spec.T) * acc;
}

// Exact (N -> infinity) torus Green's function g_T(dt, dx), via the zero-mode
// closed form plus the resummed n-series. The naive sum_n cos(pi n x)/n piece
// is conditionally convergent; it is replaced by its closed form
// -log|1 - e^{-pi|t| + i pi x}|, leaving an absolutely convergent remainder
// with terms 2 cosh(pi n t)/(n (e^{2 pi n T} - 1)).
inline double torus_green(const TorusSpec& spec, const CylinderPoint& u, const CylinderPoint& v,
                          double delta_lc = 1e-9) {
    const double T = spec.T;
    const double dt = wrap_period(u.t - v.t, T);
    const double dx = wrap2(u.x - v.x);
    if (std::hypot(dt, d1(dx)) <= delta_lc)
        throw singular_point("torus_green: coincident points");
    const double at = std::abs(dt);

    double acc;
    if (dt != 0.0) {
        acc = pi * T / 6.0 - 0.5 * pi * at + pi * dt * dt / (4.0 * T);
        acc -= std::log(std::abs(1.0 - std::exp(complex(-pi * at, pi * dx))));
        for (long n = 1; n < series::max_terms; ++n) {
            const double decay = std::exp(-2.0 * pi * n * T);
            const double num =
                std::exp(pi * n * (at - 2.0 * T)) + std::exp(-pi * n * (at + 2.0 * T));
            const double term = std::cos(pi * n * dx) / n * num / (1.0 - decay);
            acc += term;
            if (num / (1.0 - decay) < series::rel_cut * std::max(1.0, std::abs(acc))) break;
        }
    } else {
        // dt = 0 split: closed form S(x) = -log|1 - e^{i pi x}| plus the
        // absolutely convergent correction with c_n(T) = 2/(n(e^{2 pi T n}-1)).
        acc = pi * T / 6.0 - std::log(std::abs(1.0 - std::exp(complex(0.0, pi * dx))));
        for (long n = 1; n < series::max_terms; ++n) {
            const double e = std::exp(-2.0 * pi * T * n);
            const double cn = 2.0 * e / (n * (1.0 - e));
            acc += std::cos(pi * n * dx) * cn;
            if (cn < series::rel_cut * std::max(1.0, std::abs(acc))) break;
        }
    }
    return acc;
}

} // namespace liouville
