#pragma once

#include <cmath>
#include <complex>

#include "liouville/errors.hpp"

namespace liouville {

using complex = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;

// Reduce a real number modulo 2 into [-1, 1).
inline double wrap2(double x) {
    double r = std::fmod(x + 1.0, 2.0);
    if (r < 0) r += 2.0;
    return r - 1.0;
}

// Reduce modulo 2T into [-T, T).
inline double wrap_period(double t, double period_half) {
    const double p = 2.0 * period_half;
    double r = std::fmod(t + period_half, p);
    if (r < 0) r += p;
    return r - period_half;
}

// Wrapped spatial distance d_1(xi) = min_m |xi + 2m|.
inline double d1(double xi) { return std::abs(wrap2(xi)); }

// A point on the cylinder M = R x [-1,1], x stored reduced mod 2 into [-1,1).
struct CylinderPoint {
    double t = 0.0;
    double x = 0.0;

    CylinderPoint() = default;
    CylinderPoint(double t_, double x_) : t(t_), x(wrap2(x_)) {}
};

inline bool operator==(const CylinderPoint& a, const CylinderPoint& b) {
    return a.t == b.t && a.x == b.x;
}

// Geodesic distance on M with the wrapped metric.
inline double geodesic_distance(const CylinderPoint& a, const CylinderPoint& b) {
    return std::hypot(a.t - b.t, d1(a.x - b.x));
}

// Spacelike separation on the Lorentzian cylinder: |t-s| < d_1(x-y).
inline bool spacelike(const CylinderPoint& a, const CylinderPoint& b, double margin = 0.0) {
    return std::abs(a.t - b.t) + margin < d1(a.x - b.x);
}

// Cylinder translation T_{a,theta}.
inline CylinderPoint translate(const CylinderPoint& p, double a, double theta) {
    return CylinderPoint(p.t + a, p.x + theta);
}

// Complex time argument for the analytically continued Green's function.
struct ComplexTimePoint {
    complex tau{0.0, 0.0};
    double x = 0.0;

    ComplexTimePoint() = default;
    ComplexTimePoint(complex tau_, double x_) : tau(tau_), x(wrap2(x_)) {}
};

// Finite torus M_T = [-T,T] x [-1,1]; N is the Fourier cutoff where applicable.
struct TorusSpec {
    double T = 1.0;
    int N = 1;

    TorusSpec() = default;
    TorusSpec(double T_, int N_ = 1) : T(T_), N(N_) {
        if (!(T > 0)) throw domain_error("TorusSpec: T must be positive");
        if (N < 1) throw domain_error("TorusSpec: N must be >= 1");
    }
};

// d(tau,x) = min over sign and k of |tau +- i x - 2ik|; the distance to the
// light-cone set controlling the log-singular factors of g.
inline double lightcone_distance(complex tau, double x) {
    const double a = tau.real();
    const double dplus = std::hypot(a, wrap2(tau.imag() + x));
    const double dminus = std::hypot(a, wrap2(tau.imag() - x));
    return std::min(dplus, dminus);
}

// Distance of a boundary point (i t, x) to the light-cone set, i.e.
// min over sign of dist(t +- x, 2Z).
inline double boundary_lightcone_distance(double t, double x) {
    return std::min(d1(t + x), d1(t - x));
}

} // namespace liouville
