#pragma once

#include <cmath>
#include <complex>

#include "liouville/errors.hpp"
#include "liouville/geometry.hpp"
#include "liouville/hypergeometric.hpp"
#include "liouville/kernels.hpp"
#include "liouville/quadrature.hpp"

namespace liouville {

// ---------------------------------------------------------------------------
// Exact w = 1 cylinder tadpole I_b = int_M e^{4 b^2 g(u)} du, in its three
// equivalent representations. The series is the reference; the two integral
// forms cross-validate the quadrature engine against it.
// ---------------------------------------------------------------------------

// I_b = (2 / (pi b^2)) 3F2(2b^2, 2b^2, b^2; 1, b^2+1; 1); converges for b^2 < 1/2.
inline SeriesValue tadpole_Ib(double b) {
    if (!(b > 0) || !(b * b < 0.5))
        throw domain_error("tadpole_Ib: requires 0 < b < 1/sqrt(2)");
    const double b2 = b * b;
    SeriesValue f = hypergeometric_pFq({{2 * b2, 2 * b2, b2}, {1.0, b2 + 1.0}, 1.0});
    f.value *= 2.0 / (pi * b2);
    return f;
}

// I_b = 4 int_0^inf e^{-2 pi b^2 t} 2F1(2b^2, 2b^2; 1; e^{-2 pi t}) dt.
inline IntegrationResult tadpole_Ib_t_integral(double b, const QuadratureConfig& cfg) {
    if (!(b > 0) || !(b * b < 0.5))
        throw domain_error("tadpole_Ib_t_integral: requires 0 < b < 1/sqrt(2)");
    const double b2 = b * b;
    auto f = [b2](double t) -> complex {
        const double y = std::exp(-2.0 * pi * t);
        return 4.0 * std::exp(-2.0 * pi * b2 * t) * hyp2f1(2 * b2, 2 * b2, 1.0, y).value;
    };
    std::vector<Singular1D> sing;
    if (4.0 * b2 > 1.0) sing.push_back({0.0, 4.0 * b2 - 1.0});
    return integrate_tail(f, 2.0 * pi * b2, cfg, sing);
}

// I_b = (2/pi) int_0^1 y^{b^2 - 1} 2F1(2b^2, 2b^2; 1; y) dy.
inline IntegrationResult tadpole_Ib_y_integral(double b, const QuadratureConfig& cfg) {
    if (!(b > 0) || !(b * b < 0.5))
        throw domain_error("tadpole_Ib_y_integral: requires 0 < b < 1/sqrt(2)");
    const double b2 = b * b;
    auto f = [b2](double y) -> complex {
        return 2.0 / pi * std::pow(y, b2 - 1.0) * hyp2f1(2 * b2, 2 * b2, 1.0, y).value;
    };
    long evals = 0;
    std::vector<Singular1D> sing{{0.0, 1.0 - b2}, {1.0, std::max(0.0, 4.0 * b2 - 1.0)}};
    IntegrationResult r = adaptive_1d(f, 0.0, 1.0, sing, cfg.abs_tol, cfg.rel_tol,
                                      cfg.max_evals, cfg.delta_lc, &evals);
    r.evals = evals;
    return r;
}

// ---------------------------------------------------------------------------
// Neutral two-point function G^{12}, G^{21} and the vacuum commutator.
// ---------------------------------------------------------------------------

enum class PairOrder { order12, order21 };

// G^{12}_alpha(t,x) = e^{4 alpha^2 g(i t, x)};  G^{21} swaps the boundary
// value to g(-i t, -x). Requires t +- x off 2Z by the light-cone margin.
inline complex neutral_two_point(double alpha, double t, double x, PairOrder order,
                                 double delta_lc = 1e-9) {
    const complex g = order == PairOrder::order12 ? green_boundary(t, x, delta_lc)
                                                  : green_boundary(-t, -x, delta_lc);
    return std::exp(4.0 * alpha * alpha * g);
}

// <[V_alpha(0,0), V_{-alpha}(t,x)]>: zero in the spacelike wedge 0 < t < x,
// and -2i sin(2 pi alpha^2) (4 sin(pi(t+x)/2) sin(pi(t-x)/2))^{-2 alpha^2} in
// the timelike wedge 0 < x < t < 2-x. The argument is first mapped into
// those wedges by the exact symmetries x -> x+2, x -> -x (both invariant) and
// t -> -t (odd); outside their union the closed form is not available.
inline complex vacuum_commutator(double alpha, double t, double x, double delta_lc = 1e-9) {
    if (boundary_lightcone_distance(t, x) <= delta_lc)
        throw light_cone_point("vacuum_commutator: (t,x) on the light-cone set");
    double sign = 1.0;
    if (t < 0) {
        t = -t;
        sign = -1.0;
    }
    x = std::abs(wrap2(x));
    const double a2 = alpha * alpha;
    if (t < x) return {0.0, 0.0};
    if (x < t && t < 2.0 - x) {
        const double prod = 4.0 * std::sin(0.5 * pi * (t + x)) * std::sin(0.5 * pi * (t - x));
        return sign * complex(0.0, -2.0 * std::sin(2.0 * pi * a2)) * std::pow(prod, -2.0 * a2);
    }
    throw domain_error("vacuum_commutator: point outside the covered wedges (t > 2 - x)");
}

} // namespace liouville
