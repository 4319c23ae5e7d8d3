#pragma once

#include <cmath>
#include <vector>

#include "liouville/errors.hpp"

namespace liouville {

// Rising factorial (a)_n.
inline double pochhammer(double a, long n) {
    if (n < 0) throw domain_error("pochhammer: n must be >= 0");
    double r = 1.0;
    for (long k = 0; k < n; ++k) r *= a + static_cast<double>(k);
    return r;
}

struct HypergeometricSpec {
    std::vector<double> top;
    std::vector<double> bottom;
    double z = 0.0;
};

// Series evaluation result; converged = false flags SlowConvergence (the term
// cap was reached before the terms fell below 1e-16 of the partial sum).
struct SeriesValue {
    double value = 0.0;
    long terms = 0;
    bool converged = false;
};

namespace hyp_detail {
inline constexpr long term_cap = 10000000;

inline bool is_nonpositive_integer(double a) {
    return a <= 0.0 && std::abs(a - std::round(a)) < 1e-12;
}
} // namespace hyp_detail

// Generalized hypergeometric series pFq(top; bottom; z) by direct summation
// with the term recurrence. No analytic continuation beyond |z| <= 1.
inline SeriesValue hypergeometric_pFq(const HypergeometricSpec& spec) {
    for (double b : spec.bottom)
        if (hyp_detail::is_nonpositive_integer(b))
            throw domain_error("hypergeometric_pFq: bottom parameter is a nonpositive integer");

    bool terminating = false;
    for (double a : spec.top)
        if (hyp_detail::is_nonpositive_integer(a)) terminating = true;

    const std::size_t p = spec.top.size(), q = spec.bottom.size();
    if (!terminating) {
        if (p > q + 1 && spec.z != 0.0)
            throw domain_error("hypergeometric_pFq: divergent series (p > q+1)");
        if (p == q + 1) {
            if (std::abs(spec.z) > 1.0)
                throw domain_error("hypergeometric_pFq: |z| > 1 outside the convergence disk");
            if (std::abs(spec.z) == 1.0) {
                double balance = 0.0;
                for (double b : spec.bottom) balance += b;
                for (double a : spec.top) balance -= a;
                if (spec.z == 1.0 && balance <= 0.0)
                    throw domain_error("hypergeometric_pFq: divergent at z = 1 (balance <= 0)");
            }
        }
    }

    double sum = 1.0, term = 1.0;
    long n = 0;
    for (; n < hyp_detail::term_cap; ++n) {
        double ratio = spec.z / (n + 1.0);
        for (double a : spec.top) ratio *= a + static_cast<double>(n);
        for (double b : spec.bottom) ratio /= b + static_cast<double>(n);
        term *= ratio;
        if (term == 0.0) return {sum, n + 1, true};
        sum += term;
        if (std::abs(term) < 1e-16 * std::abs(sum)) return {sum, n + 1, true};
    }
    return {sum, n, false};
}

// Gauss 2F1 for real parameters and z in [0, 1]. Near z = 1 the direct series
// degrades, so the standard 1-z linear transformation is applied when
// c - a - b is not an integer.
inline SeriesValue hyp2f1(double a, double b, double c, double z) {
    if (z < 0.0 || z > 1.0) {
        if (std::abs(z) < 1.0) return hypergeometric_pFq({{a, b}, {c}, z});
        throw domain_error("hyp2f1: z outside [-1, 1)");
    }
    const double s = c - a - b;
    const bool s_integer = std::abs(s - std::round(s)) < 1e-10;
    if (z == 1.0) {
        if (s <= 0.0) throw domain_error("hyp2f1: divergent at z = 1");
        const double v = std::tgamma(c) * std::tgamma(s) / (std::tgamma(c - a) * std::tgamma(c - b));
        return {v, 1, true};
    }
    if (z < 0.95 || s_integer) return hypergeometric_pFq({{a, b}, {c}, z});

    const double omz = 1.0 - z;
    SeriesValue f1 = hypergeometric_pFq({{a, b}, {a + b - c + 1.0}, omz});
    SeriesValue f2 = hypergeometric_pFq({{c - a, c - b}, {s + 1.0}, omz});
    const double g1 = std::tgamma(c) * std::tgamma(s) / (std::tgamma(c - a) * std::tgamma(c - b));
    const double g2 = std::tgamma(c) * std::tgamma(-s) / (std::tgamma(a) * std::tgamma(b));
    return {g1 * f1.value + g2 * std::pow(omz, s) * f2.value, f1.terms + f2.terms,
            f1.converged && f2.converged};
}

} // namespace liouville
