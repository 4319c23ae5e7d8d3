#pragma once

#include <array>
#include <cmath>
#include <vector>

namespace liouville {

// Gauss-Legendre nodes/weights on [-1,1], computed once per order by Newton
// iteration on P_n. Avoids hardcoded tables.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

inline GaussRule make_gauss_legendre(int n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev-based initial guess.
        double x = std::cos(3.141592653589793 * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

// Shared rules for the adaptive engine (order pair for error estimation).
inline const GaussRule& gauss15() {
    static const GaussRule r = make_gauss_legendre(15);
    return r;
}

inline const GaussRule& gauss7() {
    static const GaussRule r = make_gauss_legendre(7);
    return r;
}

} // namespace liouville
