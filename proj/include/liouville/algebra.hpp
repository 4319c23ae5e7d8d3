#pragma once

#include <atomic>
#include <cmath>
#include <string>
#include <vector>

#include "liouville/correlators.hpp"
#include "liouville/errors.hpp"
#include "liouville/geometry.hpp"
#include "liouville/oracles.hpp"
#include "liouville/quadrature.hpp"

namespace liouville {

// ---------------------------------------------------------------------------
// Compactly supported bump test functions: product of 1D profiles
// exp(-1/(1-s^2)) rescaled to the half-widths and normalized to unit mass.
// ---------------------------------------------------------------------------

namespace bump_detail {

inline double profile1(double s) {
    if (std::abs(s) >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - s * s));
}

// piecewise-linear tabulation of the 1D profile; sampling draws from the
// tabulated density exactly (inverse CDF per linear cell) and the integrand
// carries the exact ratio profile/table, so no tabulation bias enters
struct ProfileTable {
    static constexpr int cells = 2048;
    std::vector<double> f;   // node values, size cells+1
    std::vector<double> cum; // cumulative trapezoid masses, size cells+1
    double total = 0.0;

    ProfileTable() {
        f.resize(cells + 1);
        cum.resize(cells + 1);
        for (int i = 0; i <= cells; ++i) f[i] = profile1(-1.0 + 2.0 * i / cells);
        cum[0] = 0.0;
        const double h = 2.0 / cells;
        for (int i = 0; i < cells; ++i) cum[i + 1] = cum[i] + 0.5 * (f[i] + f[i + 1]) * h;
        total = cum[cells];
    }

    static const ProfileTable& instance() {
        static const ProfileTable t;
        return t;
    }

    // density of the tabulated (piecewise-linear) profile, normalized
    double pdf(double s) const {
        if (std::abs(s) >= 1.0) return 0.0;
        const double u = (s + 1.0) / 2.0 * cells;
        const int i = std::min(static_cast<int>(u), cells - 1);
        const double frac = u - i;
        return (f[i] * (1.0 - frac) + f[i + 1] * frac) / total;
    }

    // inverse CDF of the tabulated profile
    double sample(double u) const {
        const double target = u * total;
        int lo = 0, hi = cells;
        while (hi - lo > 1) {
            const int mid = (lo + hi) / 2;
            (cum[mid] <= target ? lo : hi) = mid;
        }
        const double h = 2.0 / cells;
        const double rest = target - cum[lo];
        const double f0 = f[lo], f1 = f[lo + 1];
        // solve 0.5*(f0 + flin(z)) * z = rest on the cell, z in [0,h]
        double z;
        const double slope = (f1 - f0) / h;
        if (std::abs(slope) < 1e-14 * std::max(f0, 1e-300)) {
            z = f0 > 0 ? rest / f0 : 0.5 * h;
        } else {
            const double disc = f0 * f0 + 2.0 * slope * rest;
            z = (std::sqrt(std::max(disc, 0.0)) - f0) / slope;
        }
        z = std::min(std::max(z, 0.0), h);
        return -1.0 + 2.0 * static_cast<double>(lo) / cells + z;
    }
};

// integral of the exact 1D profile, for unit-mass normalization
inline double profile1_mass() {
    static const double value = [] {
        long evals = 0;
        auto r = adaptive_1d([](double s) -> complex { return profile1(s); }, -1.0, 1.0, {},
                             1e-14, 1e-13, 2000000, 1e-15, &evals);
        return r.value.real();
    }();
    return value;
}

} // namespace bump_detail

struct BumpFunction {
    CylinderPoint center;
    double eps_t = 0.1;
    double eps_x = 0.1;

    BumpFunction() = default;
    BumpFunction(CylinderPoint c, double et, double ex) : center(c), eps_t(et), eps_x(ex) {
        if (!(eps_t > 0) || !(eps_x > 0))
            throw domain_error("BumpFunction: half-widths must be positive");
        if (eps_x > 1.0) throw domain_error("BumpFunction: spatial half-width exceeds the circle");
    }

    double normalization() const {
        const double m = bump_detail::profile1_mass();
        return 1.0 / (m * m * eps_t * eps_x);
    }

    double value(const CylinderPoint& u) const {
        const double st = (u.t - center.t) / eps_t;
        const double sx = wrap2(u.x - center.x) / eps_x;
        return normalization() * bump_detail::profile1(st) * bump_detail::profile1(sx);
    }

    // draw from the tabulated profile; returns the sampling pdf on M
    double sample(double u1, double u2, CylinderPoint& out) const {
        const auto& tab = bump_detail::ProfileTable::instance();
        const double st = tab.sample(u1);
        const double sx = tab.sample(u2);
        out = CylinderPoint(center.t + eps_t * st, center.x + eps_x * sx);
        return tab.pdf(st) * tab.pdf(sx) / (eps_t * eps_x);
    }
};

struct SmearedFactor {
    BumpFunction bump;
    int n = 0;              // integer charge index; the charge is b*n
    complex coeff{1.0, 0.0}; // test function = coeff * bump
};

struct SmearedMonomial {
    std::vector<SmearedFactor> factors;

    bool empty() const { return factors.empty(); }
    int total_n() const {
        int s = 0;
        for (const auto& f : factors) s += f.n;
        return s;
    }
};

// star reverses the factor order and conjugates the test functions
inline SmearedMonomial star(const SmearedMonomial& m) {
    SmearedMonomial out;
    out.factors.assign(m.factors.rbegin(), m.factors.rend());
    for (auto& f : out.factors) f.coeff = std::conj(f.coeff);
    return out;
}

inline SmearedMonomial operator*(const SmearedMonomial& a, const SmearedMonomial& b) {
    SmearedMonomial out = a;
    out.factors.insert(out.factors.end(), b.factors.begin(), b.factors.end());
    return out;
}

// ---------------------------------------------------------------------------
// Vacuum functional omega on ordered monomials, by importance-sampled Monte
// Carlo of the smeared Lorentzian correlator: externals are drawn from the
// bump densities, screening variables from per-sector mixtures as in the
// point-correlator evaluator. Samples violating the light-cone margin are
// discarded and counted; the run aborts if their rate becomes significant.
// ---------------------------------------------------------------------------

struct OmegaResult {
    complex value{0.0, 0.0};
    double error_estimate = 0.0;
    long evals = 0;
    long rejected = 0;
    bool converged = false;
};

inline OmegaResult omega(const SmearedMonomial& m, const ModelParams& params,
                         const QuadratureConfig& cfg) {
    params.validate();
    OmegaResult res;
    if (m.empty()) {
        res.value = {1.0, 0.0};
        res.converged = true;
        return res;
    }
    const double b = params.b;
    const double n_max = 1.0 / (std::sqrt(2.0) * b);
    for (const auto& f : m.factors)
        if (std::abs(f.n) >= n_max)
            throw charge_out_of_range("omega: |n| = " + std::to_string(std::abs(f.n)) +
                                      " outside I_b for b = " + std::to_string(b));
    const int k = static_cast<int>(m.factors.size());
    if (k > max_insertions)
        throw domain_error("omega: monomial length exceeds " + std::to_string(max_insertions));
    const int w = -m.total_n();
    if (w < 0) {
        res.converged = true;
        return res; // negative screening sector vanishes
    }
    if (w > max_screening_number)
        throw domain_error("omega: screening number exceeds " +
                           std::to_string(max_screening_number));

    complex coeff_prod{1.0, 0.0};
    for (const auto& f : m.factors) coeff_prod *= f.coeff;
    double p_max = 0.0;
    for (const auto& f : m.factors) p_max = std::max(p_max, 4.0 * b * b * std::abs(f.n));
    const double reject_limit =
        std::min(0.01, 10.0 * std::pow(cfg.delta_lc, 1.0 - std::min(p_max, 0.999)));

    std::vector<std::vector<int>> count_vectors;
    {
        // enumerate multisets of w over k+1 segments; vertical emptiness is
        // sample-dependent, so no segment is excluded a priori
        sector::Frame proto;
        proto.b = b;
        proto.delta_lc = cfg.delta_lc;
        for (const auto& f : m.factors) {
            proto.t.push_back(f.bump.center.t);
            proto.x.push_back(f.bump.center.x);
            proto.alpha.push_back(complex(b * f.n, 0.0));
        }
        // force all verticals non-empty for enumeration purposes
        for (int j = 0; j < k; ++j) proto.t[j] = j;
        sector::enumerate_counts(proto, w, count_vectors);
    }

    const double sigma_q = pi * b * b;
    const double s_max = 0.5;
    std::atomic<long> rejected{0};

    complex total{0.0, 0.0};
    double var_sum = 0.0;
    long evals = 0;
    bool converged = true;

    for (std::size_t ci = 0; ci < count_vectors.size(); ++ci) {
        const auto counts = count_vectors[ci];
        const auto vars = detail_corr::vars_of_counts(counts);

        McSampler sampler;
        sampler.dim = 2 * k + 2 * w;
        sampler.raw_dim = 2 * k + 4 * w;
        const auto factors = m.factors;
        sampler.map = [=](std::span<const double> uu, std::vector<double>& pt) {
            pt.resize(2 * k + 2 * w);
            double pdf = 1.0;
            for (int j = 0; j < k; ++j) {
                CylinderPoint u(0, 0);
                pdf *= factors[j].bump.sample(uu[2 * j], uu[2 * j + 1], u);
                pt[2 * j] = u.t;
                pt[2 * j + 1] = u.x;
            }
            // frame of the sampled externals, for line-aware screening draws
            sector::Frame f;
            f.b = b;
            f.delta_lc = cfg.delta_lc;
            for (int j = 0; j < k; ++j) {
                f.t.push_back(pt[2 * j]);
                f.x.push_back(pt[2 * j + 1]);
                f.alpha.push_back(complex(b * factors[j].n, 0.0));
            }
            std::vector<std::vector<detail_corr::McLine>> lines(k + 1);
            for (int s = 1; s < k; ++s) lines[s] = detail_corr::mc_lines_for_segment(f, s);
            for (int l = 0; l < w; ++l) {
                const int seg = vars[l].segment;
                const double* u4 = &uu[2 * k + 4 * l];
                double coord, beta;
                pdf *= detail_corr::sample_screening_var(f, lines[seg], seg, k, sigma_q, s_max,
                                                         u4, coord, beta);
                pt[2 * k + 2 * l] = coord;
                pt[2 * k + 2 * l + 1] = beta;
            }
            return std::max(pdf, 1e-300);
        };

        auto integrand = [&, counts, vars](std::span<const double> p) -> complex {
            sector::Frame f;
            f.b = b;
            f.delta_lc = cfg.delta_lc;
            for (int j = 0; j < k; ++j) {
                f.t.push_back(p[2 * j]);
                f.x.push_back(p[2 * j + 1]);
                f.alpha.push_back(complex(b * m.factors[j].n, 0.0));
            }
            // true test-function values; the sampling pdf is divided out by
            // the Monte Carlo engine
            double bump_part = 1.0;
            for (int j = 0; j < k; ++j)
                bump_part *= m.factors[j].bump.value(CylinderPoint(p[2 * j], p[2 * j + 1]));
            if (bump_part == 0.0) return {0.0, 0.0};
            // pairwise light-cone margin on the sampled externals
            for (int a = 0; a < k; ++a)
                for (int b_ = a + 1; b_ < k; ++b_) {
                    if (boundary_lightcone_distance(f.t[a] - f.t[b_], f.x[a] - f.x[b_]) <=
                        cfg.delta_lc) {
                        rejected.fetch_add(1, std::memory_order_relaxed);
                        return {0.0, 0.0};
                    }
                }
            complex free{1.0, 0.0};
            try {
                for (int a = 0; a < k; ++a)
                    for (int b_ = a + 1; b_ < k; ++b_)
                        free *= std::exp(-4.0 * f.alpha[a] * f.alpha[b_] *
                                         green_boundary(f.t[b_] - f.t[a], f.x[b_] - f.x[a],
                                                        cfg.delta_lc));
            } catch (const light_cone_point&) {
                rejected.fetch_add(1, std::memory_order_relaxed);
                return {0.0, 0.0};
            }
            std::vector<ContourPoint> pts;
            pts.reserve(w);
            for (int l = 0; l < w; ++l) {
                const int seg = vars[l].segment;
                const double coord = p[2 * k + 2 * l], beta = p[2 * k + 2 * l + 1];
                if (seg >= 1 && seg < k && (coord < 0.0 || coord > 1.0)) return {0.0, 0.0};
                if (beta < -1.0 || beta > 1.0) return {0.0, 0.0};
                if ((seg == 0 || seg == k) && coord < 0.0) return {0.0, 0.0};
                pts.push_back(f.var_point(seg, coord, beta));
            }
            const complex jac = sector::count_jacobian(f, counts);
            return bump_part * free * jac * sector::screening_factor(f, pts);
        };

        IntegrationResult part = integrate_mc(integrand, sampler, cfg,
                                              hash_combine(0x03e6a, hash_combine(ci, k)));
        total += part.value;
        var_sum += part.error_estimate * part.error_estimate;
        evals += part.evals;
        converged = converged && part.converged;
        if (part.evals > 0 &&
            static_cast<double>(rejected.load()) / static_cast<double>(part.evals) >
                reject_limit)
            throw mc_abort("omega: light-cone rejection rate exceeded " +
                           std::to_string(reject_limit) + "; configuration too close to the "
                           "exceptional set");
    }

    const complex pref = detail_corr::minus_mu_pow(params.mu, w);
    res.value = pref * coeff_prod * total;
    res.error_estimate = std::abs(pref * coeff_prod) * std::sqrt(var_sum);
    res.evals = evals;
    res.rejected = rejected.load();
    res.converged = converged;
    return res;
}

// |omega(m*) - conj(omega(m))| with the combined standard error.
struct ResidualResult {
    double residual = 0.0;
    double error = 0.0;
    long evals = 0;
};

inline ResidualResult hermiticity_residual(const SmearedMonomial& m, const ModelParams& params,
                                           const QuadratureConfig& cfg) {
    QuadratureConfig cfg_star = cfg;
    cfg_star.mc_seed = hash_combine(cfg.mc_seed, 0x57a5);
    const OmegaResult a = omega(star(m), params, cfg_star);
    const OmegaResult b = omega(m, params, cfg);
    return {std::abs(a.value - std::conj(b.value)), a.error_estimate + b.error_estimate,
            a.evals + b.evals};
}

// ---------------------------------------------------------------------------
// Indefiniteness probe: omega(A_eps A_eps) - c_b^2 for the scaled bump
// A_eps = O_{f_eps, -1}; c_b = -mu I_b from the hypergeometric oracle.
// ---------------------------------------------------------------------------

struct IndefinitenessPoint {
    double eps = 0.0;
    double omega_aa = 0.0;      // omega(A_eps A_eps), real part
    double gram_value = 0.0;    // omega(A_eps A_eps) - c_b^2
    double error = 0.0;
    long evals = 0;
};

inline std::vector<IndefinitenessPoint> indefiniteness_probe(double b,
                                                             const std::vector<double>& eps_list,
                                                             const ModelParams& params_in,
                                                             const QuadratureConfig& cfg) {
    ModelParams params = params_in;
    params.b = b;
    params.validate();
    for (double e : eps_list)
        if (!(e > 0.0) || !(e < 0.5))
            throw domain_error("indefiniteness_probe: eps values must lie in (0, 1/2)");
    const double cb = -params.mu * tadpole_Ib(b).value;
    std::vector<IndefinitenessPoint> out;
    for (double eps : eps_list) {
        SmearedFactor f;
        f.bump = BumpFunction(CylinderPoint(0.0, 0.0), eps, eps);
        f.n = -1;
        SmearedMonomial m;
        m.factors = {f, f};
        QuadratureConfig c = cfg;
        c.mc_seed = hash_combine(cfg.mc_seed, std::hash<double>{}(eps));
        const OmegaResult r = omega(m, params, c);
        IndefinitenessPoint pt;
        pt.eps = eps;
        pt.omega_aa = r.value.real();
        pt.gram_value = r.value.real() - cb * cb;
        pt.error = r.error_estimate;
        pt.evals = r.evals;
        out.push_back(pt);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Smeared locality: |omega(AB) - omega(BA)| for spacelike-separated supports.
// ---------------------------------------------------------------------------

inline bool supports_spacelike(const SmearedMonomial& A, const SmearedMonomial& B,
                               double margin, std::string* why = nullptr) {
    for (const auto& fa : A.factors)
        for (const auto& fb : B.factors) {
            const double dt_max = std::abs(fa.bump.center.t - fb.bump.center.t) +
                                  fa.bump.eps_t + fb.bump.eps_t;
            const double dx_min =
                d1(fa.bump.center.x - fb.bump.center.x) - fa.bump.eps_x - fb.bump.eps_x;
            if (!(dt_max + margin < dx_min)) {
                if (why)
                    *why = "support pair at t = " + std::to_string(fa.bump.center.t) + " and " +
                           std::to_string(fb.bump.center.t) + " is not spacelike (|dt| up to " +
                           std::to_string(dt_max) + ", wrapped |dx| down to " +
                           std::to_string(dx_min) + ")";
                return false;
            }
        }
    return true;
}

inline ResidualResult smeared_locality_residual(const SmearedMonomial& A,
                                                const SmearedMonomial& B,
                                                const ModelParams& params,
                                                const QuadratureConfig& cfg,
                                                double margin = 0.0) {
    std::string why;
    if (!supports_spacelike(A, B, margin, &why)) throw not_spacelike("smeared locality: " + why);
    QuadratureConfig cfg_ba = cfg;
    cfg_ba.mc_seed = hash_combine(cfg.mc_seed, 0xba);
    const OmegaResult ab = omega(A * B, params, cfg);
    const OmegaResult ba = omega(B * A, params, cfg_ba);
    return {std::abs(ab.value - ba.value), ab.error_estimate + ba.error_estimate,
            ab.evals + ba.evals};
}

} // namespace liouville
