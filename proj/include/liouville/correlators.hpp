#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "liouville/contour.hpp"
#include "liouville/errors.hpp"
#include "liouville/geometry.hpp"
#include "liouville/kernels.hpp"
#include "liouville/quadrature.hpp"
#include "liouville/rng.hpp"

namespace liouville {

struct ModelParams {
    double b = 0.3;
    double mu = 1.0;

    void validate() const {
        if (!(b > 0) || !(b * b < 0.5))
            throw domain_error("ModelParams: coupling must satisfy 0 < b < 1/sqrt(2)");
        if (!(mu > 0)) throw domain_error("ModelParams: mu must be positive");
    }
};

struct Charge {
    complex alpha{0.0, 0.0};
};

struct Insertion {
    Charge charge;
    CylinderPoint point;
    int label = 0; // distinct; defines the insertion order
};

using CorrelatorResult = IntegrationResult;

inline constexpr double screening_integer_tol = 1e-9;

// w = -sum(alpha_j)/b, required to be an integer within tolerance.
inline int screening_number(const std::vector<Charge>& charges, double b,
                            double tol = screening_integer_tol) {
    complex sum{0.0, 0.0};
    for (const auto& c : charges) sum += c.alpha;
    const complex w = -sum / b;
    const double nearest = std::round(w.real());
    if (std::abs(w.imag()) > tol || std::abs(w.real() - nearest) > tol)
        throw non_integer_screening("screening_number: -sum(alpha)/b = (" +
                                    std::to_string(w.real()) + ", " + std::to_string(w.imag()) +
                                    "i) deviates from an integer by more than " +
                                    std::to_string(tol));
    return static_cast<int>(nearest);
}

struct CorrelatorSpec {
    ModelParams params;
    std::vector<Insertion> insertions; // stored sorted by label
    int w = 0;
};

inline CorrelatorSpec make_spec(const ModelParams& params, std::vector<Insertion> insertions,
                                double tol = screening_integer_tol) {
    params.validate();
    std::sort(insertions.begin(), insertions.end(),
              [](const Insertion& a, const Insertion& b) { return a.label < b.label; });
    for (std::size_t j = 1; j < insertions.size(); ++j)
        if (insertions[j].label == insertions[j - 1].label)
            throw domain_error("CorrelatorSpec: duplicate insertion label " +
                               std::to_string(insertions[j].label));
    std::vector<Charge> charges;
    for (const auto& ins : insertions) {
        if (!(ins.charge.alpha.real() > -0.5 / params.b))
            throw domain_error("CorrelatorSpec: Re(alpha) must exceed -1/(2b)");
        charges.push_back(ins.charge);
    }
    CorrelatorSpec spec;
    spec.params = params;
    spec.insertions = std::move(insertions);
    spec.w = charges.empty() ? 0 : screening_number(charges, params.b, tol);
    return spec;
}

// Desk-scale limits: sector count grows like (segments)^w.
inline constexpr int max_screening_number = 3;
inline constexpr int max_insertions = 4;

namespace sector {

// Frozen view of a correlator used by the screening-integral machinery.
struct Frame {
    std::vector<double> t, x;    // insertion coordinates in label order
    std::vector<complex> alpha;  // charges
    double b = 0.3;
    double delta_lc = 1e-9;

    int k() const { return static_cast<int>(t.size()); }
    int segments() const { return k() + 1; } // 0 = left tail, 1..k-1 vertical, k = right tail
    double seg_dt(int s) const { return t[s] - t[s - 1]; } // vertical segment s in 1..k-1
    bool vertical_empty(int s) const { return seg_dt(s) == 0.0; }

    static Frame from_spec(const CorrelatorSpec& spec, double delta_lc) {
        Frame f;
        f.b = spec.params.b;
        f.delta_lc = delta_lc;
        for (const auto& ins : spec.insertions) {
            f.t.push_back(ins.point.t);
            f.x.push_back(ins.point.x);
            f.alpha.push_back(ins.charge.alpha);
        }
        return f;
    }

    // singular strength of insertion j against a screening charge b
    double p_exponent(int j) const { return std::max(0.0, -4.0 * b * alpha[j].real()); }

    ContourPoint visit(int j) const { return ContourPoint::visit(j + 1, t[j], x[j]); }

    // screening point on segment s at (coord, beta); coord is the tail
    // distance r > 0 for s in {0, k}, or c in (0,1) on a vertical segment
    ContourPoint var_point(int s, double coord, double beta) const {
        const int kk = k();
        if (s == 0)
            return ContourPoint::screening(complex(-coord, t.front()), beta, 1.0 - coord);
        if (s == kk)
            return ContourPoint::screening(complex(coord, t.back()), beta,
                                           static_cast<double>(kk) + coord);
        const double theta = (1.0 - coord) * t[s - 1] + coord * t[s];
        return ContourPoint::screening(complex(0.0, theta), beta,
                                       static_cast<double>(s) + coord);
    }
};

// exp of the screening part of the exponent: mixed insertion-screening terms
// plus screening-screening pair terms. Returns 0 within delta_lc of the
// light-cone set (all factors there either vanish or sit on the excluded
// sliver accounted for by the declared singularities).
inline complex screening_factor(const Frame& f, const std::vector<ContourPoint>& vars) {
    complex expo{0.0, 0.0};
    try {
        for (int j = 0; j < f.k(); ++j) {
            const ContourPoint vj = f.visit(j);
            for (const auto& u : vars)
                expo += -4.0 * f.b * f.alpha[j] * time_ordered_g(vj, u, f.delta_lc);
        }
        for (std::size_t l = 0; l + 1 < vars.size(); ++l)
            for (std::size_t m = l + 1; m < vars.size(); ++m)
                expo += -4.0 * f.b * f.b * time_ordered_g(vars[l], vars[m], f.delta_lc);
    } catch (const light_cone_point&) {
        return {0.0, 0.0};
    } catch (const singular_point&) {
        return {0.0, 0.0};
    }
    return std::exp(expo);
}

// All count vectors (m_0..m_{segments-1}) with sum w; empty vertical segments
// receive no variables (their Jacobian vanishes).
inline void enumerate_counts(const Frame& f, int w, std::vector<std::vector<int>>& out) {
    std::vector<int> counts(f.segments(), 0);
    struct Rec {
        const Frame& f;
        std::vector<std::vector<int>>& out;
        std::vector<int>& counts;
        void go(int seg, int left) {
            if (seg == static_cast<int>(counts.size()) - 1) {
                counts[seg] = left;
                out.push_back(counts);
                return;
            }
            const bool empty_vertical =
                seg >= 1 && seg < f.k() && f.vertical_empty(seg);
            const int hi = empty_vertical ? 0 : left;
            for (int m = 0; m <= hi; ++m) {
                counts[seg] = m;
                go(seg + 1, left - m);
            }
        }
    } rec{f, out, counts};
    const bool last_empty = false; // right tail is never empty
    (void)last_empty;
    rec.go(0, w);
}

// Jacobian of a count vector: prod over vertical segments of (i dt_r)^{m_r},
// divided by the per-segment multiplicities (unordered block integration).
inline complex count_jacobian(const Frame& f, const std::vector<int>& counts) {
    complex jac{1.0, 0.0};
    for (int s = 1; s < f.k(); ++s) {
        const complex idt(0.0, f.seg_dt(s));
        for (int m = 0; m < counts[s]; ++m) jac *= idt;
    }
    double fact = 1.0;
    for (int m : counts)
        for (int i = 2; i <= m; ++i) fact *= i;
    return jac / fact;
}

// Light-cone lines of insertion j in the (c, beta) plane of vertical segment
// s: dt_s * c + (t_{s-1} - t_j) +- (beta - x_j) in 2Z.
struct LineGeom {
    double n0, n1, offset; // n0*c + n1*beta = offset, |n| arbitrary
    double exponent;       // power-law exponent against euclidean distance
};

inline std::vector<LineGeom> vertical_lines(const Frame& f, int s) {
    std::vector<LineGeom> lines;
    const double dt = f.seg_dt(s);
    for (int j = 0; j < f.k(); ++j) {
        const double pj = f.p_exponent(j);
        for (double sign : {1.0, -1.0}) {
            // dt*c + sign*beta = t_j - t_{s-1} + sign*x_j + 2m
            const double base = f.t[j] - f.t[s - 1] + sign * f.x[j];
            // range of LHS over the box [0,1] x [-1,1]
            const double lo = std::min(0.0, dt) - 1.0;
            const double hi = std::max(0.0, dt) + 1.0;
            const int m_lo = static_cast<int>(std::ceil((lo - base) / 2.0)) - 1;
            const int m_hi = static_cast<int>(std::floor((hi - base) / 2.0)) + 1;
            for (int m = m_lo; m <= m_hi; ++m) {
                const double off = base + 2.0 * m;
                if (off < lo - 0.5 || off > hi + 0.5) continue;
                lines.push_back({dt, sign, off, 0.5 * pj});
            }
        }
    }
    return lines;
}

// Light-cone points on the r = 0 edge of a tail sector (s = 0 or s = k):
// beta values where the tail base point is light-cone to insertion j.
inline std::vector<std::pair<double, double>> tail_edge_points(const Frame& f, int s) {
    std::vector<std::pair<double, double>> pts; // (beta, exponent)
    const int kk = f.k();
    const double t_base = s == 0 ? f.t.front() : f.t.back();
    for (int j = 0; j < kk; ++j) {
        const double pj = f.p_exponent(j);
        for (double sign : {1.0, -1.0}) {
            // (t_j - t_base) + sign*(x_j - beta) = 2m  =>  beta = x_j + sign*(t_j - t_base) - 2m*sign
            const double beta0 = f.x[j] + sign * (f.t[j] - t_base);
            for (int m = -2; m <= 2; ++m) {
                const double beta = beta0 + 2.0 * m;
                if (beta >= -1.0 - 1e-12 && beta <= 1.0 + 1e-12)
                    pts.push_back({beta, 0.5 * pj});
            }
        }
    }
    return pts;
}

// Decay rate of the slowest screening tail variable.
inline double tail_sigma(double b) { return 2.0 * pi * b * b; }

} // namespace sector

namespace detail_corr {

inline void check_limits(const CorrelatorSpec& spec) {
    const int k = static_cast<int>(spec.insertions.size());
    if (k > max_insertions)
        throw domain_error("correlator: k = " + std::to_string(k) + " exceeds the supported " +
                           std::to_string(max_insertions) + " insertions");
    if (spec.w > max_screening_number)
        throw domain_error("correlator: w = " + std::to_string(spec.w) +
                           " exceeds the supported screening number " +
                           std::to_string(max_screening_number));
}

inline void check_pairwise_distinct(const CorrelatorSpec& spec, double delta_lc) {
    const auto& ins = spec.insertions;
    for (std::size_t a = 0; a < ins.size(); ++a)
        for (std::size_t b_ = a + 1; b_ < ins.size(); ++b_)
            if (geodesic_distance(ins[a].point, ins[b_].point) <= delta_lc)
                throw singular_configuration(
                    "correlator: insertions " + std::to_string(ins[a].label) + " and " +
                    std::to_string(ins[b_].label) + " coincide within delta_lc");
}

inline void check_non_lightcone(const CorrelatorSpec& spec, double delta_lc) {
    const auto& ins = spec.insertions;
    for (std::size_t a = 0; a < ins.size(); ++a)
        for (std::size_t b_ = a + 1; b_ < ins.size(); ++b_) {
            const double dt = ins[a].point.t - ins[b_].point.t;
            const double dx = ins[a].point.x - ins[b_].point.x;
            const double d = boundary_lightcone_distance(dt, dx);
            if (d <= delta_lc)
                throw light_cone_violation(
                    "correlator: insertions " + std::to_string(ins[a].label) + " and " +
                    std::to_string(ins[b_].label) + " are light-cone separated (margin " +
                    std::to_string(d) + " <= delta_lc)");
        }
}

inline complex minus_mu_pow(double mu, int w) {
    complex r{1.0, 0.0};
    for (int i = 0; i < w; ++i) r *= -mu;
    return r;
}

// ---- Euclidean path -------------------------------------------------------

// exp(-4 b sum_j alpha_j g(q_j - u)) with coincidence windows zeroed
inline complex euclidean_point_factor(const CorrelatorSpec& spec,
                                      const std::vector<CylinderPoint>& us, double delta_lc) {
    complex expo{0.0, 0.0};
    const double b = spec.params.b;
    try {
        for (const auto& ins : spec.insertions)
            for (const auto& u : us)
                expo += -4.0 * b * ins.charge.alpha *
                        green_euclidean(ins.point.t - u.t, ins.point.x - u.x, delta_lc);
        for (std::size_t l = 0; l + 1 < us.size(); ++l)
            for (std::size_t m = l + 1; m < us.size(); ++m)
                expo += -4.0 * b * b *
                        green_euclidean(us[l].t - us[m].t, us[l].x - us[m].x, delta_lc);
    } catch (const singular_point&) {
        return {0.0, 0.0};
    }
    return std::exp(expo);
}

inline IntegrationResult euclidean_screening_w1(const CorrelatorSpec& spec,
                                                const QuadratureConfig& cfg) {
    double t_min = 1e300, t_max = -1e300;
    for (const auto& ins : spec.insertions) {
        t_min = std::min(t_min, ins.point.t);
        t_max = std::max(t_max, ins.point.t);
    }
    const double core = 1.0;
    const double lo[2] = {t_min - core, -1.0};
    const double hi[2] = {t_max + core, 1.0};

    SingularSet sing;
    for (const auto& ins : spec.insertions) {
        const double p = std::max(0.0, -4.0 * spec.params.b * ins.charge.alpha.real());
        for (int m = -1; m <= 1; ++m) {
            const double xi = ins.point.x + 2.0 * m;
            if (xi >= lo[1] - 0.25 && xi <= hi[1] + 0.25)
                sing.points.push_back({{ins.point.t, xi}, p});
        }
    }
    auto f = [&](std::span<const double> p) -> complex {
        return euclidean_point_factor(spec, {CylinderPoint(p[0], p[1])}, cfg.delta_lc);
    };
    IntegrationResult res = integrate_adaptive(f, std::span<const double>(lo, 2),
                                               std::span<const double>(hi, 2), sing, cfg);

    // exponential time tails; the spatial integral there is smooth and
    // periodic, so a fixed midpoint rule is spectrally accurate
    const double sigma = 2.0 * pi * spec.params.b * spec.params.b;
    const int nx = 64;
    auto x_slice = [&](double tv) -> complex {
        complex acc{0.0, 0.0};
        for (int i = 0; i < nx; ++i) {
            const double xv = -1.0 + 2.0 * (i + 0.5) / nx;
            acc += euclidean_point_factor(spec, {CylinderPoint(tv, xv)}, cfg.delta_lc);
        }
        return acc * 2.0 / static_cast<double>(nx);
    };
    QuadratureConfig tail_cfg = cfg;
    tail_cfg.rel_tol = std::max(cfg.rel_tol, 1e-10);
    IntegrationResult left =
        integrate_tail([&](double r) { return x_slice(lo[0] - r); }, sigma, tail_cfg);
    IntegrationResult right =
        integrate_tail([&](double r) { return x_slice(hi[0] + r); }, sigma, tail_cfg);

    res.value += left.value + right.value;
    res.error_estimate += left.error_estimate + right.error_estimate;
    res.evals += (left.evals + right.evals) * nx;
    res.converged = res.converged && left.converged && right.converged;
    return res;
}

// Monte Carlo over M^w for w >= 2: mixture of a uniform core, exponential
// time tails, and radial power-law concentration around singular insertions.
inline IntegrationResult euclidean_screening_mc(const CorrelatorSpec& spec, int w,
                                                const QuadratureConfig& cfg) {
    double t_min = 1e300, t_max = -1e300;
    for (const auto& ins : spec.insertions) {
        t_min = std::min(t_min, ins.point.t);
        t_max = std::max(t_max, ins.point.t);
    }
    const double core_lo = t_min - 1.0, core_hi = t_max + 1.0;
    const double area = (core_hi - core_lo) * 2.0;
    const double sigma_q = 0.5 * pi * spec.params.b * spec.params.b;

    struct Target {
        double t, x, p;
    };
    std::vector<Target> targets;
    for (const auto& ins : spec.insertions) {
        const double p = std::max(0.0, -4.0 * spec.params.b * ins.charge.alpha.real());
        if (p > 0.0) targets.push_back({ins.point.t, ins.point.x, p});
    }
    const double r_pt = 0.5;
    const double lam_core = targets.empty() ? 0.6 : 0.45;
    const double lam_tail = 0.25;
    const double lam_pt = targets.empty() ? 0.0 : 0.3;
    // pre-balanced: lam_core + lam_tail (+ lam_pt) sums to < 1 only when
    // targets are absent; renormalize
    const double lam_sum = lam_core + lam_tail + lam_pt;

    auto comp_pdf = [&](const CylinderPoint& u) {
        double pdf = 0.0;
        if (u.t >= core_lo && u.t <= core_hi) pdf += lam_core / lam_sum / area;
        if (u.t < core_lo)
            pdf += lam_tail / lam_sum * 0.5 * sigma_q * std::exp(-sigma_q * (core_lo - u.t)) / 2.0;
        if (u.t > core_hi)
            pdf += lam_tail / lam_sum * 0.5 * sigma_q * std::exp(-sigma_q * (u.t - core_hi)) / 2.0;
        for (const auto& tg : targets) {
            const double r = std::hypot(u.t - tg.t, d1(u.x - tg.x));
            if (r > 0 && r <= r_pt)
                pdf += lam_pt / lam_sum / targets.size() * (2.0 - tg.p) /
                       (2.0 * pi * std::pow(r_pt, 2.0 - tg.p)) * std::pow(r, -tg.p);
        }
        return pdf;
    };

    McSampler sampler;
    sampler.dim = 2 * w;
    sampler.raw_dim = 4 * w;
    sampler.map = [=](std::span<const double> uu, std::vector<double>& pt) {
        pt.resize(2 * w);
        double pdf = 1.0;
        for (int l = 0; l < w; ++l) {
            const double sel = uu[4 * l] * lam_sum;
            const double ua = uu[4 * l + 1], ub = uu[4 * l + 2], uc = uu[4 * l + 3];
            CylinderPoint u(0, 0);
            if (sel < lam_core) {
                u = CylinderPoint(core_lo + (core_hi - core_lo) * ua, -1.0 + 2.0 * ub);
            } else if (sel < lam_core + lam_tail) {
                const double r = -std::log1p(-std::min(ua, 1.0 - 1e-16)) / sigma_q;
                u = CylinderPoint(uc < 0.5 ? core_lo - r : core_hi + r, -1.0 + 2.0 * ub);
            } else {
                const std::size_t j = std::min<std::size_t>(
                    static_cast<std::size_t>(ua * targets.size()), targets.size() - 1);
                const double p = targets[j].p;
                const double r = r_pt * std::pow(ub, 1.0 / (2.0 - p));
                const double th = 2.0 * pi * uc;
                u = CylinderPoint(targets[j].t + r * std::cos(th),
                                  targets[j].x + r * std::sin(th));
            }
            pt[2 * l] = u.t;
            pt[2 * l + 1] = u.x;
            pdf *= comp_pdf(u);
        }
        return pdf;
    };

    auto f = [&](std::span<const double> p) -> complex {
        std::vector<CylinderPoint> us;
        us.reserve(w);
        for (int l = 0; l < w; ++l) us.push_back(CylinderPoint(p[2 * l], p[2 * l + 1]));
        return euclidean_point_factor(spec, us, cfg.delta_lc);
    };
    return integrate_mc(f, sampler, cfg, hash_combine(0xecu, w));
}

} // namespace detail_corr

// ---------------------------------------------------------------------------
// Euclidean correlator on the cylinder (infinite volume).
// ---------------------------------------------------------------------------
inline CorrelatorResult euclidean_correlator(const CorrelatorSpec& spec,
                                             const QuadratureConfig& cfg) {
    spec.params.validate();
    detail_corr::check_limits(spec);
    detail_corr::check_pairwise_distinct(spec, cfg.delta_lc);
    CorrelatorResult res;
    if (spec.w < 0) {
        res.converged = true;
        return res;
    }
    complex free{1.0, 0.0};
    const auto& ins = spec.insertions;
    for (std::size_t a = 0; a < ins.size(); ++a)
        for (std::size_t b_ = a + 1; b_ < ins.size(); ++b_)
            free *= std::exp(-4.0 * ins[a].charge.alpha * ins[b_].charge.alpha *
                             green_euclidean(ins[a].point.t - ins[b_].point.t,
                                             ins[a].point.x - ins[b_].point.x, cfg.delta_lc));
    if (spec.w == 0) {
        res.value = free;
        res.converged = true;
        return res;
    }

    IntegrationResult screening;
    if (spec.w == 1) {
        screening = detail_corr::euclidean_screening_w1(spec, cfg);
    } else {
        screening = detail_corr::euclidean_screening_mc(spec, spec.w, cfg);
    }
    const complex pref = detail_corr::minus_mu_pow(spec.params.mu, spec.w);
    double fact = 1.0;
    for (int i = 2; i <= spec.w; ++i) fact *= i;
    res.value = pref / fact * free * screening.value;
    res.error_estimate = std::abs(pref / fact * free) * screening.error_estimate;
    res.evals = screening.evals;
    res.converged = screening.converged;
    return res;
}

// ---------------------------------------------------------------------------
// Finite-volume torus correlator (exact N -> infinity kernel, or the
// truncated kernel when trunc_N >= 1 is passed, for convergence studies).
// ---------------------------------------------------------------------------
inline CorrelatorResult torus_correlator(const CorrelatorSpec& spec, const TorusSpec& torus,
                                         const QuadratureConfig& cfg, int trunc_N = 0) {
    spec.params.validate();
    detail_corr::check_limits(spec);
    detail_corr::check_pairwise_distinct(spec, cfg.delta_lc);
    for (const auto& i : spec.insertions)
        if (std::abs(i.point.t) > torus.T)
            throw domain_error("torus_correlator: insertion outside M_T");

    auto kernel = [&](const CylinderPoint& u, const CylinderPoint& v) {
        if (trunc_N >= 1) return torus_green_truncated(TorusSpec(torus.T, trunc_N), u, v);
        return torus_green(torus, u, v, cfg.delta_lc);
    };

    CorrelatorResult res;
    if (spec.w < 0) {
        res.converged = true;
        return res;
    }
    complex free{1.0, 0.0};
    const auto& ins = spec.insertions;
    for (std::size_t a = 0; a < ins.size(); ++a)
        for (std::size_t b_ = a + 1; b_ < ins.size(); ++b_)
            free *= std::exp(-4.0 * ins[a].charge.alpha * ins[b_].charge.alpha *
                             kernel(ins[a].point, ins[b_].point));
    if (spec.w == 0) {
        res.value = free;
        res.converged = true;
        return res;
    }

    const double b = spec.params.b;
    auto point_factor = [&](const std::vector<CylinderPoint>& us) -> complex {
        complex expo{0.0, 0.0};
        try {
            for (const auto& i : spec.insertions)
                for (const auto& u : us) expo += -4.0 * b * i.charge.alpha * kernel(i.point, u);
            for (std::size_t l = 0; l + 1 < us.size(); ++l)
                for (std::size_t m = l + 1; m < us.size(); ++m)
                    expo += -4.0 * b * b * kernel(us[l], us[m]);
        } catch (const singular_point&) {
            return {0.0, 0.0};
        }
        return std::exp(expo);
    };

    IntegrationResult screening;
    if (spec.w == 1) {
        const double lo[2] = {-torus.T, -1.0}, hi[2] = {torus.T, 1.0};
        SingularSet sing;
        for (const auto& i : spec.insertions) {
            const double p = std::max(0.0, -4.0 * b * i.charge.alpha.real());
            for (int mt = -1; mt <= 1; ++mt)
                for (int mx = -1; mx <= 1; ++mx) {
                    const double ti = i.point.t + 2.0 * torus.T * mt;
                    const double xi = i.point.x + 2.0 * mx;
                    if (ti >= lo[0] - 0.25 && ti <= hi[0] + 0.25 && xi >= lo[1] - 0.25 &&
                        xi <= hi[1] + 0.25)
                        sing.points.push_back({{ti, xi}, p});
                }
        }
        screening = integrate_adaptive(
            [&](std::span<const double> p) -> complex {
                return point_factor({CylinderPoint(p[0], p[1])});
            },
            std::span<const double>(lo, 2), std::span<const double>(hi, 2), sing, cfg);
    } else {
        // uniform Monte Carlo over the compact torus with per-variable
        // radial concentration at singular insertions
        const int w = spec.w;
        McSampler sampler;
        sampler.dim = 2 * w;
        sampler.raw_dim = 4 * w;
        struct Target {
            double t, x, p;
        };
        std::vector<Target> targets;
        for (const auto& i : spec.insertions) {
            const double p = std::max(0.0, -4.0 * b * i.charge.alpha.real());
            if (p > 0) targets.push_back({i.point.t, i.point.x, p});
        }
        const double area = 4.0 * torus.T;
        const double lam_u = targets.empty() ? 1.0 : 0.6;
        const double r_pt = 0.5;
        const double T = torus.T;
        auto comp_pdf = [=](const CylinderPoint& u) {
            double pdf = lam_u / area;
            for (const auto& tg : targets) {
                const double r = std::hypot(wrap_period(u.t - tg.t, T), d1(u.x - tg.x));
                if (r > 0 && r <= r_pt)
                    pdf += (1.0 - lam_u) / targets.size() * (2.0 - tg.p) /
                           (2.0 * pi * std::pow(r_pt, 2.0 - tg.p)) * std::pow(r, -tg.p);
            }
            return pdf;
        };
        sampler.map = [=](std::span<const double> uu, std::vector<double>& pt) {
            pt.resize(2 * w);
            double pdf = 1.0;
            for (int l = 0; l < w; ++l) {
                const double sel = uu[4 * l];
                const double ua = uu[4 * l + 1], ub = uu[4 * l + 2], uc = uu[4 * l + 3];
                CylinderPoint u(0, 0);
                if (sel < lam_u || targets.empty()) {
                    u = CylinderPoint(-T + 2.0 * T * ua, -1.0 + 2.0 * ub);
                } else {
                    const std::size_t j = std::min<std::size_t>(
                        static_cast<std::size_t>(ua * targets.size()), targets.size() - 1);
                    const double p = targets[j].p;
                    const double r = r_pt * std::pow(ub, 1.0 / (2.0 - p));
                    const double th = 2.0 * pi * uc;
                    u = CylinderPoint(wrap_period(targets[j].t + r * std::cos(th), T),
                                      targets[j].x + r * std::sin(th));
                }
                pt[2 * l] = u.t;
                pt[2 * l + 1] = u.x;
                pdf *= comp_pdf(u);
            }
            return pdf;
        };
        screening = integrate_mc(
            [&](std::span<const double> p) -> complex {
                std::vector<CylinderPoint> us;
                for (int l = 0; l < w; ++l) us.push_back(CylinderPoint(p[2 * l], p[2 * l + 1]));
                return point_factor(us);
            },
            sampler, cfg, hash_combine(0x70u, w));
    }

    const complex pref = detail_corr::minus_mu_pow(spec.params.mu, spec.w);
    double fact = 1.0;
    for (int i = 2; i <= spec.w; ++i) fact *= i;
    res.value = pref / fact * free * screening.value;
    res.error_estimate = std::abs(pref / fact * free) * screening.error_estimate;
    res.evals = screening.evals;
    res.converged = screening.converged;
    return res;
}

} // namespace liouville

#include "liouville/correlators_lorentzian.hpp"
