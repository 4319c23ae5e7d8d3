#pragma once

// Lorentzian contour-ordered correlator: sector decomposition of the
// screening integral over the contour tube. Included from correlators.hpp.

#include <cmath>
#include <vector>

namespace liouville {

namespace detail_corr {

struct SectorVar {
    int segment; // 0 = left tail, 1..k-1 vertical, k = right tail
};

inline std::vector<SectorVar> vars_of_counts(const std::vector<int>& counts) {
    std::vector<SectorVar> vars;
    for (int s = 0; s < static_cast<int>(counts.size()); ++s)
        for (int m = 0; m < counts[s]; ++m) vars.push_back({s});
    return vars;
}

// ---- adaptive path (w = 1: every sector is a 2D integral) -----------------

inline IntegrationResult lorentzian_sector_w1(const sector::Frame& f, int seg,
                                              const QuadratureConfig& cfg) {
    const int k = f.k();
    auto integrand = [&](double coord, double beta) -> complex {
        const std::vector<ContourPoint> vars{f.var_point(seg, coord, beta)};
        return sector::screening_factor(f, vars);
    };

    if (seg >= 1 && seg < k) {
        // vertical segment: (c, beta) in [0,1] x [-1,1] with light-cone lines
        SingularSet sing;
        for (const auto& ln : sector::vertical_lines(f, seg))
            sing.hyperplanes.push_back({{ln.n0, ln.n1}, ln.offset, ln.exponent});
        const double lo[2] = {0.0, -1.0}, hi[2] = {1.0, 1.0};
        return integrate_adaptive(
            [&](std::span<const double> p) -> complex { return integrand(p[0], p[1]); },
            std::span<const double>(lo, 2), std::span<const double>(hi, 2), sing, cfg);
    }

    // tail segment: truncate at the paper-derived decay rate
    const double sigma = sector::tail_sigma(f.b);
    const double floor = std::max(cfg.abs_tol * 1e-2, 1e-300);
    const double R = std::max(4.0 / sigma, std::log((1.0 + cfg.tail_poly_margin) / floor) / sigma);
    SingularSet sing;
    for (const auto& [beta, e] : sector::tail_edge_points(f, seg))
        sing.points.push_back({{0.0, beta}, e});
    const double lo[2] = {0.0, -1.0}, hi[2] = {R, 1.0};
    IntegrationResult res = integrate_adaptive(
        [&](std::span<const double> p) -> complex { return integrand(p[0], p[1]); },
        std::span<const double>(lo, 2), std::span<const double>(hi, 2), sing, cfg);
    double coeff = 0.0;
    for (double u : {0.90, 0.95, 1.0})
        for (double beta : {-0.6, 0.1, 0.8})
            coeff = std::max(coeff, std::abs(integrand(u * R, beta)) * std::exp(sigma * u * R));
    res.error_estimate += 2.0 * coeff * std::exp(-sigma * R) / sigma;
    res.evals += 9;
    return res;
}

// ---- Monte Carlo path (w >= 2) --------------------------------------------

// in-box geometry of a light-cone line for importance sampling
struct McLine {
    double nx, ny;   // unit normal
    double offset;   // n . p = offset
    double ax, ay;   // segment endpoints inside the box
    double bx, by;
    double len;
    double exponent; // transverse power-law strength
};

inline std::vector<McLine> mc_lines_for_segment(const sector::Frame& f, int seg) {
    std::vector<McLine> out;
    if (seg < 1 || seg >= f.k()) return out;
    for (const auto& ln : sector::vertical_lines(f, seg)) {
        if (ln.exponent <= 0.0) continue;
        const double nn = std::hypot(ln.n0, ln.n1);
        if (nn < 1e-14) continue;
        const double nx = ln.n0 / nn, ny = ln.n1 / nn, off = ln.offset / nn;
        // clip n.p = off to the box [0,1] x [-1,1]
        std::vector<std::pair<double, double>> pts;
        auto push = [&](double cx, double cy) {
            if (cx >= -1e-12 && cx <= 1.0 + 1e-12 && cy >= -1.0 - 1e-12 && cy <= 1.0 + 1e-12)
                pts.push_back({cx, cy});
        };
        if (std::abs(ny) > 1e-14) {
            push(0.0, (off - nx * 0.0) / ny);
            push(1.0, (off - nx * 1.0) / ny);
        }
        if (std::abs(nx) > 1e-14) {
            push((off - ny * -1.0) / nx, -1.0);
            push((off - ny * 1.0) / nx, 1.0);
        }
        if (pts.size() < 2) continue;
        // farthest pair
        double best = -1.0;
        std::pair<double, double> A = pts[0], B = pts[0];
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = i + 1; j < pts.size(); ++j) {
                const double d = std::hypot(pts[i].first - pts[j].first,
                                            pts[i].second - pts[j].second);
                if (d > best) {
                    best = d;
                    A = pts[i];
                    B = pts[j];
                }
            }
        if (best < 1e-6) continue;
        out.push_back({nx, ny, off, A.first, A.second, B.first, B.second, best, ln.exponent});
    }
    return out;
}

inline double mc_line_pdf(const McLine& ln, double s_max, double cx, double cy) {
    const double s = (cx * ln.nx + cy * ln.ny) - ln.offset;
    if (std::abs(s) > s_max || s == 0.0) return 0.0;
    // longitudinal coordinate along A->B
    const double tx = (ln.bx - ln.ax) / ln.len, ty = (ln.by - ln.ay) / ln.len;
    const double lpar = (cx - ln.ax) * tx + (cy - ln.ay) * ty;
    if (lpar < 0.0 || lpar > ln.len) return 0.0;
    const double e = ln.exponent;
    return (1.0 / ln.len) * 0.5 * (1.0 - e) / std::pow(s_max, 1.0 - e) *
           std::pow(std::abs(s), -e);
}

// Draw one screening variable for segment seg (tails: exponential radial
// coordinate; vertical: uniform / line-concentration mixture). uu points at
// four raw uniforms; returns the sampling pdf of (coord, beta).
inline double sample_screening_var(const sector::Frame&, const std::vector<McLine>& lines,
                                   int seg, int k, double sigma_q, double s_max,
                                   const double* uu, double& coord, double& beta) {
    const double sel = uu[0], ua = uu[1], ub = uu[2], uc = uu[3];
    if (seg == 0 || seg == k) {
        coord = -std::log1p(-std::min(ua, 1.0 - 1e-16)) / sigma_q;
        beta = -1.0 + 2.0 * ub;
        return sigma_q * std::exp(-sigma_q * coord) * 0.5;
    }
    const double lam_u = lines.empty() ? 1.0 : 0.5;
    if (sel < lam_u || lines.empty()) {
        coord = ua;
        beta = -1.0 + 2.0 * ub;
    } else {
        const std::size_t i = std::min<std::size_t>(
            static_cast<std::size_t>((sel - lam_u) / (1.0 - lam_u) * lines.size()),
            lines.size() - 1);
        const McLine& ln = lines[i];
        const double lpar = ua * ln.len;
        const double e = ln.exponent;
        const double s = s_max * std::pow(ub, 1.0 / (1.0 - e));
        const double sign = uc < 0.5 ? -1.0 : 1.0;
        const double tx = (ln.bx - ln.ax) / ln.len, ty = (ln.by - ln.ay) / ln.len;
        coord = ln.ax + lpar * tx + sign * s * ln.nx;
        beta = ln.ay + lpar * ty + sign * s * ln.ny;
    }
    double q = 0.0;
    if (coord >= 0.0 && coord <= 1.0 && beta >= -1.0 && beta <= 1.0)
        q += lam_u * 0.5; // uniform over area 2
    if (!lines.empty()) {
        double ql = 0.0;
        for (const auto& ln : lines) ql += mc_line_pdf(ln, s_max, coord, beta);
        q += (1.0 - lam_u) * ql / lines.size();
    }
    return std::max(q, 1e-300);
}

inline IntegrationResult lorentzian_sector_mc(const sector::Frame& f,
                                              const std::vector<int>& counts,
                                              const QuadratureConfig& cfg,
                                              std::uint64_t salt) {
    const int k = f.k();
    const int w = [&] {
        int s = 0;
        for (int m : counts) s += m;
        return s;
    }();
    const auto vars = vars_of_counts(counts);
    const double sigma_q = pi * f.b * f.b;
    const double s_max = 0.5;

    // per-segment line geometry
    std::vector<std::vector<McLine>> lines(k + 1);
    for (int s = 1; s < k; ++s) lines[s] = mc_lines_for_segment(f, s);

    McSampler sampler;
    sampler.dim = 2 * w;
    sampler.raw_dim = 4 * w;
    const sector::Frame frame = f;
    sampler.map = [=](std::span<const double> uu, std::vector<double>& pt) {
        pt.resize(2 * w);
        double pdf = 1.0;
        for (int l = 0; l < w; ++l) {
            const int seg = vars[l].segment;
            double coord, beta;
            pdf *= sample_screening_var(frame, lines[seg], seg, k, sigma_q, s_max, &uu[4 * l],
                                        coord, beta);
            pt[2 * l] = coord;
            pt[2 * l + 1] = beta;
        }
        return pdf;
    };

    auto integrand = [frame, vars, w, k](std::span<const double> p) -> complex {
        std::vector<ContourPoint> pts;
        pts.reserve(w);
        for (int l = 0; l < w; ++l) {
            const int seg = vars[l].segment;
            const double coord = p[2 * l], beta = p[2 * l + 1];
            if (seg >= 1 && seg < k && (coord < 0.0 || coord > 1.0)) return {0.0, 0.0};
            if (beta < -1.0 || beta > 1.0) return {0.0, 0.0};
            pts.push_back(frame.var_point(seg, coord, beta));
        }
        return sector::screening_factor(frame, pts);
    };
    return integrate_mc(integrand, sampler, cfg, salt);
}

} // namespace detail_corr

// ---------------------------------------------------------------------------
// Lorentzian contour-ordered correlator at real times (boundary values).
// ---------------------------------------------------------------------------
inline CorrelatorResult lorentzian_correlator(const CorrelatorSpec& spec,
                                              const QuadratureConfig& cfg) {
    spec.params.validate();
    detail_corr::check_limits(spec);
    detail_corr::check_non_lightcone(spec, cfg.delta_lc);

    CorrelatorResult res;
    if (spec.w < 0) {
        res.converged = true;
        return res;
    }

    // free factor: T(v_j - v_j') = v_j' - v_j for j < j'
    complex free{1.0, 0.0};
    const auto& ins = spec.insertions;
    for (std::size_t a = 0; a < ins.size(); ++a)
        for (std::size_t b_ = a + 1; b_ < ins.size(); ++b_)
            free *= std::exp(-4.0 * ins[a].charge.alpha * ins[b_].charge.alpha *
                             green_boundary(ins[b_].point.t - ins[a].point.t,
                                            ins[b_].point.x - ins[a].point.x, cfg.delta_lc));
    if (spec.w == 0) {
        res.value = free;
        res.converged = true;
        return res;
    }

    const sector::Frame frame = sector::Frame::from_spec(spec, cfg.delta_lc);
    std::vector<std::vector<int>> counts;
    sector::enumerate_counts(frame, spec.w, counts);

    complex screening_sum{0.0, 0.0};
    double err_sum = 0.0;
    long evals = 0;
    bool converged = true;
    for (std::size_t ci = 0; ci < counts.size(); ++ci) {
        const complex jac = sector::count_jacobian(frame, counts[ci]);
        if (std::abs(jac) == 0.0) continue;
        IntegrationResult part;
        if (spec.w == 1) {
            int seg = 0;
            for (int s = 0; s < static_cast<int>(counts[ci].size()); ++s)
                if (counts[ci][s] == 1) seg = s;
            part = detail_corr::lorentzian_sector_w1(frame, seg, cfg);
        } else {
            part = detail_corr::lorentzian_sector_mc(frame, counts[ci], cfg,
                                                     hash_combine(0x10c, ci));
        }
        screening_sum += jac * part.value;
        err_sum += std::abs(jac) * part.error_estimate;
        evals += part.evals;
        converged = converged && part.converged;
    }

    const complex pref = detail_corr::minus_mu_pow(spec.params.mu, spec.w);
    res.value = pref * free * screening_sum;
    res.error_estimate = std::abs(pref * free) * err_sum;
    res.evals = evals;
    res.converged = converged;
    return res;
}

// Evaluate the Lorentzian correlator for the original insertion order and for
// the order with positions p, p+1 (1-based) exchanged.
inline std::pair<CorrelatorResult, CorrelatorResult>
exchange_adjacent(const CorrelatorSpec& spec, int p, const QuadratureConfig& cfg) {
    const int k = static_cast<int>(spec.insertions.size());
    if (p < 1 || p > k - 1)
        throw domain_error("exchange_adjacent: position out of range");
    CorrelatorSpec swapped = spec;
    std::swap(swapped.insertions[p - 1], swapped.insertions[p]);
    for (int j = 0; j < k; ++j) swapped.insertions[j].label = j + 1;
    return {lorentzian_correlator(spec, cfg), lorentzian_correlator(swapped, cfg)};
}

} // namespace liouville
