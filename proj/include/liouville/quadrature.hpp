#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <queue>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "liouville/errors.hpp"
#include "liouville/gauss.hpp"
#include "liouville/geometry.hpp"
#include "liouville/rng.hpp"

namespace liouville {

struct QuadratureConfig {
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    long max_evals = 20000000;
    double tail_cutoff_sigma = 1.0;   // decay rate sigma for integrate_tail
    double tail_poly_margin = 100.0;  // allowance for polynomial prefactors in tails
    std::uint64_t mc_seed = 20250801;
    long mc_samples = 1000000;
    double delta_lc = 1e-9;           // light-cone / singular-set exclusion radius

    void validate() const {
        if (!(rel_tol > 0) || !(abs_tol > 0))
            throw domain_error("QuadratureConfig: tolerances must be positive");
        if (max_evals < 1) throw domain_error("QuadratureConfig: max_evals >= 1");
        if (mc_samples < 1) throw domain_error("QuadratureConfig: mc_samples >= 1");
    }
};

struct IntegrationResult {
    complex value{0.0, 0.0};
    double error_estimate = 0.0;
    long evals = 0;
    bool converged = false;
};

// ---------------------------------------------------------------------------
// Declared singularities.
//
// The integrand behaves like A * d^{-exponent} near the set, with d the
// distance to it. exponent <= 0 marks a breakpoint (kink or discontinuity):
// the engine splits there but applies no power-law extrapolation.
// ---------------------------------------------------------------------------

struct Singular1D {
    double x = 0.0;
    double exponent = 0.0;
};

// Affine hyperplane {x : normal . x = offset} in up to 3 dimensions.
struct SingularHyperplane {
    std::vector<double> normal;
    double offset = 0.0;
    double exponent = 0.0;
};

// Isolated singular point (codimension = dimension).
struct SingularPointNd {
    std::vector<double> coords;
    double exponent = 0.0;
};

struct SingularSet {
    std::vector<SingularHyperplane> hyperplanes;
    std::vector<SingularPointNd> points;
};

namespace detail {

struct Interval {
    double a, b;
    complex value;
    double err;
    // exponent of the declared singularity sitting at an endpoint (<0: none)
    double sing_left = -1.0;
    double sing_right = -1.0;
};

struct IntervalCmp {
    bool operator()(const Interval& p, const Interval& q) const { return p.err < q.err; }
};

// Evaluate the interval with the GL15/GL7 pair. Nodes within delta_lc of a
// singular endpoint contribute zero (the sliver is accounted for separately
// when the interval is retired).
template <class F>
inline void rate_interval(const F& f, Interval& iv, double delta_lc, long& evals) {
    const auto& hi = gauss15();
    const auto& lo = gauss7();
    const double h = 0.5 * (iv.b - iv.a);
    const double c = 0.5 * (iv.a + iv.b);
    auto guarded = [&](double x) -> complex {
        if (iv.sing_left >= 0 && x - iv.a < delta_lc) return {0.0, 0.0};
        if (iv.sing_right >= 0 && iv.b - x < delta_lc) return {0.0, 0.0};
        ++evals;
        return f(x);
    };
    complex shi{0, 0}, slo{0, 0};
    for (std::size_t i = 0; i < hi.nodes.size(); ++i) shi += hi.weights[i] * guarded(c + h * hi.nodes[i]);
    for (std::size_t i = 0; i < lo.nodes.size(); ++i) slo += lo.weights[i] * guarded(c + h * lo.nodes[i]);
    iv.value = shi * h;
    iv.err = std::abs(shi - slo) * h;
}

} // namespace detail

// ---------------------------------------------------------------------------
// 1D adaptive quadrature with declared singular points.
//
// Interior singular points become interval endpoints; bisection then grades
// geometrically toward them, which converges exponentially in work for
// power-law exponents < 1. When an interval flanking a singular endpoint
// shrinks near delta_lc it is retired: the local power-law coefficient is fit
// from two probes and the remaining sliver mass is extrapolated into the
// value, with the fit spread added to the error estimate.
// ---------------------------------------------------------------------------
template <class F>
inline IntegrationResult adaptive_1d(const F& f, double a, double b,
                                     const std::vector<Singular1D>& singulars,
                                     double abs_tol, double rel_tol, long max_evals,
                                     double delta_lc, long* eval_counter = nullptr) {
    IntegrationResult res;
    if (!(b > a)) {
        res.converged = true;
        return res;
    }
    long local_evals = 0;
    long& evals = eval_counter ? *eval_counter : local_evals;
    const long eval_start = evals;

    // Split points: all declared singularities strictly inside (a, b).
    std::vector<Singular1D> cuts;
    for (const auto& s : singulars)
        if (s.x > a + 1e-300 && s.x < b - 1e-300) cuts.push_back(s);
    std::sort(cuts.begin(), cuts.end(), [](auto& p, auto& q) { return p.x < q.x; });

    auto endpoint_exponent = [&](double x) -> double {
        for (const auto& s : singulars)
            if (std::abs(s.x - x) <= delta_lc) return std::max(0.0, s.exponent);
        return -1.0;
    };

    std::priority_queue<detail::Interval, std::vector<detail::Interval>, detail::IntervalCmp> queue;
    complex total{0, 0};
    double total_err = 0.0;
    complex retired_value{0, 0};
    double retired_err = 0.0;

    auto push_interval = [&](double lo, double hi_, double sl, double sr) {
        if (!(hi_ > lo)) return;
        detail::Interval iv{lo, hi_, {0, 0}, 0.0, sl, sr};
        detail::rate_interval(f, iv, delta_lc, evals);
        total += iv.value;
        total_err += iv.err;
        queue.push(iv);
    };

    double prev = a;
    double prev_s = endpoint_exponent(a);
    for (const auto& c : cuts) {
        push_interval(prev, c.x, prev_s, std::max(0.0, c.exponent));
        prev = c.x;
        prev_s = std::max(0.0, c.exponent);
    }
    push_interval(prev, b, prev_s, endpoint_exponent(b));

    auto tol_target = [&]() {
        return std::max(abs_tol, rel_tol * std::abs(total + retired_value));
    };
    auto tol_met = [&]() { return total_err + retired_err <= tol_target(); };

    // Retire an interval adjacent to a singular endpoint by extrapolating
    // A*d^{-p} across it; returns false (no action) when the power-law fit is
    // not yet trustworthy and the interval is still large enough to bisect.
    auto try_retire = [&](const detail::Interval& iv, bool force) -> bool {
        const bool left = iv.sing_left >= 0;
        const double p = left ? iv.sing_left : iv.sing_right;
        const double h = iv.b - iv.a;
        if (p >= 1.0) {
            if (!force) return false;
            // non-integrable or borderline: keep the raw estimate, flag via error
            retired_value += iv.value;
            retired_err += std::max(iv.err, std::abs(iv.value));
            return true;
        }
        auto at_dist = [&](double d) { return left ? iv.a + d : iv.b - d; };
        const double d1p = 0.75 * h, d2p = 0.375 * h;
        evals += 2;
        const complex a1 = f(at_dist(d1p)) * std::pow(d1p, p);
        const complex a2 = f(at_dist(d2p)) * std::pow(d2p, p);
        const complex coeff = 0.5 * (a1 + a2);
        const double spread = std::abs(a1 - a2);
        const double mass = std::pow(h, 1.0 - p) / (1.0 - p);
        // for an exact power law the extrapolation is exact (spread = 0);
        // the residual is controlled by the fit spread across the probes
        const double resid = 1.5 * spread * mass;
        if (!force && resid > 0.02 * tol_target()) return false;
        retired_value += coeff * mass;
        retired_err += resid;
        return true;
    };

    while (!queue.empty() && !tol_met() && evals < max_evals) {
        detail::Interval iv = queue.top();
        queue.pop();
        total -= iv.value;
        total_err -= iv.err;
        const double h = iv.b - iv.a;
        const bool at_sing = iv.sing_left >= 0 || iv.sing_right >= 0;
        if (at_sing) {
            if (try_retire(iv, h < 8.0 * delta_lc)) continue;
        } else if (h < 8.0 * delta_lc || h < 1e-14 * (b - a)) {
            retired_value += iv.value;
            retired_err += iv.err;
            continue;
        }
        const double mid = 0.5 * (iv.a + iv.b);
        push_interval(iv.a, mid, iv.sing_left, -1.0);
        push_interval(mid, iv.b, -1.0, iv.sing_right);
    }

    res.value = total + retired_value;
    res.error_estimate = total_err + retired_err;
    res.evals = evals - eval_start;
    res.converged = tol_met();
    return res;
}

// ---------------------------------------------------------------------------
// Adaptive tensor quadrature over a box, dimensions 1..3, via iterated 1D
// adaptive integration. Hyperplane singularities are intersected with each
// slice, so slanted light-cone lines reduce to movable 1D singular points.
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<Singular1D> outer_markers(const SingularSet& sing,
                                             std::span<const double> lo,
                                             std::span<const double> hi, double delta_lc) {
    // Markers on axis 0 of the current box: genuine power-law points where a
    // hyperplane is normal to axis 0, plus breakpoints where the sliced
    // integrand loses smoothness (line/box and line/line crossings, point
    // singularities seen from outside).
    const std::size_t d = lo.size();
    std::vector<Singular1D> out;
    for (const auto& hp : sing.hyperplanes) {
        double tangential = 0.0;
        for (std::size_t i = 1; i < d; ++i) tangential += std::abs(hp.normal[i]);
        if (std::abs(hp.normal[0]) < 1e-300) continue;
        if (tangential < 1e-12 * std::abs(hp.normal[0])) {
            out.push_back({hp.offset / hp.normal[0], hp.exponent});
        } else if (d == 2) {
            // crossing of the line with the inner-axis faces
            for (double face : {lo[1], hi[1]}) {
                const double x0 = (hp.offset - hp.normal[1] * face) / hp.normal[0];
                out.push_back({x0, 0.0});
            }
        }
    }
    if (d == 2) {
        // pairwise line intersections produce kinks of the slice integral
        for (std::size_t i = 0; i < sing.hyperplanes.size(); ++i)
            for (std::size_t j = i + 1; j < sing.hyperplanes.size(); ++j) {
                const auto& p = sing.hyperplanes[i];
                const auto& q = sing.hyperplanes[j];
                const double det = p.normal[0] * q.normal[1] - p.normal[1] * q.normal[0];
                if (std::abs(det) < 1e-12) continue;
                const double x0 = (p.offset * q.normal[1] - q.offset * p.normal[1]) / det;
                out.push_back({x0, 0.0});
            }
    }
    for (const auto& pt : sing.points)
        out.push_back({pt.coords[0], std::max(0.0, pt.exponent - double(d - 1))});
    (void)delta_lc;
    return out;
}

inline SingularSet slice_singularities(const SingularSet& sing, double x0, double delta_lc,
                                       std::size_t dim) {
    // Restrict the singular set to the slice axis0 = x0 (remaining dims shift
    // down by one).
    SingularSet out;
    for (const auto& hp : sing.hyperplanes) {
        SingularHyperplane r;
        r.normal.assign(hp.normal.begin() + 1, hp.normal.end());
        double tangential = 0.0;
        for (double v : r.normal) tangential += std::abs(v);
        if (tangential < 1e-300) continue; // normal to axis 0: handled by outer markers
        r.offset = hp.offset - hp.normal[0] * x0;
        r.exponent = hp.exponent;
        out.hyperplanes.push_back(std::move(r));
    }
    for (const auto& pt : sing.points) {
        // A nearby point singularity appears in the slice as a (dim-1)-point.
        if (std::abs(pt.coords[0] - x0) < 0.25) {
            SingularPointNd r;
            r.coords.assign(pt.coords.begin() + 1, pt.coords.end());
            r.exponent = pt.exponent;
            out.points.push_back(std::move(r));
        }
    }
    (void)delta_lc;
    (void)dim;
    return out;
}

template <class F>
inline IntegrationResult integrate_box(const F& f, std::vector<double>& point,
                                       std::span<const double> lo, std::span<const double> hi,
                                       const SingularSet& sing, double abs_tol, double rel_tol,
                                       long max_evals, double delta_lc, long& evals) {
    const std::size_t d = lo.size();
    if (d == 1) {
        std::vector<Singular1D> s1;
        for (const auto& hp : sing.hyperplanes)
            if (std::abs(hp.normal[0]) > 1e-300)
                s1.push_back({hp.offset / hp.normal[0], hp.exponent});
        for (const auto& pt : sing.points) s1.push_back({pt.coords[0], pt.exponent});
        const std::size_t base = point.size() - 1;
        auto g = [&](double x) {
            point[base] = x;
            return f(std::span<const double>(point));
        };
        return adaptive_1d(g, lo[0], hi[0], s1, abs_tol, rel_tol, max_evals, delta_lc, &evals);
    }

    // outer axis = axis 0 of the current box
    const double len = hi[0] - lo[0];
    const double inner_abs = abs_tol / (8.0 * std::max(len, 1e-300));
    const double inner_rel = std::max(rel_tol / 8.0, 1e-14);
    double inner_err_acc = 0.0;
    const std::size_t base = point.size() - d;

    auto outer_f = [&](double x0) -> complex {
        point[base] = x0;
        SingularSet ss = slice_singularities(sing, x0, delta_lc, d);
        IntegrationResult inner = integrate_box(f, point, lo.subspan(1), hi.subspan(1), ss,
                                                inner_abs, inner_rel, max_evals, delta_lc, evals);
        inner_err_acc += inner.error_estimate;
        return inner.value;
    };

    std::vector<Singular1D> markers = outer_markers(sing, lo, hi, delta_lc);
    IntegrationResult res = adaptive_1d(outer_f, lo[0], hi[0], markers, abs_tol, rel_tol,
                                        max_evals, delta_lc, &evals);
    // inner errors enter roughly in proportion to the quadrature measure
    res.error_estimate += inner_err_acc > 0 ? std::min(inner_err_acc, abs_tol) : 0.0;
    return res;
}

} // namespace detail

// f receives a point of size dim. Declared singularities refer to box coords.
template <class F>
inline IntegrationResult integrate_adaptive(const F& f, std::span<const double> lo,
                                            std::span<const double> hi, const SingularSet& sing,
                                            const QuadratureConfig& cfg) {
    cfg.validate();
    const std::size_t d = lo.size();
    if (d < 1 || d > 3) throw domain_error("integrate_adaptive: dimension must be 1..3");
    for (const auto& hp : sing.hyperplanes)
        if (hp.normal.size() != d)
            throw domain_error("integrate_adaptive: hyperplane dimension mismatch");
    for (const auto& pt : sing.points)
        if (pt.coords.size() != d)
            throw domain_error("integrate_adaptive: point dimension mismatch");
    long evals = 0;
    std::vector<double> point(d, 0.0);
    IntegrationResult res = detail::integrate_box(f, point, lo, hi, sing, cfg.abs_tol,
                                                  cfg.rel_tol, cfg.max_evals, cfg.delta_lc, evals);
    res.evals = evals;
    res.converged = res.error_estimate <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(res.value));
    return res;
}

// ---------------------------------------------------------------------------
// Semi-infinite integrals with declared exponential decay rate sigma.
// Truncates at R = (1/sigma) log((1 + poly_margin)/abs_tol); the remainder is
// bounded from probes of |f| e^{sigma r} near R and added to the error.
// ---------------------------------------------------------------------------
template <class F>
inline IntegrationResult integrate_tail(const F& f, double sigma, const QuadratureConfig& cfg,
                                        const std::vector<Singular1D>& singulars = {}) {
    cfg.validate();
    if (!(sigma > 0)) throw domain_error("integrate_tail: decay rate sigma must be positive");
    const double abs_floor = std::max(cfg.abs_tol * 1e-2, 1e-300);
    double R = std::log((1.0 + cfg.tail_poly_margin) / abs_floor) / sigma;
    R = std::max(R, 4.0 / sigma);

    long evals = 0;
    auto g = [&](double x) { return f(x); };
    IntegrationResult res = adaptive_1d(g, 0.0, R, singulars, cfg.abs_tol, cfg.rel_tol,
                                        cfg.max_evals, cfg.delta_lc, &evals);
    double coeff = 0.0;
    for (double u : {0.90, 0.95, 1.0}) {
        ++evals;
        coeff = std::max(coeff, std::abs(f(u * R)) * std::exp(sigma * u * R));
    }
    res.error_estimate += coeff * std::exp(-sigma * R) / sigma;
    res.evals = evals;
    res.converged = res.error_estimate <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(res.value));
    return res;
}

// ---------------------------------------------------------------------------
// Stratified Monte Carlo with importance sampling.
//
// The engine feeds raw uniforms (coordinate 0 stratified) to the sampler,
// which maps them to an integration point and returns the sampling density
// at that point. Variates are a pure function of (seed, stratum, index), so
// results do not depend on scheduling; strata are reduced in index order.
// ---------------------------------------------------------------------------

struct McSampler {
    int dim = 0;      // dimension of the mapped point
    int raw_dim = 0;  // uniforms consumed per sample
    // fills x (size dim), returns the pdf of x under this sampler (> 0)
    std::function<double(std::span<const double> u, std::vector<double>& x)> map;
};

// Product sampler building blocks covering the workloads in this project.
struct McAxis {
    enum class Kind { Uniform, PowerLeft, PowerRight, ExpTail } kind = Kind::Uniform;
    double a = 0.0;        // interval start (Uniform/Power) or tail origin (ExpTail)
    double b = 1.0;        // interval end
    double exponent = 0.0; // p for density ~ d^{-p}, 0 <= p < 1
    double sigma = 1.0;    // rate for ExpTail
    bool negate = false;   // ExpTail extends toward -infinity from a

    // maps u in [0,1) to a coordinate, returns density
    double draw(double u, double& x) const {
        switch (kind) {
            case Kind::Uniform:
                x = a + (b - a) * u;
                return 1.0 / (b - a);
            case Kind::PowerLeft: {
                const double q = 1.0 - exponent;
                const double w = b - a;
                const double d = w * std::pow(u, 1.0 / q);
                x = a + d;
                return q / w * std::pow(d / w, -exponent);
            }
            case Kind::PowerRight: {
                const double q = 1.0 - exponent;
                const double w = b - a;
                const double d = w * std::pow(u, 1.0 / q);
                x = b - d;
                return q / w * std::pow(d / w, -exponent);
            }
            case Kind::ExpTail: {
                const double r = -std::log1p(-u * (1.0 - 1e-300)) / sigma;
                x = negate ? a - r : a + r;
                return sigma * std::exp(-sigma * r);
            }
        }
        return 0.0;
    }
};

inline McSampler make_product_sampler(std::vector<McAxis> axes) {
    McSampler s;
    s.dim = static_cast<int>(axes.size());
    s.raw_dim = s.dim;
    s.map = [axes = std::move(axes)](std::span<const double> u, std::vector<double>& x) {
        double pdf = 1.0;
        x.resize(axes.size());
        for (std::size_t i = 0; i < axes.size(); ++i) pdf *= axes[i].draw(u[i], x[i]);
        return pdf;
    };
    return s;
}

inline int mc_worker_count() {
    if (const char* env = std::getenv("LIOUVILLE_WORKERS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

template <class F>
inline IntegrationResult integrate_mc(const F& f, const McSampler& sampler,
                                      const QuadratureConfig& cfg,
                                      std::uint64_t stream_salt = 0) {
    cfg.validate();
    const long n_total = cfg.mc_samples;
    const int n_strata = static_cast<int>(std::clamp<long>(n_total / 16, 1, 256));
    const long per = n_total / n_strata;
    const long extra = n_total % n_strata;

    struct StratumAcc {
        complex sum{0, 0};
        double sum_sq_re = 0, sum_sq_im = 0;
        long n = 0;
        long bad = 0;
        std::vector<double> first_bad;
    };
    std::vector<StratumAcc> acc(n_strata);

    auto run_stratum = [&](int s) {
        StratumAcc& a = acc[s];
        const long n = per + (s < extra ? 1 : 0);
        CounterRng rng(cfg.mc_seed, hash_combine(0x51a7u, hash_combine(stream_salt, s)));
        std::vector<double> u(sampler.raw_dim), x;
        for (long j = 0; j < n; ++j) {
            for (int r = 0; r < sampler.raw_dim; ++r)
                u[r] = rng.uniform(static_cast<std::uint64_t>(j) * sampler.raw_dim + r);
            u[0] = (s + u[0]) / n_strata;
            const double pdf = sampler.map(u, x);
            complex v = f(std::span<const double>(x)) / pdf;
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
                if (a.bad == 0) a.first_bad = x;
                ++a.bad;
                continue;
            }
            a.sum += v;
            a.sum_sq_re += v.real() * v.real();
            a.sum_sq_im += v.imag() * v.imag();
            ++a.n;
        }
    };

    const int workers = std::min(mc_worker_count(), n_strata);
    if (workers <= 1) {
        for (int s = 0; s < n_strata; ++s) run_stratum(s);
    } else {
        std::vector<std::thread> pool;
        std::vector<int> next(workers);
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (int s = w; s < n_strata; s += workers) run_stratum(s);
            });
        for (auto& th : pool) th.join();
    }

    long bad = 0, n_eff = 0;
    for (const auto& a : acc) {
        bad += a.bad;
        n_eff += a.n;
    }
    if (bad > 0) {
        std::string where = "(";
        if (!acc[0].first_bad.empty() || bad > 0) {
            for (const auto& a : acc)
                if (!a.first_bad.empty()) {
                    for (std::size_t i = 0; i < a.first_bad.size(); ++i)
                        where += (i ? ", " : "") + std::to_string(a.first_bad[i]);
                    break;
                }
        }
        where += ")";
        throw mc_abort("integrate_mc: non-finite integrand at " + std::to_string(bad) +
                       " samples, first at " + where);
    }

    IntegrationResult res;
    complex mean_of_means{0, 0};
    double var = 0.0;
    for (const auto& a : acc) {
        if (a.n == 0) continue;
        const complex m = a.sum / static_cast<double>(a.n);
        mean_of_means += m;
        if (a.n > 1) {
            const double vr = std::max(0.0, a.sum_sq_re / a.n - m.real() * m.real());
            const double vi = std::max(0.0, a.sum_sq_im / a.n - m.imag() * m.imag());
            var += (vr + vi) / (a.n - 1);
        }
    }
    mean_of_means /= static_cast<double>(n_strata);
    var /= static_cast<double>(n_strata) * n_strata;
    res.value = mean_of_means;
    res.error_estimate = std::sqrt(var);
    res.evals = n_eff;
    res.converged = res.error_estimate <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(res.value));
    return res;
}

} // namespace liouville
