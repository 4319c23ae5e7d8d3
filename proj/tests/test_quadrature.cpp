#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "liouville/quadrature.hpp"

using namespace liouville;

namespace {

QuadratureConfig tight() {
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-9;
    cfg.abs_tol = 1e-11;
    return cfg;
}

} // namespace

TEST_CASE("1d endpoint power-law singularity") {
    auto cfg = tight();
    long evals = 0;
    auto r = adaptive_1d([](double x) -> complex { return 1.0 / std::sqrt(x); }, 0.0, 1.0,
                         {{0.0, 0.5}}, cfg.abs_tol, cfg.rel_tol, cfg.max_evals, cfg.delta_lc,
                         &evals);
    CHECK(r.converged);
    CHECK(r.value.real() == Catch::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("1d divergent integrand is flagged, not silently summed") {
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-8;
    cfg.abs_tol = 1e-10;
    cfg.max_evals = 200000;
    long evals = 0;
    auto r = adaptive_1d([](double x) -> complex { return 1.0 / (x * x); }, 0.0, 1.0,
                         {{0.0, 2.0}}, cfg.abs_tol, cfg.rel_tol, cfg.max_evals, cfg.delta_lc,
                         &evals);
    CHECK_FALSE(r.converged);
}

TEST_CASE("2d singular line |x-y|^{-1/2} over the unit square") {
    // oracle: int_0^1 int_0^1 |x-y|^{-1/2} = 8/3 (iterated antiderivative)
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-7;
    cfg.abs_tol = 1e-9;
    SingularSet sing;
    sing.hyperplanes.push_back({{1.0, -1.0}, 0.0, 0.5});
    const double lo[2] = {0.0, 0.0}, hi[2] = {1.0, 1.0};
    auto r = integrate_adaptive(
        [](std::span<const double> p) -> complex {
            return 1.0 / std::sqrt(std::abs(p[0] - p[1]));
        },
        std::span<const double>(lo, 2), std::span<const double>(hi, 2), sing, cfg);
    CHECK(r.converged);
    CHECK(r.value.real() == Catch::Approx(8.0 / 3.0).epsilon(1e-6));
}

TEST_CASE("2d slanted singular line |x+y-1|^{-1/2}") {
    // same mass as the diagonal case by symmetry: 8/3
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-7;
    cfg.abs_tol = 1e-9;
    SingularSet sing;
    sing.hyperplanes.push_back({{1.0, 1.0}, 1.0, 0.5});
    const double lo[2] = {0.0, 0.0}, hi[2] = {1.0, 1.0};
    auto r = integrate_adaptive(
        [](std::span<const double> p) -> complex {
            return 1.0 / std::sqrt(std::abs(p[0] + p[1] - 1.0));
        },
        std::span<const double>(lo, 2), std::span<const double>(hi, 2), sing, cfg);
    CHECK(r.converged);
    CHECK(r.value.real() == Catch::Approx(8.0 / 3.0).epsilon(1e-6));
}

TEST_CASE("3d box with one singular face") {
    // int over [0,1]^3 of x^{-1/2} (1+y)(1+z) = 2 * (3/2)^2 = 4.5
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-6;
    cfg.abs_tol = 1e-8;
    SingularSet sing;
    sing.hyperplanes.push_back({{1.0, 0.0, 0.0}, 0.0, 0.5});
    const double lo[3] = {0.0, 0.0, 0.0}, hi[3] = {1.0, 1.0, 1.0};
    auto r = integrate_adaptive(
        [](std::span<const double> p) -> complex {
            return (1.0 + p[1]) * (1.0 + p[2]) / std::sqrt(p[0]);
        },
        std::span<const double>(lo, 3), std::span<const double>(hi, 3), sing, cfg);
    CHECK(r.value.real() == Catch::Approx(4.5).epsilon(1e-5));
}

TEST_CASE("exponential tail with unit rate") {
    auto cfg = tight();
    auto r = integrate_tail([](double x) -> complex { return std::exp(-x); }, 1.0, cfg);
    CHECK(r.converged);
    CHECK(r.value.real() == Catch::Approx(1.0).epsilon(1e-9));
    CHECK_THROWS_AS(
        integrate_tail([](double x) -> complex { return std::exp(-x); }, 0.0, cfg),
        domain_error);
}

TEST_CASE("renormalized screening tail against brute-force oracle") {
    // f(x) = e^{-2 pi b^2 x} (1 - e^{-pi x})^{-8 b^2}, b = 0.3: the w = 1
    // Lorentzian tail profile. Oracle: 1e7-point trapezoid in the substituted
    // variable x = u^8, which regularizes the x = 0 endpoint.
    const double b = 0.3;
    const double p = 8.0 * b * b; // 0.72
    auto f = [&](double x) {
        return std::exp(-2.0 * pi * b * b * x) * std::pow(1.0 - std::exp(-pi * x), -p);
    };
    const double R = 40.0;
    const double U = std::pow(R, 1.0 / 8.0);
    const long n = 10000000;
    const double h = U / n;
    double oracle = 0.0;
    for (long i = 1; i < n; ++i) {
        const double u = i * h;
        oracle += f(std::pow(u, 8.0)) * 8.0 * std::pow(u, 7.0);
    }
    const double un = U - 0.5 * h; // half-weight closing sample
    oracle += 0.5 * f(std::pow(un, 8.0)) * 8.0 * std::pow(un, 7.0);
    oracle *= h;

    QuadratureConfig cfg;
    cfg.rel_tol = 1e-10;
    cfg.abs_tol = 1e-12;
    auto r = integrate_tail([&](double x) -> complex { return f(x); }, 2.0 * pi * b * b, cfg,
                            {{0.0, p}});
    CHECK(r.converged);
    CHECK(std::abs(r.value.real() - oracle) <= 1e-8 * std::abs(oracle));
}

TEST_CASE("mc: constant integrand is exact") {
    QuadratureConfig cfg;
    cfg.mc_samples = 5000;
    auto sampler = make_product_sampler({{McAxis{}}, {McAxis{}}});
    auto r = integrate_mc([](std::span<const double>) -> complex { return 1.0; }, sampler, cfg);
    CHECK(r.value.real() == Catch::Approx(1.0));
    CHECK(r.error_estimate == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("mc: determinism for fixed seed") {
    QuadratureConfig cfg;
    cfg.mc_samples = 20000;
    cfg.mc_seed = 777;
    auto sampler = make_product_sampler({{McAxis{}}, {McAxis{}}});
    auto f = [](std::span<const double> x) -> complex {
        return std::sin(3.0 * x[0]) * std::exp(x[1]);
    };
    auto r1 = integrate_mc(f, sampler, cfg);
    auto r2 = integrate_mc(f, sampler, cfg);
    CHECK(r1.value.real() == r2.value.real());
    CHECK(r1.value.imag() == r2.value.imag());
    CHECK(r1.error_estimate == r2.error_estimate);
    cfg.mc_seed = 778;
    auto r3 = integrate_mc(f, sampler, cfg);
    CHECK(r1.value.real() != r3.value.real());
}

TEST_CASE("mc: importance-sampled product power law") {
    // int over [0,1]^4 of prod x_i^{-1/4} = (4/3)^4; with the matched
    // importance density the weight is constant, so the estimate is exact.
    QuadratureConfig cfg;
    cfg.mc_samples = 40000;
    McAxis ax;
    ax.kind = McAxis::Kind::PowerLeft;
    ax.a = 0.0;
    ax.b = 1.0;
    ax.exponent = 0.25;
    auto sampler = make_product_sampler({ax, ax, ax, ax});
    auto r = integrate_mc(
        [](std::span<const double> x) -> complex {
            double f = 1.0;
            for (double v : x) f *= std::pow(v, -0.25);
            return f;
        },
        sampler, cfg);
    const double expect = std::pow(4.0 / 3.0, 4.0);
    CHECK(std::abs(r.value.real() - expect) <= 3.0 * r.error_estimate + 1e-10);
}

TEST_CASE("mc: non-finite integrand aborts with diagnostic") {
    QuadratureConfig cfg;
    cfg.mc_samples = 100;
    auto sampler = make_product_sampler({{McAxis{}}});
    CHECK_THROWS_AS(integrate_mc(
                        [](std::span<const double> x) -> complex {
                            return x[0] > 0.5 ? 1.0 / 0.0 : 1.0;
                        },
                        sampler, cfg),
                    mc_abort);
}

TEST_CASE("linearity of the adaptive engine") {
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-10;
    cfg.abs_tol = 1e-13;
    CounterRng rng(11, 5);
    for (int trial = 0; trial < 5; ++trial) {
        const double a = 2.0 * rng.uniform(4 * trial) - 1.0;
        const double be = 2.0 * rng.uniform(4 * trial + 1) - 1.0;
        const double k1 = 1.0 + 4.0 * rng.uniform(4 * trial + 2);
        const double k2 = 1.0 + 4.0 * rng.uniform(4 * trial + 3);
        auto f = [k1](double x) -> complex { return std::sin(k1 * x); };
        auto g = [k2](double x) -> complex { return std::exp(-k2 * x * x); };
        long e = 0;
        auto rf = adaptive_1d(f, 0.0, 2.0, {}, cfg.abs_tol, cfg.rel_tol, cfg.max_evals,
                              cfg.delta_lc, &e);
        auto rg = adaptive_1d(g, 0.0, 2.0, {}, cfg.abs_tol, cfg.rel_tol, cfg.max_evals,
                              cfg.delta_lc, &e);
        auto rc = adaptive_1d([&](double x) -> complex { return a * f(x) + be * g(x); }, 0.0,
                              2.0, {}, cfg.abs_tol, cfg.rel_tol, cfg.max_evals, cfg.delta_lc,
                              &e);
        const double lhs = rc.value.real();
        const double rhs = a * rf.value.real() + be * rg.value.real();
        CHECK(std::abs(lhs - rhs) <=
              10.0 * (rc.error_estimate + std::abs(a) * rf.error_estimate +
                      std::abs(be) * rg.error_estimate) +
                  1e-12);
    }
}

TEST_CASE("refinement monotonicity against analytic oracles") {
    // halving rel_tol never worsens the discrepancy on the reference set
    auto run = [&](double rel) {
        QuadratureConfig cfg;
        cfg.rel_tol = rel;
        cfg.abs_tol = 1e-15;
        long e = 0;
        auto r = adaptive_1d([](double x) -> complex { return 1.0 / std::sqrt(x); }, 0.0, 1.0,
                             {{0.0, 0.5}}, cfg.abs_tol, cfg.rel_tol, cfg.max_evals, cfg.delta_lc,
                             &e);
        return std::abs(r.value.real() - 2.0);
    };
    double prev = 1e9;
    for (double rel : {1e-4, 5e-5, 2.5e-5, 1.25e-5, 6.25e-6}) {
        const double d = run(rel);
        CHECK(d <= prev + 1e-15);
        prev = d;
    }
}
