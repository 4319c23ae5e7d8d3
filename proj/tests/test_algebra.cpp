#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "liouville/algebra.hpp"

using namespace liouville;

namespace {

QuadratureConfig mc_cfg(long samples = 200000) {
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-3;
    cfg.abs_tol = 1e-6;
    cfg.mc_samples = samples;
    cfg.mc_seed = 99173;
    return cfg;
}

SmearedFactor factor(int n, double t, double x, double eps, complex coeff = {1.0, 0.0}) {
    SmearedFactor f;
    f.bump = BumpFunction(CylinderPoint(t, x), eps, eps);
    f.n = n;
    f.coeff = coeff;
    return f;
}

} // namespace

TEST_CASE("bump function has unit mass") {
    QuadratureConfig cfg;
    cfg.rel_tol = 1e-11;
    cfg.abs_tol = 1e-12;
    for (auto [et, ex] : {std::pair{0.1, 0.2}, {0.05, 0.05}, {0.4, 0.9}}) {
        BumpFunction f(CylinderPoint(0.3, -0.2), et, ex);
        const double lo[2] = {0.3 - et, -1.0}, hi[2] = {0.3 + et, 1.0};
        auto r = integrate_adaptive(
            [&](std::span<const double> p) -> complex {
                return f.value(CylinderPoint(p[0], p[1]));
            },
            std::span<const double>(lo, 2), std::span<const double>(hi, 2), {}, cfg);
        CHECK(r.value.real() == Catch::Approx(1.0).epsilon(1e-10));
    }
    CHECK_THROWS_AS(BumpFunction(CylinderPoint(0, 0), -0.1, 0.1), domain_error);
}

TEST_CASE("bump sampling density matches the tabulated pdf") {
    BumpFunction f(CylinderPoint(0.0, 0.0), 0.2, 0.3);
    CounterRng rng(7, 1);
    for (int i = 0; i < 200; ++i) {
        CylinderPoint u(0, 0);
        const double pdf = f.sample(rng.uniform(2 * i), rng.uniform(2 * i + 1), u);
        CHECK(pdf > 0.0);
        CHECK(std::abs(u.t) <= 0.2);
        CHECK(d1(u.x) <= 0.3);
    }
}

TEST_CASE("star involution is exact at the data-structure level") {
    SmearedMonomial m;
    m.factors = {factor(1, 0.0, 0.0, 0.05, {0.5, 1.5}), factor(-2, 0.1, 0.8, 0.05)};
    const auto ss = star(star(m));
    REQUIRE(ss.factors.size() == m.factors.size());
    for (std::size_t i = 0; i < m.factors.size(); ++i) {
        CHECK(ss.factors[i].n == m.factors[i].n);
        CHECK(ss.factors[i].coeff == m.factors[i].coeff);
        CHECK(ss.factors[i].bump.center.t == m.factors[i].bump.center.t);
    }
    // (AB)* = B* A*
    SmearedMonomial a, b;
    a.factors = {factor(1, 0.0, 0.0, 0.05)};
    b.factors = {factor(-1, 0.2, 0.5, 0.05, {0.0, 1.0})};
    const auto lhs = star(a * b);
    const auto rhs = star(b) * star(a);
    REQUIRE(lhs.factors.size() == 2);
    CHECK(lhs.factors[0].n == rhs.factors[0].n);
    CHECK(lhs.factors[0].coeff == rhs.factors[0].coeff);
    CHECK(lhs.factors[1].n == rhs.factors[1].n);
}

TEST_CASE("omega basics: empty monomial, vanishing sector, charge range") {
    ModelParams mp{0.3, 1.0};
    auto cfg = mc_cfg(1000);
    CHECK(omega(SmearedMonomial{}, mp, cfg).value == complex(1.0, 0.0));

    SmearedMonomial pos;
    pos.factors = {factor(1, 0.0, 0.0, 0.1)};
    CHECK(omega(pos, mp, cfg).value == complex(0.0, 0.0)); // w = -1

    SmearedMonomial bad;
    bad.factors = {factor(3, 0.0, 0.0, 0.1)}; // |3| >= 1/(sqrt2 * 0.3) = 2.36
    CHECK_THROWS_AS(omega(bad, mp, cfg), charge_out_of_range);
}

TEST_CASE("omega of a single negative-charge factor reproduces c_b") {
    ModelParams mp{0.3, 1.0};
    auto cfg = mc_cfg(400000);
    const double cb = -mp.mu * tadpole_Ib(mp.b).value;
    SmearedMonomial m;
    m.factors = {factor(-1, 0.0, 0.0, 0.1)};
    auto r = omega(m, mp, cfg);
    CHECK(std::abs(r.value.real() - cb) <= 4.0 * r.error_estimate + 2e-3 * std::abs(cb));
    CHECK(std::abs(r.value.imag()) <= 4.0 * r.error_estimate);

    // independence of the bump's placement and width
    SmearedMonomial m2;
    m2.factors = {factor(-1, 0.7, -0.4, 0.03)};
    auto r2 = omega(m2, mp, cfg);
    CHECK(std::abs(r2.value.real() - cb) <= 4.0 * r2.error_estimate + 2e-3 * std::abs(cb));
}

TEST_CASE("omega is linear in the test function") {
    ModelParams mp{0.3, 1.0};
    auto cfg = mc_cfg(100000);
    SmearedMonomial m;
    m.factors = {factor(-1, 0.0, 0.0, 0.1)};
    auto base = omega(m, mp, cfg);
    for (complex c : {complex(2.0, 0.0), complex(0.0, 1.0), complex(-0.7, 0.4)}) {
        SmearedMonomial scaled = m;
        scaled.factors[0].coeff = c;
        auto r = omega(scaled, mp, cfg);
        CHECK(std::abs(r.value - c * base.value) <=
              4.0 * (std::abs(c) * base.error_estimate + r.error_estimate) + 1e-12);
    }
}

TEST_CASE("hermiticity residual vanishes for spacelike factors") {
    ModelParams mp{0.3, 1.0};
    auto cfg = mc_cfg(150000);
    SmearedMonomial m;
    m.factors = {factor(1, 0.0, 0.0, 0.04), factor(-2, 0.05, 0.9, 0.04)};
    auto r = hermiticity_residual(m, mp, cfg);
    CHECK(r.residual <= 4.0 * r.error + 1e-6);

    // complex-scaled bump: conjugate-linearity check
    SmearedMonomial mc = m;
    mc.factors[0].coeff = complex(0.0, 1.0);
    auto rc = hermiticity_residual(mc, mp, cfg);
    CHECK(rc.residual <= 4.0 * rc.error + 1e-6);
}

TEST_CASE("spacelike support check") {
    SmearedMonomial a, b;
    a.factors = {factor(-1, 0.0, 0.0, 0.05)};
    b.factors = {factor(-1, 0.1, 0.8, 0.05)};
    CHECK(supports_spacelike(a, b, 0.0));
    SmearedMonomial c;
    c.factors = {factor(-1, 0.9, 0.05, 0.05)};
    CHECK_FALSE(supports_spacelike(a, c, 0.0));
    ModelParams mp{0.3, 1.0};
    CHECK_THROWS_AS(smeared_locality_residual(a, c, mp, mc_cfg(1000)), not_spacelike);
}

TEST_CASE("indefiniteness probe input validation") {
    ModelParams mp{0.3, 1.0};
    CHECK_THROWS_AS(indefiniteness_probe(0.3, {0.7}, mp, mc_cfg(1000)), domain_error);
    auto pts = indefiniteness_probe(0.3, {0.3}, mp, mc_cfg(20000));
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].eps == 0.3);
    CHECK(std::isfinite(pts[0].gram_value));
}
