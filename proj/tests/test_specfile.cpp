#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "liouville/manifest.hpp"
#include "liouville/specfile.hpp"

using namespace liouville;

TEST_CASE("correlator spec round trip") {
    std::istringstream in(R"(# tadpole
b 0.3
mu 1.5
insertion -0.3 0.0 0.4 -0.25
insertion  0.0 0.0 1.0  0.5   # ghost
rel_tol 1e-5
)");
    auto sf = parse_specfile(in);
    CHECK(sf.params.b == 0.3);
    CHECK(sf.params.mu == 1.5);
    REQUIRE(sf.insertions.size() == 2);
    CHECK(sf.insertions[0].label == 1);
    CHECK(sf.insertions[1].label == 2);
    CHECK(sf.insertions[0].charge.alpha.real() == -0.3);
    CHECK(sf.has_cfg_overrides);
    CHECK(sf.cfg.rel_tol == 1e-5);

    std::ostringstream out;
    write_specfile(out, sf);
    std::istringstream in2(out.str());
    auto sf2 = parse_specfile(in2);
    CHECK(sf2.insertions.size() == sf.insertions.size());
    CHECK(sf2.insertions[1].point.t == sf.insertions[1].point.t);
    CHECK(sf2.params.mu == sf.params.mu);
}

TEST_CASE("monomial factors parse") {
    std::istringstream in(R"(
b 0.3
factor -1 0.0 0.0 0.1 0.1
factor  1 0.1 0.8 0.05 0.05 0.0 1.0
)");
    auto sf = parse_specfile(in);
    REQUIRE(sf.factors.size() == 2);
    CHECK(sf.factors[0].n == -1);
    CHECK(sf.factors[1].coeff == complex(0.0, 1.0));
}

TEST_CASE("config parser validates keys and values") {
    std::istringstream ok("rel_tol 1e-7\nmc_samples 5000\n");
    auto cfg = parse_config(ok);
    CHECK(cfg.rel_tol == 1e-7);
    CHECK(cfg.mc_samples == 5000);

    std::istringstream bad_key("no_such_key 1\n");
    CHECK_THROWS_AS(parse_config(bad_key), parse_error);
    std::istringstream bad_val("rel_tol abc\n");
    CHECK_THROWS_AS(parse_config(bad_val), parse_error);
    std::istringstream bad_ins("insertion 1 2 3\n");
    CHECK_THROWS_AS(parse_specfile(bad_ins), parse_error);
}

TEST_CASE("manifest embeds parameters as json") {
    RunManifest man;
    man.command = "correlator";
    man.params = ModelParams{0.3, 1.0};
    man.cfg.mc_seed = 42;
    man.spec = "inline";
    man.timestamp = "2026-01-01T00:00:00Z";
    const auto j = man.to_json();
    CHECK(j["params"]["b"] == 0.3);
    CHECK(j["cfg"]["mc_seed"] == 42);
    CHECK(j["version"] == tool_version);
    CHECK(man.csv_header().rfind("# manifest {", 0) == 0);
}
