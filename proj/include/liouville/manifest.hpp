#pragma once

#include <chrono>
#include <ctime>
#include <string>

#include <json.hpp>

#include "liouville/correlators.hpp"
#include "liouville/quadrature.hpp"

namespace liouville {

inline constexpr const char* tool_version = "0.1.0";

// Every output file embeds a manifest, so any result is reproducible from
// the file alone (the timestamp is informational and excluded from the
// reproducibility contract).
struct RunManifest {
    std::string command;
    ModelParams params;
    QuadratureConfig cfg;
    std::string spec; // path or inline description
    std::string output_path;
    std::string timestamp;
    std::string version = tool_version;

    static std::string now() {
        const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
        return buf;
    }

    nlohmann::json to_json() const {
        return nlohmann::json{
            {"command", command},
            {"params", {{"b", params.b}, {"mu", params.mu}}},
            {"cfg",
             {{"rel_tol", cfg.rel_tol},
              {"abs_tol", cfg.abs_tol},
              {"max_evals", cfg.max_evals},
              {"tail_cutoff_sigma", cfg.tail_cutoff_sigma},
              {"tail_poly_margin", cfg.tail_poly_margin},
              {"mc_seed", cfg.mc_seed},
              {"mc_samples", cfg.mc_samples},
              {"delta_lc", cfg.delta_lc}}},
            {"spec", spec},
            {"output", output_path},
            {"timestamp", timestamp},
            {"version", version}};
    }

    // single-line comment header for CSV outputs
    std::string csv_header() const { return "# manifest " + to_json().dump(); }
};

} // namespace liouville
