#pragma once

// Human-readable structured text formats:
//
// correlator spec          smeared monomial            quadrature config
//   b 0.3                    b 0.3                       rel_tol 1e-8
//   mu 1.0                   mu 1.0                      abs_tol 1e-12
//   insertion aR aI t x      factor n t x et ex [cR cI]  max_evals 2000000
//   ...                      ...                         mc_seed 7 ...
//
// '#' starts a comment; insertion/factor labels are the order of appearance.

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "liouville/algebra.hpp"
#include "liouville/correlators.hpp"
#include "liouville/errors.hpp"
#include "liouville/quadrature.hpp"

namespace liouville {

struct parse_error : error {
    explicit parse_error(const std::string& msg) : error(msg) {}
};

namespace specfile_detail {

inline bool strip_and_split(const std::string& line, std::vector<std::string>& tokens) {
    tokens.clear();
    const auto hash = line.find('#');
    std::istringstream in(hash == std::string::npos ? line : line.substr(0, hash));
    std::string tok;
    while (in >> tok) tokens.push_back(tok);
    return !tokens.empty();
}

inline double num(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw parse_error("specfile: bad number '" + s + "' for " + what);
    }
}

} // namespace specfile_detail

// Apply "key value" lines onto a quadrature config; unknown keys are errors.
inline void apply_config_line(QuadratureConfig& cfg, const std::string& key,
                              const std::string& value) {
    using specfile_detail::num;
    if (key == "rel_tol")
        cfg.rel_tol = num(value, key);
    else if (key == "abs_tol")
        cfg.abs_tol = num(value, key);
    else if (key == "max_evals")
        cfg.max_evals = static_cast<long>(num(value, key));
    else if (key == "tail_cutoff_sigma")
        cfg.tail_cutoff_sigma = num(value, key);
    else if (key == "tail_poly_margin")
        cfg.tail_poly_margin = num(value, key);
    else if (key == "mc_seed")
        cfg.mc_seed = static_cast<std::uint64_t>(num(value, key));
    else if (key == "mc_samples")
        cfg.mc_samples = static_cast<long>(num(value, key));
    else if (key == "delta_lc")
        cfg.delta_lc = num(value, key);
    else
        throw parse_error("specfile: unknown config key '" + key + "'");
}

inline QuadratureConfig parse_config(std::istream& in) {
    QuadratureConfig cfg;
    std::string line;
    std::vector<std::string> tok;
    while (std::getline(in, line)) {
        if (!specfile_detail::strip_and_split(line, tok)) continue;
        if (tok.size() != 2) throw parse_error("specfile: config lines are 'key value'");
        apply_config_line(cfg, tok[0], tok[1]);
    }
    cfg.validate();
    return cfg;
}

// Parsed contents of a spec file: model parameters, point insertions and/or
// smeared factors, plus any inline quadrature overrides.
struct SpecFile {
    ModelParams params;
    std::vector<Insertion> insertions;
    std::vector<SmearedFactor> factors;
    QuadratureConfig cfg;
    bool has_cfg_overrides = false;
};

inline SpecFile parse_specfile(std::istream& in) {
    using specfile_detail::num;
    SpecFile out;
    std::string line;
    std::vector<std::string> tok;
    int label = 0;
    while (std::getline(in, line)) {
        if (!specfile_detail::strip_and_split(line, tok)) continue;
        const std::string& key = tok[0];
        if (key == "b" && tok.size() == 2) {
            out.params.b = num(tok[1], key);
        } else if (key == "mu" && tok.size() == 2) {
            out.params.mu = num(tok[1], key);
        } else if (key == "insertion") {
            if (tok.size() != 5)
                throw parse_error("specfile: insertion needs 'alpha_re alpha_im t x'");
            Insertion ins;
            ins.charge.alpha = complex(num(tok[1], "alpha_re"), num(tok[2], "alpha_im"));
            ins.point = CylinderPoint(num(tok[3], "t"), num(tok[4], "x"));
            ins.label = ++label;
            out.insertions.push_back(ins);
        } else if (key == "factor") {
            if (tok.size() != 6 && tok.size() != 8)
                throw parse_error("specfile: factor needs 'n t x eps_t eps_x [coeff_re coeff_im]'");
            SmearedFactor f;
            f.n = static_cast<int>(num(tok[1], "n"));
            f.bump = BumpFunction(CylinderPoint(num(tok[2], "t"), num(tok[3], "x")),
                                  num(tok[4], "eps_t"), num(tok[5], "eps_x"));
            if (tok.size() == 8) f.coeff = complex(num(tok[6], "coeff_re"), num(tok[7], "coeff_im"));
            out.factors.push_back(f);
        } else if (tok.size() == 2) {
            out.has_cfg_overrides = true;
            apply_config_line(out.cfg, key, tok[1]);
        } else {
            throw parse_error("specfile: unrecognized line '" + line + "'");
        }
    }
    return out;
}

inline void write_specfile(std::ostream& os, const SpecFile& sf) {
    os.precision(17);
    os << "b " << sf.params.b << "\n";
    os << "mu " << sf.params.mu << "\n";
    for (const auto& ins : sf.insertions)
        os << "insertion " << ins.charge.alpha.real() << " " << ins.charge.alpha.imag() << " "
           << ins.point.t << " " << ins.point.x << "\n";
    for (const auto& f : sf.factors) {
        os << "factor " << f.n << " " << f.bump.center.t << " " << f.bump.center.x << " "
           << f.bump.eps_t << " " << f.bump.eps_x;
        if (f.coeff != complex(1.0, 0.0))
            os << " " << f.coeff.real() << " " << f.coeff.imag();
        os << "\n";
    }
}

} // namespace liouville
