// Command-line front end: kernel/correlator/oracle evaluation and the
// structural verification suites, with manifest-stamped CSV/JSON output.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error,
//             3 runtime/domain error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "liouville/algebra.hpp"
#include "liouville/correlators.hpp"
#include "liouville/kernels.hpp"
#include "liouville/manifest.hpp"
#include "liouville/oracles.hpp"
#include "liouville/specfile.hpp"

using namespace liouville;
using nlohmann::json;

namespace {

struct GlobalOpts {
    QuadratureConfig cfg;
    ModelParams params;
    std::string out_path;
    std::string format = "json";
};

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stod(item));
    }
    if (out.empty()) throw parse_error("empty value list");
    return out;
}

void emit(const GlobalOpts& g, RunManifest man, const json& result,
          const std::vector<std::string>& csv_header = {},
          const std::vector<std::vector<double>>& csv_rows = {}) {
    man.timestamp = RunManifest::now();
    man.output_path = g.out_path;
    if (g.out_path.empty()) return;
    std::ofstream os(g.out_path);
    if (!os) throw error("cannot open output file " + g.out_path);
    os.precision(17);
    if (g.format == "csv") {
        os << man.csv_header() << "\n";
        for (std::size_t i = 0; i < csv_header.size(); ++i)
            os << (i ? "," : "") << csv_header[i];
        os << "\n";
        for (const auto& row : csv_rows) {
            for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
            os << "\n";
        }
    } else {
        json doc;
        doc["manifest"] = man.to_json();
        doc["result"] = result;
        os << doc.dump(2) << "\n";
    }
}

json result_json(const IntegrationResult& r) {
    return json{{"re", r.value.real()},
                {"im", r.value.imag()},
                {"error", r.error_estimate},
                {"evals", r.evals},
                {"converged", r.converged}};
}

void print_result(const IntegrationResult& r) {
    std::printf("value = %.12g + %.12gi   +- %.3g   (evals %ld, %s)\n", r.value.real(),
                r.value.imag(), r.error_estimate, r.evals,
                r.converged ? "converged" : "NOT converged");
}

// ---------------------------------------------------------------------------
// kernel eval / kernel sweep
// ---------------------------------------------------------------------------

int run_kernel_eval(const GlobalOpts& g, const std::string& fn, double t, double x,
                    double tau_re, double tau_im, double T, int N, double s, double y,
                    const std::string& mode, double a, double theta) {
    complex value;
    if (fn == "green_euclidean") {
        value = green_euclidean(t, x, g.cfg.delta_lc);
    } else if (fn == "green_analytic") {
        value = green_analytic(complex(tau_re, tau_im), x);
    } else if (fn == "green_boundary") {
        value = green_boundary(t, x, g.cfg.delta_lc);
    } else if (fn == "green_reflected") {
        value = green_reflected(complex(tau_re, tau_im), x, g.cfg.delta_lc);
    } else if (fn == "lightcone_distance") {
        value = lightcone_distance(complex(tau_re, tau_im), x);
    } else if (fn == "lattice_sum_1d") {
        value = lattice_sum_1d(a, theta);
    } else if (fn == "zeta_cos_identity") {
        value = zeta_cos_identity(theta);
    } else if (fn == "heat_kernel") {
        HeatKernelMode m = mode == "spectral" ? HeatKernelMode::spectral
                          : mode == "image"  ? HeatKernelMode::image
                                             : HeatKernelMode::automatic;
        value = heat_kernel(TorusSpec(T, std::max(N, 1)), s, x, y, m);
    } else if (fn == "torus_green") {
        value = torus_green(TorusSpec(T, 1), CylinderPoint(t, x), CylinderPoint(0, 0),
                            g.cfg.delta_lc);
    } else if (fn == "torus_green_truncated") {
        value = torus_green_truncated(TorusSpec(T, N), CylinderPoint(t, x), CylinderPoint(0, 0));
    } else {
        std::fprintf(stderr, "unknown --fn '%s'\n", fn.c_str());
        return 2;
    }
    std::printf("%s = %.17g", fn.c_str(), value.real());
    if (value.imag() != 0.0) std::printf(" + %.17gi", value.imag());
    std::printf("\n");
    RunManifest man;
    man.command = "kernel eval --fn " + fn;
    man.params = g.params;
    man.cfg = g.cfg;
    man.spec = "inline";
    emit(g, man, json{{"fn", fn}, {"re", value.real()}, {"im", value.imag()}},
         {"re", "im"}, {{value.real(), value.imag()}});
    return 0;
}

int run_kernel_sweep(const GlobalOpts& g, const std::string& fn, const std::string& T_list,
                     const std::string& N_list, const std::string& s_list, double t, double x,
                     double y) {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    if (fn == "torus_green") {
        header = {"T", "g_T", "renormalized", "g_cylinder", "abs_err"};
        const double gref = green_euclidean(t, x, g.cfg.delta_lc);
        for (double T : parse_list(T_list)) {
            const double gt =
                torus_green(TorusSpec(T, 1), CylinderPoint(t, x), CylinderPoint(0, 0),
                            g.cfg.delta_lc);
            const double ren = gt - pi * T / 6.0;
            rows.push_back({T, gt, ren, gref, std::abs(ren - gref)});
        }
    } else if (fn == "torus_green_truncated") {
        header = {"N", "g_TN", "g_T_exact", "abs_err"};
        const auto Ts = parse_list(T_list.empty() ? "2" : T_list);
        const double T = Ts.front();
        const double exact = torus_green(TorusSpec(T, 1), CylinderPoint(t, x),
                                         CylinderPoint(0, 0), g.cfg.delta_lc);
        for (double Nd : parse_list(N_list)) {
            const int N = static_cast<int>(Nd);
            const double v = torus_green_truncated(TorusSpec(T, N), CylinderPoint(t, x),
                                                   CylinderPoint(0, 0));
            rows.push_back({static_cast<double>(N), v, exact, std::abs(v - exact)});
        }
    } else if (fn == "heat_kernel") {
        header = {"s", "spectral", "image", "abs_diff"};
        const auto Ts = parse_list(T_list.empty() ? "1" : T_list);
        for (double s : parse_list(s_list)) {
            const double ps =
                heat_kernel(TorusSpec(Ts.front(), 1), s, t, y, HeatKernelMode::spectral);
            const double pim =
                heat_kernel(TorusSpec(Ts.front(), 1), s, t, y, HeatKernelMode::image);
            rows.push_back({s, ps, pim, std::abs(ps - pim)});
        }
    } else {
        std::fprintf(stderr, "unknown sweep --fn '%s'\n", fn.c_str());
        return 2;
    }
    for (std::size_t i = 0; i < header.size(); ++i)
        std::printf("%s%s", i ? "," : "", header[i].c_str());
    std::printf("\n");
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) std::printf("%s%.12g", i ? "," : "", row[i]);
        std::printf("\n");
    }
    RunManifest man;
    man.command = "kernel sweep --fn " + fn;
    man.params = g.params;
    man.cfg = g.cfg;
    man.spec = "inline";
    json jrows = json::array();
    for (const auto& row : rows) jrows.push_back(row);
    emit(g, man, json{{"fn", fn}, {"columns", header}, {"rows", jrows}}, header, rows);
    return 0;
}

// ---------------------------------------------------------------------------
// correlator
// ---------------------------------------------------------------------------

int run_correlator(GlobalOpts g, const std::string& spec_path, const std::string& mode,
                   double T, int N, bool cli_cfg_set) {
    std::ifstream in(spec_path);
    if (!in) {
        std::fprintf(stderr, "cannot open spec file '%s'\n", spec_path.c_str());
        return 2;
    }
    SpecFile sf = parse_specfile(in);
    if (sf.has_cfg_overrides && !cli_cfg_set) g.cfg = sf.cfg;
    auto spec = make_spec(sf.params, sf.insertions);
    CorrelatorResult r;
    if (mode == "euclidean")
        r = euclidean_correlator(spec, g.cfg);
    else if (mode == "lorentzian")
        r = lorentzian_correlator(spec, g.cfg);
    else if (mode == "torus")
        r = torus_correlator(spec, TorusSpec(T, std::max(1, N)), g.cfg, N);
    else {
        std::fprintf(stderr, "unknown --mode '%s'\n", mode.c_str());
        return 2;
    }
    print_result(r);
    RunManifest man;
    man.command = "correlator --mode " + mode;
    man.params = sf.params;
    man.cfg = g.cfg;
    man.spec = spec_path;
    emit(g, man, result_json(r), {"re", "im", "error", "evals", "converged"},
         {{r.value.real(), r.value.imag(), r.error_estimate, static_cast<double>(r.evals),
           r.converged ? 1.0 : 0.0}});
    return 0;
}

// ---------------------------------------------------------------------------
// oracle
// ---------------------------------------------------------------------------

int run_oracle_tadpole(const GlobalOpts& g, double b) {
    const auto series = tadpole_Ib(b);
    const auto t_int = tadpole_Ib_t_integral(b, g.cfg);
    const auto y_int = tadpole_Ib_y_integral(b, g.cfg);
    std::printf("I_b series     = %.12g%s\n", series.value,
                series.converged ? "" : "  [slow convergence]");
    std::printf("I_b t-integral = %.12g  (err %.2g)\n", t_int.value.real(),
                t_int.error_estimate);
    std::printf("I_b y-integral = %.12g  (err %.2g)\n", y_int.value.real(),
                y_int.error_estimate);
    RunManifest man;
    man.command = "oracle tadpole";
    man.params = g.params;
    man.cfg = g.cfg;
    man.spec = "b=" + std::to_string(b);
    emit(g, man,
         json{{"series", series.value},
              {"t_integral", t_int.value.real()},
              {"y_integral", y_int.value.real()},
              {"series_converged", series.converged}},
         {"series", "t_integral", "y_integral"},
         {{series.value, t_int.value.real(), y_int.value.real()}});
    return 0;
}

int run_oracle_two_point(const GlobalOpts& g, double alpha, double t, double x, int order) {
    const complex v = neutral_two_point(alpha, t, x,
                                        order == 21 ? PairOrder::order21 : PairOrder::order12,
                                        g.cfg.delta_lc);
    std::printf("G^{%d}_alpha(%g, %g) = %.15g + %.15gi\n", order, t, x, v.real(), v.imag());
    RunManifest man;
    man.command = "oracle two-point";
    man.params = g.params;
    man.cfg = g.cfg;
    man.spec = "alpha=" + std::to_string(alpha);
    emit(g, man, json{{"re", v.real()}, {"im", v.imag()}}, {"re", "im"},
         {{v.real(), v.imag()}});
    return 0;
}

int run_oracle_commutator(const GlobalOpts& g, double alpha, double t, double x) {
    const complex v = vacuum_commutator(alpha, t, x, g.cfg.delta_lc);
    std::printf("<[V,V]>(%g, %g) = %.15g + %.15gi\n", t, x, v.real(), v.imag());
    RunManifest man;
    man.command = "oracle commutator";
    man.params = g.params;
    man.cfg = g.cfg;
    man.spec = "alpha=" + std::to_string(alpha);
    emit(g, man, json{{"re", v.real()}, {"im", v.imag()}}, {"re", "im"},
         {{v.real(), v.imag()}});
    return 0;
}

int run_oracle_pfq(const GlobalOpts& g, const std::string& top, const std::string& bottom,
                   double z) {
    HypergeometricSpec hs;
    hs.top = parse_list(top);
    hs.bottom = bottom.empty() ? std::vector<double>{} : parse_list(bottom);
    hs.z = z;
    const auto r = hypergeometric_pFq(hs);
    std::printf("pFq = %.15g  (%ld terms%s)\n", r.value, r.terms,
                r.converged ? "" : ", slow convergence");
    RunManifest man;
    man.command = "oracle pfq";
    man.params = g.params;
    man.cfg = g.cfg;
    man.spec = top + ";" + bottom + ";z=" + std::to_string(z);
    emit(g, man, json{{"value", r.value}, {"terms", r.terms}, {"converged", r.converged}},
         {"value"}, {{r.value}});
    return 0;
}

// ---------------------------------------------------------------------------
// verify suites
// ---------------------------------------------------------------------------

struct CheckTable {
    bool all_pass = true;
    json rows = json::array();

    void add(const std::string& name, double residual, double threshold) {
        const bool pass = residual <= threshold;
        all_pass = all_pass && pass;
        std::printf("  %-44s residual %12.4e   threshold %10.3e   %s\n", name.c_str(), residual,
                    threshold, pass ? "PASS" : "FAIL");
        rows.push_back(json{{"check", name},
                            {"residual", residual},
                            {"threshold", threshold},
                            {"pass", pass}});
    }
};

Insertion mk_ins(double alpha, double t, double x, int label) {
    return Insertion{Charge{complex(alpha, 0.0)}, CylinderPoint(t, x), label};
}

int verify_locality(const GlobalOpts& g, double b, int pairs) {
    ModelParams mp{b, g.params.mu};
    QuadratureConfig cfg = g.cfg;
    CheckTable table;
    CounterRng rng(cfg.mc_seed, 0x10c);
    int made = 0;
    for (int trial = 0; made < pairs && trial < 200; ++trial) {
        const double x1 = 2.0 * rng.uniform(4 * trial) - 1.0;
        const double dx = 0.35 + 0.6 * rng.uniform(4 * trial + 1);
        const double dt = (dx - 0.1) * (2.0 * rng.uniform(4 * trial + 2) - 1.0);
        const double t1 = 1.0 * rng.uniform(4 * trial + 3) - 0.5;
        CylinderPoint p1(t1, x1), p2(t1 + dt, x1 + dx);
        if (!spacelike(p1, p2, 0.05)) continue;
        if (boundary_lightcone_distance(dt, dx) < 0.05) continue;
        ++made;
        auto spec = make_spec(mp, {mk_ins(b, p1.t, p1.x, 1), mk_ins(-2.0 * b, p2.t, p2.x, 2)});
        auto [orig, swapped] = exchange_adjacent(spec, 1, cfg);
        const double resid = std::abs(orig.value - swapped.value);
        const double thresh = std::max(1e-3 * std::abs(orig.value),
                                       3.0 * (orig.error_estimate + swapped.error_estimate));
        table.add("spacelike exchange #" + std::to_string(made), resid, thresh);
    }
    // timelike control: nonzero commutator matching the closed form
    const double alpha = b, tt = 0.8, xx = 0.25;
    auto spec = make_spec(mp, {mk_ins(alpha, 0.0, 0.0, 1), mk_ins(-alpha, tt, xx, 2)});
    auto [o12, o21] = exchange_adjacent(spec, 1, cfg);
    const complex comm = o12.value - o21.value;
    const complex expect = vacuum_commutator(alpha, tt, xx, cfg.delta_lc);
    table.add("timelike control vs closed form", std::abs(comm - expect),
              1e-10 * std::max(1.0, std::abs(expect)));
    RunManifest man;
    man.command = "verify locality";
    man.params = mp;
    man.cfg = cfg;
    man.spec = "inline";
    emit(g, man, table.rows);
    return table.all_pass ? 0 : 1;
}

int verify_hermiticity(const GlobalOpts& g, double b) {
    ModelParams mp{b, g.params.mu};
    QuadratureConfig cfg = g.cfg;
    CheckTable table;
    SmearedFactor f1, f2;
    f1.bump = BumpFunction(CylinderPoint(0.0, 0.0), 0.04, 0.04);
    f1.n = 1;
    f2.bump = BumpFunction(CylinderPoint(0.05, 0.9), 0.04, 0.04);
    f2.n = -2;
    SmearedMonomial m;
    m.factors = {f1, f2};
    auto r = hermiticity_residual(m, mp, cfg);
    table.add("omega(m*) vs conj(omega(m)), real bumps", r.residual, 3.0 * r.error + 1e-9);
    SmearedMonomial mi = m;
    mi.factors[0].coeff = complex(0.0, 1.0);
    auto ri = hermiticity_residual(mi, mp, cfg);
    table.add("omega(m*) vs conj(omega(m)), i-scaled bump", ri.residual, 3.0 * ri.error + 1e-9);
    RunManifest man;
    man.command = "verify hermiticity";
    man.params = mp;
    man.cfg = cfg;
    man.spec = "inline";
    emit(g, man, table.rows);
    return table.all_pass ? 0 : 1;
}

int verify_indefiniteness(const GlobalOpts& g, double b, const std::string& eps_csv) {
    ModelParams mp{b, g.params.mu};
    QuadratureConfig cfg = g.cfg;
    CheckTable table;
    table.add("(Omega, Omega) = omega(1) = 1", std::abs(omega({}, mp, cfg).value - 1.0), 0.0);
    const auto pts = indefiniteness_probe(b, parse_list(eps_csv), mp, cfg);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        table.add("omega(A_eps A_eps) decreasing at eps = " + std::to_string(pts[i + 1].eps),
                  pts[i + 1].omega_aa - pts[i].omega_aa,
                  3.0 * (pts[i].error + pts[i + 1].error));
    }
    const auto& last = pts.back();
    std::printf("  gram value at eps = %g: %.6f +- %.6f\n", last.eps, last.gram_value,
                last.error);
    table.add("negative gram vector by >= 3 standard errors", last.gram_value + 3.0 * last.error,
              0.0);
    RunManifest man;
    man.command = "verify indefiniteness";
    man.params = mp;
    man.cfg = cfg;
    man.spec = "eps=" + eps_csv;
    emit(g, man, table.rows);
    return table.all_pass ? 0 : 1;
}

int verify_translation(const GlobalOpts& g, double b, int shifts) {
    ModelParams mp{b, g.params.mu};
    QuadratureConfig cfg = g.cfg;
    CheckTable table;
    auto base = make_spec(mp, {mk_ins(b, 0.0, 0.0, 1), mk_ins(-2.0 * b, 0.45, 0.8, 2)});
    auto r0 = lorentzian_correlator(base, cfg);
    CounterRng rng(cfg.mc_seed, 0x7a5);
    for (int i = 0; i < shifts; ++i) {
        const double a = 2.0 * rng.uniform(2 * i) - 1.0;
        const double th = 2.0 * rng.uniform(2 * i + 1) - 1.0;
        std::vector<Insertion> moved;
        int label = 0;
        for (const auto& ins : base.insertions) {
            Insertion m = ins;
            m.point = translate(ins.point, a, th);
            m.label = ++label;
            moved.push_back(m);
        }
        auto r1 = lorentzian_correlator(make_spec(mp, moved), cfg);
        table.add("shift (" + std::to_string(a) + ", " + std::to_string(th) + ")",
                  std::abs(r1.value - r0.value),
                  std::max(3.0 * (r0.error_estimate + r1.error_estimate),
                           2e-3 * std::abs(r0.value)));
    }
    RunManifest man;
    man.command = "verify translation";
    man.params = mp;
    man.cfg = cfg;
    man.spec = "inline";
    emit(g, man, table.rows);
    return table.all_pass ? 0 : 1;
}

int verify_conjugation(const GlobalOpts& g, double b) {
    ModelParams mp{b, g.params.mu};
    QuadratureConfig cfg = g.cfg;
    CheckTable table;
    {
        auto fwd = make_spec(mp, {mk_ins(b, 0.0, 0.0, 1), mk_ins(-b, 0.7, 0.25, 2)});
        auto rev = make_spec(mp, {mk_ins(-b, 0.7, 0.25, 1), mk_ins(b, 0.0, 0.0, 2)});
        const auto a = lorentzian_correlator(fwd, cfg);
        const auto c = lorentzian_correlator(rev, cfg);
        table.add("w = 0 reversal", std::abs(a.value - std::conj(c.value)),
                  1e-12 * std::max(1.0, std::abs(a.value)));
    }
    {
        auto fwd = make_spec(mp, {mk_ins(b, 0.0, 0.0, 1), mk_ins(-2.0 * b, 0.7, 0.6, 2)});
        auto rev = make_spec(mp, {mk_ins(-2.0 * b, 0.7, 0.6, 1), mk_ins(b, 0.0, 0.0, 2)});
        const auto a = lorentzian_correlator(fwd, cfg);
        const auto c = lorentzian_correlator(rev, cfg);
        table.add("w = 1 reversal", std::abs(a.value - std::conj(c.value)),
                  std::max(3.0 * (a.error_estimate + c.error_estimate),
                           2e-3 * std::abs(a.value)));
    }
    RunManifest man;
    man.command = "verify conjugation";
    man.params = mp;
    man.cfg = cfg;
    man.spec = "inline";
    emit(g, man, table.rows);
    return table.all_pass ? 0 : 1;
}

int verify_zero_charge(const GlobalOpts& g, double b) {
    ModelParams mp{b, g.params.mu};
    QuadratureConfig cfg = g.cfg;
    CheckTable table;
    auto base = make_spec(mp, {mk_ins(-b, 0.2, 0.1, 1)});
    auto r0 = lorentzian_correlator(base, cfg);
    int idx = 0;
    for (auto [tg, xg] : {std::pair{0.9, 0.75}, {-0.5, 0.7}, {0.2, 0.9}}) {
        auto ghost = make_spec(mp, {mk_ins(-b, 0.2, 0.1, 1), mk_ins(0.0, tg, xg, 2)});
        auto r1 = lorentzian_correlator(ghost, cfg);
        table.add("ghost insertion #" + std::to_string(++idx),
                  std::abs(r1.value - r0.value),
                  std::max(3.0 * (r0.error_estimate + r1.error_estimate),
                           2e-3 * std::abs(r0.value)));
    }
    RunManifest man;
    man.command = "verify zero-charge";
    man.params = mp;
    man.cfg = cfg;
    man.spec = "inline";
    emit(g, man, table.rows);
    return table.all_pass ? 0 : 1;
}

int verify_euclidean_symmetry(const GlobalOpts& g, double b) {
    ModelParams mp{b, g.params.mu};
    QuadratureConfig cfg = g.cfg;
    CheckTable table;
    {
        auto s1 = make_spec(mp, {mk_ins(b, 0.0, 0.0, 1), mk_ins(b, 0.5, 0.6, 2),
                                 mk_ins(-2.0 * b, -0.3, -0.5, 3)});
        auto s2 = make_spec(mp, {mk_ins(-2.0 * b, -0.3, -0.5, 1), mk_ins(b, 0.0, 0.0, 2),
                                 mk_ins(b, 0.5, 0.6, 3)});
        const auto a = euclidean_correlator(s1, cfg);
        const auto c = euclidean_correlator(s2, cfg);
        table.add("w = 0 permutation", std::abs(a.value - c.value),
                  1e-12 * std::abs(a.value));
    }
    {
        auto s1 = make_spec(mp, {mk_ins(b, 0.0, 0.0, 1), mk_ins(-2.0 * b, 0.4, 0.8, 2)});
        auto s2 = make_spec(mp, {mk_ins(-2.0 * b, 0.4, 0.8, 1), mk_ins(b, 0.0, 0.0, 2)});
        const auto a = euclidean_correlator(s1, cfg);
        const auto c = euclidean_correlator(s2, cfg);
        table.add("w = 1 swap", std::abs(a.value - c.value),
                  std::max(3.0 * (a.error_estimate + c.error_estimate),
                           1e-4 * std::abs(a.value)));
    }
    RunManifest man;
    man.command = "verify euclidean-symmetry";
    man.params = mp;
    man.cfg = cfg;
    man.spec = "inline";
    emit(g, man, table.rows);
    return table.all_pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"timelike Liouville correlators on the cylinder"};
    app.require_subcommand(1);
    app.fallthrough(true);

    GlobalOpts g;
    app.add_option("--b", g.params.b, "coupling b in (0, 1/sqrt(2))");
    app.add_option("--mu", g.params.mu, "cosmological constant mu > 0");
    auto* o_rel = app.add_option("--rel-tol", g.cfg.rel_tol, "relative tolerance");
    auto* o_abs = app.add_option("--abs-tol", g.cfg.abs_tol, "absolute tolerance");
    auto* o_seed = app.add_option("--seed", g.cfg.mc_seed, "Monte Carlo seed");
    auto* o_mcs = app.add_option("--mc-samples", g.cfg.mc_samples, "Monte Carlo sample budget");
    auto* o_max = app.add_option("--max-evals", g.cfg.max_evals, "adaptive evaluation budget");
    auto* o_dlc = app.add_option("--delta-lc", g.cfg.delta_lc, "light-cone exclusion radius");
    app.add_option("--out", g.out_path, "output file path");
    app.add_option("--format", g.format, "output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    std::string config_path;
    app.add_option("--config", config_path, "quadrature config file (key value lines)");

    // kernel
    auto* kernel = app.add_subcommand("kernel", "evaluate Green's-function kernels");
    kernel->require_subcommand(1);
    auto* keval = kernel->add_subcommand("eval", "evaluate one kernel at a point");
    std::string fn = "green_euclidean", mode = "auto";
    double t = 0, x = 0, tau_re = 1, tau_im = 0, T = 1, s = 1, y = 0, a = 1, theta = 0;
    int N = 16;
    keval->add_option("--fn", fn, "kernel name")->required();
    keval->add_option("--t", t, "time coordinate");
    keval->add_option("--x", x, "spatial coordinate");
    keval->add_option("--tau-re", tau_re, "Re tau");
    keval->add_option("--tau-im", tau_im, "Im tau");
    keval->add_option("--T", T, "torus half-length");
    keval->add_option("--N", N, "Fourier cutoff");
    keval->add_option("--s", s, "heat-kernel time");
    keval->add_option("--y", y, "heat-kernel second coordinate");
    keval->add_option("--mode", mode, "heat-kernel mode: spectral|image|auto");
    keval->add_option("--a", a, "lattice-sum parameter a");
    keval->add_option("--theta", theta, "angle argument");

    auto* ksweep = kernel->add_subcommand("sweep", "sweep a kernel over a parameter list");
    std::string T_list, N_list, s_list;
    ksweep->add_option("--fn", fn, "kernel name")->required();
    ksweep->add_option("--T", T_list, "comma-separated T values");
    ksweep->add_option("--N", N_list, "comma-separated N values");
    ksweep->add_option("--s", s_list, "comma-separated s values");
    ksweep->add_option("--t", t, "time coordinate");
    ksweep->add_option("--x", x, "spatial coordinate");
    ksweep->add_option("--y", y, "second coordinate");

    // correlator
    auto* corr = app.add_subcommand("correlator", "evaluate a correlator spec file");
    std::string spec_path, cmode = "lorentzian";
    double cT = 4.0;
    int cN = 0;
    corr->add_option("--spec", spec_path, "spec file path")->required();
    corr->add_option("--mode", cmode, "euclidean|lorentzian|torus");
    corr->add_option("--T", cT, "torus half-length (torus mode)");
    corr->add_option("--N", cN, "torus Fourier cutoff (0 = exact kernel)");

    // oracle
    auto* oracle = app.add_subcommand("oracle", "closed-form reference values");
    oracle->require_subcommand(1);
    auto* otad = oracle->add_subcommand("tadpole", "w = 1 tadpole I_b, three representations");
    double ob = 0.3, oalpha = 0.3, ot = 0.8, ox = 0.25, oz = 1.0;
    int oorder = 12;
    otad->add_option("--b", ob, "coupling")->required();
    auto* otwo = oracle->add_subcommand("two-point", "neutral two-point function");
    otwo->add_option("--alpha", oalpha, "charge")->required();
    otwo->add_option("--t", ot, "time separation")->required();
    otwo->add_option("--x", ox, "spatial separation")->required();
    otwo->add_option("--order", oorder, "12 or 21");
    auto* ocomm = oracle->add_subcommand("commutator", "vacuum commutator closed form");
    ocomm->add_option("--alpha", oalpha, "charge")->required();
    ocomm->add_option("--t", ot, "time separation")->required();
    ocomm->add_option("--x", ox, "spatial separation")->required();
    auto* opfq = oracle->add_subcommand("pfq", "generalized hypergeometric series");
    std::string otop, obot;
    opfq->add_option("--top", otop, "comma-separated top parameters")->required();
    opfq->add_option("--bottom", obot, "comma-separated bottom parameters");
    opfq->add_option("--z", oz, "argument");

    // verify
    auto* verify = app.add_subcommand("verify", "structural verification suites");
    verify->require_subcommand(1);
    double vb = 0.3;
    int vpairs = 3, vshifts = 3, vw = 1;
    std::string veps = "0.3,0.2,0.1";
    auto* vloc = verify->add_subcommand("locality", "spacelike exchange symmetry");
    vloc->add_option("--b", vb, "coupling");
    vloc->add_option("--pairs", vpairs, "number of random spacelike pairs");
    vloc->add_option("--w", vw, "screening number (only w = 1 supported)");
    auto* vherm = verify->add_subcommand("hermiticity", "omega(A*) = conj(omega(A))");
    vherm->add_option("--b", vb, "coupling");
    auto* vind = verify->add_subcommand("indefiniteness", "negative-norm vector search");
    vind->add_option("--b", vb, "coupling");
    vind->add_option("--eps", veps, "comma-separated bump scales");
    auto* vtrans = verify->add_subcommand("translation", "cylinder translation invariance");
    vtrans->add_option("--b", vb, "coupling");
    vtrans->add_option("--shifts", vshifts, "number of random shifts");
    auto* vconj = verify->add_subcommand("conjugation", "label-reversal conjugation");
    vconj->add_option("--b", vb, "coupling");
    auto* vzero = verify->add_subcommand("zero-charge", "zero-charge invisibility");
    vzero->add_option("--b", vb, "coupling");
    auto* vsym = verify->add_subcommand("euclidean-symmetry", "permutation symmetry");
    vsym->add_option("--b", vb, "coupling");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        const bool cli_cfg_set = o_rel->count() || o_abs->count() || o_seed->count() ||
                                 o_mcs->count() || o_max->count() || o_dlc->count();
        if (!config_path.empty()) {
            std::ifstream cin_(config_path);
            if (!cin_) throw error("cannot open config file " + config_path);
            QuadratureConfig merged = parse_config(cin_);
            // explicit CLI flags override the file
            if (o_rel->count()) merged.rel_tol = g.cfg.rel_tol;
            if (o_abs->count()) merged.abs_tol = g.cfg.abs_tol;
            if (o_seed->count()) merged.mc_seed = g.cfg.mc_seed;
            if (o_mcs->count()) merged.mc_samples = g.cfg.mc_samples;
            if (o_max->count()) merged.max_evals = g.cfg.max_evals;
            if (o_dlc->count()) merged.delta_lc = g.cfg.delta_lc;
            g.cfg = merged;
        }
        g.cfg.validate();

        if (keval->parsed())
            return run_kernel_eval(g, fn, t, x, tau_re, tau_im, T, N, s, y, mode, a, theta);
        if (ksweep->parsed()) return run_kernel_sweep(g, fn, T_list, N_list, s_list, t, x, y);
        if (corr->parsed()) return run_correlator(g, spec_path, cmode, cT, cN, cli_cfg_set);
        if (otad->parsed()) return run_oracle_tadpole(g, ob);
        if (otwo->parsed()) return run_oracle_two_point(g, oalpha, ot, ox, oorder);
        if (ocomm->parsed()) return run_oracle_commutator(g, oalpha, ot, ox);
        if (opfq->parsed()) return run_oracle_pfq(g, otop, obot, oz);

        int rc = 0;
        if (vloc->parsed()) {
            if (vw != 1) throw domain_error("verify locality: only --w 1 is supported");
            std::printf("locality (b = %g):\n", vb);
            rc = verify_locality(g, vb, vpairs);
        } else if (vherm->parsed()) {
            std::printf("hermiticity (b = %g):\n", vb);
            rc = verify_hermiticity(g, vb);
        } else if (vind->parsed()) {
            std::printf("indefiniteness (b = %g):\n", vb);
            rc = verify_indefiniteness(g, vb, veps);
        } else if (vtrans->parsed()) {
            std::printf("translation invariance (b = %g):\n", vb);
            rc = verify_translation(g, vb, vshifts);
        } else if (vconj->parsed()) {
            std::printf("label-reversal conjugation (b = %g):\n", vb);
            rc = verify_conjugation(g, vb);
        } else if (vzero->parsed()) {
            std::printf("zero-charge invisibility (b = %g):\n", vb);
            rc = verify_zero_charge(g, vb);
        } else if (vsym->parsed()) {
            std::printf("euclidean permutation symmetry (b = %g):\n", vb);
            rc = verify_euclidean_symmetry(g, vb);
        } else {
            std::fprintf(stderr, "no subcommand selected\n");
            return 2;
        }
        std::printf("%s\n", rc == 0 ? "PASS" : "FAIL");
        return rc;
    } catch (const parse_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
