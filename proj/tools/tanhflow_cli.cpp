// Command-line harness: builds tables, runs verification suites, evolves
// modes by the spectral and direct methods, fits decay exponents, and emits
// CSV/JSON reports.

#include <complex>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>

#include <CLI11.hpp>
#include <json.hpp>

#include "tanhflow/harness.hpp"
#include "tanhflow/quadrature.hpp"
#include "tanhflow/io.hpp"

using namespace tanhflow;
using nlohmann::json;

namespace {

struct GlobalOpts {
    std::string config;
    std::string out = ".";
    int threads = 0;
    unsigned long long seed = 1;
};

RunConfig effective_config(const GlobalOpts& g) {
    RunConfig cfg;
    if (!g.config.empty()) cfg = load_config(g.config);
    if (!g.out.empty() && g.out != ".") cfg.out_dir = g.out;
    if (g.threads > 0) cfg.solve.threads = g.threads;
    cfg.seed = g.seed;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tanhflow: spectral machinery of linear inviscid damping "
                 "around u(y) = tanh y"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    GlobalOpts g;
    app.add_option("--config", g.config, "JSON run configuration");
    app.add_option("--out", g.out, "output directory");
    app.add_option("--threads", g.threads, "worker threads (0 = hardware)");
    app.add_option("--seed", g.seed, "seed for pseudo-random suites");

    // phi1 -------------------------------------------------------------
    auto* cmd_phi1 = app.add_subcommand("phi1", "solve phi1 and dump the field");
    double p_cre = 0.0, p_cim = 0.0;
    int p_alpha = 1;
    cmd_phi1->add_option("--re", p_cre, "Re c");
    cmd_phi1->add_option("--im", p_cim, "Im c");
    cmd_phi1->add_option("--alpha", p_alpha, "wavenumber");

    // wronskian ---------------------------------------------------------
    auto* cmd_wr = app.add_subcommand("wronskian", "A/W1 table over the c-grid");

    // kernels -----------------------------------------------------------
    auto* cmd_k = app.add_subcommand("kernels", "kernel table + LAP diagnostics");

    // evolve ------------------------------------------------------------
    auto* cmd_ev = app.add_subcommand("evolve", "spectral + direct evolution");

    // verify ------------------------------------------------------------
    auto* cmd_vf = app.add_subcommand("verify", "closed forms, LAP limits, "
                                                "Wronskian asymptotics");

    // decay -------------------------------------------------------------
    auto* cmd_dc = app.add_subcommand("decay", "fit decay exponents from a CSV");
    std::string dc_file;
    int dc_col = 2;
    double dc_lo = 10.0, dc_hi = 100.0;
    cmd_dc->add_option("--series", dc_file, "CSV with a time column first")
        ->required();
    cmd_dc->add_option("--column", dc_col, "value column index (0-based)");
    cmd_dc->add_option("--tlo", dc_lo, "window start");
    cmd_dc->add_option("--thi", dc_hi, "window end");

    // compare -----------------------------------------------------------
    auto* cmd_cmp = app.add_subcommand("compare", "field CSV A vs B");
    std::string cmp_a, cmp_b;
    cmd_cmp->add_option("--a", cmp_a)->required();
    cmd_cmp->add_option("--b", cmp_b)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg = effective_config(g);
        std::filesystem::create_directories(cfg.out_dir);

        if (cmd_phi1->parsed()) {
            SpectralPoint pt = make_spectral_point(cplx(p_cre, p_cim), p_alpha,
                                                   cfg.solve.eps0, cfg.solve.C_o);
            Grid grid = default_grid(pt, cfg.solve.alpha_h);
            Phi1Field f = solve_phi1(pt, grid, cfg.solve.tol, cfg.solve.max_iter);
            std::string path = cfg.out_dir + "/phi1.csv";
            write_phi1_csv(f, path);
            std::cout << "phi1: " << f.iterations << " iterations, residual "
                      << f.residual << " -> " << path << "\n";
            return 0;
        }
        if (cmd_wr->parsed()) {
            cfg.run_evolve = false;
            cfg.run_wronskian = true;
            return run_config(cfg);
        }
        if (cmd_k->parsed()) {
            RealFn data = family_fn(cfg.initial_family);
            json report;
            for (int alpha : cfg.alpha_list) {
                KernelTableParams kp;
                kp.alpha = alpha;
                kp.solve = cfg.solve;
                kp.t_max = cfg.t_table_max;
                KernelTable tab = build_kernel_table(kp, data);
                std::string path = cfg.out_dir + "/kernels_alpha" +
                                   std::to_string(alpha) + ".csv";
                write_kernel_table_csv(tab, path);
                report["alpha" + std::to_string(alpha)] = {
                    {"nodes", tab.c.size()},
                    {"resolved_alpha_t", tab.resolved_alpha_t},
                    {"a0", {tab.a0.real(), tab.a0.imag()}},
                    {"b0", {tab.b0.real(), tab.b0.imag()}}};
            }
            // embedding-LAP diagnostics: delta-sequence of c Phi(1, y, i delta)
            // against the eigenfunction multiple, with the extrapolated limit
            {
                Grid g = Grid::around(0.0, 25.5, cfg.solve.alpha_h);
                std::vector<cplx> fg(g.size());
                for (int i = 0; i < g.size(); ++i) fg[i] = data(g.y(i));
                SpectralPoint p0 =
                    make_spectral_point({0.0, 0.0}, 1, cfg.solve.eps0, cfg.solve.C_o);
                Phi1Field f0 = solve_phi1(p0, g, cfg.solve.tol, cfg.solve.max_iter);
                cplx T0 = calT(f0, fg).pv;
                cplx w00 = g.interp(fg, 0.0);
                cplx coef = (T0 + cplx(0.0, M_PI) * w00) / cplx(0.0, 2.0 * M_PI);
                json lap;
                std::vector<double> deltas = {1e-1, 1e-2, 1e-3};
                std::vector<double> ds;
                std::vector<cplx> vals;
                const double y_probe = 1.0;
                for (double d : deltas) {
                    SpectralPoint p = make_spectral_point({0.0, d}, 1,
                                                          cfg.solve.eps0, cfg.solve.C_o);
                    Phi1Field f = solve_phi1(p, g, cfg.solve.tol, cfg.solve.max_iter);
                    InhomogeneousSolution s = solve_inhomogeneous(f, fg);
                    cplx v = p.c * g.interp(s.Phi, y_probe) * std::cosh(y_probe);
                    ds.push_back(d);
                    vals.push_back(v);
                    lap["delta_sequence"].push_back(
                        {{"delta", d},
                         {"value", {v.real(), v.imag()}},
                         {"rel_error", std::abs(v - coef) / std::abs(coef)}});
                }
                cplx extrap = richardson_limit(ds, vals);
                lap["extrapolated"] = {extrap.real(), extrap.imag()};
                lap["target"] = {coef.real(), coef.imag()};
                lap["extrapolated_rel_error"] = std::abs(extrap - coef) / std::abs(coef);
                report["embedding_lap"] = lap;
            }
            std::ofstream os(cfg.out_dir + "/kernels_report.json");
            os << report.dump(2) << "\n";
            return 0;
        }
        if (cmd_ev->parsed()) {
            cfg.run_wronskian = false;
            cfg.run_evolve = true;
            return run_config(cfg);
        }
        if (cmd_vf->parsed()) {
            cfg.run_verify = true;
            cfg.run_wronskian = true;
            cfg.run_evolve = true;
            return run_config(cfg);
        }
        if (cmd_dc->parsed()) {
            CsvTable t = read_csv(dc_file);
            std::vector<std::pair<double, double>> series;
            for (const auto& r : t.rows)
                if (dc_col < static_cast<int>(r.size()))
                    series.push_back({r[0], r[dc_col]});
            DecayFit fit = decay_fit(series, dc_lo, dc_hi,
                                     t.header.size() > size_t(dc_col)
                                         ? t.header[dc_col]
                                         : "value");
            json out = {{"quantity", fit.quantity}, {"exponent", fit.exponent},
                        {"residual", fit.residual}, {"half_width", fit.half_width},
                        {"window", {fit.t_lo, fit.t_hi}}, {"n", fit.n}};
            std::cout << out.dump(2) << "\n";
            return 0;
        }
        if (cmd_cmp->parsed()) {
            CsvTable ta = read_csv(cmp_a), tb = read_csv(cmp_b);
            if (ta.rows.size() != tb.rows.size() || ta.rows.empty())
                throw std::runtime_error("compare: row mismatch");
            double h = ta.rows.size() > 1 ? ta.rows[1][0] - ta.rows[0][0] : 1.0;
            Grid grid(ta.rows[0][0], h, int(ta.rows.size()));
            std::vector<cplx> fa(ta.rows.size()), fb(tb.rows.size());
            for (size_t i = 0; i < ta.rows.size(); ++i) {
                if (std::abs(ta.rows[i][0] - tb.rows[i][0]) > 1e-12)
                    throw std::runtime_error("compare: grid mismatch");
                fa[i] = cplx(ta.rows[i][1], ta.rows[i].size() > 2 ? ta.rows[i][2] : 0.0);
                fb[i] = cplx(tb.rows[i][1], tb.rows[i].size() > 2 ? tb.rows[i][2] : 0.0);
            }
            FieldComparison c = compare_fields(grid, 0.0, fa, fb);
            json out = {{"rel_l2", c.rel_l2}, {"rel_linf", c.rel_linf},
                        {"rel_h1", c.rel_h1}};
            std::cout << out.dump(2) << "\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
