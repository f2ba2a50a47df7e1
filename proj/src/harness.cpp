#include "tanhflow/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "tanhflow/io.hpp"
#include "tanhflow/parallel.hpp"

namespace tanhflow {

using nlohmann::json;

namespace {

template <class T>
void read_field(const json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const std::exception&) {
        throw std::runtime_error(std::string("config field '") + key +
                                 "' has the wrong type");
    }
}

void fail_field(const std::string& key, const std::string& why) {
    throw std::runtime_error("config field '" + key + "': " + why);
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("config parse error: ") + e.what());
    }
    RunConfig cfg;
    read_field(j, "schema_version", cfg.schema_version);
    read_field(j, "alpha_list", cfg.alpha_list);
    read_field(j, "initial_family", cfg.initial_family);
    read_field(j, "initial_file", cfg.initial_file);
    read_field(j, "times", cfg.times);
    read_field(j, "t_table_max", cfg.t_table_max);
    read_field(j, "evolve_L", cfg.evolve_L);
    read_field(j, "evolve_h", cfg.evolve_h);
    read_field(j, "evolve_dt", cfg.evolve_dt);
    read_field(j, "out_dir", cfg.out_dir);
    read_field(j, "seed", cfg.seed);
    read_field(j, "run_verify", cfg.run_verify);
    read_field(j, "run_evolve", cfg.run_evolve);
    read_field(j, "run_wronskian", cfg.run_wronskian);
    read_field(j, "decay_window", cfg.decay_window);
    if (j.contains("solve")) {
        const json& s = j.at("solve");
        read_field(s, "alpha_h", cfg.solve.alpha_h);
        read_field(s, "tol", cfg.solve.tol);
        read_field(s, "max_iter", cfg.solve.max_iter);
        read_field(s, "eps0", cfg.solve.eps0);
        read_field(s, "C_o", cfg.solve.C_o);
        read_field(s, "c_max", cfg.solve.c_max);
        read_field(s, "c_switch", cfg.solve.c_switch);
        read_field(s, "fd_step", cfg.solve.fd_step);
        read_field(s, "threads", cfg.solve.threads);
    }

    // validation with field-precise diagnostics
    for (int a : cfg.alpha_list)
        if (a < 1) fail_field("alpha_list", "entries must be >= 1");
    if (cfg.solve.tol <= 0) fail_field("solve.tol", "must be positive");
    if (cfg.solve.max_iter < 1) fail_field("solve.max_iter", "must be >= 1");
    if (cfg.solve.alpha_h <= 0 || cfg.solve.alpha_h > 0.05)
        fail_field("solve.alpha_h", "must be in (0, 0.05]");
    if (cfg.solve.c_max <= 0 || cfg.solve.c_max > 0.999)
        fail_field("solve.c_max", "must be in (0, 0.999]");
    if (cfg.solve.eps0 <= 0 || cfg.solve.eps0 >= 0.5)
        fail_field("solve.eps0", "must be in (0, 0.5)");
    if (cfg.solve.C_o <= 1.0) fail_field("solve.C_o", "must exceed 1");
    if (cfg.solve.c_switch <= 0 || cfg.solve.c_switch > 0.25)
        fail_field("solve.c_switch", "must be in (0, 0.25]");
    if (cfg.evolve_h <= 0) fail_field("evolve_h", "must be positive");
    if (cfg.evolve_L < 10) fail_field("evolve_L", "must be >= 10");
    for (double t : cfg.times)
        if (t < 0) fail_field("times", "entries must be nonnegative");
    if (cfg.decay_window.size() != 2 || cfg.decay_window[0] >= cfg.decay_window[1])
        fail_field("decay_window", "must be [t_lo, t_hi] with t_lo < t_hi");
    if (cfg.initial_file.empty()) {
        try {
            family_fn(cfg.initial_family);
        } catch (const std::exception&) {
            fail_field("initial_family", "unknown family '" + cfg.initial_family + "'");
        }
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config file " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str());
}

DecayFit decay_fit(const std::vector<std::pair<double, double>>& series,
                   double t_lo, double t_hi, const std::string& quantity) {
    std::vector<double> x, y;
    for (const auto& [t, v] : series) {
        if (t < t_lo || t > t_hi) continue;
        if (v <= 0.0)
            throw std::invalid_argument("decay_fit: non-positive value in window");
        x.push_back(std::log(t));
        y.push_back(std::log(v));
    }
    const int n = static_cast<int>(x.size());
    if (n < 5) throw std::invalid_argument("decay_fit: fewer than 5 samples in window");
    double sx = 0, sy = 0;
    for (int i = 0; i < n; ++i) { sx += x[i]; sy += y[i]; }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    DecayFit fit;
    fit.quantity = quantity;
    fit.t_lo = t_lo;
    fit.t_hi = t_hi;
    fit.n = n;
    fit.exponent = sxy / sxx;
    double ss = 0;
    for (int i = 0; i < n; ++i) {
        double r = y[i] - my - fit.exponent * (x[i] - mx);
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / n);
    if (n > 2) fit.half_width = 1.96 * std::sqrt(ss / (n - 2) / sxx);
    if (!std::isfinite(fit.exponent))
        throw std::runtime_error("decay_fit: non-finite exponent");
    return fit;
}

FieldComparison compare_fields(const Grid& grid, double t,
                               const std::vector<cplx>& a,
                               const std::vector<cplx>& b) {
    if (a.size() != b.size() || static_cast<int>(a.size()) != grid.size())
        throw std::invalid_argument("compare_fields: grid mismatch");
    std::vector<cplx> diff(a.size());
    double linf = 0.0, bmax = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        diff[i] = a[i] - b[i];
        linf = std::max(linf, std::abs(diff[i]));
        bmax = std::max(bmax, std::abs(b[i]));
    }
    FieldComparison c;
    c.t = t;
    double bl2 = l2_norm(grid, b), bh1 = h1_norm(grid, b);
    c.rel_l2 = (bl2 > 0) ? l2_norm(grid, diff) / bl2 : l2_norm(grid, diff);
    c.rel_h1 = (bh1 > 0) ? h1_norm(grid, diff) / bh1 : h1_norm(grid, diff);
    c.rel_linf = (bmax > 0) ? linf / bmax : linf;
    return c;
}

namespace {

RealFn config_data_fn(const RunConfig& cfg) {
    if (cfg.initial_file.empty()) return family_fn(cfg.initial_family);
    CsvTable t = read_csv(cfg.initial_file);
    if (t.rows.empty() || t.rows.front().size() < 2)
        throw std::runtime_error("initial_file: expected columns y, value");
    auto ys = std::make_shared<std::vector<double>>();
    auto vs = std::make_shared<std::vector<double>>();
    for (const auto& r : t.rows) {
        ys->push_back(r[0]);
        vs->push_back(r[1]);
    }
    return [ys, vs](double y) {
        // piecewise-linear sample lookup with zero extension
        if (y <= ys->front() || y >= ys->back()) return 0.0;
        auto it = std::lower_bound(ys->begin(), ys->end(), y);
        size_t i = it - ys->begin();
        if (i == 0) return (*vs)[0];
        double t0 = (y - (*ys)[i - 1]) / ((*ys)[i] - (*ys)[i - 1]);
        return (1 - t0) * (*vs)[i - 1] + t0 * (*vs)[i];
    };
}

}  // namespace

int run_config(const RunConfig& cfg) {
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    json manifest;
    manifest["schema_version"] = cfg.schema_version;
    manifest["seed"] = cfg.seed;
    manifest["tolerances"] = {{"picard_tol", cfg.solve.tol},
                              {"alpha_h", cfg.solve.alpha_h},
                              {"c_max", cfg.solve.c_max},
                              {"c_switch", cfg.solve.c_switch},
                              {"eps0", cfg.solve.eps0},
                              {"C_o", cfg.solve.C_o}};
    manifest["envelope_decay_constant"] = 0.5;  // fitted C^-1 used in truncations
    manifest["initial_data"] =
        cfg.initial_file.empty() ? cfg.initial_family : cfg.initial_file;
    int failures = 0;
    RealFn data = config_data_fn(cfg);

    for (int alpha : cfg.alpha_list) {
        auto t0 = std::chrono::steady_clock::now();
        KernelTableParams kp;
        kp.alpha = alpha;
        kp.solve = cfg.solve;
        double tmax_req = cfg.times.empty() ? 1.0 : cfg.times.back();
        kp.t_max = std::max(cfg.t_table_max, alpha * tmax_req);
        KernelTable table = build_kernel_table(kp, data);
        std::string tag = "alpha" + std::to_string(alpha);

        if (cfg.run_wronskian) {
            write_kernel_table_csv(table, cfg.out_dir + "/wronskian_" + tag + ".csv");
            if (alpha == 1) {
                WronskianLimitDiagnostics d =
                    wronskian_limit_check({1e-1, 1e-2, 1e-3}, cfg.solve);
                json lim;
                lim["eps"] = d.eps;
                for (const cplx& r : d.ratio)
                    lim["ratio"].push_back({r.real(), r.imag()});
                lim["extrapolated"] = {d.extrapolated.real(), d.extrapolated.imag()};
                lim["rel_error_raw"] = d.rel_error_raw;
                lim["rel_error_extrapolated"] = d.rel_error_extrapolated;
                manifest["wronskian_limit"] = lim;
                if (d.rel_error_extrapolated > 1e-2) ++failures;
            }
        }

        if (cfg.run_evolve) {
            // spectral evolution
            CsvTable series;
            series.header = {"t", "alpha", "L2_psi", "H1_psi",
                             "L2_residual_after_subtraction"};
            std::vector<std::pair<double, double>> l2series;
            for (double t : cfg.times) {
                ModeField f = psi_mode(table, t);
                double l2 = l2_norm(f.grid, f.psi), h1 = h1_norm(f.grid, f.psi);
                double resid = 0.0;
                if (alpha == 1) {
                    std::vector<cplx> rest(f.psi.size());
                    for (size_t i = 0; i < f.psi.size(); ++i)
                        rest[i] = f.psi[i] - f.projection[i] - f.rank_one[i];
                    resid = l2_norm(f.grid, rest);
                }
                series.rows.push_back({t, double(alpha), l2, h1, resid});
                if (t > 0) l2series.push_back({t, l2});
            }
            write_csv(series, cfg.out_dir + "/spectral_" + tag + ".csv");

            // direct oracle on its own grid, then compare at matching nodes
            Grid og = Grid::symmetric(cfg.evolve_L, cfg.evolve_h);
            std::vector<cplx> w0(og.size());
            for (int i = 0; i < og.size(); ++i) w0[i] = data(og.y(i));
            Trajectory traj = evolve(w0, alpha, og, cfg.times, cfg.evolve_dt);
            CsvTable ot;
            ot.header = {"t", "L2_omega", "L2_psi", "H1_psi",
                         "re_a", "im_a", "re_b", "im_b"};
            json cmp_report = json::array();
            for (const VorticityState& s : traj.snapshots) {
                auto ab = a0_b0(s.omega, og);
                ot.rows.push_back({s.t, l2_norm(og, s.omega), l2_norm(og, s.psi),
                                   h1_norm(og, s.psi), ab.first.real(),
                                   ab.first.imag(), ab.second.real(),
                                   ab.second.imag()});
                ModeField f = psi_mode(table, s.t);
                std::vector<cplx> spectral_on_og(og.size());
                for (int i = 0; i < og.size(); ++i)
                    spectral_on_og[i] = f.grid.interp(f.psi, og.y(i));
                FieldComparison c = compare_fields(og, s.t, spectral_on_og, s.psi);
                cmp_report.push_back({{"t", c.t},
                                      {"rel_l2", c.rel_l2},
                                      {"rel_linf", c.rel_linf},
                                      {"rel_h1", c.rel_h1}});
                // declared check for verify runs: the two methods must agree
                if (cfg.run_verify && s.t > 0 && s.t <= 10.0 && c.rel_l2 > 1e-3)
                    ++failures;
            }
            write_csv(ot, cfg.out_dir + "/direct_" + tag + ".csv");
            manifest["compare_" + tag] = cmp_report;
            manifest["boundary_mass_" + tag] = traj.boundary_mass;

            if (l2series.size() >= 5) {
                try {
                    DecayFit fit = decay_fit(l2series, cfg.decay_window[0],
                                             cfg.decay_window[1], "L2_psi_" + tag);
                    manifest["decay_" + tag] = {{"quantity", fit.quantity},
                                                {"exponent", fit.exponent},
                                                {"residual", fit.residual},
                                                {"half_width", fit.half_width},
                                                {"n", fit.n}};
                } catch (const std::exception&) {
                    // window may not cover enough samples; not a failure
                }
            }
        }
        auto t1 = std::chrono::steady_clock::now();
        manifest["timing_seconds_" + tag] =
            std::chrono::duration<double>(t1 - t0).count();
    }

    manifest["failures"] = failures;
    std::ofstream os(cfg.out_dir + "/manifest.json");
    os << manifest.dump(2) << "\n";
    return failures == 0 ? 0 : 1;
}

}  // namespace tanhflow
