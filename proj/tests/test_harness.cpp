#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "tanhflow/harness.hpp"
#include "tanhflow/io.hpp"

using namespace tanhflow;

TEST_CASE("config parsing: defaults, overrides, field-precise errors") {
    RunConfig cfg = parse_config("{}");
    CHECK(cfg.alpha_list == std::vector<int>{2});
    CHECK(cfg.solve.tol == 1e-10);

    cfg = parse_config(R"({"alpha_list":[1,2],"times":[1,2,3],
                           "solve":{"alpha_h":0.02,"c_max":0.99}})");
    CHECK(cfg.alpha_list.size() == 2);
    CHECK(cfg.solve.alpha_h == 0.02);

    // schema violations name the offending field
    CHECK_THROWS_WITH_AS(parse_config(R"({"solve":{"c_max":1.5}})"),
                         doctest::Contains("solve.c_max"), std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_config(R"({"alpha_list":[0]})"),
                         doctest::Contains("alpha_list"), std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_config(R"({"solve":{"tol":-1}})"),
                         doctest::Contains("solve.tol"), std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_config(R"({"decay_window":[5]})"),
                         doctest::Contains("decay_window"), std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_config(R"({"initial_family":"nope"})"),
                         doctest::Contains("nope"), std::runtime_error);
    CHECK_THROWS_AS(parse_config("{not json"), std::runtime_error);
}

TEST_CASE("decay_fit: exact power law, noisy envelope, guards") {
    std::vector<std::pair<double, double>> s;
    for (int k = 0; k < 30; ++k) {
        double t = 5.0 + k * 5.0;
        s.push_back({t, std::pow(t, -2.0)});
    }
    DecayFit f = decay_fit(s, 5.0, 150.0, "exact");
    CHECK(f.exponent == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(f.residual < 1e-12);

    std::vector<std::pair<double, double>> noisy;
    for (int k = 0; k < 40; ++k) {
        double t = 10.0 + k * 2.25;
        noisy.push_back({t, std::pow(t, -2.0) * (1.0 + 0.1 * std::sin(t))});
    }
    DecayFit fn = decay_fit(noisy, 10.0, 100.0);
    CHECK(fn.exponent == doctest::Approx(-2.0).epsilon(0.05));

    CHECK_THROWS_AS(decay_fit({{1, 1}, {2, 1}, {3, 1}}, 0, 10, ""),
                    std::invalid_argument);  // < 5 samples
    std::vector<std::pair<double, double>> neg = {{1, 1}, {2, -1}, {3, 1},
                                                  {4, 1}, {5, 1}};
    CHECK_THROWS_AS(decay_fit(neg, 0, 10, ""), std::invalid_argument);
}

TEST_CASE("compare_fields: identical inputs give zeros; mismatch throws") {
    Grid g(0.0, 0.1, 64);
    std::vector<cplx> a(g.size());
    for (int i = 0; i < g.size(); ++i) a[i] = std::sin(g.y(i));
    FieldComparison c = compare_fields(g, 1.0, a, a);
    CHECK(c.rel_l2 == 0.0);
    CHECK(c.rel_linf == 0.0);
    CHECK(c.rel_h1 == 0.0);
    std::vector<cplx> b(g.size() - 1);
    CHECK_THROWS_AS(compare_fields(g, 1.0, a, b), std::invalid_argument);
}

TEST_CASE("CSV round trip and byte-identical reruns") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "tanhflow_test_csv";
    fs::create_directories(dir);
    CsvTable t;
    t.header = {"t", "value"};
    std::mt19937_64 rng(123);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int k = 0; k < 50; ++k) t.rows.push_back({double(k), u(rng)});
    std::string p1 = (dir / "a.csv").string(), p2 = (dir / "b.csv").string();
    write_csv(t, p1);
    write_csv(t, p2);
    std::ifstream f1(p1), f2(p2);
    std::string s1((std::istreambuf_iterator<char>(f1)), {});
    std::string s2((std::istreambuf_iterator<char>(f2)), {});
    CHECK(s1 == s2);
    CsvTable back = read_csv(p1);
    REQUIRE(back.rows.size() == t.rows.size());
    for (size_t i = 0; i < t.rows.size(); ++i)
        CHECK(back.rows[i][1] == t.rows[i][1]);  // %.17g preserves doubles
    fs::remove_all(dir);
}

TEST_CASE("run_config smoke path: minimal alpha=2 config produces artifacts") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "tanhflow_test_run";
    fs::remove_all(dir);
    RunConfig cfg = parse_config(R"({
        "alpha_list":[2], "times":[1.0], "t_table_max":4.0,
        "evolve_h":0.05, "decay_window":[0.5,2.0]})");
    cfg.out_dir = dir.string();
    int rc = run_config(cfg);
    CHECK(rc == 0);
    CHECK(fs::exists(dir / "manifest.json"));
    CHECK(fs::exists(dir / "spectral_alpha2.csv"));
    CHECK(fs::exists(dir / "direct_alpha2.csv"));
    CHECK(fs::exists(dir / "wronskian_alpha2.csv"));
    // determinism: rerun into a second directory, compare the table bytes
    fs::path dir2 = fs::temp_directory_path() / "tanhflow_test_run2";
    fs::remove_all(dir2);
    cfg.out_dir = dir2.string();
    run_config(cfg);
    for (const char* name : {"spectral_alpha2.csv", "wronskian_alpha2.csv"}) {
        std::ifstream f1(dir / name), f2(dir2 / name);
        std::string s1((std::istreambuf_iterator<char>(f1)), {});
        std::string s2((std::istreambuf_iterator<char>(f2)), {});
        CHECK(s1 == s2);
        CHECK(!s1.empty());
    }
    fs::remove_all(dir);
    fs::remove_all(dir2);
}
