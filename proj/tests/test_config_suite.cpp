#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstring>
#include <fstream>

#include "specproj/config.hpp"
#include "specproj/suite.hpp"
#include "test_helpers.hpp"

using namespace specproj;
using namespace specproj::testing;

namespace {

const char* kH1Config = R"({
  "group": {"n": 1, "r": 1, "B": [[[0, -1], [1, 0]]], "sigma_min_threshold": 1e-8},
  "kernel": {"epsilon": 0.1, "sphere_degree": 64, "radial_nodes": 96, "m_max": 60},
  "grid": {"y_extent": 6.0, "y_points": 32, "t_extent": 12.0, "t_points": 64},
  "suite": {"seed": 7}
})";

} // namespace

TEST_CASE("config parsing and validation") {
    Config cfg = parse_config(kH1Config);
    CHECK(cfg.n == 1);
    CHECK(cfg.r == 1);
    CHECK(cfg.B.size() == 1);
    CHECK(cfg.B[0](0, 1) == -1.0);
    CHECK(cfg.kernel.sphere_degree == 64);
    CHECK(cfg.grid.y_points == 32);
    CHECK(cfg.seed == 7);
    CHECK(!cfg.fingerprint.empty());
    GroupDescriptor g = cfg.make_group();
    CHECK(g.sigma_min() == doctest::Approx(1.0));

    CHECK_THROWS_AS(parse_config("{"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"group": {"n": 1}})"), ConfigError);
    // degenerate B surfaces as Degenerate from make_group
    Config zero = parse_config(R"({"group": {"n":1, "r":1, "B":[[[0,0],[0,0]]]}})");
    CHECK_THROWS_AS(zero.make_group(), Degenerate);
}

TEST_CASE("group JSON round trip is bit exact") {
    GroupDescriptor g = aniso_n2r2();
    // entries with non-terminating binary expansions
    std::vector<Matrix> B = g.tensors();
    B[0](0, 1) = -0.1;
    B[0](1, 0) = 0.1;
    std::string text = group_to_json(2, 2, B, 1e-8);
    Config cfg = parse_config(text);
    for (int beta = 0; beta < 2; ++beta)
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                double a = cfg.B[beta](i, j), b = B[beta](i, j);
                CHECK(std::memcmp(&a, &b, sizeof(double)) == 0);
            }
}

TEST_CASE("points csv reader") {
    const char* path = "/tmp/specproj_points_test.csv";
    {
        std::ofstream out(path);
        out << "y1,y2,t1\n";
        out << "1.0,0.5,-0.25\n";
        out << "0.0,1.0,2.0\n";
    }
    auto pts = read_points_csv(path, 1, 1);
    REQUIRE(pts.size() == 2);
    CHECK(pts[0].y[0] == 1.0);
    CHECK(pts[0].t[0] == -0.25);
    CHECK(pts[1].y[1] == 1.0);
    std::remove(path);
}

TEST_CASE("suite runs fast checks and produces a stable report") {
    Config cfg = parse_config(kH1Config);
    std::vector<std::string> only = {"laguerre_addition", "qm_consistency", "byy",
                                     "conjugate_symmetry", "quasi_distance"};
    VerificationReport rep = run_suite(cfg, only);
    CHECK(rep.checks.size() == only.size());
    for (const auto& c : rep.checks) {
        CHECK(c.pass);
        CHECK(c.residual <= c.tolerance);
    }
    CHECK(rep.all_pass);

    // determinism: identical reports apart from the timing fields
    VerificationReport rep2 = run_suite(cfg, only);
    CHECK(rep.to_json(false) == rep2.to_json(false));

    // unknown names are a config error
    CHECK_THROWS_AS(run_suite(cfg, {"not_a_check"}), ConfigError);
}

TEST_CASE("report JSON schema fields") {
    Config cfg = parse_config(kH1Config);
    VerificationReport rep = run_suite(cfg, {"laguerre_addition"});
    std::string text = rep.to_json();
    for (const char* field : {"fingerprint", "seed", "checks", "summary", "name", "parameters",
                              "residuals", "residual", "tolerance", "pass", "runtime_seconds"})
        CHECK(text.find(field) != std::string::npos);
    write_report(rep, "/tmp/specproj_report_test.json");
    std::ifstream in("/tmp/specproj_report_test.json");
    CHECK(in.good());
    std::remove("/tmp/specproj_report_test.json");
}

TEST_CASE("suite check names cover the specified list") {
    auto names = suite_check_names();
    for (const char* want :
         {"normalization", "byy", "laguerre_addition", "qm_consistency", "eigenfunction",
          "norm_identities", "twisted_orthogonality", "representation_agreement", "homogeneity",
          "conjugate_symmetry", "mean_value_zero", "cz_size", "cz_gradient", "projection_laws",
          "bessel_completeness", "abel_reconstruction"}) {
        bool found = false;
        for (const auto& n : names) found = found || n == want;
        CHECK_MESSAGE(found, want);
    }
}
