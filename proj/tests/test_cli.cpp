// End-to-end exercises of the command line surface: subcommands, exit codes,
// and the CSV / container / report file formats.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "specproj/engine.hpp"
#include "test_helpers.hpp"

#ifndef SPECPROJ_CLI
#error "SPECPROJ_CLI must point at the CLI binary"
#endif
#ifndef SPECPROJ_CONFIG_DIR
#error "SPECPROJ_CONFIG_DIR must point at the configs directory"
#endif

using namespace specproj;
using namespace specproj::testing;

namespace {

int run_cli(const std::string& args) {
    std::string cmd = std::string(SPECPROJ_CLI) + " " + args + " > /tmp/specproj_cli_out.txt 2>&1";
    int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string h1_config() { return std::string(SPECPROJ_CONFIG_DIR) + "/h1.json"; }

std::vector<std::vector<double>> read_csv_rows(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::vector<std::vector<double>> rows;
    std::string line;
    std::getline(in, line); // header
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string tok;
        std::vector<double> row;
        while (std::getline(ss, tok, ',')) row.push_back(std::stod(tok));
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

TEST_CASE("validate exits 0 on a good config and nonzero on a degenerate one") {
    CHECK(run_cli("validate " + h1_config()) == 0);
    const char* bad = "/tmp/specproj_bad_config.json";
    {
        std::ofstream out(bad);
        out << R"({"group": {"n":1, "r":1, "B":[[[0,0],[0,0]]]}})";
    }
    CHECK(run_cli(std::string("validate ") + bad) == 1);
    CHECK(run_cli("validate /tmp/does_not_exist_specproj.json") == 2);
    CHECK(run_cli("frobnicate") == 2);
    std::remove(bad);
}

TEST_CASE("eval-kernel writes the expected CSV for every method") {
    const char* pts = "/tmp/specproj_cli_points.csv";
    {
        std::ofstream out(pts);
        out << "y1,y2,t1\n1.0,0.0,0.0\n0.5,-0.25,0.75\n";
    }
    for (const std::string method : {"sphere", "contour", "oracle"}) {
        const std::string out_path = "/tmp/specproj_cli_kernel_" + method + ".csv";
        CHECK(run_cli("eval-kernel " + h1_config() + " --m 0 --points " + pts + " --out " +
                      out_path + " --method " + method) == 0);
        auto rows = read_csv_rows(out_path);
        REQUIRE(rows.size() == 2);
        REQUIRE(rows[0].size() == 6); // y1,y2,t1,m,re,im
        // P_0((1,0), 0) = 2/pi^2 for every representation
        CHECK(rows[0][4] == doctest::Approx(2.0 / (M_PI * M_PI)).epsilon(1e-6));
        std::remove(out_path.c_str());
    }
    CHECK(run_cli("eval-kernel " + h1_config() + " --m 0 --points " + pts +
                  " --out /tmp/x.csv --method nonsense") == 2);
    std::remove(pts);
}

TEST_CASE("check subcommand writes a report and honors --only") {
    const char* report = "/tmp/specproj_cli_report.json";
    CHECK(run_cli("check " + h1_config() + " --only laguerre_addition,qm_consistency --report " +
                  report) == 0);
    std::ifstream in(report);
    REQUIRE(in.good());
    nlohmann::json j = nlohmann::json::parse(in);
    CHECK(j.at("checks").size() == 2);
    CHECK(j.at("summary").at("all_pass").get<bool>());
    for (const auto& c : j.at("checks")) {
        CHECK(c.contains("residual"));
        CHECK(c.contains("tolerance"));
        CHECK(c.contains("pass"));
        CHECK(c.contains("runtime_seconds"));
    }
    std::remove(report);

    // a degenerate group yields a failing report, exit code 1
    const char* bad = "/tmp/specproj_bad_config2.json";
    {
        std::ofstream out(bad);
        out << R"({"group": {"n":1, "r":1, "B":[[[0,0],[0,0]]]}})";
    }
    const char* bad_report = "/tmp/specproj_bad_report.json";
    CHECK(run_cli(std::string("check ") + bad + " --report " + bad_report) == 1);
    std::ifstream bin(bad_report);
    REQUIRE(bin.good());
    nlohmann::json bj = nlohmann::json::parse(bin);
    CHECK(bj.at("checks").at(0).at("note").get<std::string>().find("egenerate") !=
          std::string::npos);
    std::remove(bad);
    std::remove(bad_report);
}

TEST_CASE("reconstruct round-trips a container through the CLI") {
    Grid grid;
    grid.horizontal_dim = 2;
    grid.central_dim = 1;
    grid.y_points = 32;
    grid.y_extent = 6.0;
    grid.t_points = 32;
    grid.t_extent = 12.0;
    SampledFunction f = sample_function(grid, [](const Vector& y, const Vector& t) {
        return Complex(std::exp(-y.squaredNorm() - 0.5 * t.squaredNorm()), 0.0);
    });
    const char* in_path = "/tmp/specproj_cli_rec_in.bin";
    const char* out_path = "/tmp/specproj_cli_rec_out.bin";
    write_container(f, in_path);
    CHECK(run_cli("reconstruct " + h1_config() + " --input " + in_path +
                  " --R 0.5 --M inf --out " + out_path) == 0);
    SampledFunction got = read_container(out_path);

    GroupDescriptor g = h1();
    ProjectionEngine eng(g, grid);
    SampledFunction want = eng.abel_reconstruct(f, 0.5, -1);
    double diff = 0.0;
    REQUIRE(got.values.size() == want.values.size());
    for (std::size_t i = 0; i < got.values.size(); ++i)
        diff = std::max(diff, std::abs(got.values[i] - want.values[i]));
    CHECK(diff < 1e-12);
    std::remove(in_path);
    std::remove(out_path);
}

TEST_CASE("export-qm evaluates Q_m on the requested grid") {
    const char* out_path = "/tmp/specproj_cli_qm.csv";
    CHECK(run_cli("export-qm " + h1_config() + " --m 0 --tau 1.0 --grid 4:16 --out " +
                  out_path) == 0);
    auto rows = read_csv_rows(out_path);
    REQUIRE(rows.size() == 16 * 16);
    // find y = (0,0): Q_0(0, 1) = 2/pi
    bool found = false;
    for (const auto& row : rows)
        if (row[0] == 0.0 && row[1] == 0.0) {
            CHECK(row[2] == doctest::Approx(2.0 / M_PI).epsilon(1e-12));
            found = true;
        }
    CHECK(found);
    std::remove(out_path);
}
