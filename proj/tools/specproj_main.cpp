#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "specproj/config.hpp"
#include "specproj/engine.hpp"
#include "specproj/kernels.hpp"
#include "specproj/suite.hpp"

using namespace specproj;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

struct CliState {
    std::string config_path;
    std::size_t workers = 0;

    Config load() const {
        Config cfg = load_config(config_path);
        if (workers > 0) cfg.workers = workers;
        return cfg;
    }
};

int cmd_validate(const CliState& st) {
    Config cfg = st.load();
    GroupDescriptor g = cfg.make_group();
    std::cout << "group ok: n=" << g.n() << " r=" << g.r()
              << " Q=" << g.homogeneous_dim() << " sigma_min=" << g.sigma_min()
              << " eig[(B^tau)^T B^tau] in [" << g.btb_eig_min() << ", " << g.btb_eig_max()
              << "]\n";
    return kExitOk;
}

int cmd_eval_kernel(const CliState& st, int m, const std::string& points_path,
                    const std::string& out_path, const std::string& method) {
    Config cfg = st.load();
    GroupDescriptor g = cfg.make_group();
    KernelEvaluator eval(g, cfg.kernel);
    auto points = read_points_csv(points_path, cfg.n, cfg.r);
    std::ofstream out(out_path);
    if (!out) throw Error("cannot open output: " + out_path);
    out.precision(17);
    for (int a = 0; a < 2 * cfg.n; ++a) out << "y" << (a + 1) << ",";
    for (int a = 0; a < cfg.r; ++a) out << "t" << (a + 1) << ",";
    out << "m,re,im\n";
    for (const GroupPoint& p : points) {
        Complex v;
        if (method == "sphere")
            v = eval.p_m(m, p.y, p.t);
        else if (method == "contour")
            v = eval.p_m_continued(m, p.y, p.t);
        else if (method == "oracle")
            v = eval.p_m_oracle(m, p.y, p.t);
        else
            throw ConfigError("unknown method: " + method);
        for (int a = 0; a < p.y.size(); ++a) out << p.y[a] << ",";
        for (int a = 0; a < p.t.size(); ++a) out << p.t[a] << ",";
        out << m << "," << v.real() << "," << v.imag() << "\n";
    }
    return kExitOk;
}

int cmd_check(const CliState& st, const std::vector<std::string>& only,
              const std::string& report_path) {
    Config cfg = st.load();
    VerificationReport report = run_suite(cfg, only);
    if (!report_path.empty()) write_report(report, report_path);
    for (const auto& c : report.checks) {
        std::cout << (c.pass ? "PASS" : "FAIL") << "  " << c.name
                  << "  residual=" << c.residual << " tol=" << c.tolerance << "  ("
                  << c.runtime_seconds << " s)";
        if (!c.note.empty()) std::cout << "  [" << c.note << "]";
        std::cout << "\n";
    }
    std::cout << (report.all_pass ? "all checks passed" : "CHECK FAILURES PRESENT") << "\n";
    return report.all_pass ? kExitOk : kExitCheckFailed;
}

int cmd_reconstruct(const CliState& st, const std::string& input, double R,
                    const std::string& m_arg, const std::string& out_path) {
    Config cfg = st.load();
    GroupDescriptor g = cfg.make_group();
    SampledFunction f = read_container(input);
    ProjectionEngine engine(g, f.grid, cfg.workers);
    int M = -1;
    if (m_arg != "inf") M = std::stoi(m_arg);
    SampledFunction rec = engine.abel_reconstruct(f, R, M);
    write_container(rec, out_path);
    return kExitOk;
}

int cmd_export_qm(const CliState& st, int m, const std::vector<double>& tau_vals,
                  const std::string& grid_arg, const std::string& out_path) {
    Config cfg = st.load();
    GroupDescriptor g = cfg.make_group();
    if (static_cast<int>(tau_vals.size()) != cfg.r)
        throw ConfigError("--tau needs exactly r values");
    Vector tau = Eigen::Map<const Vector>(tau_vals.data(), cfg.r);
    Grid grid = cfg.grid;
    if (!grid_arg.empty()) {
        auto sep = grid_arg.find(':');
        if (sep == std::string::npos) throw ConfigError("--grid expects EXTENT:POINTS");
        grid.y_extent = std::stod(grid_arg.substr(0, sep));
        grid.y_points = std::stoi(grid_arg.substr(sep + 1));
        grid.validate();
    }
    TauSpectrum spec = spectral_data(g, tau);
    std::ofstream out(out_path);
    if (!out) throw Error("cannot open output: " + out_path);
    out.precision(17);
    for (int a = 0; a < 2 * cfg.n; ++a) out << "y" << (a + 1) << ",";
    out << "re,im\n";
    for (std::size_t i = 0; i < grid.y_size(); ++i) {
        Vector y = grid.y_point(i);
        double v = q_m(g, spec, m, y);
        for (int a = 0; a < y.size(); ++a) out << y[a] << ",";
        out << v << "," << 0.0 << "\n";
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral projection kernels on step-two nilpotent groups"};
    app.require_subcommand(1);
    CliState st;

    auto add_config = [&](CLI::App* sub) {
        sub->add_option("config", st.config_path, "configuration JSON file")->required();
        sub->add_option("--workers", st.workers, "worker thread count");
    };

    auto* validate = app.add_subcommand("validate", "validate a group configuration");
    add_config(validate);

    auto* evalk = app.add_subcommand("eval-kernel", "evaluate P_m on a points file");
    add_config(evalk);
    int m = 0;
    std::string points_path, out_path, method = "sphere";
    evalk->add_option("--m", m, "kernel index m")->required();
    evalk->add_option("--points", points_path, "CSV points file y1..y2n,t1..tr")->required();
    evalk->add_option("--out", out_path, "output CSV")->required();
    evalk->add_option("--method", method, "sphere|contour|oracle");

    auto* check = app.add_subcommand("check", "run the verification suite");
    add_config(check);
    std::string only_arg, report_path;
    check->add_option("--only", only_arg, "comma-separated check names");
    check->add_option("--report", report_path, "JSON report output path");

    auto* rec = app.add_subcommand("reconstruct", "Abel reconstruction of a sampled function");
    add_config(rec);
    std::string input_path, m_arg = "inf", rec_out;
    double R = 0.5;
    rec->add_option("--input", input_path, "input container file")->required();
    rec->add_option("--R", R, "Abel parameter in [0,1)")->required();
    rec->add_option("--M", m_arg, "truncation order or 'inf'");
    rec->add_option("--out", rec_out, "output container file")->required();

    auto* exq = app.add_subcommand("export-qm", "export Q_m(., tau) on a y grid");
    add_config(exq);
    int qm_m = 0;
    std::vector<double> tau_vals;
    std::string grid_arg, qm_out;
    exq->add_option("--m", qm_m, "kernel index m")->required();
    exq->add_option("--tau", tau_vals, "tau components (r values)")->required();
    exq->add_option("--grid", grid_arg, "y grid as EXTENT:POINTS");
    exq->add_option("--out", qm_out, "output CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (validate->parsed()) return cmd_validate(st);
        if (evalk->parsed()) return cmd_eval_kernel(st, m, points_path, out_path, method);
        if (check->parsed()) {
            std::vector<std::string> only;
            std::stringstream ss(only_arg);
            std::string tok;
            while (std::getline(ss, tok, ','))
                if (!tok.empty()) only.push_back(tok);
            return cmd_check(st, only, report_path);
        }
        if (rec->parsed()) return cmd_reconstruct(st, input_path, R, m_arg, rec_out);
        if (exq->parsed()) return cmd_export_qm(st, qm_m, tau_vals, grid_arg, qm_out);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCheckFailed;
    }
    return kExitUsage;
}
