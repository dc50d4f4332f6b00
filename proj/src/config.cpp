#include "specproj/config.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

namespace specproj {

using nlohmann::json;

namespace {

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

Matrix matrix_from_json(const json& rows, int d, const std::string& what) {
    if (!rows.is_array() || static_cast<int>(rows.size()) != d)
        throw ConfigError(what + ": expected " + std::to_string(d) + " rows");
    Matrix m(d, d);
    for (int i = 0; i < d; ++i) {
        const json& row = rows[i];
        if (!row.is_array() || static_cast<int>(row.size()) != d)
            throw ConfigError(what + ": row " + std::to_string(i) + " must have " +
                              std::to_string(d) + " entries");
        for (int j = 0; j < d; ++j) m(i, j) = row[j].get<double>();
    }
    return m;
}

} // namespace

GroupDescriptor Config::make_group() const {
    return validate_group(n, r, B, sigma_min_threshold, seed);
}

Config parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    Config c;
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a(text)));
    c.fingerprint = buf;

    const json& g = j.contains("group") ? j.at("group") : j;
    if (!g.contains("n") || !g.contains("r") || !g.contains("B"))
        throw ConfigError("config: group needs fields n, r, B");
    c.n = g.at("n").get<int>();
    c.r = g.at("r").get<int>();
    if (c.n < 1 || c.r < 1) throw ConfigError("config: n, r must be positive");
    const json& B = g.at("B");
    if (!B.is_array() || static_cast<int>(B.size()) != c.r)
        throw ConfigError("config: B must be an array of r matrices");
    for (int beta = 0; beta < c.r; ++beta)
        c.B.push_back(matrix_from_json(B[beta], 2 * c.n, "B[" + std::to_string(beta) + "]"));
    if (g.contains("sigma_min_threshold"))
        c.sigma_min_threshold = g.at("sigma_min_threshold").get<double>();

    if (j.contains("kernel")) {
        const json& k = j.at("kernel");
        if (k.contains("epsilon")) c.kernel.epsilon = k.at("epsilon").get<double>();
        if (k.contains("sphere_degree")) c.kernel.sphere_degree = k.at("sphere_degree").get<int>();
        if (k.contains("radial_nodes")) c.kernel.radial_nodes = k.at("radial_nodes").get<int>();
        if (k.contains("m_max")) c.kernel.m_max = k.at("m_max").get<int>();
        if (k.contains("quad_tol")) c.kernel.quad_tol = k.at("quad_tol").get<double>();
        if (k.contains("gamma_nodes_per_side"))
            c.kernel.gamma_nodes_per_side = k.at("gamma_nodes_per_side").get<int>();
        if (k.contains("contour_nodes")) c.kernel.contour_nodes = k.at("contour_nodes").get<int>();
        if (k.contains("check_convergence"))
            c.kernel.check_convergence = k.at("check_convergence").get<bool>();
        if (!(c.kernel.epsilon > 0.0 && c.kernel.epsilon < 1.0))
            throw ConfigError("config: kernel.epsilon must be in (0, 1)");
    }

    c.grid.horizontal_dim = 2 * c.n;
    c.grid.central_dim = c.r;
    if (j.contains("grid")) {
        const json& gr = j.at("grid");
        if (gr.contains("y_extent")) c.grid.y_extent = gr.at("y_extent").get<double>();
        if (gr.contains("y_points")) c.grid.y_points = gr.at("y_points").get<int>();
        if (gr.contains("t_extent")) c.grid.t_extent = gr.at("t_extent").get<double>();
        if (gr.contains("t_points")) c.grid.t_points = gr.at("t_points").get<int>();
        c.grid.validate();
    }

    if (j.contains("suite")) {
        const json& s = j.at("suite");
        if (s.contains("checks"))
            for (const auto& name : s.at("checks")) c.checks.push_back(name.get<std::string>());
        if (s.contains("seed")) c.seed = s.at("seed").get<std::uint64_t>();
        if (s.contains("workers")) c.workers = s.at("workers").get<std::size_t>();
        if (s.contains("tolerances"))
            for (auto it = s.at("tolerances").begin(); it != s.at("tolerances").end(); ++it)
                c.tolerances[it.key()] = it.value().get<double>();
    }
    return c;
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string group_to_json(int n, int r, const std::vector<Matrix>& B,
                          double sigma_min_threshold) {
    json g;
    g["n"] = n;
    g["r"] = r;
    json mats = json::array();
    for (const Matrix& m : B) {
        json rows = json::array();
        for (int i = 0; i < m.rows(); ++i) {
            json row = json::array();
            for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
            rows.push_back(row);
        }
        mats.push_back(rows);
    }
    g["B"] = mats;
    g["sigma_min_threshold"] = sigma_min_threshold;
    json out;
    out["group"] = g;
    return out.dump(2);
}

std::vector<GroupPoint> read_points_csv(const std::string& path, int n, int r) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open points file: " + path);
    std::vector<GroupPoint> points;
    std::string line;
    const int want = 2 * n + r;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::vector<double> vals;
        std::string tok;
        bool numeric = true;
        while (std::getline(ss, tok, ',')) {
            try {
                std::size_t pos = 0;
                double v = std::stod(tok, &pos);
                vals.push_back(v);
            } catch (...) {
                numeric = false;
                break;
            }
        }
        if (!numeric) continue; // header row
        if (static_cast<int>(vals.size()) != want)
            throw Error("points file row has " + std::to_string(vals.size()) +
                        " columns, expected " + std::to_string(want));
        GroupPoint p;
        p.y = Eigen::Map<Vector>(vals.data(), 2 * n);
        p.t = Eigen::Map<Vector>(vals.data() + 2 * n, r);
        points.push_back(std::move(p));
    }
    return points;
}

} // namespace specproj
