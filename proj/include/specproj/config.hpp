#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "specproj/grid.hpp"
#include "specproj/group.hpp"
#include "specproj/kernels.hpp"

namespace specproj {

/// Parsed configuration file: group + kernel + grid + suite selection.
struct Config {
    int n = 1;
    int r = 1;
    std::vector<Matrix> B;
    double sigma_min_threshold = 1e-8;

    KernelConfig kernel;
    Grid grid;

    std::vector<std::string> checks; // empty = all
    std::map<std::string, double> tolerances;
    std::uint64_t seed = 1;
    std::size_t workers = 0;

    std::string fingerprint; // hash of the raw config text

    GroupDescriptor make_group() const;
};

Config load_config(const std::string& path);
Config parse_config(const std::string& text);

/// Round-trip-exact JSON dump of a group (n, r, B row-major, threshold).
std::string group_to_json(int n, int r, const std::vector<Matrix>& B,
                          double sigma_min_threshold);

/// Points file: CSV rows y1..y2n,t1..tr (header row optional).
std::vector<GroupPoint> read_points_csv(const std::string& path, int n, int r);

} // namespace specproj
