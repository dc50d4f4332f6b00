#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "specproj/errors.hpp"
#include "specproj/tau.hpp"

namespace specproj {

enum class Space : std::uint8_t { YT = 0, YTau = 1 };

/// Rectangular sampling grid. The y axes form an integer lattice containing
/// the origin (closed under the differences the twisted convolution needs);
/// the t and tau axes are offset by half a cell so the tau = 0 fiber is never
/// sampled. Point counts are powers of two; tau spacing = pi / t_extent.
struct Grid {
    int horizontal_dim = 2; // 2n
    int central_dim = 1;    // r
    double y_extent = 6.0;
    int y_points = 128;
    double t_extent = 12.0;
    int t_points = 256;

    double y_spacing() const { return 2.0 * y_extent / y_points; }
    double t_spacing() const { return 2.0 * t_extent / t_points; }
    double tau_spacing() const { return M_PI / t_extent; }

    double y_coord(int i) const { return (i - y_points / 2) * y_spacing(); }
    double t_coord(int j) const { return (j + 0.5 - 0.5 * t_points) * t_spacing(); }
    double tau_coord(int k) const { return (k + 0.5 - 0.5 * t_points) * tau_spacing(); }

    std::size_t y_size() const;
    std::size_t t_size() const;
    std::size_t total() const { return y_size() * t_size(); }

    /// Cell volumes of the y block and of the t / tau blocks.
    double y_cell() const;
    double t_cell() const;
    double tau_cell() const;

    Vector y_point(std::size_t flat) const;   // y multi-coordinates of a flat y index
    Vector t_point(std::size_t flat) const;   // t multi-coordinates of a flat t index
    Vector tau_point(std::size_t flat) const; // tau multi-coordinates of a flat t index

    void validate() const;
    bool operator==(const Grid&) const = default;
};

/// Complex samples over the grid; linear layout (t..., y...) with the y block
/// contiguous, so a fixed-tau slice is values[slice * y_size() .. +y_size()).
struct SampledFunction {
    Grid grid;
    Space space = Space::YT;
    std::vector<Complex> values;

    static SampledFunction zeros(const Grid& grid, Space space);
};

/// L2 norm with the cell volume of the function's space.
double l2_norm(const SampledFunction& f);
double l1_norm(const SampledFunction& f);
/// <f, g> = cell * sum conj(f) g.
Complex inner_product(const SampledFunction& f, const SampledFunction& g);

/// Binary container: fixed little-endian header + payload of re/im float64
/// pairs in the linear layout above.
void write_container(const SampledFunction& f, const std::string& path);
SampledFunction read_container(const std::string& path);

/// CSV export: one row per sample, columns y1..y2n, t1..tr (or tau1..), re, im.
void write_csv(const SampledFunction& f, const std::string& path);

} // namespace specproj
