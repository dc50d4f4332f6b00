#include "specproj/grid.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

namespace specproj {

static_assert(std::endian::native == std::endian::little,
              "container format assumes a little-endian host");

namespace {

bool is_pow2(int v) { return v > 0 && (v & (v - 1)) == 0; }

} // namespace

std::size_t Grid::y_size() const {
    std::size_t s = 1;
    for (int a = 0; a < horizontal_dim; ++a) s *= static_cast<std::size_t>(y_points);
    return s;
}

std::size_t Grid::t_size() const {
    std::size_t s = 1;
    for (int a = 0; a < central_dim; ++a) s *= static_cast<std::size_t>(t_points);
    return s;
}

double Grid::y_cell() const { return std::pow(y_spacing(), horizontal_dim); }
double Grid::t_cell() const { return std::pow(t_spacing(), central_dim); }
double Grid::tau_cell() const { return std::pow(tau_spacing(), central_dim); }

Vector Grid::y_point(std::size_t flat) const {
    Vector out(horizontal_dim);
    for (int a = horizontal_dim - 1; a >= 0; --a) {
        out[a] = y_coord(static_cast<int>(flat % y_points));
        flat /= y_points;
    }
    return out;
}

Vector Grid::t_point(std::size_t flat) const {
    Vector out(central_dim);
    for (int a = central_dim - 1; a >= 0; --a) {
        out[a] = t_coord(static_cast<int>(flat % t_points));
        flat /= t_points;
    }
    return out;
}

Vector Grid::tau_point(std::size_t flat) const {
    Vector out(central_dim);
    for (int a = central_dim - 1; a >= 0; --a) {
        out[a] = tau_coord(static_cast<int>(flat % t_points));
        flat /= t_points;
    }
    return out;
}

void Grid::validate() const {
    if (horizontal_dim < 2 || horizontal_dim % 2 != 0)
        throw ConfigError("grid: horizontal_dim must be even and >= 2");
    if (central_dim < 1) throw ConfigError("grid: central_dim must be >= 1");
    if (!is_pow2(y_points) || !is_pow2(t_points))
        throw ConfigError("grid: point counts must be powers of two");
    if (!(y_extent > 0.0) || !(t_extent > 0.0))
        throw ConfigError("grid: extents must be positive");
}

SampledFunction SampledFunction::zeros(const Grid& grid, Space space) {
    SampledFunction f;
    f.grid = grid;
    f.space = space;
    f.values.assign(grid.total(), Complex(0.0, 0.0));
    return f;
}

double l2_norm(const SampledFunction& f) {
    double s = 0.0;
    for (const Complex& v : f.values) s += std::norm(v);
    double cell = f.grid.y_cell() * (f.space == Space::YT ? f.grid.t_cell() : f.grid.tau_cell());
    return std::sqrt(cell * s);
}

double l1_norm(const SampledFunction& f) {
    double s = 0.0;
    for (const Complex& v : f.values) s += std::abs(v);
    double cell = f.grid.y_cell() * (f.space == Space::YT ? f.grid.t_cell() : f.grid.tau_cell());
    return cell * s;
}

Complex inner_product(const SampledFunction& f, const SampledFunction& g) {
    if (!(f.grid == g.grid) || f.space != g.space)
        throw GridMismatch("inner_product: functions live on different grids");
    Complex s(0.0, 0.0);
    for (std::size_t i = 0; i < f.values.size(); ++i) s += std::conj(f.values[i]) * g.values[i];
    double cell = f.grid.y_cell() * (f.space == Space::YT ? f.grid.t_cell() : f.grid.tau_cell());
    return cell * s;
}

namespace {

struct ContainerHeader {
    char magic[4];
    std::uint32_t version;
    std::uint8_t space;
    std::uint8_t horizontal_dim;
    std::uint8_t central_dim;
    std::uint8_t pad;
    std::uint32_t y_points;
    std::uint32_t t_points;
    double y_extent;
    double t_extent;
    std::uint64_t count;
};
static_assert(sizeof(ContainerHeader) == 48);

} // namespace

void write_container(const SampledFunction& f, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open for writing: " + path);
    ContainerHeader h{};
    std::memcpy(h.magic, "SPFB", 4);
    h.version = 1;
    h.space = static_cast<std::uint8_t>(f.space);
    h.horizontal_dim = static_cast<std::uint8_t>(f.grid.horizontal_dim);
    h.central_dim = static_cast<std::uint8_t>(f.grid.central_dim);
    h.y_points = static_cast<std::uint32_t>(f.grid.y_points);
    h.t_points = static_cast<std::uint32_t>(f.grid.t_points);
    h.y_extent = f.grid.y_extent;
    h.t_extent = f.grid.t_extent;
    h.count = f.values.size();
    out.write(reinterpret_cast<const char*>(&h), sizeof(h));
    out.write(reinterpret_cast<const char*>(f.values.data()),
              static_cast<std::streamsize>(f.values.size() * sizeof(Complex)));
    if (!out) throw Error("write failed: " + path);
}

SampledFunction read_container(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open: " + path);
    ContainerHeader h{};
    in.read(reinterpret_cast<char*>(&h), sizeof(h));
    if (!in || std::memcmp(h.magic, "SPFB", 4) != 0 || h.version != 1)
        throw Error("bad container header: " + path);
    SampledFunction f;
    f.grid.horizontal_dim = h.horizontal_dim;
    f.grid.central_dim = h.central_dim;
    f.grid.y_points = static_cast<int>(h.y_points);
    f.grid.t_points = static_cast<int>(h.t_points);
    f.grid.y_extent = h.y_extent;
    f.grid.t_extent = h.t_extent;
    f.space = static_cast<Space>(h.space);
    f.grid.validate();
    if (h.count != f.grid.total()) throw Error("container payload count mismatch: " + path);
    f.values.resize(h.count);
    in.read(reinterpret_cast<char*>(f.values.data()),
            static_cast<std::streamsize>(h.count * sizeof(Complex)));
    if (!in) throw Error("container truncated: " + path);
    return f;
}

void write_csv(const SampledFunction& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open for writing: " + path);
    out.precision(17);
    for (int a = 0; a < f.grid.horizontal_dim; ++a) out << "y" << (a + 1) << ",";
    const char* tname = f.space == Space::YT ? "t" : "tau";
    for (int a = 0; a < f.grid.central_dim; ++a) out << tname << (a + 1) << ",";
    out << "re,im\n";
    const std::size_t ys = f.grid.y_size();
    for (std::size_t slice = 0; slice < f.grid.t_size(); ++slice) {
        Vector tv = f.space == Space::YT ? f.grid.t_point(slice) : f.grid.tau_point(slice);
        for (std::size_t yi = 0; yi < ys; ++yi) {
            Vector yv = f.grid.y_point(yi);
            for (int a = 0; a < yv.size(); ++a) out << yv[a] << ",";
            for (int a = 0; a < tv.size(); ++a) out << tv[a] << ",";
            const Complex& v = f.values[slice * ys + yi];
            out << v.real() << "," << v.imag() << "\n";
        }
    }
}

} // namespace specproj
