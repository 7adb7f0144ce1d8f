#include "sqfd/gasfilm.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <utility>

#include "sqfd/errors.hpp"

namespace sqfd {

namespace {

// Square-duct Poiseuille friction constant (fully developed laminar flow).
constexpr double kSquareDuctConstant = 28.454;

struct Axis {
    std::vector<double> lines;
    std::vector<std::pair<int, int>> holes; // grid-line index range of each hole opening
};

// Number of equal parts that keeps an interval of length `span` at or below h.
// Nested splitting rounds up to a power of two, so halving h splits every
// element of the previous mesh into four.
int interval_parts(double span, double h, bool nested) {
    const double ratio = span / h - 1e-9;
    if (ratio <= 1.0) return 1;
    if (nested) return 1 << static_cast<int>(std::ceil(std::log2(ratio)));
    return static_cast<int>(std::ceil(ratio));
}

// Grid lines along one axis: every hole edge is a line and each interval
// between consecutive edges is split into equal parts no longer than h.
Axis build_axis(double length, int n_holes, double origin, double pitch, double side, double h, bool nested) {
    std::vector<double> edges{0.0};
    for (int k = 0; k < n_holes; ++k) {
        edges.push_back(origin + k * pitch);
        edges.push_back(origin + k * pitch + side);
    }
    edges.push_back(length);

    Axis ax;
    ax.lines.push_back(0.0);
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
        const double lo = edges[k];
        const double hi = edges[k + 1];
        const int parts = interval_parts(hi - lo, h, nested);
        const int first = static_cast<int>(ax.lines.size()) - 1;
        for (int p = 1; p < parts; ++p) ax.lines.push_back(lo + (hi - lo) * p / parts);
        ax.lines.push_back(hi);
        // Even intervals (k = 1, 3, ...) lie under a hole.
        if (k % 2 == 1) ax.holes.emplace_back(first, static_cast<int>(ax.lines.size()) - 1);
    }
    return ax;
}

FilmMesh build(double length, double width, double h, const Axis& ax, const Axis& ay, double hole_area) {
    FilmMesh m;
    m.length = length;
    m.width = width;
    m.element_size = h;
    m.xs = ax.lines;
    m.ys = ay.lines;
    const int nx = m.nx();
    const int ny = m.ny();

    m.nodes.reserve(static_cast<std::size_t>(nx) * ny);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) m.nodes.push_back({m.xs[i], m.ys[j]});

    for (int i = 0; i < nx; ++i) {
        m.boundary_nodes.push_back(m.node_index(i, 0));
        m.boundary_nodes.push_back(m.node_index(i, ny - 1));
    }
    for (int j = 1; j + 1 < ny; ++j) {
        m.boundary_nodes.push_back(m.node_index(0, j));
        m.boundary_nodes.push_back(m.node_index(nx - 1, j));
    }
    std::sort(m.boundary_nodes.begin(), m.boundary_nodes.end());

    // Hole lookup per element column/row.
    std::vector<int> col_hole(nx - 1, -1), row_hole(ny - 1, -1);
    for (std::size_t k = 0; k < ax.holes.size(); ++k)
        for (int i = ax.holes[k].first; i < ax.holes[k].second; ++i) col_hole[i] = static_cast<int>(k);
    for (std::size_t k = 0; k < ay.holes.size(); ++k)
        for (int j = ay.holes[k].first; j < ay.holes[k].second; ++j) row_hole[j] = static_cast<int>(k);
    const int n_cols = static_cast<int>(ax.holes.size());

    m.elements.reserve(static_cast<std::size_t>(nx - 1) * (ny - 1));
    for (int j = 0; j + 1 < ny; ++j) {
        for (int i = 0; i + 1 < nx; ++i) {
            FilmElement el;
            el.nodes = {m.node_index(i, j), m.node_index(i + 1, j), m.node_index(i + 1, j + 1),
                        m.node_index(i, j + 1)};
            if (col_hole[i] >= 0 && row_hole[j] >= 0) el.hole = row_hole[j] * n_cols + col_hole[i];
            m.elements.push_back(el);
        }
    }

    const std::size_t n_holes = ax.holes.size() * ay.holes.size();
    m.hole_ports.resize(n_holes);
    m.port_weights.resize(n_holes);
    for (std::size_t r = 0; r < ay.holes.size(); ++r) {
        for (std::size_t c = 0; c < ax.holes.size(); ++c) {
            const std::size_t hole = r * ax.holes.size() + c;
            auto [i0, i1] = ax.holes[c];
            auto [j0, j1] = ay.holes[r];
            for (int j = j0; j <= j1; ++j) {
                for (int i = i0; i <= i1; ++i) {
                    const int n = m.node_index(i, j);
                    // Each adjacent hole element contributes a quarter of its area.
                    double w = 0.0;
                    for (int dj = -1; dj <= 0; ++dj)
                        for (int di = -1; di <= 0; ++di) {
                            const int ei = i + di, ej = j + dj;
                            if (ei < i0 || ei >= i1 || ej < j0 || ej >= j1) continue;
                            w += 0.25 * (m.xs[ei + 1] - m.xs[ei]) * (m.ys[ej + 1] - m.ys[ej]);
                        }
                    m.hole_ports[hole].push_back(n);
                    m.port_weights[hole].push_back({n, w / hole_area});
                }
            }
        }
    }
    return m;
}

void check_size(double element_size, double length, double width) {
    if (!(element_size > 0.0) || !std::isfinite(element_size))
        throw MeshError("element size must be positive");
    if (element_size > std::min(length, width))
        throw MeshError("element size exceeds the plate footprint");
}

} // namespace

void GasProps::validate() const {
    if (!(viscosity > 0.0)) throw DomainError("gas viscosity must be positive");
    if (!(ambient_pressure > 0.0)) throw DomainError("ambient pressure must be positive");
    if (!(mean_free_path >= 0.0)) throw DomainError("mean free path must be non-negative");
}

double knudsen(const GasProps& gas, double gap) {
    if (!(gap > 0.0)) throw DomainError("gap must be positive");
    return gas.mean_free_path / gap;
}

double effective_viscosity(const GasProps& gas, double kn) {
    if (kn < 0.0) throw DomainError("Knudsen number must be non-negative");
    return gas.viscosity / (1.0 + 9.638 * std::pow(kn, 1.159));
}

double hole_resistance(double side, double length, double viscosity) {
    return kSquareDuctConstant * viscosity * length / std::pow(side, 4);
}

double FilmMesh::solid_area() const {
    double a = 0.0;
    for (const auto& el : elements)
        if (el.solid()) a += element_area(el);
    return a;
}

FilmMesh mesh_film(const TestStructure& s, const HoleGrid& grid, double element_size) {
    check_size(element_size, s.plate_length, s.plate_width);
    const double e = s.hole_side;
    const double f = s.hole_interspace;
    if (!(f > 0.0)) throw MeshError("zero hole interspace cannot be resolved");
    if (element_size > std::min(e, f))
        throw MeshError("element size " + std::to_string(element_size) + " µm cannot resolve hole side " +
                        std::to_string(e) + " / interspace " + std::to_string(f));
    auto ax = build_axis(s.plate_length, grid.n_cols, grid.origin_x, grid.pitch, e, element_size, true);
    auto ay = build_axis(s.plate_width, grid.n_rows, grid.origin_y, grid.pitch, e, element_size, true);
    return build(s.plate_length, s.plate_width, element_size, ax, ay, e * e);
}

FilmMesh mesh_rectangle(double length, double width, double element_size) {
    check_size(element_size, length, width);
    auto ax = build_axis(length, 0, 0.0, 0.0, 0.0, element_size, false);
    auto ay = build_axis(width, 0, 0.0, 0.0, 0.0, element_size, false);
    return build(length, width, element_size, ax, ay, 1.0);
}

std::vector<HoleChannel> make_hole_channels(const TestStructure& s, const FilmMesh& mesh, const GasProps& gas,
                                            const ChannelOptions& opts) {
    const double eta = opts.rarefied_viscosity ? effective_viscosity(gas, knudsen(gas, s.hole_side)) : gas.viscosity;
    const double length = s.thickness + opts.end_correction * s.hole_side;
    std::vector<HoleChannel> out;
    out.reserve(mesh.hole_ports.size());
    for (std::size_t k = 0; k < mesh.hole_ports.size(); ++k)
        out.push_back({static_cast<int>(k), s.thickness, s.hole_side, hole_resistance(s.hole_side, length, eta)});
    return out;
}

void write_mesh_nodes_csv(std::ostream& out, const FilmMesh& mesh) {
    std::vector<int> hole_of(mesh.node_count(), -1);
    std::vector<char> boundary(mesh.node_count(), 0);
    for (std::size_t h = 0; h < mesh.hole_ports.size(); ++h)
        for (int n : mesh.hole_ports[h]) hole_of[n] = static_cast<int>(h);
    for (int n : mesh.boundary_nodes) boundary[n] = 1;
    out << "index,x_um,y_um,boundary,hole\n";
    for (std::size_t n = 0; n < mesh.node_count(); ++n)
        out << n << ',' << mesh.nodes[n].x << ',' << mesh.nodes[n].y << ',' << int(boundary[n]) << ','
            << hole_of[n] << '\n';
}

void write_mesh_elements_csv(std::ostream& out, const FilmMesh& mesh) {
    out << "index,n0,n1,n2,n3,hole\n";
    for (std::size_t k = 0; k < mesh.element_count(); ++k) {
        const auto& el = mesh.elements[k];
        out << k << ',' << el.nodes[0] << ',' << el.nodes[1] << ',' << el.nodes[2] << ',' << el.nodes[3] << ','
            << el.hole << '\n';
    }
}

} // namespace sqfd
