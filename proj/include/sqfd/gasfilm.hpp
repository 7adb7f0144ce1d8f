#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "sqfd/geometry.hpp"

namespace sqfd {

/// Viscosity in Pa·s, ambient pressure in Pa, mean free path in µm.
/// Defaults are standard air with a mean free path that gives Kn = 0.042 at a 1.6 µm gap.
struct GasProps {
    double viscosity = 18.27e-6;
    double ambient_pressure = 101325.0;
    double mean_free_path = 0.0672;

    void validate() const;
};

/// λ / gap. Throws DomainError for gap ≤ 0.
double knudsen(const GasProps& gas, double gap);

/// Slip-flow corrected viscosity η / (1 + 9.638·Kn^1.159).
double effective_viscosity(const GasProps& gas, double kn);

/// Laminar square-duct resistance 28.454·η·t/e⁴, in Pa·s/µm³ (e, t in µm).
double hole_resistance(double side, double length, double viscosity);

struct FilmNode {
    double x;
    double y;
};

struct FilmElement {
    std::array<int, 4> nodes; // counterclockwise from lower-left
    int hole = -1;            // hole index when the element lies under a hole opening
    bool solid() const noexcept { return hole < 0; }
};

struct PortWeight {
    int node;
    double weight; // ∫_hole N_node dA / hole area
};

/// Structured quadrilateral mesh of the film under the plate footprint.
/// Mesh lines follow every hole edge, so each element is either fully under
/// plate material or fully under a hole opening.
struct FilmMesh {
    double length = 0.0; // µm
    double width = 0.0;  // µm
    double element_size = 0.0;
    std::vector<double> xs; // grid lines
    std::vector<double> ys;
    std::vector<FilmNode> nodes;
    std::vector<FilmElement> elements;
    std::vector<int> boundary_nodes;            // plate outline, held at ambient
    std::vector<std::vector<int>> hole_ports;   // film nodes inside each hole footprint
    std::vector<std::vector<PortWeight>> port_weights;

    int nx() const noexcept { return static_cast<int>(xs.size()); }
    int ny() const noexcept { return static_cast<int>(ys.size()); }
    int node_index(int i, int j) const noexcept { return j * nx() + i; }
    std::size_t node_count() const noexcept { return nodes.size(); }
    std::size_t element_count() const noexcept { return elements.size(); }

    double element_dx(const FilmElement& el) const { return nodes[el.nodes[1]].x - nodes[el.nodes[0]].x; }
    double element_dy(const FilmElement& el) const { return nodes[el.nodes[3]].y - nodes[el.nodes[0]].y; }
    double element_area(const FilmElement& el) const { return element_dx(el) * element_dy(el); }

    /// Area under plate material, µm².
    double solid_area() const;
};

/// Mesh the footprint of `s` with elements no larger than `element_size`.
/// Throws MeshError when the size cannot resolve a hole or an interspace.
FilmMesh mesh_film(const TestStructure& s, const HoleGrid& grid, double element_size);

/// Unperforated length × width rectangle.
FilmMesh mesh_rectangle(double length, double width, double element_size);

struct HoleChannel {
    int hole = 0;
    double length = 0.0;     // µm, equals plate thickness
    double side = 0.0;       // µm
    double resistance = 0.0; // Pa·s/µm³
};

struct ChannelOptions {
    // Channel air uses the continuum viscosity unless set.
    bool rarefied_viscosity = false;
    // Extra length per hole, as a multiple of the side, added to t.
    double end_correction = 0.0;
};

std::vector<HoleChannel> make_hole_channels(const TestStructure& s, const FilmMesh& mesh, const GasProps& gas,
                                            const ChannelOptions& opts = {});

/// Node table (index,x_um,y_um,boundary,hole) and element table (index,n0..n3,hole).
void write_mesh_nodes_csv(std::ostream& out, const FilmMesh& mesh);
void write_mesh_elements_csv(std::ostream& out, const FilmMesh& mesh);

} // namespace sqfd
