#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sqfd/gasfilm.hpp"
#include "sqfd/geometry.hpp"

namespace sqfd {

/// Rigid plate on its supports: stiffness [N/m] and moving mass [kg].
struct LumpedModel {
    double stiffness = 0.0;
    double mass = 0.0;
};

/// Tip stiffness 3EI/c³ of one support, I = d·t³/12.
double support_stiffness(const TestStructure& s, const MaterialProps& mat);

/// Four supports acting in parallel.
double lumped_stiffness(const TestStructure& s, const MaterialProps& mat);

/// sqrt(k/m)/2π in Hz; 0 when k = 0 or m is infinite.
double natural_frequency(const LumpedModel& lm);

struct Mode {
    std::string name;
    double omega = 0.0;         // rad/s
    std::vector<double> shape;  // per film-mesh node, max |φ| = 1
    double modal_mass = 0.0;    // kg
    double participation = 0.0; // ρt∫φ / modal mass
    double frequency_hz() const;
};

struct ModalModel {
    std::vector<Mode> modes;
    std::size_t size() const noexcept { return modes.size(); }
};

/// Ratio of modal to total mass for the piston mode: the measured value for
/// catalog structures, 0.9 otherwise.
double piston_mass_ratio(const TestStructure& s);

/// Rigid translation φ ≡ 1 with lumped stiffness and ratio-scaled modal mass.
Mode piston_mode(const TestStructure& s, const FilmMesh& mesh, const MaterialProps& mat = {});

/// Number of shapes in the built-in family (piston plus bending shapes).
inline constexpr int kModeFamilySize = 6;

/// Piston mode followed by n-1 plate-bending shapes built from free-free beam
/// functions, mass-orthogonalized on the mesh. Frequencies are Rayleigh
/// quotients of Kirchhoff bending energy plus the corner support springs.
/// Throws DomainError for n < 1 or n > kModeFamilySize.
ModalModel bending_modes(const TestStructure& s, const FilmMesh& mesh, int n, const MaterialProps& mat = {});

/// Mass inner product ρt·∫_solid u·v over the mesh [kg].
double modal_inner_product(const FilmMesh& mesh, const MaterialProps& mat, double thickness,
                           const std::vector<double>& u, const std::vector<double>& v);

/// mode,name,frequency_hz,modal_mass_kg,participation
void write_modes_csv(std::ostream& out, const ModalModel& model);
/// node,x_um,y_um,phi1..phin aligned with the mesh node table.
void write_mode_shapes_csv(std::ostream& out, const ModalModel& model, const FilmMesh& mesh);

} // namespace sqfd
