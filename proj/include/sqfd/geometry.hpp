#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sqfd {

/// Perforated plate on four lateral bending supports. All lengths in µm.
struct TestStructure {
    std::string label;
    double plate_length = 0.0;    // a
    double plate_width = 0.0;     // b
    double support_length = 0.0;  // c
    double support_width = 0.0;   // d
    double hole_side = 0.0;       // e
    double hole_interspace = 0.0; // f
    double thickness = 0.0;       // t
    double gap = 0.0;             // g0

    // Explicit hole counts; when unset the maximal centered grid is used.
    std::optional<int> hole_cols;
    std::optional<int> hole_rows;

    double pitch() const noexcept { return hole_side + hole_interspace; }

    /// Throws GeometryError when a dimensional invariant is violated.
    void validate() const;

    bool operator==(const TestStructure&) const = default;
};

/// Young modulus in GPa, density in kg/µm³.
struct MaterialProps {
    double young_modulus = 147.0;
    double density = 2.33e-15;
    double poisson = 0.2152;

    void validate() const;
};

/// Regular square-hole array. Origin is the lower-left corner of hole (0, 0).
struct HoleGrid {
    int n_rows = 0;
    int n_cols = 0;
    double pitch = 0.0;
    double origin_x = 0.0;
    double origin_y = 0.0;

    int count() const noexcept { return n_rows * n_cols; }
    double hole_x(int col) const noexcept { return origin_x + col * pitch; }
    double hole_y(int row) const noexcept { return origin_y + row * pitch; }

    bool operator==(const HoleGrid&) const = default;
};

/// Structures A-F with their measured effective dimensions.
std::vector<TestStructure> catalog();

/// Catalog entry by label; nullopt for unknown labels.
std::optional<TestStructure> catalog_entry(const std::string& label);

/// True when `s` carries a catalog label and exactly the catalog dimensions.
bool is_catalog_structure(const TestStructure& s);

/// Maximal grid of pitch e+f centered on the plate, leaving at least f/2 of
/// solid margin on every side. Explicit hole counts on `s` take precedence.
HoleGrid derive_hole_grid(const TestStructure& s);

/// Plate volume minus holes plus four c×d×t supports, in µm³.
double solid_volume(const TestStructure& s, const HoleGrid& grid);

/// ρ·V in kg.
double total_mass(const TestStructure& s, const HoleGrid& grid, const MaterialProps& m);

/// Measured resonance data of one catalog structure (frequencies in kHz).
struct MeasuredResponse {
    std::string label;
    double resonance_khz;
    double resonance_std_khz;
    double half_power_lo_khz;
    double half_power_hi_khz;
    double damping;        // N·s/m
    double stiffness;      // N/m
    double damping_ratio;
    double volume;         // µm³ as tabulated
    double modal_mass;     // kg
    double total_mass;     // kg
    double mass_ratio;
};

std::span<const MeasuredResponse> measured_responses();
std::optional<MeasuredResponse> measured_response(const std::string& label);

/// Structure blocks as YAML: a sequence of mappings with keys
/// label, a, b, c, d, e, f, t, gap (µm) and optional hole_cols/hole_rows.
std::vector<TestStructure> read_structures(std::istream& in);
void write_structures(std::ostream& out, std::span<const TestStructure> structures);

} // namespace sqfd
