#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sqfd/gasfilm.hpp"
#include "sqfd/geometry.hpp"

namespace sqfd {

enum class Method { imposed_velocity, modal_projection, both };

std::string to_string(Method m);
/// "imposed-velocity", "modal-projection" or "both"; throws ConfigError otherwise.
Method parse_method(const std::string& text);

/// Element size as absolute µm or as a fraction of the support width d.
struct MeshSettings {
    std::optional<double> element_size_um;
    double fraction_of_d = 0.5;

    double resolve(const TestStructure& s) const;
};

struct SweepSettings {
    double f_min = 1e3; // Hz
    double f_max = 1e7;
    int points_per_decade = 40;
};

struct ConvergeSettings {
    std::vector<double> fractions_of_d{1.0, 0.5, 0.25, 0.125};
    std::optional<double> reference_frequency_hz; // defaults to the structure's resonance
};

struct RunConfig {
    TestStructure structure = *catalog_entry("A");
    GasProps gas;
    MaterialProps material;
    MeshSettings mesh;
    SweepSettings sweep;
    ConvergeSettings converge;
    Method method = Method::both;
    int modes = 1;
    std::filesystem::path output_dir = ".";

    /// Checks every module precondition; throws ConfigError naming the field.
    void validate() const;
    /// Extra checks for the convergence study: at least two sizes, each resolving the holes.
    void validate_converge() const;
};

/// YAML document. Top-level keys: structure (catalog label or a structure
/// mapping), gas, material, mesh, sweep, converge, method, modes, output.
/// Unknown keys are rejected with their line number.
RunConfig read_run_config(std::istream& in);
RunConfig load_run_config(const std::filesystem::path& path);

} // namespace sqfd
