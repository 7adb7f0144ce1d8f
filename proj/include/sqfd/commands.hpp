#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sqfd/config.hpp"
#include "sqfd/csv.hpp"
#include "sqfd/frf.hpp"
#include "sqfd/gasfilm.hpp"
#include "sqfd/projection.hpp"
#include "sqfd/reynolds.hpp"
#include "sqfd/structure.hpp"

namespace sqfd {

/// Geometry, mesh, channels and assembled film of one structure.
struct FilmModel {
    TestStructure structure;
    HoleGrid grid;
    FilmMesh mesh;
    std::vector<HoleChannel> channels;
    AssembledSystem system;
};

FilmModel build_film_model(const TestStructure& s, const GasProps& gas, double element_size_um);

/// Measured resonance for catalog structures, lumped prediction otherwise.
double reference_resonance_hz(const TestStructure& s, const MaterialProps& mat);

struct CatalogRow {
    TestStructure structure;
    HoleGrid grid;
    double volume = 0.0;          // µm³
    double mass = 0.0;            // kg
    double stiffness = 0.0;       // N/m, lumped
    double natural_freq_hz = 0.0; // lumped, with the piston modal mass
    std::optional<double> measured_freq_hz;
};

std::vector<CatalogRow> catalog_rows(const MaterialProps& mat);
void print_catalog(std::ostream& out, const std::vector<CatalogRow>& rows);
void write_catalog_csv(std::ostream& out, const std::vector<CatalogRow>& rows);

struct SweepReport {
    std::vector<CKPair> imposed;
    std::vector<CKPair> modal; // piston diagonal of the ROM
    std::vector<RomMatrices> roms;
    std::vector<SweepFailure> failures;
    std::vector<std::filesystem::path> files;
};

/// Runs the configured method(s) and writes CSV files into cfg.output_dir.
/// Throws SolveError after writing when any frequency failed.
SweepReport cmd_sweep(const RunConfig& cfg, std::ostream& log, bool dump_mesh = false);

struct ConvergenceRow {
    double fraction_of_d;
    double element_size_um;
    std::size_t nodes;
    std::size_t elements;
    CKPair ck;
};

std::vector<ConvergenceRow> cmd_converge(const RunConfig& cfg, std::ostream& log);

struct IdentifyReport {
    std::vector<ModalIdentification> runs;
    IdentificationSummary summary;
};

IdentifyReport cmd_identify(const std::vector<std::filesystem::path>& frf_files, double modal_mass,
                            const std::string& label, std::ostream& out,
                            const std::optional<std::filesystem::path>& csv_out);

struct CompareReport {
    std::string label;
    ModalIdentification experimental;
    double structural_stiffness = 0.0;
    std::optional<CKPair> imposed_at_resonance;
    std::optional<CKPair> modal_at_resonance;
    double stiffness_balance = 0.0; // k_struct + k_fluid(f_n), from the first available method
};

/// Experimental point (from an FRF file or the tabulated measurement) next to
/// the simulated curves found in sweep_dir. Writes compare_<label>_*.csv.
CompareReport cmd_compare(const RunConfig& cfg, const std::filesystem::path& sweep_dir,
                          const std::optional<std::filesystem::path>& frf_file, std::ostream& out);

/// Log-log interpolation of a sweep at f; nullopt outside the swept range.
std::optional<CKPair> interpolate_sweep(const std::vector<SweepRow>& rows, double frequency_hz);

std::filesystem::path sweep_file(const std::filesystem::path& dir, const std::string& label, Method method);

} // namespace sqfd
