// Command-line front end for the squeeze-film simulator.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "sqfd/commands.hpp"
#include "sqfd/errors.hpp"

namespace {

enum ExitCode { kOk = 0, kConfig = 2, kNumerical = 3, kParse = 4 };

struct Overrides {
    std::string config;
    std::string structure;
    std::string method;
    std::optional<int> modes;
    std::string output;
    std::optional<double> element_size;
    std::optional<double> fraction_of_d;
    std::optional<double> f_min;
    std::optional<double> f_max;
    std::optional<int> ppd;
    std::vector<double> fractions;
    std::optional<double> reference_frequency;
};

void add_run_options(CLI::App* cmd, Overrides& o) {
    cmd->add_option("-c,--config", o.config, "YAML run configuration")->check(CLI::ExistingFile);
    cmd->add_option("-s,--structure", o.structure, "catalog label (A-F)");
    cmd->add_option("-o,--output", o.output, "output directory");
    cmd->add_option("--element-size", o.element_size, "element size in um");
    cmd->add_option("--fraction-of-d", o.fraction_of_d, "element size as a fraction of the support width");
}

sqfd::RunConfig resolve_config(const Overrides& o) {
    sqfd::RunConfig cfg = o.config.empty() ? sqfd::RunConfig{} : sqfd::load_run_config(o.config);
    if (!o.structure.empty()) {
        auto entry = sqfd::catalog_entry(o.structure);
        if (!entry) throw sqfd::ConfigError("--structure: unknown catalog label '" + o.structure + "'");
        cfg.structure = *entry;
    }
    if (!o.method.empty()) cfg.method = sqfd::parse_method(o.method);
    if (o.modes) cfg.modes = *o.modes;
    if (!o.output.empty()) cfg.output_dir = o.output;
    if (o.element_size) cfg.mesh.element_size_um = *o.element_size;
    if (o.fraction_of_d) {
        cfg.mesh.fraction_of_d = *o.fraction_of_d;
        cfg.mesh.element_size_um.reset();
    }
    if (o.f_min) cfg.sweep.f_min = *o.f_min;
    if (o.f_max) cfg.sweep.f_max = *o.f_max;
    if (o.ppd) cfg.sweep.points_per_decade = *o.ppd;
    if (!o.fractions.empty()) cfg.converge.fractions_of_d = o.fractions;
    if (o.reference_frequency) cfg.converge.reference_frequency_hz = *o.reference_frequency;
    cfg.validate();
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Squeeze-film damping of perforated MEMS plates"};
    app.require_subcommand(1);
    Overrides o;

    auto* catalog = app.add_subcommand("catalog", "list the test structures with derived quantities");
    std::string catalog_csv;
    catalog->add_option("--csv", catalog_csv, "also write the table as CSV");

    auto* sweep = app.add_subcommand("sweep", "frequency sweep of fluid damping and stiffness");
    add_run_options(sweep, o);
    sweep->add_option("-m,--method", o.method, "imposed-velocity | modal-projection | both");
    sweep->add_option("-n,--modes", o.modes, "number of plate modes for the projection");
    sweep->add_option("--f-min", o.f_min, "lowest frequency, Hz");
    sweep->add_option("--f-max", o.f_max, "highest frequency, Hz");
    sweep->add_option("--ppd", o.ppd, "points per decade");
    bool dump_mesh = false;
    sweep->add_flag("--dump-mesh", dump_mesh, "write mesh nodes and elements as CSV");

    auto* converge = app.add_subcommand("converge", "mesh-convergence study at a fixed frequency");
    add_run_options(converge, o);
    converge->add_option("--fractions", o.fractions, "element sizes as fractions of d");
    converge->add_option("--frequency", o.reference_frequency, "reference frequency, Hz");

    auto* identify = app.add_subcommand("identify", "modal identification from measured FRF curves");
    std::vector<std::string> frf_files;
    double modal_mass = 0.0;
    std::string label = "X";
    std::string identify_csv;
    identify->add_option("frf", frf_files, "FRF CSV files (frequency_khz,amplitude)")->required();
    identify->add_option("-m,--modal-mass", modal_mass, "modal mass, kg")->required();
    identify->add_option("-l,--label", label, "structure label used in the report");
    identify->add_option("--csv", identify_csv, "write the identification table as CSV");

    auto* compare = app.add_subcommand("compare", "simulated fluid coefficients next to the measured response");
    add_run_options(compare, o);
    std::string sweep_dir = ".";
    std::string compare_frf;
    compare->add_option("--sweep-dir", sweep_dir, "directory holding sweep CSV files");
    compare->add_option("--frf", compare_frf, "measured FRF CSV instead of the tabulated values");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        if (*catalog) {
            const auto rows = sqfd::catalog_rows(sqfd::MaterialProps{});
            sqfd::print_catalog(std::cout, rows);
            if (!catalog_csv.empty()) {
                std::ofstream out(catalog_csv, std::ios::binary);
                if (!out) throw sqfd::ConfigError("cannot write '" + catalog_csv + "'");
                sqfd::write_catalog_csv(out, rows);
            }
        } else if (*sweep) {
            sqfd::cmd_sweep(resolve_config(o), std::cout, dump_mesh);
        } else if (*converge) {
            sqfd::cmd_converge(resolve_config(o), std::cout);
        } else if (*identify) {
            std::vector<std::filesystem::path> paths(frf_files.begin(), frf_files.end());
            std::optional<std::filesystem::path> csv;
            if (!identify_csv.empty()) csv = identify_csv;
            sqfd::cmd_identify(paths, modal_mass, label, std::cout, csv);
        } else if (*compare) {
            std::optional<std::filesystem::path> frf;
            if (!compare_frf.empty()) frf = compare_frf;
            sqfd::cmd_compare(resolve_config(o), sweep_dir, frf, std::cout);
        }
    } catch (const sqfd::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const sqfd::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kParse;
    } catch (const sqfd::Error& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kNumerical;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kConfig;
    }
    return kOk;
}
