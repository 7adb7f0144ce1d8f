#include "sqfd/commands.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "sqfd/csv.hpp"
#include "sqfd/errors.hpp"
#include "sqfd/units.hpp"

namespace sqfd {

namespace fs = std::filesystem;

namespace {

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    return out;
}

double loglog(double f, double f0, double f1, double y0, double y1) {
    if (y0 > 0.0 && y1 > 0.0) {
        const double t = std::log(f / f0) / std::log(f1 / f0);
        return std::exp(std::log(y0) + t * (std::log(y1) - std::log(y0)));
    }
    return y0 + (f - f0) / (f1 - f0) * (y1 - y0);
}

std::string method_tag(Method m) { return to_string(m); }

} // namespace

FilmModel build_film_model(const TestStructure& s, const GasProps& gas, double element_size_um) {
    FilmModel m;
    m.structure = s;
    m.grid = derive_hole_grid(s);
    m.mesh = mesh_film(s, m.grid, element_size_um);
    m.channels = make_hole_channels(s, m.mesh, gas);
    m.system = assemble(m.mesh, m.channels, gas, s.gap);
    return m;
}

double reference_resonance_hz(const TestStructure& s, const MaterialProps& mat) {
    if (is_catalog_structure(s))
        if (auto r = measured_response(s.label)) return r->resonance_khz * units::khz;
    const auto grid = derive_hole_grid(s);
    return natural_frequency({lumped_stiffness(s, mat), piston_mass_ratio(s) * total_mass(s, grid, mat)});
}

std::vector<CatalogRow> catalog_rows(const MaterialProps& mat) {
    std::vector<CatalogRow> rows;
    for (const auto& s : catalog()) {
        CatalogRow r;
        r.structure = s;
        r.grid = derive_hole_grid(s);
        r.volume = solid_volume(s, r.grid);
        r.mass = total_mass(s, r.grid, mat);
        r.stiffness = lumped_stiffness(s, mat);
        r.natural_freq_hz = natural_frequency({r.stiffness, piston_mass_ratio(s) * r.mass});
        if (auto m = measured_response(s.label)) r.measured_freq_hz = m->resonance_khz * units::khz;
        rows.push_back(r);
    }
    return rows;
}

void print_catalog(std::ostream& out, const std::vector<CatalogRow>& rows) {
    const auto flags = out.flags();
    const auto prec = out.precision();
    out << std::left << std::setw(4) << "id" << std::right << std::setw(8) << "a" << std::setw(8) << "b"
        << std::setw(8) << "c" << std::setw(6) << "d" << std::setw(6) << "e" << std::setw(6) << "f" << std::setw(10)
        << "holes" << std::setw(14) << "volume[um3]" << std::setw(13) << "mass[kg]" << std::setw(12) << "k[N/m]"
        << std::setw(12) << "fn[kHz]" << std::setw(14) << "fn_meas[kHz]" << '\n';
    for (const auto& r : rows) {
        const auto& s = r.structure;
        out << std::left << std::setw(4) << s.label << std::right << std::fixed << std::setprecision(1)
            << std::setw(8) << s.plate_length << std::setw(8) << s.plate_width << std::setw(8) << s.support_length
            << std::setw(6) << s.support_width << std::setw(6) << s.hole_side << std::setw(6) << s.hole_interspace
            << std::setw(10) << (std::to_string(r.grid.n_cols) + "x" + std::to_string(r.grid.n_rows))
            << std::scientific << std::setprecision(4) << std::setw(14) << r.volume << std::setw(13) << r.mass
            << std::fixed << std::setprecision(1) << std::setw(12) << r.stiffness << std::setprecision(3)
            << std::setw(12) << r.natural_freq_hz / units::khz << std::setw(14)
            << (r.measured_freq_hz ? *r.measured_freq_hz / units::khz : NAN) << '\n';
    }
    out.flags(flags);
    out.precision(prec);
}

void write_catalog_csv(std::ostream& out, const std::vector<CatalogRow>& rows) {
    out << "label,a,b,c,d,e,f,t,gap,hole_cols,hole_rows,volume_um3,mass_kg,k_struct_n_per_m,fn_lumped_hz,"
           "fn_measured_hz\n";
    for (const auto& r : rows) {
        const auto& s = r.structure;
        out << s.label;
        for (double v : {s.plate_length, s.plate_width, s.support_length, s.support_width, s.hole_side,
                         s.hole_interspace, s.thickness, s.gap})
            out << ',' << format_double(v);
        out << ',' << r.grid.n_cols << ',' << r.grid.n_rows << ',' << format_double(r.volume) << ','
            << format_double(r.mass) << ',' << format_double(r.stiffness) << ',' << format_double(r.natural_freq_hz)
            << ',' << (r.measured_freq_hz ? format_double(*r.measured_freq_hz) : std::string("nan")) << '\n';
    }
}

fs::path sweep_file(const fs::path& dir, const std::string& label, Method method) {
    return dir / ("sweep_" + label + "_" + method_tag(method) + ".csv");
}

SweepReport cmd_sweep(const RunConfig& cfg, std::ostream& log, bool dump_mesh) {
    cfg.validate();
    const auto& s = cfg.structure;
    const double h = cfg.mesh.resolve(s);
    const auto model = build_film_model(s, cfg.gas, h);
    const auto freqs = frequency_grid(cfg.sweep.f_min, cfg.sweep.f_max, cfg.sweep.points_per_decade);
    fs::create_directories(cfg.output_dir);
    log << "structure " << s.label << ": " << model.mesh.node_count() << " nodes, " << model.mesh.element_count()
        << " elements, " << model.grid.count() << " holes, " << freqs.size() << " frequencies\n";

    SweepReport rep;
    auto record = [&](const fs::path& p) { rep.files.push_back(p); };

    if (dump_mesh) {
        auto nodes = cfg.output_dir / ("mesh_" + s.label + "_nodes.csv");
        auto elems = cfg.output_dir / ("mesh_" + s.label + "_elements.csv");
        auto n_out = open_output(nodes);
        write_mesh_nodes_csv(n_out, model.mesh);
        auto e_out = open_output(elems);
        write_mesh_elements_csv(e_out, model.mesh);
        record(nodes);
        record(elems);
    }

    if (cfg.method != Method::modal_projection) {
        auto res = sweep_imposed_velocity(model.system, model.mesh, freqs);
        rep.imposed = std::move(res.points);
        rep.failures.insert(rep.failures.end(), res.failures.begin(), res.failures.end());
        const auto path = sweep_file(cfg.output_dir, s.label, Method::imposed_velocity);
        auto out = open_output(path);
        write_sweep_csv(out, rep.imposed, method_tag(Method::imposed_velocity), s.label);
        record(path);
    }

    if (cfg.method != Method::imposed_velocity) {
        const auto modes = bending_modes(s, model.mesh, cfg.modes, cfg.material);
        auto res = project(modes, model.system, freqs);
        rep.roms = std::move(res.roms);
        rep.failures.insert(rep.failures.end(), res.failures.begin(), res.failures.end());
        for (const auto& rom : rep.roms) rep.modal.push_back(effective_coefficients(rom, 0));

        const auto path = sweep_file(cfg.output_dir, s.label, Method::modal_projection);
        auto out = open_output(path);
        write_sweep_csv(out, rep.modal, method_tag(Method::modal_projection), s.label);
        record(path);

        const auto rom_path = cfg.output_dir / ("rom_" + s.label + ".csv");
        auto rom_out = open_output(rom_path);
        write_rom_csv(rom_out, rep.roms);
        record(rom_path);

        const double f_res = reference_resonance_hz(s, cfg.material);
        const auto at_res = project_at(modes, model.system, f_res);
        const auto sum_path = cfg.output_dir / ("rom_" + s.label + "_summary.csv");
        auto sum_out = open_output(sum_path);
        sum_out << "structure_label,frequency_hz,mode,name,C_ii,K_ii\n";
        for (std::size_t i = 0; i < at_res.size(); ++i) {
            const auto ck = effective_coefficients(at_res, i);
            sum_out << s.label << ',' << format_double(f_res) << ',' << i + 1 << ',' << at_res.labels[i] << ','
                    << format_double(ck.c) << ',' << format_double(ck.k) << '\n';
        }
        record(sum_path);

        const auto modes_path = cfg.output_dir / ("modes_" + s.label + ".csv");
        auto m_out = open_output(modes_path);
        write_modes_csv(m_out, modes);
        record(modes_path);
        const auto shapes_path = cfg.output_dir / ("mode_shapes_" + s.label + ".csv");
        auto sh_out = open_output(shapes_path);
        write_mode_shapes_csv(sh_out, modes, model.mesh);
        record(shapes_path);
    }

    if (cfg.method == Method::both) {
        const auto path = cfg.output_dir / ("sweep_" + s.label + "_compare.csv");
        auto out = open_output(path);
        out << "frequency_hz,c_imposed,k_imposed,c_modal,k_modal,rel_diff_c,rel_diff_k\n";
        std::size_t j = 0;
        for (const auto& a : rep.imposed) {
            while (j < rep.modal.size() && rep.modal[j].f < a.f) ++j;
            if (j == rep.modal.size() || rep.modal[j].f != a.f) continue;
            const auto& b = rep.modal[j];
            out << format_double(a.f) << ',' << format_double(a.c) << ',' << format_double(a.k) << ','
                << format_double(b.c) << ',' << format_double(b.k) << ',' << format_double((b.c - a.c) / a.c) << ','
                << format_double((b.k - a.k) / a.k) << '\n';
        }
        record(path);
    }

    for (const auto& p : rep.files) log << "wrote " << p.string() << '\n';
    if (!rep.failures.empty()) {
        std::string msg = std::to_string(rep.failures.size()) + " frequencies failed:";
        for (const auto& f : rep.failures) msg += "\n  " + format_double(f.frequency) + " Hz: " + f.message;
        throw SolveError(msg);
    }
    return rep;
}

std::vector<ConvergenceRow> cmd_converge(const RunConfig& cfg, std::ostream& log) {
    cfg.validate();
    cfg.validate_converge();
    const auto& s = cfg.structure;
    const double f_ref = cfg.converge.reference_frequency_hz.value_or(reference_resonance_hz(s, cfg.material));
    std::vector<ConvergenceRow> rows;
    for (double frac : cfg.converge.fractions_of_d) {
        const double h = frac * s.support_width;
        const auto model = build_film_model(s, cfg.gas, h);
        rows.push_back({frac, h, model.mesh.node_count(), model.mesh.element_count(),
                        imposed_velocity_ck(model.system, model.mesh, f_ref)});
        log << "element size " << h << " um (" << frac << " d): " << model.mesh.node_count() << " nodes\n";
    }
    fs::create_directories(cfg.output_dir);
    const auto path = cfg.output_dir / ("converge_" + s.label + ".csv");
    auto out = open_output(path);
    out << "fraction_of_d,element_size_um,nodes,elements,frequency_hz,c_ns_per_m,k_n_per_m\n";
    for (const auto& r : rows)
        out << format_double(r.fraction_of_d) << ',' << format_double(r.element_size_um) << ',' << r.nodes << ','
            << r.elements << ',' << format_double(r.ck.f) << ',' << format_double(r.ck.c) << ','
            << format_double(r.ck.k) << '\n';
    log << "wrote " << path.string() << '\n';
    return rows;
}

IdentifyReport cmd_identify(const std::vector<fs::path>& frf_files, double modal_mass, const std::string& label,
                            std::ostream& out, const std::optional<fs::path>& csv_out) {
    if (frf_files.empty()) throw ConfigError("identify: at least one FRF file is required");
    if (!(modal_mass > 0.0)) throw ConfigError("identify: modal mass must be positive");
    IdentifyReport rep;
    for (const auto& path : frf_files) {
        std::ifstream in(path);
        if (!in) throw ParseError("cannot open FRF file '" + path.string() + "'");
        FrfCurve curve;
        try {
            curve = read_frf_csv(in);
        } catch (const ParseError& e) {
            throw ParseError(path.string() + ": " + e.what());
        }
        curve.label = label;
        rep.runs.push_back(identify_curve(curve, modal_mass));
    }
    rep.summary = summarize(rep.runs);

    const auto prec = out.precision(7);
    for (std::size_t i = 0; i < rep.runs.size(); ++i) {
        const auto& id = rep.runs[i];
        out << label << " run " << i + 1 << ": f_n = " << id.resonance_khz << " kHz, f_I = " << id.half_power_lo_khz
            << " kHz, f_II = " << id.half_power_hi_khz << " kHz, zeta = " << id.damping_ratio
            << ", c_m = " << id.damping << " N*s/m, k_m = " << id.stiffness << " N/m\n";
    }
    if (rep.runs.size() > 1) {
        const auto& sm = rep.summary;
        out << label << " mean over " << sm.count << ": f_n = " << sm.resonance_khz.mean << " +/- "
            << sm.resonance_khz.stddev << " kHz, zeta = " << sm.damping_ratio.mean << " +/- "
            << sm.damping_ratio.stddev << ", c_m = " << sm.damping.mean << ", k_m = " << sm.stiffness.mean << '\n';
    }
    out.precision(prec);

    if (csv_out) {
        std::vector<std::pair<std::string, ModalIdentification>> rows;
        for (const auto& r : rep.runs) rows.emplace_back(label, r);
        auto f = open_output(*csv_out);
        write_identification_csv(f, rows);
    }
    return rep;
}

std::optional<CKPair> interpolate_sweep(const std::vector<SweepRow>& rows, double f) {
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        const auto& a = rows[i];
        const auto& b = rows[i + 1];
        if (f < a.frequency_hz || f > b.frequency_hz) continue;
        return CKPair{loglog(f, a.frequency_hz, b.frequency_hz, a.c, b.c),
                      loglog(f, a.frequency_hz, b.frequency_hz, a.k, b.k), f};
    }
    if (rows.size() == 1 && rows[0].frequency_hz == f) return CKPair{rows[0].c, rows[0].k, f};
    return std::nullopt;
}

CompareReport cmd_compare(const RunConfig& cfg, const fs::path& sweep_dir, const std::optional<fs::path>& frf_file,
                          std::ostream& out) {
    cfg.validate();
    const auto& s = cfg.structure;
    const auto grid = derive_hole_grid(s);
    const auto measured = is_catalog_structure(s) ? measured_response(s.label) : std::nullopt;
    const double modal_mass =
        measured ? measured->modal_mass : piston_mass_ratio(s) * total_mass(s, grid, cfg.material);

    CompareReport rep;
    rep.label = s.label;
    if (frf_file) {
        std::ifstream in(*frf_file);
        if (!in) throw ParseError("cannot open FRF file '" + frf_file->string() + "'");
        rep.experimental = identify_curve(read_frf_csv(in), modal_mass);
    } else if (measured) {
        rep.experimental = identify({measured->resonance_khz, 1.0},
                                    {measured->half_power_lo_khz, measured->half_power_hi_khz}, modal_mass);
    } else {
        throw ConfigError("compare: structure '" + s.label + "' has no tabulated measurement; pass --frf");
    }
    rep.structural_stiffness = lumped_stiffness(s, cfg.material);

    std::vector<SweepRow> imposed, modal;
    auto load = [&](Method m, std::vector<SweepRow>& rows) {
        const auto path = sweep_file(sweep_dir, s.label, m);
        if (!fs::exists(path)) return;
        std::ifstream in(path);
        rows = read_sweep_csv(in);
    };
    load(Method::imposed_velocity, imposed);
    load(Method::modal_projection, modal);
    if (imposed.empty() && modal.empty())
        throw ConfigError("compare: no sweep results for structure '" + s.label + "' in '" + sweep_dir.string() +
                          "'; run `sqfd sweep` first");

    const double f_n = rep.experimental.resonance_khz * units::khz;
    if (!imposed.empty()) rep.imposed_at_resonance = interpolate_sweep(imposed, f_n);
    if (!modal.empty()) rep.modal_at_resonance = interpolate_sweep(modal, f_n);
    const auto& fluid = rep.imposed_at_resonance ? rep.imposed_at_resonance : rep.modal_at_resonance;
    if (!fluid)
        throw ConfigError("compare: resonance " + format_double(f_n) + " Hz lies outside the swept range");
    rep.stiffness_balance = rep.structural_stiffness + fluid->k;

    const auto& e = rep.experimental;
    const auto prec = out.precision(5);
    out << "structure " << s.label << " at f_n = " << e.resonance_khz << " kHz\n"
        << "  experimental  c_m = " << e.damping << " N*s/m   k_m = " << e.stiffness << " N/m   zeta = "
        << e.damping_ratio << '\n'
        << "  lumped structural stiffness k_struct = " << rep.structural_stiffness << " N/m\n";
    if (rep.imposed_at_resonance)
        out << "  imposed velocity   c = " << rep.imposed_at_resonance->c << " N*s/m   k = "
            << rep.imposed_at_resonance->k << " N/m\n";
    if (rep.modal_at_resonance)
        out << "  modal projection   c = " << rep.modal_at_resonance->c << " N*s/m   k = "
            << rep.modal_at_resonance->k << " N/m\n";
    out << "  k_struct + k_fluid = " << rep.stiffness_balance << " N/m vs k_m = " << e.stiffness << " N/m ("
        << std::showpos << 100.0 * (rep.stiffness_balance / e.stiffness - 1.0) << std::noshowpos << " %)\n"
        << "  fluid damping / experimental damping = " << fluid->c / e.damping << '\n';
    out.precision(prec);

    fs::create_directories(cfg.output_dir);
    const auto curves_path = cfg.output_dir / ("compare_" + s.label + "_curves.csv");
    auto curves = open_output(curves_path);
    curves << "frequency_hz,c_imposed,k_imposed,c_modal,k_modal\n";
    const auto& axis = imposed.empty() ? modal : imposed;
    for (std::size_t i = 0; i < axis.size(); ++i) {
        const double f = axis[i].frequency_hz;
        auto val = [&](const std::vector<SweepRow>& rows, bool damping) {
            for (const auto& r : rows)
                if (r.frequency_hz == f) return format_double(damping ? r.c : r.k);
            return std::string("nan");
        };
        curves << format_double(f) << ',' << val(imposed, true) << ',' << val(imposed, false) << ','
               << val(modal, true) << ',' << val(modal, false) << '\n';
    }

    const auto summary_path = cfg.output_dir / ("compare_" + s.label + "_summary.csv");
    auto summary = open_output(summary_path);
    auto opt = [](const std::optional<CKPair>& p, bool damping) {
        return p ? format_double(damping ? p->c : p->k) : std::string("nan");
    };
    summary << "structure_label,f_n_hz,c_experimental,k_experimental,zeta,k_struct,c_imposed,k_imposed,c_modal,"
               "k_modal,k_struct_plus_fluid\n"
            << s.label << ',' << format_double(f_n) << ',' << format_double(e.damping) << ','
            << format_double(e.stiffness) << ',' << format_double(e.damping_ratio) << ','
            << format_double(rep.structural_stiffness) << ',' << opt(rep.imposed_at_resonance, true) << ','
            << opt(rep.imposed_at_resonance, false) << ',' << opt(rep.modal_at_resonance, true) << ','
            << opt(rep.modal_at_resonance, false) << ',' << format_double(rep.stiffness_balance) << '\n';
    return rep;
}

} // namespace sqfd
