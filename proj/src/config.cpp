#include "sqfd/config.hpp"

#include <algorithm>
#include <fstream>

#include "sqfd/errors.hpp"
#include "sqfd/structure.hpp"
#include "yaml_io.hpp"

namespace sqfd {

using detail::reject_unknown_keys;
using detail::yaml_int;
using detail::yaml_line;
using detail::yaml_number;

std::string to_string(Method m) {
    switch (m) {
    case Method::imposed_velocity: return "imposed-velocity";
    case Method::modal_projection: return "modal-projection";
    case Method::both:
    default: return "both";
    }
}

Method parse_method(const std::string& text) {
    if (text == "imposed-velocity") return Method::imposed_velocity;
    if (text == "modal-projection") return Method::modal_projection;
    if (text == "both") return Method::both;
    throw ConfigError("method: expected imposed-velocity, modal-projection or both, got '" + text + "'");
}

double MeshSettings::resolve(const TestStructure& s) const {
    return element_size_um ? *element_size_um : fraction_of_d * s.support_width;
}

void RunConfig::validate() const {
    auto fail = [](const std::string& field, const std::string& why) { throw ConfigError(field + ": " + why); };
    try {
        structure.validate();
        derive_hole_grid(structure);
    } catch (const GeometryError& e) {
        fail("structure", e.what());
    }
    try {
        gas.validate();
    } catch (const DomainError& e) {
        fail("gas", e.what());
    }
    try {
        material.validate();
    } catch (const DomainError& e) {
        fail("material", e.what());
    }
    const double h = mesh.resolve(structure);
    if (!(h > 0.0)) fail("mesh.element_size", "must be positive");
    if (h > std::min(structure.hole_side, structure.hole_interspace))
        fail("mesh.element_size", std::to_string(h) + " µm exceeds min(e, f) of structure '" + structure.label + "'");
    if (!(sweep.f_min > 0.0)) fail("sweep.f_min", "must be positive");
    if (!(sweep.f_max > sweep.f_min)) fail("sweep", "empty frequency range (f_max must exceed f_min)");
    if (sweep.points_per_decade < 1) fail("sweep.points_per_decade", "must be at least 1");
    if (modes < 1 || modes > kModeFamilySize)
        fail("modes", "must lie in 1.." + std::to_string(kModeFamilySize));
    if (converge.reference_frequency_hz && !(*converge.reference_frequency_hz > 0.0))
        fail("converge.reference_frequency", "must be positive");
}

void RunConfig::validate_converge() const {
    auto fail = [](const std::string& field, const std::string& why) { throw ConfigError(field + ": " + why); };
    if (converge.fractions_of_d.size() < 2) fail("converge.fractions", "need at least two element sizes");
    for (double f : converge.fractions_of_d) {
        if (!(f > 0.0)) fail("converge.fractions", "sizes must be positive");
        if (f * structure.support_width > std::min(structure.hole_side, structure.hole_interspace))
            fail("converge.fractions", "size " + std::to_string(f) + "·d exceeds min(e, f) of structure '" +
                                           structure.label + "'");
    }
}

RunConfig read_run_config(std::istream& in) {
    YAML::Node root;
    try {
        root = YAML::Load(in);
    } catch (const YAML::Exception& e) {
        throw ParseError(e.msg, e.mark.line + 1);
    }
    RunConfig cfg;
    if (!root || root.IsNull()) return cfg;
    if (!root.IsMap()) throw ConfigError("run configuration must be a mapping");
    reject_unknown_keys(root, {"structure", "gas", "material", "mesh", "sweep", "converge", "method", "modes", "output"},
                        "top-level");

    if (auto s = root["structure"]) {
        if (s.IsScalar()) {
            auto entry = catalog_entry(s.as<std::string>());
            if (!entry)
                throw ConfigError("line " + std::to_string(yaml_line(s)) + ": structure: unknown catalog label '" +
                                  s.as<std::string>() + "'");
            cfg.structure = *entry;
        } else {
            cfg.structure = detail::structure_from_yaml(s);
        }
    }
    if (auto g = root["gas"]) {
        reject_unknown_keys(g, {"viscosity", "ambient_pressure", "mean_free_path"}, "gas");
        if (g["viscosity"]) cfg.gas.viscosity = yaml_number(g["viscosity"], "viscosity");
        if (g["ambient_pressure"]) cfg.gas.ambient_pressure = yaml_number(g["ambient_pressure"], "ambient_pressure");
        if (g["mean_free_path"]) cfg.gas.mean_free_path = yaml_number(g["mean_free_path"], "mean_free_path");
    }
    if (auto m = root["material"]) {
        reject_unknown_keys(m, {"young_modulus", "density", "poisson"}, "material");
        if (m["young_modulus"]) cfg.material.young_modulus = yaml_number(m["young_modulus"], "young_modulus");
        if (m["density"]) cfg.material.density = yaml_number(m["density"], "density");
        if (m["poisson"]) cfg.material.poisson = yaml_number(m["poisson"], "poisson");
    }
    if (auto m = root["mesh"]) {
        reject_unknown_keys(m, {"element_size", "fraction_of_d"}, "mesh");
        if (m["element_size"]) cfg.mesh.element_size_um = yaml_number(m["element_size"], "element_size");
        if (m["fraction_of_d"]) cfg.mesh.fraction_of_d = yaml_number(m["fraction_of_d"], "fraction_of_d");
    }
    if (auto s = root["sweep"]) {
        reject_unknown_keys(s, {"f_min", "f_max", "points_per_decade"}, "sweep");
        if (s["f_min"]) cfg.sweep.f_min = yaml_number(s["f_min"], "f_min");
        if (s["f_max"]) cfg.sweep.f_max = yaml_number(s["f_max"], "f_max");
        if (s["points_per_decade"]) cfg.sweep.points_per_decade = yaml_int(s["points_per_decade"], "points_per_decade");
        if (!(cfg.sweep.f_max > cfg.sweep.f_min))
            throw ConfigError("line " + std::to_string(yaml_line(s)) + ": sweep: empty frequency range");
    }
    if (auto c = root["converge"]) {
        reject_unknown_keys(c, {"fractions", "reference_frequency"}, "converge");
        if (auto f = c["fractions"]) {
            if (!f.IsSequence())
                throw ConfigError("line " + std::to_string(yaml_line(f)) + ": converge.fractions must be a list");
            cfg.converge.fractions_of_d.clear();
            for (const auto& v : f) cfg.converge.fractions_of_d.push_back(yaml_number(v, "fractions"));
        }
        if (c["reference_frequency"])
            cfg.converge.reference_frequency_hz = yaml_number(c["reference_frequency"], "reference_frequency");
    }
    if (auto m = root["method"]) {
        try {
            cfg.method = parse_method(m.as<std::string>());
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(yaml_line(m)) + ": " + e.what());
        }
    }
    if (auto m = root["modes"]) cfg.modes = yaml_int(m, "modes");
    if (auto o = root["output"]) cfg.output_dir = o.as<std::string>();
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    return read_run_config(in);
}

} // namespace sqfd
