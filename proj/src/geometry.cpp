#include "sqfd/geometry.hpp"

#include <array>
#include <cmath>
#include <istream>
#include <ostream>

#include "sqfd/errors.hpp"
#include "yaml_io.hpp"

namespace sqfd {

namespace {

constexpr double kThickness = 15.0;
constexpr double kGap = 1.6;

TestStructure make(const char* label, double a, double b, double c, double d, double e, double f) {
    TestStructure s;
    s.label = label;
    s.plate_length = a;
    s.plate_width = b;
    s.support_length = c;
    s.support_width = d;
    s.hole_side = e;
    s.hole_interspace = f;
    s.thickness = kThickness;
    s.gap = kGap;
    return s;
}

// Resonance and half-power frequencies, half-power coefficients, and the
// volume/mass comparison of the measured specimens.
const std::array<MeasuredResponse, 6> kMeasured{{
    {"A", 201.637, 5.418e-2, 195.601, 206.638, 4.738e-5, 1.097e3, 2.737e-2, 3.105e5, 6.832e-10, 7.442e-10, 0.918},
    {"B", 204.329, 4.430e-3, 201.645, 207.373, 1.946e-5, 8.912e2, 1.401e-2, 2.653e5, 5.407e-10, 6.054e-10, 0.893},
    {"C", 211.011, 7.200e-4, 209.250, 212.740, 9.863e-6, 7.907e2, 8.270e-3, 2.035e5, 4.498e-10, 5.080e-10, 0.885},
    {"D", 222.282, 1.020e-3, 220.578, 223.975, 7.609e-6, 6.954e2, 7.641e-3, 1.693e5, 3.565e-10, 4.162e-10, 0.857},
    {"E", 173.904, 3.180e-3, 170.829, 176.900, 3.822e-5, 1.196e3, 1.745e-2, 4.654e5, 1.002e-9, 1.059e-9, 0.946},
    {"F", 138.564, 1.780e-3, 135.790, 141.286, 6.744e-5, 1.480e3, 1.983e-2, 8.982e5, 1.953e-9, 2.004e-9, 0.974},
}};

// Slack for floor() on pitch ratios that are exact in decimal but not in binary.
constexpr double kFitSlack = 1e-9;

} // namespace

void TestStructure::validate() const {
    auto positive = [&](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw GeometryError("structure '" + label + "': " + name + " must be positive");
    };
    positive(plate_length, "a");
    positive(plate_width, "b");
    positive(support_length, "c");
    positive(support_width, "d");
    positive(hole_side, "e");
    positive(thickness, "t");
    positive(gap, "gap");
    if (hole_interspace < 0.0) throw GeometryError("structure '" + label + "': f must be non-negative");
    if (!(gap < thickness)) throw GeometryError("structure '" + label + "': gap must be smaller than t");
    if (!(hole_side < plate_width)) throw GeometryError("structure '" + label + "': e must be smaller than b");
}

void MaterialProps::validate() const {
    if (!(young_modulus > 0.0)) throw DomainError("Young modulus must be positive");
    if (!(density > 0.0)) throw DomainError("density must be positive");
    if (!(poisson >= 0.0 && poisson < 0.5)) throw DomainError("Poisson ratio must lie in [0, 0.5)");
}

std::vector<TestStructure> catalog() {
    return {
        make("A", 372.4, 66.4, 122.8, 4.0, 5.0, 5.2),
        make("B", 363.9, 63.9, 122.4, 4.3, 6.1, 3.9),
        make("C", 373.8, 64.8, 123.2, 3.7, 7.3, 3.0),
        make("D", 369.5, 63.5, 123.4, 3.9, 7.9, 2.3),
        make("E", 363.8, 123.8, 123.2, 3.8, 6.2, 3.8),
        make("F", 363.8, 243.8, 122.4, 3.8, 6.2, 3.8),
    };
}

std::optional<TestStructure> catalog_entry(const std::string& label) {
    for (auto& s : catalog())
        if (s.label == label) return s;
    return std::nullopt;
}

bool is_catalog_structure(const TestStructure& s) {
    auto ref = catalog_entry(s.label);
    return ref && *ref == s;
}

HoleGrid derive_hole_grid(const TestStructure& s) {
    const double e = s.hole_side;
    const double f = s.hole_interspace;
    if (!(e > 0.0)) throw GeometryError("hole side must be positive");
    if (f < 0.0) throw GeometryError("hole interspace must be non-negative");

    HoleGrid g;
    g.pitch = e + f;
    // n holes span n·pitch − f; a margin of f/2 on both sides leaves n·pitch ≤ length.
    auto fit = [&](double length) { return static_cast<int>(std::floor(length / g.pitch + kFitSlack)); };
    g.n_cols = s.hole_cols.value_or(fit(s.plate_length));
    g.n_rows = s.hole_rows.value_or(fit(s.plate_width));
    if (g.n_cols < 1 || g.n_rows < 1)
        throw GeometryError("structure '" + s.label + "': no hole fits on the plate");

    const double span_x = g.n_cols * g.pitch - f;
    const double span_y = g.n_rows * g.pitch - f;
    g.origin_x = 0.5 * (s.plate_length - span_x);
    g.origin_y = 0.5 * (s.plate_width - span_y);
    if (!(g.origin_x > 0.0) || !(g.origin_y > 0.0))
        throw GeometryError("structure '" + s.label + "': hole grid exceeds the plate outline");
    return g;
}

double solid_volume(const TestStructure& s, const HoleGrid& grid) {
    const double e = s.hole_side;
    const double plate = (s.plate_length * s.plate_width - grid.count() * e * e) * s.thickness;
    const double supports = 4.0 * s.support_length * s.support_width * s.thickness;
    return plate + supports;
}

double total_mass(const TestStructure& s, const HoleGrid& grid, const MaterialProps& m) {
    return m.density * solid_volume(s, grid);
}

std::span<const MeasuredResponse> measured_responses() { return kMeasured; }

std::optional<MeasuredResponse> measured_response(const std::string& label) {
    for (const auto& r : kMeasured)
        if (r.label == label) return r;
    return std::nullopt;
}

namespace detail {

TestStructure structure_from_yaml(const YAML::Node& node) {
    if (!node.IsMap())
        throw ConfigError("line " + std::to_string(yaml_line(node)) + ": structure block must be a mapping");
    reject_unknown_keys(node, {"label", "a", "b", "c", "d", "e", "f", "t", "gap", "hole_cols", "hole_rows"},
                        "structure");
    auto need = [&](const char* key) {
        auto v = node[key];
        if (!v) throw ConfigError("line " + std::to_string(yaml_line(node)) + ": structure missing field '" + key + "'");
        return yaml_number(v, key);
    };
    TestStructure s;
    s.label = node["label"] ? node["label"].as<std::string>() : std::string("custom");
    s.plate_length = need("a");
    s.plate_width = need("b");
    s.support_length = need("c");
    s.support_width = need("d");
    s.hole_side = need("e");
    s.hole_interspace = need("f");
    s.thickness = need("t");
    s.gap = need("gap");
    if (node["hole_cols"]) s.hole_cols = yaml_int(node["hole_cols"], "hole_cols");
    if (node["hole_rows"]) s.hole_rows = yaml_int(node["hole_rows"], "hole_rows");
    try {
        s.validate();
    } catch (const GeometryError& err) {
        throw ConfigError("line " + std::to_string(yaml_line(node)) + ": " + err.what());
    }
    return s;
}

void structure_to_yaml(YAML::Emitter& out, const TestStructure& s) {
    out << YAML::BeginMap;
    out << YAML::Key << "label" << YAML::Value << s.label;
    auto num = [&](const char* key, double v) { out << YAML::Key << key << YAML::Value << format_double(v); };
    num("a", s.plate_length);
    num("b", s.plate_width);
    num("c", s.support_length);
    num("d", s.support_width);
    num("e", s.hole_side);
    num("f", s.hole_interspace);
    num("t", s.thickness);
    num("gap", s.gap);
    if (s.hole_cols) out << YAML::Key << "hole_cols" << YAML::Value << *s.hole_cols;
    if (s.hole_rows) out << YAML::Key << "hole_rows" << YAML::Value << *s.hole_rows;
    out << YAML::EndMap;
}

} // namespace detail

std::vector<TestStructure> read_structures(std::istream& in) {
    YAML::Node root;
    try {
        root = YAML::Load(in);
    } catch (const YAML::Exception& e) {
        throw ParseError(e.msg, e.mark.line + 1);
    }
    YAML::Node list = root.IsMap() && root["structures"] ? root["structures"] : root;
    if (root.IsMap() && !root["structures"]) return {detail::structure_from_yaml(root)};
    if (!list.IsSequence()) throw ConfigError("expected a sequence of structure blocks");
    std::vector<TestStructure> out;
    for (const auto& node : list) out.push_back(detail::structure_from_yaml(node));
    return out;
}

void write_structures(std::ostream& out, std::span<const TestStructure> structures) {
    YAML::Emitter em;
    em << YAML::BeginMap << YAML::Key << "structures" << YAML::Value << YAML::BeginSeq;
    for (const auto& s : structures) detail::structure_to_yaml(em, s);
    em << YAML::EndSeq << YAML::EndMap;
    out << em.c_str() << '\n';
}

} // namespace sqfd
