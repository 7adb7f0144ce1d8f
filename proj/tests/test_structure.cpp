#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "sqfd/errors.hpp"
#include "sqfd/structure.hpp"

using namespace sqfd;

namespace {

struct Plate {
    TestStructure s;
    FilmMesh mesh;
    explicit Plate(const std::string& label, double h = 2.0)
        : s(*catalog_entry(label)), mesh(mesh_film(s, derive_hole_grid(s), h)) {}
};

const Plate& plate_b() {
    static const Plate p("B");
    return p;
}

double mirror_node(const FilmMesh& m, std::size_t n, bool in_x) {
    const int nx = m.nx(), ny = m.ny();
    const int i = static_cast<int>(n) % nx, j = static_cast<int>(n) / nx;
    return in_x ? m.node_index(nx - 1 - i, j) : m.node_index(i, ny - 1 - j);
}

} // namespace

TEST(Lumped, SupportStiffnessFromBeamFormula) {
    const auto s = *catalog_entry("A");
    // 3EI/c³ with I = d t³/12, all in SI.
    const double inertia = 4e-6 * std::pow(15e-6, 3) / 12.0;
    const double expected = 3.0 * 147e9 * inertia / std::pow(122.8e-6, 3);
    EXPECT_NEAR(support_stiffness(s, MaterialProps{}), expected, 1e-9 * expected);
    EXPECT_NEAR(lumped_stiffness(s, MaterialProps{}), 4.0 * expected, 4e-9 * expected);
}

TEST(Lumped, StructureAStiffnessAndFrequency) {
    const auto s = *catalog_entry("A");
    const MaterialProps mat;
    const double k = lumped_stiffness(s, mat);
    EXPECT_NEAR(k, 1.071e3, 0.001 * 1.071e3);
    const double m = piston_mass_ratio(s) * total_mass(s, derive_hole_grid(s), mat);
    EXPECT_NEAR(natural_frequency({k, m}) / 1e3, 199.3, 0.1);
    EXPECT_NEAR(natural_frequency({k, m}) / 201.637e3, 1.0, 0.04);
}

TEST(Lumped, NaturalFrequencyEdgeCases) {
    EXPECT_EQ(natural_frequency({0.0, 1.0}), 0.0);
    EXPECT_EQ(natural_frequency({1.0, INFINITY}), 0.0);
    EXPECT_THROW(natural_frequency({1.0, 0.0}), DomainError);
    EXPECT_NEAR(natural_frequency({4.0 * M_PI * M_PI, 1.0}), 1.0, 1e-12);
}

TEST(Lumped, MassRatio) {
    EXPECT_DOUBLE_EQ(piston_mass_ratio(*catalog_entry("A")), 0.918);
    auto s = *catalog_entry("A");
    s.plate_length = 300.0;
    EXPECT_DOUBLE_EQ(piston_mass_ratio(s), 0.9);
}

TEST(Modes, PistonIsUniform) {
    const auto& p = plate_b();
    const auto m = piston_mode(p.s, p.mesh);
    ASSERT_EQ(m.shape.size(), p.mesh.node_count());
    for (double v : m.shape) EXPECT_EQ(v, 1.0);
    EXPECT_NEAR(m.frequency_hz(), natural_frequency({lumped_stiffness(p.s, {}), m.modal_mass}), 1e-6);
}

TEST(Modes, InnerProductOfPistonIsPerforatedPlateMass) {
    const auto& p = plate_b();
    const std::vector<double> one(p.mesh.node_count(), 1.0);
    const MaterialProps mat;
    const double mass = modal_inner_product(p.mesh, mat, p.s.thickness, one, one);
    const auto g = derive_hole_grid(p.s);
    const double plate =
        mat.density * p.s.thickness * (p.s.plate_length * p.s.plate_width - g.count() * p.s.hole_side * p.s.hole_side);
    EXPECT_NEAR(mass, plate, 1e-9 * mass);
}

TEST(Modes, FamilyIsMassOrthogonal) {
    const auto& p = plate_b();
    const MaterialProps mat;
    const auto model = bending_modes(p.s, p.mesh, kModeFamilySize, mat);
    ASSERT_EQ(model.size(), static_cast<std::size_t>(kModeFamilySize));
    for (std::size_t i = 0; i < model.size(); ++i)
        for (std::size_t j = 0; j < i; ++j) {
            const auto& a = model.modes[i].shape;
            const auto& b = model.modes[j].shape;
            const double mij = modal_inner_product(p.mesh, mat, p.s.thickness, a, b);
            const double mii = modal_inner_product(p.mesh, mat, p.s.thickness, a, a);
            const double mjj = modal_inner_product(p.mesh, mat, p.s.thickness, b, b);
            EXPECT_LT(std::abs(mij), 1e-10 * std::sqrt(mii * mjj)) << i << ',' << j;
        }
}

TEST(Modes, ShapesAreMaxNormalized) {
    const auto& p = plate_b();
    for (const auto& m : bending_modes(p.s, p.mesh, kModeFamilySize).modes) {
        double peak = 0.0;
        for (double v : m.shape) peak = std::max(peak, std::abs(v));
        EXPECT_NEAR(peak, 1.0, 1e-12) << m.name;
        EXPECT_GT(m.modal_mass, 0.0);
        EXPECT_GT(m.omega, 0.0);
    }
}

TEST(Modes, BendingModesLieAbovePiston) {
    const auto& p = plate_b();
    const auto model = bending_modes(p.s, p.mesh, kModeFamilySize);
    for (std::size_t i = 1; i < model.size(); ++i)
        EXPECT_GT(model.modes[i].omega, model.modes[0].omega) << model.modes[i].name;
}

TEST(Modes, SymmetryClasses) {
    const auto& p = plate_b();
    const auto model = bending_modes(p.s, p.mesh, kModeFamilySize);
    // Only bend-x2 is odd (in x); the other shapes are even about both centre lines.
    struct Expect {
        std::size_t mode;
        double sx, sy;
    };
    for (const auto& e : {Expect{1, 1, 1}, Expect{2, -1, 1}, Expect{3, 1, 1}, Expect{4, 1, 1}, Expect{5, 1, 1}}) {
        const auto& phi = model.modes[e.mode].shape;
        for (std::size_t n = 0; n < phi.size(); ++n) {
            EXPECT_NEAR(phi[mirror_node(p.mesh, n, true)], e.sx * phi[n], 1e-9) << model.modes[e.mode].name;
            EXPECT_NEAR(phi[mirror_node(p.mesh, n, false)], e.sy * phi[n], 1e-9) << model.modes[e.mode].name;
        }
    }
}

TEST(Modes, OrthogonalizedModesHaveNoParticipation) {
    const auto& p = plate_b();
    const auto model = bending_modes(p.s, p.mesh, kModeFamilySize);
    EXPECT_DOUBLE_EQ(model.modes[0].participation, 1.0);
    for (std::size_t i = 1; i < model.size(); ++i) EXPECT_NEAR(model.modes[i].participation, 0.0, 1e-10);
}

TEST(Modes, StifferMaterialRaisesFrequencies) {
    const auto& p = plate_b();
    MaterialProps stiff;
    stiff.young_modulus *= 4.0;
    const auto base = bending_modes(p.s, p.mesh, 3);
    const auto up = bending_modes(p.s, p.mesh, 3, stiff);
    for (std::size_t i = 0; i < base.size(); ++i)
        EXPECT_NEAR(up.modes[i].omega / base.modes[i].omega, 2.0, 1e-9) << base.modes[i].name;
}

TEST(Modes, CountOutOfRange) {
    const auto& p = plate_b();
    EXPECT_THROW(bending_modes(p.s, p.mesh, 0), DomainError);
    EXPECT_THROW(bending_modes(p.s, p.mesh, kModeFamilySize + 1), DomainError);
}

TEST(Modes, CsvOutput) {
    const auto& p = plate_b();
    const auto model = bending_modes(p.s, p.mesh, 2);
    std::ostringstream out;
    write_modes_csv(out, model);
    EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "mode,name,frequency_hz,modal_mass_kg,participation");
    EXPECT_NE(out.str().find("bend-x1"), std::string::npos);
    std::ostringstream shapes;
    write_mode_shapes_csv(shapes, model, p.mesh);
    std::size_t lines = 0;
    for (char c : shapes.str()) lines += c == '\n';
    EXPECT_EQ(lines, p.mesh.node_count() + 1);
}
