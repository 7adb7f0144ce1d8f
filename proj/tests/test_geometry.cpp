#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "sqfd/errors.hpp"
#include "sqfd/geometry.hpp"

using namespace sqfd;

namespace {

// Independent hole count: keep adding holes while the next one still fits
// with one interspace of margin shared between both ends.
int brute_force_holes(double length, double e, double f) {
    int n = 0;
    while ((n + 1) * (e + f) <= length + 1e-9) ++n;
    return n;
}

TestStructure plain(double a, double b) {
    auto s = *catalog_entry("A");
    s.label = "P";
    s.plate_length = a;
    s.plate_width = b;
    return s;
}

} // namespace

TEST(Catalog, HasSixStructuresInOrder) {
    const auto all = catalog();
    ASSERT_EQ(all.size(), 6u);
    const char* labels[] = {"A", "B", "C", "D", "E", "F"};
    for (std::size_t i = 0; i < all.size(); ++i) EXPECT_EQ(all[i].label, labels[i]);
}

TEST(Catalog, StructureADimensions) {
    const auto a = *catalog_entry("A");
    EXPECT_DOUBLE_EQ(a.plate_length, 372.4);
    EXPECT_DOUBLE_EQ(a.plate_width, 66.4);
    EXPECT_DOUBLE_EQ(a.support_length, 122.8);
    EXPECT_DOUBLE_EQ(a.support_width, 4.0);
    EXPECT_DOUBLE_EQ(a.hole_side, 5.0);
    EXPECT_DOUBLE_EQ(a.hole_interspace, 5.2);
    EXPECT_DOUBLE_EQ(a.thickness, 15.0);
    EXPECT_DOUBLE_EQ(a.gap, 1.6);
    EXPECT_DOUBLE_EQ(a.pitch(), 10.2);
}

TEST(Catalog, UnknownLabel) {
    EXPECT_FALSE(catalog_entry("Z").has_value());
    EXPECT_FALSE(measured_response("Z").has_value());
}

TEST(Catalog, CatalogMembership) {
    auto a = *catalog_entry("A");
    EXPECT_TRUE(is_catalog_structure(a));
    a.hole_side += 0.1;
    EXPECT_FALSE(is_catalog_structure(a));
}

TEST(HoleGrid, MatchesBruteForceCountForEveryStructure) {
    for (const auto& s : catalog()) {
        const auto g = derive_hole_grid(s);
        EXPECT_EQ(g.n_cols, brute_force_holes(s.plate_length, s.hole_side, s.hole_interspace)) << s.label;
        EXPECT_EQ(g.n_rows, brute_force_holes(s.plate_width, s.hole_side, s.hole_interspace)) << s.label;
    }
}

TEST(HoleGrid, KnownGrids) {
    const auto a = derive_hole_grid(*catalog_entry("A"));
    EXPECT_EQ(a.n_cols, 36);
    EXPECT_EQ(a.n_rows, 6);
    EXPECT_EQ(derive_hole_grid(*catalog_entry("E")).count(), 36 * 12);
    EXPECT_EQ(derive_hole_grid(*catalog_entry("F")).count(), 36 * 24);
}

TEST(HoleGrid, CenteredOnThePlate) {
    for (const auto& s : catalog()) {
        const auto g = derive_hole_grid(s);
        // hole_x/hole_y give the lower-left corner of a hole.
        const double left = g.hole_x(0);
        const double right = s.plate_length - (g.hole_x(g.n_cols - 1) + s.hole_side);
        const double bottom = g.hole_y(0);
        const double top = s.plate_width - (g.hole_y(g.n_rows - 1) + s.hole_side);
        EXPECT_NEAR(left, right, 1e-9) << s.label;
        EXPECT_NEAR(bottom, top, 1e-9) << s.label;
        EXPECT_GT(left, 0.0);
        EXPECT_GT(bottom, 0.0);
    }
}

TEST(HoleGrid, ExplicitCountsAreHonored) {
    auto s = *catalog_entry("A");
    s.hole_cols = 10;
    s.hole_rows = 2;
    const auto g = derive_hole_grid(s);
    EXPECT_EQ(g.n_cols, 10);
    EXPECT_EQ(g.n_rows, 2);
}

TEST(HoleGrid, OversizedExplicitGridRejected) {
    auto s = *catalog_entry("A");
    s.hole_cols = 40;
    EXPECT_THROW(derive_hole_grid(s), GeometryError);
}

TEST(HoleGrid, NoHoleFits) {
    auto s = plain(8.0, 8.0);
    EXPECT_THROW(derive_hole_grid(s), GeometryError);
}

TEST(Volume, PerforatedPlatePlusSupports) {
    for (const auto& s : catalog()) {
        const auto g = derive_hole_grid(s);
        const double expected =
            (s.plate_length * s.plate_width - g.count() * s.hole_side * s.hole_side) * s.thickness +
            4.0 * s.support_length * s.support_width * s.thickness;
        EXPECT_NEAR(solid_volume(s, g), expected, 1e-9 * expected) << s.label;
    }
}

TEST(Volume, StructureAFrozen) {
    const auto s = *catalog_entry("A");
    // (372.4·66.4 − 216·25)·15 + 4·122.8·4·15
    EXPECT_NEAR(solid_volume(s, derive_hole_grid(s)), 289910.4 + 29472.0, 1e-6);
}

TEST(Mass, DensityTimesVolume) {
    const MaterialProps mat;
    const auto s = *catalog_entry("F");
    const auto g = derive_hole_grid(s);
    EXPECT_DOUBLE_EQ(total_mass(s, g, mat), mat.density * solid_volume(s, g));
    EXPECT_NEAR(total_mass(s, g, mat) / 2.004e-9, 1.0, 0.05);
}

TEST(Validation, RejectsNonPositiveDimensions) {
    auto s = *catalog_entry("B");
    s.plate_length = 0.0;
    EXPECT_THROW(s.validate(), GeometryError);
    s = *catalog_entry("B");
    s.hole_side = -1.0;
    EXPECT_THROW(s.validate(), GeometryError);
    s = *catalog_entry("B");
    s.gap = 20.0;
    EXPECT_THROW(s.validate(), GeometryError);
}

TEST(Validation, MaterialBounds) {
    MaterialProps m;
    EXPECT_NO_THROW(m.validate());
    m.poisson = 0.5;
    EXPECT_THROW(m.validate(), DomainError);
}

TEST(Measured, TableValuesForA) {
    const auto a = *measured_response("A");
    EXPECT_DOUBLE_EQ(a.resonance_khz, 201.637);
    EXPECT_DOUBLE_EQ(a.half_power_lo_khz, 195.601);
    EXPECT_DOUBLE_EQ(a.half_power_hi_khz, 206.638);
    EXPECT_DOUBLE_EQ(a.damping_ratio, 2.737e-2);
    EXPECT_EQ(measured_responses().size(), 6u);
}

TEST(StructureYaml, RoundTrip) {
    std::vector<TestStructure> in = catalog();
    in[2].hole_cols = 12;
    std::stringstream ss;
    write_structures(ss, in);
    const auto out = read_structures(ss);
    ASSERT_EQ(out.size(), in.size());
    for (std::size_t i = 0; i < in.size(); ++i) EXPECT_EQ(out[i], in[i]) << i;
}

TEST(StructureYaml, MissingFieldNamesLine) {
    std::istringstream in("structures:\n  - label: X\n    a: 100\n");
    try {
        read_structures(in);
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("line"), std::string::npos);
    }
}
