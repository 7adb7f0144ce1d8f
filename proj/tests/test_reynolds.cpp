#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "sqfd/errors.hpp"
#include "sqfd/reynolds.hpp"
#include "sqfd/units.hpp"

using namespace sqfd;

namespace {

// Pressure response of a 200×100 µm, 1.6 µm gap rectangle with ambient edges,
// from the double sine series Σ_{m,n odd} 64LW / (m²n²π⁴(κk²_mn − iβ)),
// summed in numpy to m, n ≤ 4000 (converged to ~1e-8 relative).
struct SeriesPoint {
    double f, c, k;
};
constexpr SeriesPoint kDoubleSeries[] = {
    {1e3, 4.917573247851485e-4, 1.0156752666832513e-2},
    {1e4, 4.912117075324155e-4, 1.0144946250171232},
    {1e5, 4.4244573813676284e-4, 9.090179152985638e1},
    {1e6, 5.4205073815163e-5, 8.576179784133453e2},
    {1e7, 1.949770086367496e-6, 1.1364963218277153e3},
};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

struct Rectangle {
    FilmMesh mesh;
    AssembledSystem sys;
    Rectangle(double h) : mesh(mesh_rectangle(200.0, 100.0, h)), sys(assemble(mesh, {}, GasProps{}, 1.6)) {}
};

const Rectangle& fine_rectangle() {
    static const Rectangle r(2.5);
    return r;
}

struct Perforated {
    TestStructure s;
    FilmMesh mesh;
    std::vector<HoleChannel> channels;
    AssembledSystem sys;
    explicit Perforated(const std::string& label, double frac = 0.5)
        : s(*catalog_entry(label)), mesh(mesh_film(s, derive_hole_grid(s), frac * s.support_width)),
          channels(make_hole_channels(s, mesh, GasProps{})), sys(assemble(mesh, channels, GasProps{}, s.gap)) {}
};

const Perforated& structure_a() {
    static const Perforated p("A");
    return p;
}

double eta_eff() { return effective_viscosity(GasProps{}, knudsen(GasProps{}, 1.6)); }

} // namespace

TEST(BlechOracle, MatchesDoubleSeries) {
    for (const auto& pt : kDoubleSeries) {
        const auto ck = blech_oracle(200.0, 100.0, 1.6, eta_eff(), 101325.0, units::angular(pt.f));
        EXPECT_LT(rel(ck.c, pt.c), 1e-6) << pt.f;
        EXPECT_LT(rel(ck.k, pt.k), 1e-6) << pt.f;
    }
}

TEST(BlechOracle, IncompressibleLimit) {
    // ω → 0: c tends to the incompressible plate value, k vanishes.
    const auto ck = blech_oracle(200.0, 100.0, 1.6, eta_eff(), 101325.0, 0.0);
    EXPECT_NEAR(ck.c / kDoubleSeries[0].c, 1.0, 1e-4);
    EXPECT_EQ(ck.k, 0.0);
}

TEST(Fem, RectangleMatchesSeries) {
    const auto& r = fine_rectangle();
    for (const auto& pt : kDoubleSeries) {
        const auto ck = imposed_velocity_ck(r.sys, r.mesh, pt.f);
        EXPECT_LT(rel(ck.c, pt.c), 0.02) << pt.f;
        EXPECT_LT(rel(ck.k, pt.k), 0.02) << pt.f;
    }
}

TEST(Fem, RectangleConvergesUnderRefinement) {
    const double f = 1e5;
    const auto coarse = imposed_velocity_ck(Rectangle(10.0).sys, Rectangle(10.0).mesh, f);
    const auto& fine = fine_rectangle();
    const auto ck = imposed_velocity_ck(fine.sys, fine.mesh, f);
    EXPECT_LT(rel(ck.c, kDoubleSeries[2].c), rel(coarse.c, kDoubleSeries[2].c));
}

TEST(Fem, AmbientBoundaryPressureIsExactlyZero) {
    const auto& a = structure_a();
    const auto sol = solve_harmonic(a.sys, units::angular(2e5), uniform_velocity(a.mesh.node_count()));
    for (int n : a.mesh.boundary_nodes) {
        EXPECT_EQ(sol.pressure[n].real(), 0.0);
        EXPECT_EQ(sol.pressure[n].imag(), 0.0);
    }
    EXPECT_LE(sol.residual, 1e-10);
}

TEST(Fem, PowerIsDissipated) {
    const auto& a = structure_a();
    for (double f : frequency_grid(1e3, 1e7, 4)) {
        const auto sol = solve_harmonic(a.sys, units::angular(f), uniform_velocity(a.mesh.node_count()));
        const Complex force = integrate_force(sol, a.mesh);
        EXPECT_GE((force * std::conj(Complex(1.0, 0.0))).real(), 0.0) << f;
    }
}

TEST(Fem, DissipationForNonUniformVelocity) {
    const auto& a = structure_a();
    std::vector<Complex> v(a.mesh.node_count());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto& p = a.mesh.nodes[i];
        v[i] = Complex(std::sin(p.x / 40.0), 0.3 * std::cos(p.y / 17.0));
    }
    for (double f : {1e4, 1e6}) {
        const auto sol = solve_harmonic(a.sys, units::angular(f), v);
        const auto forces = nodal_forces(a.sys, sol);
        Complex power(0.0, 0.0);
        for (std::size_t i = 0; i < v.size(); ++i) power += forces[i] * std::conj(v[i]);
        EXPECT_GE(power.real(), 0.0);
    }
}

TEST(Fem, StiffnessGrowsWithOmegaSquaredAtLowFrequency) {
    const auto& a = structure_a();
    const auto k1 = imposed_velocity_ck(a.sys, a.mesh, 100.0);
    const auto k2 = imposed_velocity_ck(a.sys, a.mesh, 200.0);
    EXPECT_NEAR(k2.k / k1.k, 4.0, 4e-4);
    EXPECT_NEAR(k2.c / k1.c, 1.0, 1e-6);
}

TEST(Fem, LinearInVelocity) {
    const auto& a = structure_a();
    const double omega = units::angular(3e5);
    auto v = uniform_velocity(a.mesh.node_count());
    const Complex f1 = integrate_force(solve_harmonic(a.sys, omega, v), a.mesh);
    for (auto& x : v) x *= Complex(2.5, -1.0);
    const Complex f2 = integrate_force(solve_harmonic(a.sys, omega, v), a.mesh);
    EXPECT_LT(std::abs(f2 - Complex(2.5, -1.0) * f1), 1e-10 * std::abs(f2));
}

TEST(Fem, NodalForcesSumToIntegratedForce) {
    const auto& a = structure_a();
    const auto sol = solve_harmonic(a.sys, units::angular(1e5), uniform_velocity(a.mesh.node_count()));
    const auto forces = nodal_forces(a.sys, sol);
    const Complex total = std::accumulate(forces.begin(), forces.end(), Complex(0.0, 0.0));
    EXPECT_LT(std::abs(total - integrate_force(sol, a.mesh)), 1e-10 * std::abs(total));
}

TEST(Fem, OperatorsAreSymmetric) {
    const auto& a = structure_a();
    const RealSparse flow_t = a.sys.flow().transpose();
    const RealSparse comp_t = a.sys.compressibility().transpose();
    EXPECT_LE((a.sys.flow() - flow_t).norm(), 1e-12 * a.sys.flow().norm());
    EXPECT_LE((a.sys.compressibility() - comp_t).norm(), 1e-12 * a.sys.compressibility().norm());
}

TEST(Fem, VanishingChannelResistanceApproachesALimit) {
    // A free channel only holds the port's mean pressure at ambient, so the
    // limit sits above the fully pinned port, which holds every port node.
    const auto& a = structure_a();
    auto scaled = [&](double factor) {
        auto channels = a.channels;
        for (auto& ch : channels) ch.resistance *= factor;
        return assemble(a.mesh, channels, GasProps{}, a.s.gap);
    };
    const auto soft = scaled(1e-4);
    const auto softer = scaled(1e-6);
    const auto pinned = assemble(a.mesh, a.channels, GasProps{}, a.s.gap, {true});
    for (double f : {1e4, 1e6}) {
        const auto x = imposed_velocity_ck(soft, a.mesh, f);
        const auto y = imposed_velocity_ck(softer, a.mesh, f);
        const auto z = imposed_velocity_ck(pinned, a.mesh, f);
        EXPECT_LT(rel(x.c, y.c), 1e-3) << f;
        EXPECT_LT(rel(x.k, y.k), 1e-3) << f;
        EXPECT_GT(y.c, z.c) << f;
    }
}

TEST(Fem, ChannelsReduceDamping) {
    const auto& a = structure_a();
    std::vector<HoleChannel> blocked = a.channels;
    for (auto& ch : blocked) ch.resistance *= 1e9;
    const auto closed = assemble(a.mesh, blocked, GasProps{}, a.s.gap);
    const auto open = imposed_velocity_ck(a.sys, a.mesh, 1e4);
    const auto shut = imposed_velocity_ck(closed, a.mesh, 1e4);
    EXPECT_GT(shut.c, open.c);
}

TEST(Fem, ChannelCountMismatch) {
    const auto& a = structure_a();
    std::vector<HoleChannel> few(a.channels.begin(), a.channels.begin() + 3);
    EXPECT_THROW(assemble(a.mesh, few, GasProps{}, a.s.gap), AssemblyError);
}

TEST(Fem, VelocitySizeMismatch) {
    const auto& a = structure_a();
    std::vector<Complex> v(3, 1.0);
    EXPECT_THROW(solve_harmonic(a.sys, 1.0, v), AssemblyError);
}

TEST(ExtractCk, SplitsForce) {
    const auto ck = extract_ck(Complex(2.0, 3.0), 0.5, 10.0);
    EXPECT_DOUBLE_EQ(ck.c, 4.0);
    EXPECT_DOUBLE_EQ(ck.k, 60.0);
    EXPECT_THROW(extract_ck(Complex(1.0, 0.0), 0.0, 1.0), DomainError);
    EXPECT_THROW(extract_ck(Complex(1.0, 0.0), 1.0, -1.0), DomainError);
}

TEST(FrequencyGrid, LogSpacedWithEndpoints) {
    const auto f = frequency_grid(1e3, 1e7, 40);
    ASSERT_EQ(f.size(), 161u);
    EXPECT_DOUBLE_EQ(f.front(), 1e3);
    EXPECT_DOUBLE_EQ(f.back(), 1e7);
    for (std::size_t i = 1; i < f.size(); ++i) EXPECT_NEAR(f[i] / f[i - 1], std::pow(10.0, 1.0 / 40), 1e-9);
    EXPECT_THROW(frequency_grid(1e4, 1e3, 10), DomainError);
    EXPECT_THROW(frequency_grid(1e3, 1e3, 10), DomainError);
    EXPECT_THROW(frequency_grid(1e3, 1e4, 0), DomainError);
}

TEST(Sweep, ThreadCountDoesNotChangeResults) {
    const auto& a = structure_a();
    const auto freqs = frequency_grid(1e3, 1e7, 2);
    const auto one = sweep_imposed_velocity(a.sys, a.mesh, freqs, 1);
    const auto many = sweep_imposed_velocity(a.sys, a.mesh, freqs, 4);
    ASSERT_EQ(one.points.size(), freqs.size());
    ASSERT_EQ(many.points.size(), freqs.size());
    for (std::size_t i = 0; i < freqs.size(); ++i) {
        EXPECT_EQ(one.points[i].c, many.points[i].c);
        EXPECT_EQ(one.points[i].k, many.points[i].k);
    }
    EXPECT_TRUE(one.failures.empty());
}

TEST(SqueezeNumber, Definition) {
    EXPECT_DOUBLE_EQ(squeeze_number(1.0, 2.0, 3.0, 4.0, 5.0), 12.0 * 2.0 * 9.0 / (4.0 * 25.0));
}
