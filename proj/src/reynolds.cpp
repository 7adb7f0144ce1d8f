#include "sqfd/reynolds.hpp"

#include <cmath>
#include <numbers>
#include <optional>

#include <Eigen/SparseLU>

#include "sqfd/csv.hpp"
#include "sqfd/errors.hpp"
#include "sqfd/parallel.hpp"
#include "sqfd/units.hpp"

namespace sqfd {

namespace {

using Triplet = Eigen::Triplet<double>;
using std::numbers::pi;

constexpr double kResidualTolerance = 1e-10;

// Bilinear rectangle element, nodes counterclockwise from lower-left.
struct ElementMatrices {
    double grad[4][4];
    double mass[4][4];
};

ElementMatrices rectangle_matrices(double dx, double dy) {
    static constexpr double kx[4][4] = {{2, -2, -1, 1}, {-2, 2, 1, -1}, {-1, 1, 2, -2}, {1, -1, -2, 2}};
    static constexpr double ky[4][4] = {{2, 1, -1, -2}, {1, 2, -2, -1}, {-1, -2, 2, 1}, {-2, -1, 1, 2}};
    static constexpr double mm[4][4] = {{4, 2, 1, 2}, {2, 4, 2, 1}, {1, 2, 4, 2}, {2, 1, 2, 4}};
    ElementMatrices e{};
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            e.grad[a][b] = kx[a][b] * dy / (6.0 * dx) + ky[a][b] * dx / (6.0 * dy);
            e.mass[a][b] = mm[a][b] * dx * dy / 36.0;
        }
    return e;
}

RealSparse restrict_to_dofs(const RealSparse& full, const std::vector<int>& dof_of_node, std::size_t n_dofs) {
    std::vector<Triplet> trips;
    trips.reserve(full.nonZeros());
    for (int col = 0; col < full.outerSize(); ++col) {
        const int dc = dof_of_node[col];
        if (dc < 0) continue;
        for (RealSparse::InnerIterator it(full, col); it; ++it) {
            const int dr = dof_of_node[it.row()];
            if (dr >= 0) trips.emplace_back(dr, dc, it.value());
        }
    }
    RealSparse out(static_cast<Eigen::Index>(n_dofs), static_cast<Eigen::Index>(n_dofs));
    out.setFromTriplets(trips.begin(), trips.end());
    return out;
}

Eigen::VectorXcd apply_real(const RealSparse& m, const Eigen::VectorXcd& v) {
    Eigen::VectorXd re = m * v.real();
    Eigen::VectorXd im = m * v.imag();
    Eigen::VectorXcd out(re.size());
    for (Eigen::Index i = 0; i < re.size(); ++i) out[i] = Complex(re[i], im[i]);
    return out;
}

// tanh for Re(z) ≥ 0 without overflow.
Complex stable_tanh(Complex z) {
    const Complex e = std::exp(-2.0 * z);
    return (1.0 - e) / (1.0 + e);
}

} // namespace

AssembledSystem assemble(const FilmMesh& mesh, std::span<const HoleChannel> channels, const GasProps& gas,
                         double gap, const AssemblyOptions& opts) {
    gas.validate();
    if (!(gap > 0.0)) throw DomainError("gap must be positive");
    const std::size_t n = mesh.node_count();
    if (n != static_cast<std::size_t>(mesh.nx()) * mesh.ny())
        throw AssemblyError("mesh node count does not match its grid lines");
    if (channels.size() != mesh.hole_ports.size())
        throw AssemblyError("expected " + std::to_string(mesh.hole_ports.size()) + " hole channels, got " +
                            std::to_string(channels.size()));

    AssembledSystem sys;
    sys.gap_ = gap * units::um;
    sys.eta_eff_ = effective_viscosity(gas, knudsen(gas, gap));
    const double conductance = std::pow(sys.gap_, 3) / (12.0 * sys.eta_eff_);
    const double compressibility = sys.gap_ / gas.ambient_pressure;

    std::vector<Triplet> flow, comp, wall;
    flow.reserve(16 * mesh.element_count());
    comp.reserve(16 * mesh.element_count());
    wall.reserve(16 * mesh.element_count());
    for (const auto& el : mesh.elements) {
        for (int node : el.nodes)
            if (node < 0 || static_cast<std::size_t>(node) >= n) throw AssemblyError("element references unknown node");
        const auto em = rectangle_matrices(mesh.element_dx(el) * units::um, mesh.element_dy(el) * units::um);
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) {
                flow.emplace_back(el.nodes[a], el.nodes[b], conductance * em.grad[a][b]);
                comp.emplace_back(el.nodes[a], el.nodes[b], compressibility * em.mass[a][b]);
                if (el.solid()) wall.emplace_back(el.nodes[a], el.nodes[b], em.mass[a][b]);
            }
    }

    std::vector<char> pinned(n, 0);
    for (int node : mesh.boundary_nodes) pinned[node] = 1;
    for (const auto& ch : channels) {
        if (ch.hole < 0 || static_cast<std::size_t>(ch.hole) >= mesh.hole_ports.size())
            throw AssemblyError("channel references unknown hole " + std::to_string(ch.hole));
        if (ch.resistance < 0.0) throw AssemblyError("negative channel resistance");
        const auto& ports = mesh.port_weights[ch.hole];
        if (opts.pin_ports || ch.resistance == 0.0) {
            for (const auto& pw : ports) pinned[pw.node] = 1;
            continue;
        }
        // Outflow through the channel is driven by the port's area-averaged pressure.
        const double g = 1.0 / (ch.resistance / units::um3);
        for (const auto& pa : ports)
            for (const auto& pb : ports) flow.emplace_back(pa.node, pb.node, g * pa.weight * pb.weight);
    }

    const auto dim = static_cast<Eigen::Index>(n);
    sys.flow_full_.resize(dim, dim);
    sys.flow_full_.setFromTriplets(flow.begin(), flow.end());
    RealSparse comp_full(dim, dim);
    comp_full.setFromTriplets(comp.begin(), comp.end());
    sys.wall_.resize(dim, dim);
    sys.wall_.setFromTriplets(wall.begin(), wall.end());

    sys.dof_of_node_.assign(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        if (pinned[i]) continue;
        sys.dof_of_node_[i] = static_cast<int>(sys.node_of_dof_.size());
        sys.node_of_dof_.push_back(static_cast<int>(i));
    }
    if (sys.node_of_dof_.empty()) throw AssemblyError("every node is held at ambient");
    sys.flow_ = restrict_to_dofs(sys.flow_full_, sys.dof_of_node_, sys.dof_count());
    sys.compress_ = restrict_to_dofs(comp_full, sys.dof_of_node_, sys.dof_count());
    return sys;
}

Eigen::VectorXcd AssembledSystem::load(std::span<const Complex> velocity) const {
    if (velocity.size() != node_count())
        throw AssemblyError("velocity profile has " + std::to_string(velocity.size()) + " entries, mesh has " +
                            std::to_string(node_count()) + " nodes");
    Eigen::VectorXcd v(static_cast<Eigen::Index>(velocity.size()));
    for (std::size_t i = 0; i < velocity.size(); ++i) v[static_cast<Eigen::Index>(i)] = velocity[i];
    const Eigen::VectorXcd full = apply_real(wall_, v);
    Eigen::VectorXcd b(static_cast<Eigen::Index>(dof_count()));
    for (std::size_t d = 0; d < dof_count(); ++d) b[static_cast<Eigen::Index>(d)] = full[node_of_dof_[d]];
    return b;
}

struct HarmonicOperator::Impl {
    ComplexSparse matrix;
    Eigen::SparseLU<ComplexSparse, Eigen::COLAMDOrdering<int>> lu;
};

HarmonicOperator::HarmonicOperator(const AssembledSystem& sys, double omega)
    : sys_(&sys), omega_(omega), impl_(std::make_unique<Impl>()) {
    if (!(omega >= 0.0) || !std::isfinite(omega)) throw DomainError("angular frequency must be finite and non-negative");
    impl_->matrix = sys.flow().cast<Complex>() - Complex(0.0, omega) * sys.compressibility().cast<Complex>();
    impl_->matrix.makeCompressed();
    impl_->lu.compute(impl_->matrix);
    if (impl_->lu.info() != Eigen::Success)
        throw SolveError("factorization failed at ω = " + std::to_string(omega) + " rad/s: " +
                         impl_->lu.lastErrorMessage());
}

HarmonicOperator::~HarmonicOperator() = default;
HarmonicOperator::HarmonicOperator(HarmonicOperator&&) noexcept = default;
HarmonicOperator& HarmonicOperator::operator=(HarmonicOperator&&) noexcept = default;

HarmonicSolution HarmonicOperator::solve(std::span<const Complex> velocity) const {
    HarmonicSolution sol;
    sol.omega = omega_;
    sol.velocity.assign(velocity.begin(), velocity.end());
    sol.pressure.assign(sys_->node_count(), Complex(0.0, 0.0));

    const Eigen::VectorXcd b = sys_->load(velocity);
    const double bnorm = b.norm();
    if (bnorm == 0.0) return sol;

    Eigen::VectorXcd x = impl_->lu.solve(b);
    Eigen::VectorXcd r = b - impl_->matrix * x;
    for (int pass = 0; pass < 2 && r.norm() > kResidualTolerance * bnorm; ++pass) {
        x += impl_->lu.solve(r);
        r = b - impl_->matrix * x;
    }
    sol.residual = r.norm() / bnorm;
    if (!(sol.residual <= kResidualTolerance) || !x.allFinite())
        throw SolveError("relative residual " + format_double(sol.residual) + " at ω = " + format_double(omega_) +
                         " rad/s");
    for (std::size_t d = 0; d < sys_->dof_count(); ++d)
        sol.pressure[sys_->node_of_dof(d)] = x[static_cast<Eigen::Index>(d)];
    return sol;
}

HarmonicSolution solve_harmonic(const AssembledSystem& sys, double omega, std::span<const Complex> velocity) {
    return HarmonicOperator(sys, omega).solve(velocity);
}

Complex integrate_force(const HarmonicSolution& sol, const FilmMesh& mesh) {
    Complex total(0.0, 0.0);
    for (const auto& el : mesh.elements) {
        if (!el.solid()) continue;
        Complex sum(0.0, 0.0);
        for (int node : el.nodes) sum += sol.pressure[node];
        total += 0.25 * sum * mesh.element_area(el);
    }
    return total * units::um2;
}

std::vector<Complex> nodal_forces(const AssembledSystem& sys, const HarmonicSolution& sol) {
    Eigen::VectorXcd p(static_cast<Eigen::Index>(sol.pressure.size()));
    for (std::size_t i = 0; i < sol.pressure.size(); ++i) p[static_cast<Eigen::Index>(i)] = sol.pressure[i];
    const Eigen::VectorXcd f = apply_real(sys.wall(), p);
    return {f.data(), f.data() + f.size()};
}

CKPair extract_ck(Complex force, double velocity, double omega) {
    if (velocity == 0.0) throw DomainError("velocity amplitude must be non-zero");
    if (omega < 0.0) throw DomainError("angular frequency must be non-negative");
    return {force.real() / velocity, force.imag() * omega / velocity, units::hertz(omega)};
}

CKPair blech_oracle(double length, double width, double gap, double eta_eff, double ambient_pressure, double omega) {
    const double L = length * units::um;
    const double W = width * units::um;
    const double g = gap * units::um;
    const double kappa = g * g * g / (12.0 * eta_eff);
    const double beta = omega * g / ambient_pressure;

    // For each odd m the width-wise problem -κP'' + (κα² - iβ)P = 4/(mπ)
    // with P(0) = P(W) = 0 has the closed form integrated below.
    Complex sum(0.0, 0.0);
    for (int m = 1;; m += 2) {
        const double alpha = m * pi / L;
        const Complex q = std::sqrt(Complex(alpha * alpha, -beta / kappa));
        const Complex term = 8.0 * L / (m * m * pi * pi * kappa * q * q) * (W - 2.0 / q * stable_tanh(0.5 * q * W));
        sum += term;
        if (std::abs(term) < 1e-10 * std::abs(sum)) break;
        if (m > 20'000'001) throw SolveError("sine series did not converge");
    }
    return {sum.real(), sum.imag() * omega, units::hertz(omega)};
}

double squeeze_number(double eta, double omega, double length, double ambient_pressure, double gap) {
    return 12.0 * eta * omega * length * length / (ambient_pressure * gap * gap);
}

std::vector<Complex> uniform_velocity(std::size_t nodes) { return std::vector<Complex>(nodes, Complex(1.0, 0.0)); }

CKPair imposed_velocity_ck(const AssembledSystem& sys, const FilmMesh& mesh, double frequency_hz) {
    const double omega = units::angular(frequency_hz);
    const auto v = uniform_velocity(mesh.node_count());
    const auto sol = solve_harmonic(sys, omega, v);
    return extract_ck(integrate_force(sol, mesh), 1.0, omega);
}

std::vector<double> frequency_grid(double f_min, double f_max, int points_per_decade) {
    if (!(f_min > 0.0) || !(f_max > f_min) || !std::isfinite(f_max))
        throw DomainError("frequency range must satisfy 0 < f_min < f_max");
    if (points_per_decade < 1) throw DomainError("points per decade must be at least 1");
    std::vector<double> out;
    for (int k = 0;; ++k) {
        const double f = f_min * std::pow(10.0, static_cast<double>(k) / points_per_decade);
        if (f >= f_max * (1.0 - 1e-12)) break;
        out.push_back(f);
    }
    out.push_back(f_max);
    return out;
}

SweepResult sweep_imposed_velocity(const AssembledSystem& sys, const FilmMesh& mesh, std::span<const double> freqs,
                                   int threads) {
    std::vector<std::optional<CKPair>> points(freqs.size());
    std::vector<std::string> errors(freqs.size());
    parallel_for(freqs.size(), threads, [&](std::size_t i) {
        try {
            points[i] = imposed_velocity_ck(sys, mesh, freqs[i]);
        } catch (const Error& e) {
            errors[i] = e.what();
        }
    });
    SweepResult out;
    for (std::size_t i = 0; i < freqs.size(); ++i) {
        if (points[i]) out.points.push_back(*points[i]);
        else out.failures.push_back({freqs[i], errors[i]});
    }
    return out;
}

} // namespace sqfd
