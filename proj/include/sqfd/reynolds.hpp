#pragma once

#include <complex>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "sqfd/gasfilm.hpp"

namespace sqfd {

using Complex = std::complex<double>;
using RealSparse = Eigen::SparseMatrix<double>;
using ComplexSparse = Eigen::SparseMatrix<Complex>;

/// Damping [N·s/m], stiffness [N/m] and frequency [Hz] of a film reaction.
struct CKPair {
    double c = 0.0;
    double k = 0.0;
    double f = 0.0;
};

struct AssemblyOptions {
    // Treat every hole-port node as an ambient (zero-pressure) node instead
    // of coupling it through its channel resistance.
    bool pin_ports = false;
};

/// Linearized isothermal Reynolds film, discretized on a FilmMesh.
///
/// Time convention is exp(-iωt). With w the wall velocity toward the
/// substrate the film obeys
///
///     (S - iω·M)·p = W·w
///
/// where S is the flow matrix (conductance g0³/12η_eff plus hole channels),
/// M the compressibility matrix (g0/P_a) and W the mass matrix restricted to
/// the area under plate material. Ambient rows are eliminated. With this
/// convention Re(F)/v is the damping and Im(F)·ω/v the film stiffness.
class AssembledSystem {
public:
    std::size_t node_count() const noexcept { return dof_of_node_.size(); }
    std::size_t dof_count() const noexcept { return node_of_dof_.size(); }
    int dof_of_node(std::size_t node) const { return dof_of_node_[node]; }
    int node_of_dof(std::size_t dof) const { return node_of_dof_[dof]; }

    /// Flow matrix over all nodes, before boundary elimination [m³/(Pa·s)].
    const RealSparse& flow_full() const noexcept { return flow_full_; }
    /// Flow and compressibility matrices on the free dofs.
    const RealSparse& flow() const noexcept { return flow_; }
    const RealSparse& compressibility() const noexcept { return compress_; }
    /// Wall mass matrix over all nodes [m²]; maps nodal velocity to volume
    /// flux and nodal pressure to nodal force.
    const RealSparse& wall() const noexcept { return wall_; }

    double effective_viscosity() const noexcept { return eta_eff_; }
    double gap() const noexcept { return gap_; } // m

    /// Right-hand side on free dofs for a nodal velocity profile [m/s].
    Eigen::VectorXcd load(std::span<const Complex> velocity) const;

private:
    friend AssembledSystem assemble(const FilmMesh&, std::span<const HoleChannel>, const GasProps&, double,
                                    const AssemblyOptions&);
    std::vector<int> dof_of_node_;
    std::vector<int> node_of_dof_;
    RealSparse flow_full_;
    RealSparse flow_;
    RealSparse compress_;
    RealSparse wall_;
    double eta_eff_ = 0.0;
    double gap_ = 0.0;
};

/// Build the film system. `gap` in µm; geometry leaves µm here.
/// Channels with zero resistance pin their port to ambient.
AssembledSystem assemble(const FilmMesh& mesh, std::span<const HoleChannel> channels, const GasProps& gas,
                         double gap, const AssemblyOptions& opts = {});

/// Complex nodal pressure [Pa] for one velocity profile [m/s] at ω [rad/s].
struct HarmonicSolution {
    double omega = 0.0;
    std::vector<Complex> pressure;
    std::vector<Complex> velocity;
    double residual = 0.0; // ‖A·p − b‖ / ‖b‖
};

/// Factorization of S − iω·M at one frequency, reusable for many profiles.
class HarmonicOperator {
public:
    HarmonicOperator(const AssembledSystem& sys, double omega);
    ~HarmonicOperator();
    HarmonicOperator(HarmonicOperator&&) noexcept;
    HarmonicOperator& operator=(HarmonicOperator&&) noexcept;

    double omega() const noexcept { return omega_; }
    HarmonicSolution solve(std::span<const Complex> velocity) const;

private:
    struct Impl;
    const AssembledSystem* sys_;
    double omega_;
    std::unique_ptr<Impl> impl_;
};

HarmonicSolution solve_harmonic(const AssembledSystem& sys, double omega, std::span<const Complex> velocity);

/// Σ over solid elements of element-averaged pressure × element area [N].
Complex integrate_force(const HarmonicSolution& sol, const FilmMesh& mesh);

/// Consistent nodal force vector W·p [N].
std::vector<Complex> nodal_forces(const AssembledSystem& sys, const HarmonicSolution& sol);

/// c = Re(F)/v, k = Im(F)·ω/v. Throws DomainError for v = 0 or ω < 0.
CKPair extract_ck(Complex force, double velocity, double omega);

/// Analytic sine-series reaction of an unperforated L×W rectangle (µm) with
/// all edges at ambient and uniform wall velocity. The series across the
/// width is summed in closed form; the series along the length is truncated
/// once a term changes the sum by less than 1e-10 relative.
CKPair blech_oracle(double length, double width, double gap, double eta_eff, double ambient_pressure,
                    double omega);

/// Squeeze number 12·η·ω·L²/(P_a·g0²), lengths in µm.
double squeeze_number(double eta, double omega, double length, double ambient_pressure, double gap);

/// Uniform wall velocity of 1 m/s on every node.
std::vector<Complex> uniform_velocity(std::size_t nodes);

/// Imposed-constant-velocity extraction at one frequency.
CKPair imposed_velocity_ck(const AssembledSystem& sys, const FilmMesh& mesh, double frequency_hz);

/// f_min·10^(k/ppd) up to and including f_max.
std::vector<double> frequency_grid(double f_min, double f_max, int points_per_decade);

struct SweepFailure {
    double frequency = 0.0;
    std::string message;
};

struct SweepResult {
    std::vector<CKPair> points; // successful frequencies, ascending
    std::vector<SweepFailure> failures;
};

/// Imposed-velocity sweep; frequencies solved independently on `threads` workers.
SweepResult sweep_imposed_velocity(const AssembledSystem& sys, const FilmMesh& mesh, std::span<const double> freqs,
                                   int threads = 0);

} // namespace sqfd
