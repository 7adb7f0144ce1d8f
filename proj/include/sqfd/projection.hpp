#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sqfd/reynolds.hpp"
#include "sqfd/structure.hpp"

namespace sqfd {

/// Frequency-dependent reduced-order film matrices. Row i holds the modal
/// forces produced by source mode i on every target mode j.
struct RomMatrices {
    double frequency = 0.0; // Hz
    Eigen::MatrixXd C;      // N·s/m (modal units)
    Eigen::MatrixXd K;      // N/m (modal units)
    std::vector<std::string> labels;

    std::size_t size() const noexcept { return static_cast<std::size_t>(C.rows()); }
};

enum class ModeNormalization {
    max_abs, // shapes as stored, max |φ| = 1
    mass,    // shapes scaled to unit modal mass
};

struct ProjectionOptions {
    ModeNormalization normalization = ModeNormalization::max_abs;
    double source_velocity = 1.0; // m/s
    int threads = 0;
};

struct ProjectionResult {
    std::vector<RomMatrices> roms; // successful frequencies, ascending
    std::vector<SweepFailure> failures;
};

/// Drive the film with each mode shape as a velocity profile, back-project
/// the consistent nodal forces onto every mode and split the modal forces
/// into damping (real part) and stiffness (imaginary part times ω).
/// One factorization per frequency is shared by all source modes.
ProjectionResult project(const ModalModel& modes, const AssembledSystem& sys, std::span<const double> freqs_hz,
                         const ProjectionOptions& opts = {});

/// Single-frequency projection; throws on solver failure.
RomMatrices project_at(const ModalModel& modes, const AssembledSystem& sys, double frequency_hz,
                       const ProjectionOptions& opts = {});

/// Diagonal entry (C_mm, K_mm, f). Throws IndexError when mode ≥ n.
CKPair effective_coefficients(const RomMatrices& rom, std::size_t mode);

/// frequency_hz,i,j,C_ij,K_ij with 1-based mode indices.
void write_rom_csv(std::ostream& out, std::span<const RomMatrices> roms);

} // namespace sqfd
