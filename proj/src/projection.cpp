#include "sqfd/projection.hpp"

#include <cmath>
#include <optional>
#include <ostream>

#include "sqfd/csv.hpp"
#include "sqfd/errors.hpp"
#include "sqfd/parallel.hpp"
#include "sqfd/units.hpp"

namespace sqfd {

namespace {

std::vector<std::vector<double>> scaled_shapes(const ModalModel& modes, ModeNormalization norm) {
    std::vector<std::vector<double>> out;
    out.reserve(modes.size());
    for (const auto& m : modes.modes) {
        auto phi = m.shape;
        if (norm == ModeNormalization::mass) {
            if (!(m.modal_mass > 0.0)) throw DomainError("mode '" + m.name + "' has non-positive modal mass");
            const double s = 1.0 / std::sqrt(m.modal_mass);
            for (auto& v : phi) v *= s;
        }
        out.push_back(std::move(phi));
    }
    return out;
}

} // namespace

RomMatrices project_at(const ModalModel& modes, const AssembledSystem& sys, double frequency_hz,
                       const ProjectionOptions& opts) {
    if (modes.modes.empty()) throw DomainError("modal projection needs at least one mode");
    if (opts.source_velocity == 0.0) throw DomainError("source velocity must be non-zero");
    const auto shapes = scaled_shapes(modes, opts.normalization);
    const std::size_t n = shapes.size();
    for (const auto& phi : shapes)
        if (phi.size() != sys.node_count()) throw AssemblyError("mode shape does not match the film mesh");

    const double omega = units::angular(frequency_hz);
    const HarmonicOperator op(sys, omega);

    RomMatrices rom;
    rom.frequency = frequency_hz;
    rom.C.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    rom.K.resizeLike(rom.C);
    for (const auto& m : modes.modes) rom.labels.push_back(m.name);

    std::vector<Complex> velocity(sys.node_count());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t node = 0; node < velocity.size(); ++node)
            velocity[node] = Complex(opts.source_velocity * shapes[i][node], 0.0);
        const auto sol = op.solve(velocity);
        const auto forces = nodal_forces(sys, sol);
        for (std::size_t j = 0; j < n; ++j) {
            Complex q(0.0, 0.0);
            for (std::size_t node = 0; node < forces.size(); ++node) q += shapes[j][node] * forces[node];
            const auto ck = extract_ck(q, opts.source_velocity, omega);
            rom.C(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = ck.c;
            rom.K(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = ck.k;
        }
    }
    return rom;
}

ProjectionResult project(const ModalModel& modes, const AssembledSystem& sys, std::span<const double> freqs_hz,
                         const ProjectionOptions& opts) {
    if (modes.modes.empty()) throw DomainError("modal projection needs at least one mode");
    std::vector<std::optional<RomMatrices>> roms(freqs_hz.size());
    std::vector<std::string> errors(freqs_hz.size());
    parallel_for(freqs_hz.size(), opts.threads, [&](std::size_t k) {
        try {
            roms[k] = project_at(modes, sys, freqs_hz[k], opts);
        } catch (const SolveError& e) {
            errors[k] = e.what();
        }
    });
    ProjectionResult out;
    for (std::size_t k = 0; k < freqs_hz.size(); ++k) {
        if (roms[k]) out.roms.push_back(std::move(*roms[k]));
        else out.failures.push_back({freqs_hz[k], errors[k]});
    }
    return out;
}

CKPair effective_coefficients(const RomMatrices& rom, std::size_t mode) {
    if (mode >= rom.size())
        throw IndexError("mode " + std::to_string(mode) + " out of range for a " + std::to_string(rom.size()) +
                         "-mode model");
    const auto m = static_cast<Eigen::Index>(mode);
    return {rom.C(m, m), rom.K(m, m), rom.frequency};
}

void write_rom_csv(std::ostream& out, std::span<const RomMatrices> roms) {
    out << "frequency_hz,i,j,C_ij,K_ij\n";
    for (const auto& rom : roms)
        for (Eigen::Index i = 0; i < rom.C.rows(); ++i)
            for (Eigen::Index j = 0; j < rom.C.cols(); ++j)
                out << format_double(rom.frequency) << ',' << i + 1 << ',' << j + 1 << ',' << format_double(rom.C(i, j))
                    << ',' << format_double(rom.K(i, j)) << '\n';
}

} // namespace sqfd
