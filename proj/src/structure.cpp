#include "sqfd/structure.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <ostream>

#include "sqfd/errors.hpp"
#include "sqfd/units.hpp"

namespace sqfd {

namespace {

constexpr double kDefaultMassRatio = 0.9;

double bisect(const std::function<double(double)>& f, double lo, double hi) {
    double flo = f(lo);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Free-free beam eigenvalues on ξ ∈ [-1, 1].
double symmetric_root(double lo, double hi) {
    return bisect([](double b) { return std::sin(b) * std::cosh(b) + std::cos(b) * std::sinh(b); }, lo, hi);
}
double antisymmetric_root(double lo, double hi) {
    return bisect([](double b) { return std::sin(b) * std::cosh(b) - std::cos(b) * std::sinh(b); }, lo, hi);
}

struct Jet {
    double f, d1, d2;
};

// One-dimensional shape on ξ ∈ [-1, 1].
struct BeamFunction {
    enum class Kind { rigid, symmetric, antisymmetric } kind = Kind::rigid;
    double beta = 0.0;

    Jet operator()(double xi) const {
        const double b = beta;
        switch (kind) {
        case Kind::symmetric:
            return {std::cosh(b * xi) * std::cos(b) + std::cos(b * xi) * std::cosh(b),
                    b * (std::sinh(b * xi) * std::cos(b) - std::sin(b * xi) * std::cosh(b)),
                    b * b * (std::cosh(b * xi) * std::cos(b) - std::cos(b * xi) * std::cosh(b))};
        case Kind::antisymmetric:
            return {std::sinh(b * xi) * std::sin(b) + std::sin(b * xi) * std::sinh(b),
                    b * (std::cosh(b * xi) * std::sin(b) + std::cos(b * xi) * std::sinh(b)),
                    b * b * (std::sinh(b * xi) * std::sin(b) - std::sin(b * xi) * std::sinh(b))};
        case Kind::rigid:
        default:
            return {1.0, 0.0, 0.0};
        }
    }
};

struct PlateShape {
    const char* name;
    BeamFunction x;
    BeamFunction y;
};

struct Curvature {
    double w, wxx, wyy, wxy; // per µm²
};

std::array<PlateShape, kModeFamilySize> shape_family() {
    using K = BeamFunction::Kind;
    const BeamFunction rigid{};
    const BeamFunction s1{K::symmetric, symmetric_root(2.0, 3.0)};
    const BeamFunction a1{K::antisymmetric, antisymmetric_root(3.5, 4.5)};
    const BeamFunction s2{K::symmetric, symmetric_root(5.0, 6.0)};
    return {{{"piston", rigid, rigid},
             {"bend-x1", s1, rigid},
             {"bend-x2", a1, rigid},
             {"bend-y1", rigid, s1},
             {"bend-xy", s1, s1},
             {"bend-x3", s2, rigid}}};
}

Curvature evaluate(const PlateShape& shape, double x, double y, double a, double b) {
    const double sx = 2.0 / a, sy = 2.0 / b;
    const Jet X = shape.x(x * sx - 1.0);
    const Jet Y = shape.y(y * sy - 1.0);
    return {X.f * Y.f, X.d2 * sx * sx * Y.f, X.f * Y.d2 * sy * sy, X.d1 * sx * Y.d1 * sy};
}

double flexural_rigidity(const TestStructure& s, const MaterialProps& mat) {
    const double t = s.thickness * units::um;
    return mat.young_modulus * units::gpa * t * t * t / (12.0 * (1.0 - mat.poisson * mat.poisson));
}

} // namespace

double support_stiffness(const TestStructure& s, const MaterialProps& mat) {
    const double inertia = s.support_width * std::pow(s.thickness, 3) / 12.0 * units::um4;
    const double c = s.support_length * units::um;
    return 3.0 * mat.young_modulus * units::gpa * inertia / (c * c * c);
}

double lumped_stiffness(const TestStructure& s, const MaterialProps& mat) { return 4.0 * support_stiffness(s, mat); }

double natural_frequency(const LumpedModel& lm) {
    if (lm.stiffness <= 0.0 || !std::isfinite(lm.mass)) return 0.0;
    if (!(lm.mass > 0.0)) throw DomainError("moving mass must be positive");
    return std::sqrt(lm.stiffness / lm.mass) / units::two_pi;
}

double Mode::frequency_hz() const { return units::hertz(omega); }

double piston_mass_ratio(const TestStructure& s) {
    if (is_catalog_structure(s))
        if (auto m = measured_response(s.label)) return m->mass_ratio;
    return kDefaultMassRatio;
}

double modal_inner_product(const FilmMesh& mesh, const MaterialProps& mat, double thickness,
                           const std::vector<double>& u, const std::vector<double>& v) {
    static constexpr double mm[4][4] = {{4, 2, 1, 2}, {2, 4, 2, 1}, {1, 2, 4, 2}, {2, 1, 2, 4}};
    double sum = 0.0;
    for (const auto& el : mesh.elements) {
        if (!el.solid()) continue;
        const double scale = mesh.element_area(el) / 36.0;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) sum += scale * mm[a][b] * u[el.nodes[a]] * v[el.nodes[b]];
    }
    return mat.density * thickness * sum;
}

Mode piston_mode(const TestStructure& s, const FilmMesh& mesh, const MaterialProps& mat) {
    const auto grid = derive_hole_grid(s);
    Mode m;
    m.name = "piston";
    m.shape.assign(mesh.node_count(), 1.0);
    m.modal_mass = piston_mass_ratio(s) * total_mass(s, grid, mat);
    m.omega = units::angular(natural_frequency({lumped_stiffness(s, mat), m.modal_mass}));
    m.participation = 1.0;
    return m;
}

ModalModel bending_modes(const TestStructure& s, const FilmMesh& mesh, int n, const MaterialProps& mat) {
    if (n < 1 || n > kModeFamilySize)
        throw DomainError("mode count " + std::to_string(n) + " outside the implemented family (1.." +
                          std::to_string(kModeFamilySize) + ")");
    const auto family = shape_family();
    const double a = s.plate_length, b = s.plate_width;
    const std::size_t nodes = mesh.node_count();

    ModalModel model;
    model.modes.push_back(piston_mode(s, mesh, mat));

    // Nodal samples and basis coefficients of each orthogonalized shape.
    std::vector<std::vector<double>> shapes{model.modes[0].shape};
    std::vector<std::vector<double>> coeffs{std::vector<double>(kModeFamilySize, 0.0)};
    coeffs[0][0] = 1.0;
    auto inner = [&](const std::vector<double>& u, const std::vector<double>& v) {
        return modal_inner_product(mesh, mat, s.thickness, u, v);
    };

    const double D = flexural_rigidity(s, mat);
    const double ks = support_stiffness(s, mat);
    const std::array<std::array<double, 2>, 4> corners{{{0.0, 0.0}, {a, 0.0}, {a, b}, {0.0, b}}};
    const double gauss = 1.0 / std::sqrt(3.0);

    for (int k = 1; k < n; ++k) {
        std::vector<double> phi(nodes);
        for (std::size_t i = 0; i < nodes; ++i) phi[i] = evaluate(family[k], mesh.nodes[i].x, mesh.nodes[i].y, a, b).w;
        std::vector<double> c(kModeFamilySize, 0.0);
        c[k] = 1.0;
        // Modified Gram-Schmidt, applied twice.
        for (int pass = 0; pass < 2; ++pass)
            for (std::size_t j = 0; j < shapes.size(); ++j) {
                const double r = inner(phi, shapes[j]) / inner(shapes[j], shapes[j]);
                for (std::size_t i = 0; i < nodes; ++i) phi[i] -= r * shapes[j][i];
                for (int q = 0; q < kModeFamilySize; ++q) c[q] -= r * coeffs[j][q];
            }
        std::size_t arg = 0;
        for (std::size_t i = 1; i < nodes; ++i)
            if (std::abs(phi[i]) > std::abs(phi[arg])) arg = i;
        const double scale = 1.0 / phi[arg];
        for (auto& v : phi) v *= scale;
        for (auto& v : c) v *= scale;

        auto combined = [&](double x, double y) {
            Curvature sum{0, 0, 0, 0};
            for (int q = 0; q < kModeFamilySize; ++q) {
                if (c[q] == 0.0) continue;
                const auto cv = evaluate(family[q], x, y, a, b);
                sum.w += c[q] * cv.w;
                sum.wxx += c[q] * cv.wxx;
                sum.wyy += c[q] * cv.wyy;
                sum.wxy += c[q] * cv.wxy;
            }
            return sum;
        };

        // Kirchhoff bending energy over plate material, 2x2 Gauss per element.
        double bending = 0.0;
        for (const auto& el : mesh.elements) {
            if (!el.solid()) continue;
            const auto& p0 = mesh.nodes[el.nodes[0]];
            const double dx = mesh.element_dx(el), dy = mesh.element_dy(el);
            for (double gx : {-gauss, gauss})
                for (double gy : {-gauss, gauss}) {
                    const auto cv = combined(p0.x + 0.5 * dx * (1 + gx), p0.y + 0.5 * dy * (1 + gy));
                    bending += 0.25 * dx * dy *
                               (cv.wxx * cv.wxx + cv.wyy * cv.wyy + 2.0 * mat.poisson * cv.wxx * cv.wyy +
                                2.0 * (1.0 - mat.poisson) * cv.wxy * cv.wxy);
                }
        }
        // Curvatures are per µm² and areas in µm²: one factor 1e12 to SI.
        double stiffness = D * bending / units::um2;
        for (const auto& pt : corners) {
            const double w = combined(pt[0], pt[1]).w;
            stiffness += ks * w * w;
        }

        Mode m;
        m.name = family[k].name;
        m.modal_mass = inner(phi, phi);
        m.omega = std::sqrt(stiffness / m.modal_mass);
        m.participation = inner(phi, shapes[0]) / m.modal_mass;
        m.shape = phi;
        shapes.push_back(std::move(phi));
        coeffs.push_back(std::move(c));
        model.modes.push_back(std::move(m));
    }
    return model;
}

void write_modes_csv(std::ostream& out, const ModalModel& model) {
    const auto old = out.precision(std::numeric_limits<double>::max_digits10);
    out << "mode,name,frequency_hz,modal_mass_kg,participation\n";
    for (std::size_t i = 0; i < model.size(); ++i) {
        const auto& m = model.modes[i];
        out << i + 1 << ',' << m.name << ',' << m.frequency_hz() << ',' << m.modal_mass << ',' << m.participation
            << '\n';
    }
    out.precision(old);
}

void write_mode_shapes_csv(std::ostream& out, const ModalModel& model, const FilmMesh& mesh) {
    const auto old = out.precision(std::numeric_limits<double>::max_digits10);
    out << "node,x_um,y_um";
    for (std::size_t i = 0; i < model.size(); ++i) out << ",phi" << i + 1;
    out << '\n';
    for (std::size_t n = 0; n < mesh.node_count(); ++n) {
        out << n << ',' << mesh.nodes[n].x << ',' << mesh.nodes[n].y;
        for (const auto& m : model.modes) out << ',' << m.shape[n];
        out << '\n';
    }
    out.precision(old);
}

} // namespace sqfd
