#include "sqfd/frf.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include <Eigen/Dense>

#include "sqfd/csv.hpp"
#include "sqfd/errors.hpp"
#include "sqfd/units.hpp"

namespace sqfd {

namespace {

constexpr int kDegree = 6;
constexpr double kCrossingTolerance = 1e-7; // kHz, tighter than the 1e-6 contract
constexpr double kScanStep = 1e-3;          // in normalized frequency

double horner(const double* a, int n, double u) {
    double v = 0.0;
    for (int k = n - 1; k >= 0; --k) v = v * u + a[k];
    return v;
}

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

} // namespace

void FrfCurve::validate() const {
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        if (!std::isfinite(s.frequency_khz) || !std::isfinite(s.amplitude) || s.amplitude < 0.0)
            throw DomainError("FRF sample " + std::to_string(i) + " is not finite and non-negative");
        if (i > 0 && !(s.frequency_khz > samples[i - 1].frequency_khz))
            throw DomainError("FRF frequencies must be strictly increasing (sample " + std::to_string(i) + ")");
    }
}

double Poly6Fit::operator()(double f_khz) const {
    return horner(scaled.data(), kDegree + 1, (f_khz - center()) / half_width());
}

double Poly6Fit::derivative(double f_khz) const {
    std::array<double, kDegree> d{};
    for (int k = 1; k <= kDegree; ++k) d[k - 1] = k * scaled[k];
    return horner(d.data(), kDegree, (f_khz - center()) / half_width()) / half_width();
}

Poly6Fit fit_poly6(const FrfCurve& curve, double f_lo, double f_hi) {
    curve.validate();
    if (curve.samples.empty()) throw FitError("empty FRF curve");
    if (!(f_hi > f_lo)) throw FitError("fit window must have f_lo < f_hi");
    f_lo = std::max(f_lo, curve.samples.front().frequency_khz);
    f_hi = std::min(f_hi, curve.samples.back().frequency_khz);
    if (!(f_hi > f_lo)) throw FitError("fit window lies outside the sampled range");

    std::vector<FrfSample> in;
    for (const auto& s : curve.samples)
        if (s.frequency_khz >= f_lo && s.frequency_khz <= f_hi) in.push_back(s);
    if (in.size() < kDegree + 1)
        throw FitError("degree-6 fit needs at least 7 samples in the window, found " + std::to_string(in.size()));

    Poly6Fit fit;
    fit.f_lo = f_lo;
    fit.f_hi = f_hi;
    fit.samples = in.size();
    const double c = fit.center(), s = fit.half_width();

    Eigen::MatrixXd V(static_cast<Eigen::Index>(in.size()), kDegree + 1);
    Eigen::VectorXd g(static_cast<Eigen::Index>(in.size()));
    for (std::size_t i = 0; i < in.size(); ++i) {
        const double u = (in[i].frequency_khz - c) / s;
        double p = 1.0;
        for (int k = 0; k <= kDegree; ++k, p *= u) V(static_cast<Eigen::Index>(i), k) = p;
        g[static_cast<Eigen::Index>(i)] = in[i].amplitude;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(V);
    if (qr.rank() < kDegree + 1) throw FitError("least-squares system is singular");
    const Eigen::VectorXd a = qr.solve(g);
    for (int k = 0; k <= kDegree; ++k) fit.scaled[k] = a[k];

    // h(f) = Σ a_k s^-k (f - c)^k expanded in powers of f.
    fit.coefficients.fill(0.0);
    for (int k = 0; k <= kDegree; ++k) {
        const double ak = a[k] / std::pow(s, k);
        for (int j = 0; j <= k; ++j) fit.coefficients[kDegree - j] += ak * binomial(k, j) * std::pow(-c, k - j);
    }

    for (const auto& smp : in) {
        const double r = smp.amplitude - fit(smp.frequency_khz);
        fit.residual += r * r;
    }
    return fit;
}

Peak find_peak(const Poly6Fit& fit) {
    // Roots of h'(u) in normalized frequency via the companion matrix.
    std::array<double, kDegree> d{};
    for (int k = 1; k <= kDegree; ++k) d[k - 1] = k * fit.scaled[k];
    double dmax = 0.0;
    for (double v : d) dmax = std::max(dmax, std::abs(v));
    int deg = kDegree - 1;
    while (deg > 0 && std::abs(d[deg]) <= 1e-13 * dmax) --deg;
    if (dmax == 0.0 || deg == 0) throw PeakError("fitted curve has no stationary point");

    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -d[i] / d[deg];
    const Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);

    auto h = [&](double u) { return horner(fit.scaled.data(), kDegree + 1, u); };
    auto dh = [&](double u) { return horner(d.data(), deg + 1, u); };
    std::array<double, kDegree - 1> d2{};
    for (int k = 1; k <= deg; ++k) d2[k - 1] = k * d[k];
    auto ddh = [&](double u) { return horner(d2.data(), deg, u); };

    std::optional<double> best;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const auto z = es.eigenvalues()[i];
        if (std::abs(z.imag()) > 1e-6 * std::max(1.0, std::abs(z.real()))) continue;
        double u = z.real();
        for (int it = 0; it < 5; ++it) {
            const double curv = ddh(u);
            if (curv == 0.0) break;
            u -= dh(u) / curv;
        }
        if (!(u > -1.0 && u < 1.0)) continue;
        if (!(ddh(u) < 0.0)) continue;
        if (!best || h(u) > h(*best)) best = u;
    }
    if (!best) throw PeakError("no interior maximum in the fit window");
    const double top = h(*best);
    if (h(-1.0) > top || h(1.0) > top) throw PeakError("fit maximum lies on the window edge");
    return {fit.center() + fit.half_width() * *best, top};
}

HalfPower half_power(const Poly6Fit& fit, const Peak& peak) {
    const double level = peak.amplitude / std::sqrt(2.0);
    const double s = fit.half_width();
    const double u0 = (peak.frequency_khz - fit.center()) / s;
    auto h = [&](double u) { return horner(fit.scaled.data(), kDegree + 1, u); };

    auto crossing = [&](double dir) {
        double inside = u0;
        double outside = u0;
        for (;;) {
            outside = inside + dir * kScanStep;
            if (std::abs(outside) > 1.0) {
                outside = dir;
                if (h(outside) >= level)
                    throw BandwidthError("half-power crossing lies outside the fit window");
                break;
            }
            if (h(outside) < level) break;
            inside = outside;
        }
        while (std::abs(outside - inside) * s > kCrossingTolerance) {
            const double mid = 0.5 * (inside + outside);
            (h(mid) >= level ? inside : outside) = mid;
        }
        return fit.center() + s * 0.5 * (inside + outside);
    };
    return {crossing(-1.0), crossing(1.0)};
}

double ModalIdentification::resonance_omega() const { return units::angular(resonance_khz * units::khz); }

ModalIdentification identify(const Peak& peak, const HalfPower& hp, double modal_mass) {
    if (!(peak.frequency_khz > 0.0)) throw DomainError("resonant frequency must be positive");
    if (!(modal_mass > 0.0)) throw DomainError("modal mass must be positive");
    if (!(hp.lo_khz > 0.0) || hp.hi_khz < hp.lo_khz)
        throw DomainError("half-power frequencies must satisfy 0 < f_I ≤ f_II");
    ModalIdentification id;
    id.resonance_khz = peak.frequency_khz;
    id.peak_amplitude = peak.amplitude;
    id.half_power_lo_khz = hp.lo_khz;
    id.half_power_hi_khz = hp.hi_khz;
    id.modal_mass = modal_mass;
    id.damping_ratio = (hp.hi_khz - hp.lo_khz) / (2.0 * peak.frequency_khz);
    const double lambda = id.resonance_omega();
    id.damping = 2.0 * modal_mass * id.damping_ratio * lambda;
    id.stiffness = modal_mass * lambda * lambda;
    return id;
}

FrfCurve synthesize_frf(double c, double k, double m, std::span<const double> freqs_khz) {
    if (!(k > 0.0) || !(m > 0.0) || c < 0.0) throw DomainError("SDOF parameters need k, m > 0 and c ≥ 0");
    if (c / (2.0 * std::sqrt(k * m)) >= 1.0 / std::sqrt(2.0))
        throw DomainError("damping ratio ≥ 1/√2: the amplitude response has no peak");
    FrfCurve curve;
    curve.excitation = "synthetic SDOF";
    curve.samples.reserve(freqs_khz.size());
    for (double f : freqs_khz) {
        const double w = units::angular(f * units::khz);
        const double re = k - m * w * w;
        curve.samples.push_back({f, 1.0 / std::sqrt(re * re + c * w * c * w)});
    }
    curve.validate();
    return curve;
}

FitWindow estimate_fit_window(const FrfCurve& curve, double window_factor) {
    curve.validate();
    const auto& s = curve.samples;
    if (s.size() < 3) throw BandwidthError("too few samples to locate a resonance");
    std::size_t top = 0;
    for (std::size_t i = 1; i < s.size(); ++i)
        if (s[i].amplitude > s[top].amplitude) top = i;
    if (top == 0 || top + 1 == s.size()) throw PeakError("largest sample lies at the end of the curve");
    const double level = s[top].amplitude / std::sqrt(2.0);

    auto interp = [&](std::size_t a, std::size_t b) {
        const double t = (level - s[a].amplitude) / (s[b].amplitude - s[a].amplitude);
        return s[a].frequency_khz + t * (s[b].frequency_khz - s[a].frequency_khz);
    };
    std::size_t j = top;
    while (j > 0 && s[j].amplitude >= level) --j;
    if (s[j].amplitude >= level) throw BandwidthError("response does not drop to half power below the peak");
    const double lo = interp(j, j + 1);
    j = top;
    while (j + 1 < s.size() && s[j].amplitude >= level) ++j;
    if (s[j].amplitude >= level) throw BandwidthError("response does not drop to half power above the peak");
    const double hi = interp(j - 1, j);

    const double spacing = top + 1 < s.size() ? s[top + 1].frequency_khz - s[top].frequency_khz
                                              : s[top].frequency_khz - s[top - 1].frequency_khz;
    const double bandwidth = hi - lo;
    if (bandwidth < 2.0 * spacing)
        throw BandwidthError("resonance bandwidth " + std::to_string(bandwidth) +
                             " kHz is below the sampling resolution");
    const double f0 = s[top].frequency_khz;
    return {f0 - window_factor * bandwidth, f0 + window_factor * bandwidth};
}

ModalIdentification identify_curve(const FrfCurve& curve, double modal_mass, const IdentifyOptions& opts) {
    FitWindow w = opts.window ? *opts.window : estimate_fit_window(curve, opts.window_factor);
    auto fit = fit_poly6(curve, w.lo_khz, w.hi_khz);
    auto peak = find_peak(fit);
    auto hp = half_power(fit, peak);
    if (!opts.window) {
        for (int pass = 0; pass < opts.refine_passes; ++pass) {
            const double bw = hp.hi_khz - hp.lo_khz;
            fit = fit_poly6(curve, peak.frequency_khz - opts.window_factor * bw,
                            peak.frequency_khz + opts.window_factor * bw);
            peak = find_peak(fit);
            hp = half_power(fit, peak);
        }
    }
    return identify(peak, hp, modal_mass);
}

IdentificationSummary summarize(std::span<const ModalIdentification> runs) {
    IdentificationSummary out;
    out.count = runs.size();
    if (runs.empty()) return out;
    auto stat = [&](auto field) {
        Statistic st;
        for (const auto& r : runs) st.mean += field(r);
        st.mean /= static_cast<double>(runs.size());
        if (runs.size() > 1) {
            double ss = 0.0;
            for (const auto& r : runs) ss += (field(r) - st.mean) * (field(r) - st.mean);
            st.stddev = std::sqrt(ss / static_cast<double>(runs.size() - 1));
        }
        return st;
    };
    out.resonance_khz = stat([](const auto& r) { return r.resonance_khz; });
    out.half_power_lo_khz = stat([](const auto& r) { return r.half_power_lo_khz; });
    out.half_power_hi_khz = stat([](const auto& r) { return r.half_power_hi_khz; });
    out.damping_ratio = stat([](const auto& r) { return r.damping_ratio; });
    out.damping = stat([](const auto& r) { return r.damping; });
    out.stiffness = stat([](const auto& r) { return r.stiffness; });
    return out;
}

FrfCurve read_frf_csv(std::istream& in) {
    const auto t = read_csv(in);
    FrfCurve curve;
    for (const auto& row : t.rows) {
        const double f = t.number(row, "frequency_khz");
        const double a = t.number(row, "amplitude");
        if (!std::isfinite(f) || !std::isfinite(a) || a < 0.0)
            throw ParseError("amplitude must be finite and non-negative", row.line);
        if (!curve.samples.empty() && !(f > curve.samples.back().frequency_khz))
            throw ParseError("frequencies must be strictly increasing", row.line);
        curve.samples.push_back({f, a});
    }
    return curve;
}

void write_frf_csv(std::ostream& out, const FrfCurve& curve) {
    out << "frequency_khz,amplitude\n";
    for (const auto& s : curve.samples) out << format_double(s.frequency_khz) << ',' << format_double(s.amplitude) << '\n';
}

void write_identification_csv(std::ostream& out,
                              std::span<const std::pair<std::string, ModalIdentification>> rows) {
    out << "label,f_n_khz,f_I_khz,f_II_khz,zeta,c_m_ns_per_m,k_m_n_per_m,modal_mass_kg\n";
    for (const auto& [label, id] : rows)
        out << label << ',' << format_double(id.resonance_khz) << ',' << format_double(id.half_power_lo_khz) << ','
            << format_double(id.half_power_hi_khz) << ',' << format_double(id.damping_ratio) << ','
            << format_double(id.damping) << ',' << format_double(id.stiffness) << ','
            << format_double(id.modal_mass) << '\n';
}

} // namespace sqfd
