#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sqfd {

struct FrfSample {
    double frequency_khz;
    double amplitude;
};

/// Sampled amplitude response around a resonance.
struct FrfCurve {
    std::vector<FrfSample> samples;
    std::string label;
    std::string excitation;

    /// Throws DomainError unless frequencies strictly increase and amplitudes
    /// are finite and non-negative.
    void validate() const;
};

/// Degree-6 least-squares polynomial over a frequency window.
///
/// The fit is computed in u = (f - center)/half_width ∈ [-1, 1]; the
/// coefficients in raw kHz powers (α f⁶ + β f⁵ + ... + θ) are mapped back
/// from it and reported, but evaluation always goes through u.
struct Poly6Fit {
    std::array<double, 7> coefficients{}; // α, β, γ, δ, ε, η, θ
    std::array<double, 7> scaled{};       // ascending powers of u
    double f_lo = 0.0;
    double f_hi = 0.0;
    double residual = 0.0; // Σ (g_i - h(f_i))² over the window samples
    std::size_t samples = 0;

    double center() const noexcept { return 0.5 * (f_lo + f_hi); }
    double half_width() const noexcept { return 0.5 * (f_hi - f_lo); }
    double operator()(double f_khz) const;
    double derivative(double f_khz) const;
};

/// Throws FitError with fewer than 7 samples in the window or a rank-deficient system.
Poly6Fit fit_poly6(const FrfCurve& curve, double f_lo, double f_hi);

struct Peak {
    double frequency_khz;
    double amplitude;
};

/// Interior global maximum of the fit, from the real roots of h'.
/// Throws PeakError when the window has no interior maximum.
Peak find_peak(const Poly6Fit& fit);

struct HalfPower {
    double lo_khz;
    double hi_khz;
};

/// Crossings of h = peak/√2 nearest the peak, bisected to 1e-6 kHz.
/// Throws BandwidthError when a crossing falls outside the window.
HalfPower half_power(const Poly6Fit& fit, const Peak& peak);

struct ModalIdentification {
    double resonance_khz = 0.0;
    double half_power_lo_khz = 0.0;
    double half_power_hi_khz = 0.0;
    double damping_ratio = 0.0;
    double damping = 0.0;   // c_m, N·s/m
    double stiffness = 0.0; // k_m, N/m
    double modal_mass = 0.0;
    double peak_amplitude = 0.0;

    double resonance_omega() const; // λ_n = 2π f_n, rad/s
};

/// ζ = (f^II - f^I)/(2 f_n), c_m = 2 m ζ λ_n, k_m = m λ_n².
ModalIdentification identify(const Peak& peak, const HalfPower& hp, double modal_mass);

/// SDOF magnitude 1/sqrt((k - mω²)² + (cω)²) at the given frequencies.
/// Throws DomainError unless k, m > 0, c ≥ 0 and ζ < 1/√2.
FrfCurve synthesize_frf(double c, double k, double m, std::span<const double> freqs_khz);

struct FitWindow {
    double lo_khz;
    double hi_khz;
};

struct IdentifyOptions {
    // Window half-width as a multiple of the estimated half-power bandwidth.
    double window_factor = 0.75;
    // Re-centre and re-size the window from the previous fit this many times.
    int refine_passes = 1;
    std::optional<FitWindow> window; // fixed window, skips estimation
};

/// Coarse window from the raw samples: peak sample ± factor × interpolated bandwidth.
/// Throws BandwidthError when the resonance is not resolved by the sampling.
FitWindow estimate_fit_window(const FrfCurve& curve, double window_factor);

/// Full chain: window → fit → peak → half-power → identification.
ModalIdentification identify_curve(const FrfCurve& curve, double modal_mass, const IdentifyOptions& opts = {});

struct Statistic {
    double mean = 0.0;
    double stddev = 0.0; // sample standard deviation, 0 for a single value
};

/// Mean ± standard deviation over repeated measurements of one structure.
struct IdentificationSummary {
    std::size_t count = 0;
    Statistic resonance_khz;
    Statistic half_power_lo_khz;
    Statistic half_power_hi_khz;
    Statistic damping_ratio;
    Statistic damping;
    Statistic stiffness;
};

IdentificationSummary summarize(std::span<const ModalIdentification> runs);

/// frequency_khz,amplitude
FrfCurve read_frf_csv(std::istream& in);
void write_frf_csv(std::ostream& out, const FrfCurve& curve);

/// label,f_n_khz,f_I_khz,f_II_khz,zeta,c_m_ns_per_m,k_m_n_per_m,modal_mass_kg
void write_identification_csv(std::ostream& out, std::span<const std::pair<std::string, ModalIdentification>> rows);

} // namespace sqfd
