#pragma once

// Inter-stage elements: waveshaper amplitude weighting, dispersion-module
// decorrelation and band-limited ASE noise.
//
// Dispersion is the pure quadratic spectral phase
//
//   H(f) = exp(-i * pi * D * lambda^2 / c * f^2)
//
// (constant and linear terms dropped; they are retuned away downstream).
// The group-delay difference between two tones df apart is D*lambda^2/c*df,
// e.g. -270 ps/nm over 36 GHz at 1550 nm gives -77.9 ps.

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "optagg/envelope.hpp"
#include "optagg/errors.hpp"
#include "optagg/filter.hpp"
#include "optagg/rng.hpp"

namespace optagg {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

struct WeightPlan {
    double alpha = 1.0;      // amplitude ratio, (0, 1]
    double band_lo_hz = 0.0;  // offsets selecting the scaled channel
    double band_hi_hz = 0.0;

    void validate() const {
        if (!(alpha > 0.0) || alpha > 1.0)
            throw ConfigError("weight: alpha must lie in (0, 1]");
        if (!(band_hi_hz > band_lo_hz))
            throw ConfigError("weight: applied band must be non-empty");
    }
};

// Scale amplitudes inside the band; per-bin phase untouched.
inline ComplexEnvelope apply_weight(const ComplexEnvelope& x, const WeightPlan& w) {
    validate_envelope(x, "apply_weight");
    w.validate();
    if (w.band_lo_hz < -x.sample_rate_hz / 2.0 || w.band_hi_hz > x.sample_rate_hz / 2.0)
        throw ConfigError("weight: applied band exceeds the grid");
    if (w.alpha == 1.0) return x;
    const std::size_t n = x.size();
    std::vector<cdouble> fd(x.samples);
    fft_forward(fd);
    const double spacing = x.bin_spacing_hz();
    const std::size_t half = n / 2;
    for (std::size_t j = 0; j < n; ++j) {
        const double f = (j < n - half)
                             ? spacing * static_cast<double>(j)
                             : spacing * (static_cast<double>(j) - static_cast<double>(n));
        if (f >= w.band_lo_hz && f <= w.band_hi_hz) fd[j] *= w.alpha;
    }
    fft_inverse(fd);
    ComplexEnvelope out;
    out.samples = std::move(fd);
    out.sample_rate_hz = x.sample_rate_hz;
    out.center_freq_hz = x.center_freq_hz;
    return out;
}

struct DispersionSpec {
    double d_ps_per_nm = 0.0;
    double ref_wavelength_nm = 1550.0;

    void validate() const {
        if (std::abs(d_ps_per_nm) > 10000.0)
            throw ConfigError("dispersion: |d_ps_per_nm| must be <= 10000");
        if (!(ref_wavelength_nm > 0.0))
            throw ConfigError("dispersion: ref_wavelength_nm must be positive");
    }
};

inline ComplexEnvelope apply_dispersion(const ComplexEnvelope& x, const DispersionSpec& d) {
    validate_envelope(x, "apply_dispersion");
    d.validate();
    if (d.d_ps_per_nm == 0.0) return x;
    const double lambda_m = d.ref_wavelength_nm * 1e-9;
    const double d_si = d.d_ps_per_nm * 1e-3;  // s/m
    const double curvature = detail::kPi * d_si * lambda_m * lambda_m / kSpeedOfLight;
    const std::size_t n = x.size();
    std::vector<cdouble> fd(x.samples);
    fft_forward(fd);
    const double spacing = x.bin_spacing_hz();
    const std::size_t half = n / 2;
    for (std::size_t j = 0; j < n; ++j) {
        const double f = (j < n - half)
                             ? spacing * static_cast<double>(j)
                             : spacing * (static_cast<double>(j) - static_cast<double>(n));
        const double ang = -curvature * f * f;
        fd[j] *= cdouble(std::cos(ang), std::sin(ang));
    }
    fft_inverse(fd);
    ComplexEnvelope out;
    out.samples = std::move(fd);
    out.sample_rate_hz = x.sample_rate_hz;
    out.center_freq_hz = x.center_freq_hz;
    return out;
}

struct AseNoiseSpec {
    std::optional<double> target_parent_evm_pct;  // exactly one of these two
    std::optional<double> noise_psd;              // power per Hz (mW/Hz)
    double bpf_bandwidth_hz = 375e9;              // 3 nm equivalent at 1550 nm
    std::uint64_t seed = 0;

    void validate() const {
        if (target_parent_evm_pct.has_value() == noise_psd.has_value())
            throw ConfigError("ase: set exactly one of target_parent_evm_pct / noise_psd");
        if (!(bpf_bandwidth_hz > 0.0))
            throw ConfigError("ase: bpf_bandwidth_hz must be positive");
        if (target_parent_evm_pct && !(*target_parent_evm_pct > 0.0))
            throw ConfigError("ase: target_parent_evm_pct must be positive");
        if (noise_psd && *noise_psd < 0.0)
            throw ConfigError("ase: noise_psd must be non-negative");
    }
};

// Circularly symmetric white Gaussian noise of the given two-sided PSD,
// brickwall-limited to bpf_bandwidth, added to x. Deterministic in the seed.
inline ComplexEnvelope apply_ase(const ComplexEnvelope& x, double noise_psd,
                                 double bpf_bandwidth_hz, std::uint64_t seed) {
    validate_envelope(x, "apply_ase");
    if (noise_psd < 0.0) throw ConfigError("apply_ase: noise_psd must be non-negative");
    if (noise_psd == 0.0) return x;
    if (bpf_bandwidth_hz > x.sample_rate_hz)
        throw ConfigError("apply_ase: bpf_bandwidth_hz exceeds the grid");
    const CounterRng rng(seed);
    const double sigma_dim = std::sqrt(noise_psd * x.sample_rate_hz / 2.0);
    ComplexEnvelope noise;
    noise.sample_rate_hz = x.sample_rate_hz;
    noise.center_freq_hz = x.center_freq_hz;
    noise.samples.resize(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        const auto [g1, g2] = rng.gaussian_pair(k);
        noise.samples[k] = cdouble(sigma_dim * g1, sigma_dim * g2);
    }
    if (bpf_bandwidth_hz < x.sample_rate_hz)
        noise = apply_filter(noise, brickwall_lowpass(bpf_bandwidth_hz));
    return combine(x, noise);
}

namespace detail {

// Total complex noise variance (relative to symbol energy) that makes the
// unit-power-normalized decision samples measure the given EVM. Inverts
//   evm^2 = s2/(1+s2) + (1 - 1/sqrt(1+s2))^2
// which accounts for the receiver normalizing signal+noise to unit power.
inline double noise_variance_for_measured_evm(double evm_fraction) {
    const double t2 = evm_fraction * evm_fraction;
    double lo = 0.0, hi = 10.0;
    for (int it = 0; it < 200; ++it) {
        const double s2 = 0.5 * (lo + hi);
        const double g = std::sqrt(1.0 + s2);
        const double f = s2 / (1.0 + s2) + (1.0 - 1.0 / g) * (1.0 - 1.0 / g);
        (f < t2 ? lo : hi) = s2;
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

// Closed-form ASE calibration: the PSD that makes a parent channel whose
// decision samples carry energy decision_symbol_energy measure
// target_evm_pct behind a brickwall receiver of rx_bandwidth_hz.
inline double noise_psd_for_target_evm(double target_evm_pct, double rx_bandwidth_hz,
                                       double decision_symbol_energy) {
    // Implementation floor of the noiseless chain sits far below 0.02%.
    if (!(target_evm_pct > 0.02))
        throw CalibrationError("ase: EVM target at or below the implementation floor");
    if (!(rx_bandwidth_hz > 0.0) || !(decision_symbol_energy > 0.0))
        throw CalibrationError("ase: invalid reference receiver parameters");
    if (target_evm_pct >= 100.0)
        throw CalibrationError("ase: EVM target must be below 100%");
    const double s2 = detail::noise_variance_for_measured_evm(target_evm_pct / 100.0);
    return s2 * decision_symbol_energy / rx_bandwidth_hz;
}

}  // namespace optagg
