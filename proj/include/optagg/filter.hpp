#pragma once

// Frequency-domain filters. Brickwall kinds are exact in the DFT domain
// (no windowing ripple) so they are idempotent and reproducible; bins outside
// the band come back as exact zeros.

#include <cmath>
#include <string>
#include <vector>

#include "optagg/envelope.hpp"
#include "optagg/errors.hpp"

namespace optagg {

enum class FilterKind { brickwall_bandpass, brickwall_lowpass, raised_cosine, gaussian_bpf };

struct FilterSpec {
    FilterKind kind = FilterKind::brickwall_lowpass;
    double center_offset_hz = 0.0;
    // Full width. brickwall: passband edge-to-edge; raised_cosine: the
    // symbol-rate-equivalent width R (flat to (1-rolloff)R/2, cosine taper to
    // (1+rolloff)R/2); gaussian: FWHM of the magnitude response.
    double bandwidth_hz = 0.0;
    double rolloff = 1.0;
};

inline FilterSpec brickwall_bandpass(double center_offset_hz, double bandwidth_hz) {
    return {FilterKind::brickwall_bandpass, center_offset_hz, bandwidth_hz, 0.0};
}

inline FilterSpec brickwall_lowpass(double bandwidth_hz) {
    return {FilterKind::brickwall_lowpass, 0.0, bandwidth_hz, 0.0};
}

namespace detail {

// Raised-cosine magnitude; rate is the symbol-rate-equivalent full width.
inline double raised_cosine_mag(double f, double rate, double rolloff) {
    const double af = std::abs(f);
    const double f1 = (1.0 - rolloff) * rate / 2.0;
    const double f2 = (1.0 + rolloff) * rate / 2.0;
    if (af <= f1) return 1.0;
    if (af >= f2 || rolloff == 0.0) return 0.0;
    const double u = (af - f1) / (rolloff * rate);  // in (0, 1)
    return 0.5 * (1.0 + std::cos(kPi * u));
}

inline double filter_gain(const FilterSpec& f, double offset_hz) {
    const double df = offset_hz - f.center_offset_hz;
    switch (f.kind) {
        case FilterKind::brickwall_bandpass:
        case FilterKind::brickwall_lowpass: {
            // Edge-inclusive with a relative guard so exact band edges on the
            // bin grid are kept deterministically.
            const double half = f.bandwidth_hz / 2.0;
            return (std::abs(df) <= half * (1.0 + 1e-12)) ? 1.0 : 0.0;
        }
        case FilterKind::raised_cosine:
            return raised_cosine_mag(df, f.bandwidth_hz, f.rolloff);
        case FilterKind::gaussian_bpf: {
            const double sigma = f.bandwidth_hz / (2.0 * std::sqrt(2.0 * std::log(2.0)));
            const double u = df / sigma;
            return std::exp(-0.5 * u * u);
        }
    }
    return 0.0;
}

}  // namespace detail

inline void validate_filter(const FilterSpec& f, const ComplexEnvelope& x) {
    if (!(f.bandwidth_hz > 0.0)) throw ConfigError("filter: bandwidth_hz must be positive");
    if (f.bandwidth_hz > x.sample_rate_hz)
        throw ConfigError("filter: bandwidth_hz exceeds the envelope sample rate");
    if (f.kind == FilterKind::raised_cosine && (f.rolloff < 0.0 || f.rolloff > 1.0))
        throw ConfigError("filter: rolloff must lie in [0, 1]");
}

inline ComplexEnvelope apply_filter(const ComplexEnvelope& x, const FilterSpec& f) {
    validate_envelope(x, "apply_filter");
    validate_filter(f, x);
    const std::size_t n = x.size();
    std::vector<cdouble> fd(x.samples);
    fft_forward(fd);
    const double spacing = x.bin_spacing_hz();
    const std::size_t half = n / 2;
    for (std::size_t j = 0; j < n; ++j) {
        const double freq =
            (j < n - half) ? spacing * static_cast<double>(j)
                           : spacing * (static_cast<double>(j) - static_cast<double>(n));
        const double g = detail::filter_gain(f, freq);
        if (g == 0.0) {
            fd[j] = cdouble(0.0, 0.0);  // exact zero outside the band
        } else if (g != 1.0) {
            fd[j] *= g;
        }
    }
    fft_inverse(fd);
    ComplexEnvelope out;
    out.samples = std::move(fd);
    out.sample_rate_hz = x.sample_rate_hz;
    out.center_freq_hz = x.center_freq_hz;
    return out;
}

}  // namespace optagg
