#pragma once

// Parent-channel generation: seeded symbol streams, pulse shaping and the
// carrier-suppressed two-tone comb.
//
// Both pulse shapers are exact frequency-domain constructions on the periodic
// window, with the pulse peak normalized to 1 at the symbol instants:
//
//   raised_cosine_nrz  impulse train filtered by the raised-cosine response
//                      (FWHM = symbol rate). Nyquist zero-ISI holds exactly
//                      on the grid.
//   sinc_sequence      impulse train filtered by an ideal rectangle of width
//                      N * rate (N comb lines, N = 3 by default). The kernel
//                      is the periodic sinc sin(pi*N*df*t)/(N*sin(pi*df*t)),
//                      df = rate: N flat lines when unmodulated, N-1 zero
//                      crossings between pulse maxima, 100% of the energy in
//                      the N*rate band.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "optagg/envelope.hpp"
#include "optagg/errors.hpp"
#include "optagg/format.hpp"
#include "optagg/link.hpp"
#include "optagg/modulator.hpp"
#include "optagg/rng.hpp"

namespace optagg {

enum class PulseKind { raised_cosine_nrz, sinc_sequence };

struct PulseShape {
    PulseKind kind = PulseKind::raised_cosine_nrz;
    double rolloff = 1.0;  // raised_cosine_nrz only
    int comb_lines = 3;    // sinc_sequence only; odd, >= 3

    double occupied_bw_hz(double rate_baud) const {
        return kind == PulseKind::raised_cosine_nrz ? (1.0 + rolloff) * rate_baud
                                                    : comb_lines * rate_baud;
    }

    void validate() const {
        if (rolloff < 0.0 || rolloff > 1.0)
            throw ConfigError("pulse: rolloff must lie in [0, 1]");
        if (comb_lines < 3 || comb_lines % 2 == 0)
            throw ConfigError("pulse: comb_lines must be odd and >= 3");
    }
};

struct SymbolStream {
    ModFormat format;
    std::vector<int> indices;
    std::vector<cdouble> symbols;
    double rate_baud = 0.0;
    std::uint64_t seed = 0;

    std::size_t size() const { return indices.size(); }
};

inline SymbolStream generate_symbols(const ModFormat& format, std::size_t count,
                                     std::uint64_t seed, double rate_baud = 0.0) {
    if (count < 1) throw ConfigError("generate_symbols: count must be >= 1");
    unsigned bits = 0;
    while ((std::size_t(1) << bits) < format.size()) ++bits;
    if ((std::size_t(1) << bits) != format.size())
        throw ConfigError("generate_symbols: constellation size must be a power of two");
    SymbolStream s;
    s.format = format;
    s.rate_baud = rate_baud;
    s.seed = seed;
    s.indices.resize(count);
    s.symbols.resize(count);
    const CounterRng rng(seed);
    for (std::size_t k = 0; k < count; ++k) {
        const int idx = static_cast<int>(rng.uniform_pow2(k, bits));
        s.indices[k] = idx;
        s.symbols[k] = format.points[static_cast<std::size_t>(idx)];
    }
    return s;
}

namespace detail {

// Frequency response of the shaper on the grid, normalized so the time-domain
// pulse peaks at exactly 1 on the symbol instants.
inline ComplexEnvelope shape_on_grid(const std::vector<cdouble>& symbols, double rate_baud,
                                     const PulseShape& shape, const SimGrid& grid) {
    const std::size_t n = grid.n_samples;
    const double fs = grid.sample_rate_hz;
    const double sps_real = fs / rate_baud;
    const std::size_t sps = static_cast<std::size_t>(std::llround(sps_real));
    if (std::abs(sps_real - static_cast<double>(sps)) > 1e-9 || sps < 1)
        throw ConfigError("shape_pulses: sample_rate must be an integer multiple of rate_baud");
    if (symbols.size() * sps != n)
        throw ConfigError("shape_pulses: grid length must equal symbol_count * samples_per_symbol");
    if (shape.occupied_bw_hz(rate_baud) > fs)
        throw AliasingError("shape_pulses: pulse bandwidth exceeds the grid Nyquist span");

    std::vector<cdouble> fd(n, cdouble(0, 0));
    for (std::size_t k = 0; k < symbols.size(); ++k) fd[k * sps] = symbols[k];
    fft_forward(fd);

    const double spacing = fs / static_cast<double>(n);
    const std::size_t half = n / 2;
    if (shape.kind == PulseKind::raised_cosine_nrz) {
        const double scale = static_cast<double>(sps);
        for (std::size_t j = 0; j < n; ++j) {
            const double f = (j < n - half)
                                 ? spacing * static_cast<double>(j)
                                 : spacing * (static_cast<double>(j) - static_cast<double>(n));
            fd[j] *= scale * raised_cosine_mag(f, rate_baud, shape.rolloff);
        }
    } else {
        const long long keep = static_cast<long long>(shape.comb_lines) *
                               static_cast<long long>(symbols.size()) / 2;
        const double scale = static_cast<double>(sps) / static_cast<double>(shape.comb_lines);
        for (std::size_t j = 0; j < n; ++j) {
            const long long signed_idx =
                (j < n - half) ? static_cast<long long>(j)
                               : static_cast<long long>(j) - static_cast<long long>(n);
            fd[j] = (signed_idx >= -keep && signed_idx < keep) ? fd[j] * scale
                                                               : cdouble(0, 0);
        }
    }
    fft_inverse(fd);
    ComplexEnvelope out;
    out.samples = std::move(fd);
    out.sample_rate_hz = fs;
    out.center_freq_hz = 0.0;
    return out;
}

}  // namespace detail

inline ComplexEnvelope shape_pulses(const SymbolStream& s, const PulseShape& shape,
                                    const SimGrid& grid) {
    shape.validate();
    return detail::shape_on_grid(s.symbols, s.rate_baud, shape, grid);
}

// Carrier-suppressed two-tone comb: a CW carrier through the MZM at null bias
// driven at spacing/2. The static-arm amplitude is trimmed so the residual
// center tone lands exactly at -suppression_db relative to the unit input
// (the lab equivalent is trimming the bias to the minimum transmission
// point); infinite suppression nulls the center bin exactly.
inline ComplexEnvelope two_tone_carriers(const SimGrid& grid, double spacing_hz,
                                         double suppression_db, double mod_index = 1.0,
                                         double rf_phase_rad = 0.0) {
    if (!(spacing_hz > 0.0)) throw ConfigError("two_tone_carriers: spacing_hz must be positive");
    if (!(suppression_db > 0.0))
        throw ConfigError("two_tone_carriers: suppression_db must be positive");
    const double f_m = spacing_hz / 2.0;
    const double spacing_bins = f_m / (grid.sample_rate_hz / static_cast<double>(grid.n_samples));
    if (std::abs(spacing_bins - std::round(spacing_bins)) > 1e-6)
        throw ConfigError("two_tone_carriers: spacing/2 must sit on the frequency grid");

    const double residual = std::isinf(suppression_db)
                                ? 0.0
                                : std::pow(10.0, -suppression_db / 20.0);
    const double static_arm = bessel_j(0, mod_index) - 2.0 * residual;
    const ComplexEnvelope cw = make_cw(grid);
    return detail::two_arm_modulate(cw, f_m, mod_index, rf_phase_rad, detail::kPi, static_arm);
}

struct TxConfig {
    ModFormat format = bpsk();
    double rate_baud = 10e9;
    PulseShape pulse;
    bool independent_data = true;
    std::uint64_t seed_ch1 = 1;
    std::uint64_t seed_ch2 = 2;
    double carrier_spacing_hz = 36e9;
    double carrier_suppression_db = 20.0;
    double mzm1_mod_index = 1.0;
    double mzm1_rf_phase_rad = 0.0;
    double alpha = 1.0;  // amplitude weight applied to channel 2 (upper carrier)
};

struct ParentChannels {
    ComplexEnvelope composite;  // both modulated channels on one grid
    ComplexEnvelope carriers;   // weighted carrier comb before data modulation
    ComplexEnvelope carrier1;   // lower tone alone (post-weight), for calibration
    ComplexEnvelope carrier2;   // upper tone alone (post-weight)
    SymbolStream ch1, ch2;
    double carrier1_offset_hz = 0.0;
    double carrier2_offset_hz = 0.0;
};

// Full transmitter: two-tone comb -> waveshaper weighting -> I/Q data
// modulation. independent_data synthesizes each channel from its own tone and
// seed (residual comb lines are dropped); shared mode modulates the whole
// weighted comb with the channel-1 stream, as the experiment does.
inline ParentChannels build_parent_channels(const TxConfig& cfg, const SimGrid& grid) {
    cfg.pulse.validate();
    if (!(cfg.alpha > 0.0) || cfg.alpha > 1.0)
        throw ConfigError("transmitter: alpha must lie in (0, 1]");
    ParentChannels out;
    const double f_m = cfg.carrier_spacing_hz / 2.0;
    out.carrier1_offset_hz = -f_m;
    out.carrier2_offset_hz = +f_m;

    ComplexEnvelope comb = two_tone_carriers(grid, cfg.carrier_spacing_hz,
                                             cfg.carrier_suppression_db, cfg.mzm1_mod_index,
                                             cfg.mzm1_rf_phase_rad);
    if (cfg.alpha != 1.0) {
        comb = apply_weight(comb, WeightPlan{cfg.alpha, f_m / 2.0, 3.0 * f_m / 2.0});
    }
    out.carriers = comb;
    out.carrier1 = apply_filter(comb, brickwall_bandpass(-f_m, f_m));
    out.carrier2 = apply_filter(comb, brickwall_bandpass(+f_m, f_m));

    out.ch1 = generate_symbols(cfg.format, grid.n_samples /
                                   static_cast<std::size_t>(std::llround(
                                       grid.sample_rate_hz / cfg.rate_baud)),
                               cfg.seed_ch1, cfg.rate_baud);
    out.ch2 = cfg.independent_data
                  ? generate_symbols(cfg.format, out.ch1.size(), cfg.seed_ch2, cfg.rate_baud)
                  : out.ch1;

    const ComplexEnvelope d1 = shape_pulses(out.ch1, cfg.pulse, grid);
    if (cfg.independent_data) {
        const ComplexEnvelope d2 = shape_pulses(out.ch2, cfg.pulse, grid);
        out.composite = combine(iq_modulate(out.carrier1, d1), iq_modulate(out.carrier2, d2));
    } else {
        out.composite = iq_modulate(comb, d1);
    }
    return out;
}

}  // namespace optagg
