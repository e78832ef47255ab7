#pragma once

// Electro-optic device models.
//
// The single-drive MZM is a two-arm interferometer with one arm carrying the
// sinusoidal drive and the dc bias and the other arm static:
//
//   out(t) = x(t)/2 * [ exp(i*(m*sin(2*pi*f_m*t + phi) + b)) + r ]
//
// with b = pi*bias_v/v_pi and r the static-arm amplitude set by the
// extinction ratio, r = (10^(ER/20) - 1)/(10^(ER/20) + 1). Expanding the
// driven arm in Bessel series gives the sideband comb
//
//   c_n = 1/2 * [ J_n(m)*exp(i*(n*phi + b)) + r*delta_{n,0} ],
//
// which sideband_coefficients() returns and which serves as the analytic
// oracle for mzm_modulate(). Advancing the drive phase rotates the +n and -n
// sidebands by opposite amounts; that opposite rotation is the control knob
// the aggregator is built on.

#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <vector>

#include "optagg/bessel.hpp"
#include "optagg/envelope.hpp"
#include "optagg/errors.hpp"

namespace optagg {

struct MzmParams {
    double v_pi = 6.0;  // volts
    double bias_v = 0.0;
    double extinction_ratio_db = std::numeric_limits<double>::infinity();

    double bias_phase_rad() const { return detail::kPi * bias_v / v_pi; }

    // Static-arm amplitude; 1 for infinite extinction.
    double static_arm_amplitude() const {
        if (std::isinf(extinction_ratio_db)) return 1.0;
        const double g = std::pow(10.0, extinction_ratio_db / 20.0);
        return (g - 1.0) / (g + 1.0);
    }

    void validate() const {
        if (!(v_pi > 0.0)) throw ConfigError("mzm: v_pi must be positive");
        if (!(extinction_ratio_db > 0.0))
            throw ConfigError("mzm: extinction_ratio_db must be positive");
    }
};

struct RfDrive {
    double freq_hz = 0.0;
    double mod_index = 0.0;  // dimensionless m in J_n(m)
    double phase_rad = 0.0;

    void validate() const {
        if (!(freq_hz > 0.0)) throw ConfigError("rf drive: freq_hz must be positive");
        if (mod_index < 0.0) throw ConfigError("rf drive: mod_index must be non-negative");
    }
};

struct SidebandTable {
    int n_max = 0;
    std::vector<cdouble> coeffs;  // orders -n_max..+n_max

    cdouble coeff(int n) const {
        if (n < -n_max || n > n_max) return cdouble(0.0, 0.0);
        return coeffs[static_cast<std::size_t>(n + n_max)];
    }
};

namespace detail {

// Highest sideband order whose Bessel amplitude still exceeds the threshold.
inline int significant_order(double mod_index, double threshold = 1e-12) {
    int n = 0;
    while (n < 256 && std::abs(bessel_j(n + 1, mod_index)) > threshold) ++n;
    return n;
}

inline SidebandTable two_arm_sidebands(double mod_index, double phase_rad,
                                       double bias_phase_rad, double static_arm,
                                       int n_max) {
    SidebandTable t;
    t.n_max = n_max;
    t.coeffs.resize(static_cast<std::size_t>(2 * n_max + 1));
    for (int n = -n_max; n <= n_max; ++n) {
        const double ang = n * phase_rad + bias_phase_rad;
        cdouble c = 0.5 * bessel_j(n, mod_index) * cdouble(std::cos(ang), std::sin(ang));
        if (n == 0) c += 0.5 * static_arm;
        t.coeffs[static_cast<std::size_t>(n + n_max)] = c;
    }
    return t;
}

// Estimate of the spectral power an order-by-order shift would wrap past the
// Nyquist edge. The order-n sideband moves the input spectrum by n*f_m, so
// the wrapped power is |c_n|^2 times the input power that leaves the grid.
inline void check_modulation_aliasing(const ComplexEnvelope& x, double f_m,
                                      double mod_index, const char* who) {
    const int n_max = significant_order(mod_index);
    if (n_max == 0) return;
    const SpectrumView v = spectrum(x);
    const double total = v.sum_power();
    if (total <= 0.0) return;
    const double nyq = x.sample_rate_hz / 2.0;
    double wrapped = 0.0;
    for (int n = -n_max; n <= n_max; ++n) {
        if (n == 0) continue;
        const double jn = std::abs(bessel_j(n, mod_index));
        const double shift = n * f_m;
        double out_of_range = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double f = v.offset_hz(i) + shift;
            if (f >= nyq || f < -nyq) out_of_range += std::norm(v.bins[i]);
        }
        wrapped += 0.25 * jn * jn * out_of_range;
    }
    if (wrapped > 1e-12 * total) {
        throw AliasingError(std::string(who) +
                            ": sidebands would wrap meaningful power past Nyquist "
                            "(increase sample rate or reduce drive)");
    }
}

inline ComplexEnvelope two_arm_modulate(const ComplexEnvelope& x, double f_m,
                                        double mod_index, double phase_rad,
                                        double bias_phase_rad, double static_arm) {
    check_modulation_aliasing(x, f_m, mod_index, "mzm_modulate");
    ComplexEnvelope out = x;
    const double w = kTwoPi * f_m / x.sample_rate_hz;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double drive = mod_index * std::sin(w * static_cast<double>(i) + phase_rad);
        const double ang = drive + bias_phase_rad;
        const cdouble arm(std::cos(ang), std::sin(ang));
        out.samples[i] *= 0.5 * (arm + static_arm);
    }
    return out;
}

}  // namespace detail

inline SidebandTable sideband_coefficients(const MzmParams& p, const RfDrive& d, int n_max) {
    p.validate();
    d.validate();
    if (n_max < 1) throw ConfigError("sideband_coefficients: n_max must be >= 1");
    return detail::two_arm_sidebands(d.mod_index, d.phase_rad, p.bias_phase_rad(),
                                     p.static_arm_amplitude(), n_max);
}

inline ComplexEnvelope mzm_modulate(const ComplexEnvelope& x, const MzmParams& p,
                                    const RfDrive& d) {
    validate_envelope(x, "mzm_modulate");
    p.validate();
    d.validate();
    return detail::two_arm_modulate(x, d.freq_hz, d.mod_index, d.phase_rad,
                                    p.bias_phase_rad(), p.static_arm_amplitude());
}

// Ideal I/Q modulator: plain field multiplication of carrier and data.
inline ComplexEnvelope iq_modulate(const ComplexEnvelope& carrier,
                                   const ComplexEnvelope& data) {
    validate_envelope(carrier, "iq_modulate");
    check_same_grid(carrier, data, "iq_modulate");
    ComplexEnvelope out = carrier;
    for (std::size_t i = 0; i < out.size(); ++i) out.samples[i] *= data.samples[i];
    return out;
}

}  // namespace optagg
