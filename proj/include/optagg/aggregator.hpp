#pragma once

// Coherent spectral superposition of two parent channels into one
// higher-order channel.
//
// The composite field is multiplied by the aggregating MZM's transfer comb;
// the order +k sideband of the lower channel and the order -l sideband of the
// upper channel land on the same frequency (k = l = 1 in the standard
// 2*f_m-spaced geometry), where they add as
//
//   J_k(m) * ch1(t) * e^{+i*k*phi} + J_l(m) * alpha * ch2(t) * e^{-i*l*phi}
//
// up to constant phases. The relative optical phase between the contributions
// is therefore (k+l)*phi + theta0 with theta0 collecting every static term
// (bias, carrier phases, path delays). theta0 is not predicted but measured:
// a CW calibration pass runs each channel alone through the plan and reads
// the complex amplitude it contributes at the superposition frequency.

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "optagg/envelope.hpp"
#include "optagg/errors.hpp"
#include "optagg/filter.hpp"
#include "optagg/format.hpp"
#include "optagg/modulator.hpp"

namespace optagg {

struct AggregationPlan {
    double carrier1_offset_hz = -18e9;
    double carrier2_offset_hz = +18e9;
    RfDrive rf{18e9, 1.0, 0.0};
    MzmParams mzm{6.0, 6.0, 20.0};  // null bias by default
    double alpha = 1.0;             // weight applied upstream; informational here
    double phi_rad = 0.0;           // tunable phase-shifter setting
    FilterSpec select_band = brickwall_bandpass(0.0, 20e9);
};

// Sideband orders (k, l) with carrier1 + k*f_m == carrier2 - l*f_m.
struct SidebandOrders {
    int from_ch1 = 1;  // k
    int from_ch2 = 1;  // l
};

inline SidebandOrders sideband_orders(const AggregationPlan& plan) {
    const double s = (plan.carrier2_offset_hz - plan.carrier1_offset_hz) / plan.rf.freq_hz;
    const long long si = std::llround(s);
    if (std::abs(s - static_cast<double>(si)) > 1e-6 || si < 2)
        throw GeometryError(
            "aggregation: carrier spacing must be a multiple (>= 2) of the RF drive "
            "frequency so the sidebands superimpose");
    SidebandOrders o;
    o.from_ch1 = static_cast<int>((si + 1) / 2);
    o.from_ch2 = static_cast<int>(si) - o.from_ch1;
    return o;
}

inline double superposition_offset_hz(const AggregationPlan& plan) {
    const SidebandOrders o = sideband_orders(plan);
    return plan.carrier1_offset_hz + o.from_ch1 * plan.rf.freq_hz;
}

inline RfDrive effective_drive(const AggregationPlan& plan) {
    RfDrive d = plan.rf;
    d.phase_rad += plan.phi_rad;
    return d;
}

// MZM-2 followed by the selection bandpass. Higher-order sidebands are not
// suppressed in the model; the filter removes them, as the real BPF does.
inline ComplexEnvelope aggregate(const ComplexEnvelope& x, const AggregationPlan& plan) {
    sideband_orders(plan);  // geometry check
    const ComplexEnvelope modulated = mzm_modulate(x, plan.mzm, effective_drive(plan));
    return apply_filter(modulated, plan.select_band);
}

struct FormatPrediction {
    std::vector<cdouble> points;              // distinct aggregate points
    std::vector<std::size_t> pair_to_point;   // (i1 * n2 + i2) -> point index
    std::vector<int> multiplicity;            // source pairs per point
    std::size_t n1 = 0, n2 = 0;
    double min_distance = 0.0;
    bool degenerate = false;

    std::size_t point_of_pair(std::size_t i1, std::size_t i2) const {
        return pair_to_point[i1 * n2 + i2];
    }

    // The prediction as a decision reference (unit average energy, point
    // order preserved).
    ModFormat as_format(const std::string& label) const {
        return make_custom_format(label, points);
    }
};

// Vector-summation constellation algebra: channel 1 rotated by rel_phase,
// channel 2 weighted by alpha. Coincident sums are reported via multiplicity,
// never collapsed silently.
inline FormatPrediction predict_format(const ModFormat& f1, const ModFormat& f2,
                                       double alpha, double rel_phase_rad,
                                       double coincidence_tol = 1e-9) {
    if (!(alpha > 0.0)) throw ConfigError("predict_format: alpha must be positive");
    FormatPrediction p;
    p.n1 = f1.size();
    p.n2 = f2.size();
    const cdouble rot(std::cos(rel_phase_rad), std::sin(rel_phase_rad));
    p.pair_to_point.resize(p.n1 * p.n2);
    for (std::size_t i1 = 0; i1 < p.n1; ++i1) {
        for (std::size_t i2 = 0; i2 < p.n2; ++i2) {
            const cdouble v = f1.points[i1] * rot + alpha * f2.points[i2];
            std::size_t idx = p.points.size();
            for (std::size_t q = 0; q < p.points.size(); ++q) {
                if (std::abs(p.points[q] - v) <= coincidence_tol) {
                    idx = q;
                    break;
                }
            }
            if (idx == p.points.size()) {
                p.points.push_back(v);
                p.multiplicity.push_back(0);
            }
            p.pair_to_point[i1 * p.n2 + i2] = idx;
            ++p.multiplicity[idx];
        }
    }
    for (int m : p.multiplicity)
        if (m > 1) p.degenerate = true;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < p.points.size(); ++i)
        for (std::size_t j = i + 1; j < p.points.size(); ++j)
            best = std::min(best, std::abs(p.points[i] - p.points[j]));
    p.min_distance = p.points.size() > 1 ? best : 0.0;
    return p;
}

struct AggregationCalibration {
    cdouble u{0.0, 0.0};  // channel-1 contribution at the superposition bin
    cdouble v{0.0, 0.0};  // channel-2 contribution
    double theta0_rad = 0.0;   // rel_phase = (k+l)*phi + theta0
    double alpha_eff = 0.0;    // |v| / |u|
    double in_band_leak_power = 0.0;  // residual-carrier power reaching the band
};

// CW calibration: run each prepared single-channel envelope (data == 1, all
// upstream weighting/dispersion applied) through the plan alone and read its
// phasor at the superposition frequency. Linearity of the stage makes the
// separated runs exact.
inline AggregationCalibration calibrate_aggregation(const ComplexEnvelope& ch1_cw,
                                                    const ComplexEnvelope& ch2_cw,
                                                    const AggregationPlan& plan) {
    check_same_grid(ch1_cw, ch2_cw, "calibrate_aggregation");
    const double f_sup = superposition_offset_hz(plan);
    const SidebandOrders o = sideband_orders(plan);
    AggregationCalibration cal;
    cal.u = tone_amplitude(aggregate(ch1_cw, plan), f_sup);
    cal.v = tone_amplitude(aggregate(ch2_cw, plan), f_sup);
    if (std::abs(cal.u) == 0.0 || std::abs(cal.v) == 0.0)
        throw GeometryError("calibrate_aggregation: a channel contributes nothing at the "
                            "superposition frequency");
    const int slope = o.from_ch1 + o.from_ch2;
    cal.theta0_rad = wrap_pi(std::arg(cal.u / cal.v) - slope * plan.phi_rad);
    cal.alpha_eff = std::abs(cal.v) / std::abs(cal.u);
    return cal;
}

// Relative optical phase between the superimposed channels under this plan;
// d(rel)/d(phi) is exactly the sum of the sideband orders (2 in the standard
// geometry).
inline double relative_phase(const AggregationPlan& plan, const AggregationCalibration& cal) {
    const SidebandOrders o = sideband_orders(plan);
    return (o.from_ch1 + o.from_ch2) * plan.phi_rad + cal.theta0_rad;
}

// Residual-carrier leakage diagnostic: whatever the full carrier comb puts at
// the superposition bin beyond the two wanted contributions.
inline double measure_in_band_leak(const ComplexEnvelope& carriers_cw,
                                   const AggregationCalibration& cal,
                                   const AggregationPlan& plan) {
    const cdouble z = tone_amplitude(aggregate(carriers_cw, plan), superposition_offset_hz(plan));
    return std::norm(z - cal.u - cal.v);
}

}  // namespace optagg
