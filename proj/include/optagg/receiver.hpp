#pragma once

// Coherent reception and constellation metrology.
//
// receive() turns the selected optical band into complex baseband, either
// directly (ideal homodyne) or through a real-valued intermediate-frequency
// photocurrent and digital downconversion (heterodyne); the two agree to
// numerical precision whenever the image band is free.
//
// recover_symbols() is the modulation-analyzer equivalent: noise-limiting
// filter, exhaustive timing search, blind carrier-phase recovery (M-power
// coarse estimate plus an EVM-minimizing fine search), unit-power
// normalization and nearest-point decisions. The residual M-fold rotation
// ambiguity is resolved against known transmitted symbols when the caller
// provides them (a simulator always has ground truth); otherwise it is
// reported in the ambiguity flag.
//
// Conventions (documented, fixed): EVM is decision-directed RMS against the
// reference constellation, normalized by the reference RMS power, averaged
// over sub-blocks. The Q factor of a cluster pair is |mu_a - mu_b| divided by
// the summed per-cluster standard deviations of the projections onto the axis
// joining the cluster means; compute_q_factor() returns the minimum pair
// ratio (linear), and reports carry 20*log10 of it as q_factor_db.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "optagg/envelope.hpp"
#include "optagg/errors.hpp"
#include "optagg/filter.hpp"
#include "optagg/format.hpp"
#include "optagg/transmitter.hpp"

namespace optagg {

struct RxConfig {
    enum class Mode { homodyne_ideal, heterodyne };
    Mode mode = Mode::homodyne_ideal;
    double band_center_offset_hz = 0.0;
    double lo_offset_hz = 40e9;  // heterodyne only
    double lowpass_bw_hz = 0.0;  // must be set by the caller (full signal band)
    int samples_per_symbol_out = 4;
};

// Band selection + downconversion to baseband at samples_per_symbol_out
// times the symbol rate.
inline ComplexEnvelope receive(const ComplexEnvelope& x, const RxConfig& rx,
                               double rate_baud) {
    validate_envelope(x, "receive");
    if (!(rx.lowpass_bw_hz > 0.0)) throw ConfigError("receive: lowpass_bw_hz must be set");
    if (rx.samples_per_symbol_out < 1)
        throw ConfigError("receive: samples_per_symbol_out must be >= 1");
    const double fs_out = rate_baud * rx.samples_per_symbol_out;
    if (rx.lowpass_bw_hz > fs_out)
        throw ConfigError("receive: lowpass_bw_hz exceeds the output Nyquist span");

    ComplexEnvelope y = (rx.band_center_offset_hz != 0.0)
                            ? frequency_shift(x, -rx.band_center_offset_hz)
                            : x;
    if (rx.mode == RxConfig::Mode::heterodyne) {
        const double b_half = rx.lowpass_bw_hz / 2.0;
        const double f_lo = std::abs(rx.lo_offset_hz);
        if (!(f_lo > b_half))
            throw ConfigError("receive: heterodyne LO offset must exceed half the band");
        if (2.0 * f_lo - b_half <= rx.lowpass_bw_hz / 2.0)
            throw ConfigError("receive: heterodyne image overlaps the signal band");
        if (f_lo + b_half >= x.sample_rate_hz / 2.0)
            throw ConfigError("receive: heterodyne IF exceeds the grid Nyquist span");
        // LO on the bin grid keeps the circular mixing exact.
        const std::size_t n = y.size();
        const long long k = detail::wrap_index(
            detail::nearest_bin(f_lo, y.sample_rate_hz, n), n);
        const long long nn = static_cast<long long>(n);
        for (long long i = 0; i < nn; ++i) {
            const double ang = detail::kTwoPi * static_cast<double>((k * i) % nn) /
                               static_cast<double>(nn);
            const cdouble lo(std::cos(ang), std::sin(ang));
            // photocurrent (real IF), then digital downconversion
            const double photocurrent =
                (y.samples[static_cast<std::size_t>(i)] * std::conj(lo)).real();
            y.samples[static_cast<std::size_t>(i)] = 2.0 * photocurrent * lo;
        }
    }
    y = apply_filter(y, brickwall_lowpass(rx.lowpass_bw_hz));

    const double n_out_real = static_cast<double>(x.size()) * fs_out / x.sample_rate_hz;
    const std::size_t n_out = static_cast<std::size_t>(std::llround(n_out_real));
    if (std::abs(n_out_real - static_cast<double>(n_out)) > 1e-6 || n_out < 1)
        throw ConfigError("receive: output rate must divide the grid sample rate");
    return resample_to(y, n_out);
}

struct EvmStats {
    double avg_pct = 0.0;
    double std_pct = 0.0;
};

// Decision-directed EVM over sub-blocks. recovered must already be normalized.
inline EvmStats compute_evm(const std::vector<cdouble>& recovered, const ModFormat& ref,
                            int blocks = 10) {
    if (recovered.empty()) throw ConfigError("compute_evm: no symbols");
    const std::size_t n = recovered.size();
    const int nb = std::max(1, std::min<int>(blocks, static_cast<int>(n)));
    std::vector<double> block_evm;
    block_evm.reserve(static_cast<std::size_t>(nb));
    for (int b = 0; b < nb; ++b) {
        const std::size_t lo = n * static_cast<std::size_t>(b) / static_cast<std::size_t>(nb);
        const std::size_t hi =
            n * static_cast<std::size_t>(b + 1) / static_cast<std::size_t>(nb);
        double err = 0.0, refp = 0.0;
        for (std::size_t k = lo; k < hi; ++k) {
            double best = std::numeric_limits<double>::infinity();
            std::size_t bi = 0;
            for (std::size_t i = 0; i < ref.points.size(); ++i) {
                const double d = std::norm(recovered[k] - ref.points[i]);
                if (d < best) {
                    best = d;
                    bi = i;
                }
            }
            err += best;
            refp += std::norm(ref.points[bi]);
        }
        if (refp > 0.0) block_evm.push_back(std::sqrt(err / refp));
    }
    EvmStats out;
    for (double e : block_evm) out.avg_pct += e;
    out.avg_pct = 100.0 * out.avg_pct / static_cast<double>(block_evm.size());
    if (block_evm.size() > 1) {
        double var = 0.0;
        for (double e : block_evm) {
            const double d = 100.0 * e - out.avg_pct;
            var += d * d;
        }
        out.std_pct = std::sqrt(var / static_cast<double>(block_evm.size() - 1));
    }
    return out;
}

// Data-aided EVM (reference sequence known). Equals the decision-directed
// value whenever no decision errs.
inline EvmStats compute_evm_data_aided(const std::vector<cdouble>& recovered,
                                       const ModFormat& ref,
                                       const std::vector<int>& reference_indices,
                                       int blocks = 10) {
    if (recovered.size() != reference_indices.size())
        throw ConfigError("compute_evm_data_aided: length mismatch");
    const std::size_t n = recovered.size();
    const int nb = std::max(1, std::min<int>(blocks, static_cast<int>(n)));
    std::vector<double> block_evm;
    for (int b = 0; b < nb; ++b) {
        const std::size_t lo = n * static_cast<std::size_t>(b) / static_cast<std::size_t>(nb);
        const std::size_t hi =
            n * static_cast<std::size_t>(b + 1) / static_cast<std::size_t>(nb);
        double err = 0.0, refp = 0.0;
        for (std::size_t k = lo; k < hi; ++k) {
            const cdouble p = ref.points[static_cast<std::size_t>(reference_indices[k])];
            err += std::norm(recovered[k] - p);
            refp += std::norm(p);
        }
        if (refp > 0.0) block_evm.push_back(std::sqrt(err / refp));
    }
    EvmStats out;
    for (double e : block_evm) out.avg_pct += e;
    out.avg_pct = 100.0 * out.avg_pct / static_cast<double>(block_evm.size());
    if (block_evm.size() > 1) {
        double var = 0.0;
        for (double e : block_evm) {
            const double d = 100.0 * e - out.avg_pct;
            var += d * d;
        }
        out.std_pct = std::sqrt(var / static_cast<double>(block_evm.size() - 1));
    }
    return out;
}

// Minimum adjacent-pair cluster separation ratio (linear). Adjacent means
// format points within 1.25x the constellation minimum distance. Returns
// +infinity on noiseless clusters (documented sentinel).
inline double compute_q_factor(const std::vector<cdouble>& recovered,
                               const std::vector<int>& decisions, const ModFormat& fmt) {
    if (recovered.size() != decisions.size() || recovered.empty())
        throw ConfigError("compute_q_factor: bad inputs");
    const std::size_t np = fmt.size();
    std::vector<cdouble> mean(np, cdouble(0, 0));
    std::vector<std::size_t> count(np, 0);
    for (std::size_t k = 0; k < recovered.size(); ++k) {
        mean[static_cast<std::size_t>(decisions[k])] += recovered[k];
        ++count[static_cast<std::size_t>(decisions[k])];
    }
    std::size_t populated = 0;
    for (std::size_t i = 0; i < np; ++i) {
        if (count[i]) {
            mean[i] /= static_cast<double>(count[i]);
            ++populated;
        }
    }
    if (populated < 2)
        throw InsufficientStatisticsError("compute_q_factor: need at least two populated clusters");

    const double adj = 1.25 * fmt.min_distance();
    double q_min = std::numeric_limits<double>::infinity();
    bool any_pair = false;
    for (std::size_t i = 0; i < np; ++i) {
        for (std::size_t j = i + 1; j < np; ++j) {
            if (std::abs(fmt.points[i] - fmt.points[j]) > adj) continue;
            if (count[i] == 0 || count[j] == 0)
                throw InsufficientStatisticsError(
                    "compute_q_factor: empty cluster on an adjacent pair");
            any_pair = true;
            const cdouble axis = (mean[j] - mean[i]) / std::abs(mean[j] - mean[i]);
            double m_i = 0.0, m_j = 0.0, v_i = 0.0, v_j = 0.0;
            for (std::size_t k = 0; k < recovered.size(); ++k) {
                const std::size_t d = static_cast<std::size_t>(decisions[k]);
                if (d != i && d != j) continue;
                const double proj = (recovered[k] * std::conj(axis)).real();
                if (d == i) {
                    m_i += proj;
                } else {
                    m_j += proj;
                }
            }
            m_i /= static_cast<double>(count[i]);
            m_j /= static_cast<double>(count[j]);
            for (std::size_t k = 0; k < recovered.size(); ++k) {
                const std::size_t d = static_cast<std::size_t>(decisions[k]);
                if (d != i && d != j) continue;
                const double proj = (recovered[k] * std::conj(axis)).real();
                if (d == i) {
                    v_i += (proj - m_i) * (proj - m_i);
                } else {
                    v_j += (proj - m_j) * (proj - m_j);
                }
            }
            const double s_i = count[i] > 1 ? std::sqrt(v_i / static_cast<double>(count[i] - 1)) : 0.0;
            const double s_j = count[j] > 1 ? std::sqrt(v_j / static_cast<double>(count[j] - 1)) : 0.0;
            const double sep = std::abs(m_j - m_i);
            if (s_i + s_j < 1e-12 * sep) return std::numeric_limits<double>::infinity();
            q_min = std::min(q_min, sep / (s_i + s_j));
        }
    }
    if (!any_pair)
        throw InsufficientStatisticsError("compute_q_factor: no adjacent cluster pair");
    return q_min;
}

struct ConstellationReport {
    std::vector<cdouble> recovered;  // unit mean power, rotation resolved
    std::vector<int> decisions;
    double evm_avg_pct = 0.0;
    double evm_std_pct = 0.0;
    double q_factor_linear = 0.0;
    double q_factor_db = 0.0;
    double ser = std::numeric_limits<double>::quiet_NaN();  // NaN without ground truth
    std::vector<cdouble> cluster_means;
    std::vector<double> cluster_sigmas;  // RMS complex deviation per cluster
    std::vector<int> cluster_counts;
    bool rotation_ambiguous = false;
    int timing_offset = 0;
    double carrier_phase_rad = 0.0;
    ModFormat format;
};

struct RecoverOptions {
    std::optional<std::vector<int>> reference_indices;  // transmitted ground truth
    int evm_blocks = 10;
    bool apply_noise_filter = true;
};

namespace detail {

inline std::vector<int> decide_all(const std::vector<cdouble>& y, const ModFormat& fmt) {
    std::vector<int> d(y.size());
    for (std::size_t k = 0; k < y.size(); ++k) {
        double best = std::numeric_limits<double>::infinity();
        int bi = 0;
        for (std::size_t i = 0; i < fmt.points.size(); ++i) {
            const double dist = std::norm(y[k] - fmt.points[i]);
            if (dist < best) {
                best = dist;
                bi = static_cast<int>(i);
            }
        }
        d[k] = bi;
    }
    return d;
}

inline double decision_error_power(const std::vector<cdouble>& y, const ModFormat& fmt,
                                   double rot_rad) {
    const cdouble rot(std::cos(rot_rad), std::sin(rot_rad));
    double acc = 0.0;
    for (const auto& s : y) {
        const cdouble v = s * rot;
        double best = std::numeric_limits<double>::infinity();
        for (const auto& p : fmt.points) best = std::min(best, std::norm(v - p));
        acc += best;
    }
    return acc;
}

}  // namespace detail

inline ConstellationReport recover_symbols(const ComplexEnvelope& x, const ModFormat& fmt,
                                           double rate_baud, const PulseShape& shape,
                                           const RecoverOptions& opt = {}) {
    validate_envelope(x, "recover_symbols");
    const double sps_real = x.sample_rate_hz / rate_baud;
    const std::size_t sps = static_cast<std::size_t>(std::llround(sps_real));
    if (std::abs(sps_real - static_cast<double>(sps)) > 1e-9 || sps < 1)
        throw ConfigError("recover_symbols: sample rate must be an integer multiple of rate_baud");
    const std::size_t n_sym = x.size() / sps;
    if (n_sym * sps != x.size())
        throw ConfigError("recover_symbols: window must hold an integer symbol count");

    ComplexEnvelope z = x;
    if (opt.apply_noise_filter) {
        const double bw = shape.occupied_bw_hz(rate_baud);
        if (bw < x.sample_rate_hz) z = apply_filter(z, brickwall_lowpass(bw));
    }

    // Exhaustive timing-phase search: sampled power peaks at the pulse maxima
    // for both supported shapes.
    std::size_t best_tau = 0;
    double best_pow = -1.0;
    for (std::size_t tau = 0; tau < sps; ++tau) {
        double acc = 0.0;
        for (std::size_t k = 0; k < n_sym; ++k) acc += std::norm(z.samples[k * sps + tau]);
        if (acc > best_pow) {
            best_pow = acc;
            best_tau = tau;
        }
    }

    std::vector<cdouble> y(n_sym);
    for (std::size_t k = 0; k < n_sym; ++k) y[k] = z.samples[k * sps + best_tau];
    double mp = 0.0;
    for (const auto& s : y) mp += std::norm(s);
    mp /= static_cast<double>(n_sym);
    if (!(mp > 0.0)) throw PipelineError("recover_symbols: recovered band holds no power");
    const double g = 1.0 / std::sqrt(mp);
    for (auto& s : y) s *= g;

    // Blind carrier phase: M-power coarse alignment within the format's
    // rotational-symmetry sector, then an EVM-minimizing fine search.
    const std::vector<double> sym_rot = detail::symmetry_rotations(fmt.points);
    const int m_order = static_cast<int>(sym_rot.size());
    double theta_coarse = 0.0;
    bool have_coarse = false;
    if (m_order > 1) {
        cdouble my(0, 0), mpnt(0, 0);
        for (const auto& s : y) my += std::pow(s, m_order);
        for (const auto& p : fmt.points) mpnt += std::pow(p, m_order);
        if (std::abs(my) > 1e-9 && std::abs(mpnt) > 1e-9) {
            theta_coarse = (std::arg(mpnt) - std::arg(my)) / m_order;
            have_coarse = true;
        }
    }
    const double sector = have_coarse ? detail::kTwoPi / m_order : detail::kTwoPi;
    const int grid_pts = have_coarse ? 96 : 384;
    double best_theta = theta_coarse;
    double best_err = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid_pts; ++i) {
        const double th =
            theta_coarse + sector * (static_cast<double>(i) / grid_pts - 0.5);
        const double e = detail::decision_error_power(y, fmt, th);
        if (e < best_err) {
            best_err = e;
            best_theta = th;
        }
    }
    {  // golden-section polish on the winning bracket
        const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
        double a = best_theta - sector / grid_pts;
        double b = best_theta + sector / grid_pts;
        double c = b - gr * (b - a), d = a + gr * (b - a);
        double fc = detail::decision_error_power(y, fmt, c);
        double fd = detail::decision_error_power(y, fmt, d);
        for (int it = 0; it < 40; ++it) {
            if (fc < fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - gr * (b - a);
                fc = detail::decision_error_power(y, fmt, c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + gr * (b - a);
                fd = detail::decision_error_power(y, fmt, d);
            }
            if (fc < best_err) {
                best_err = fc;
                best_theta = c;
            }
            if (fd < best_err) {
                best_err = fd;
                best_theta = d;
            }
        }
    }
    cdouble rot(std::cos(best_theta), std::sin(best_theta));
    for (auto& s : y) s *= rot;

    ConstellationReport rep;
    rep.format = fmt;
    rep.timing_offset = static_cast<int>(best_tau);
    rep.carrier_phase_rad = best_theta;
    rep.decisions = detail::decide_all(y, fmt);
    rep.rotation_ambiguous = (m_order > 1);

    if (opt.reference_indices) {
        const auto& ref = *opt.reference_indices;
        if (ref.size() != n_sym)
            throw ConfigError("recover_symbols: reference length mismatch");
        // Resolve the symmetry branch by agreement with the known symbols.
        std::size_t best_match = 0;
        double best_ang = 0.0;
        for (double ang : sym_rot) {
            const cdouble r2(std::cos(ang), std::sin(ang));
            std::vector<cdouble> yr(y);
            for (auto& s : yr) s *= r2;
            const std::vector<int> d = detail::decide_all(yr, fmt);
            std::size_t match = 0;
            for (std::size_t k = 0; k < n_sym; ++k)
                if (d[k] == ref[k]) ++match;
            if (match > best_match) {
                best_match = match;
                best_ang = ang;
            }
        }
        if (best_ang != 0.0) {
            const cdouble r2(std::cos(best_ang), std::sin(best_ang));
            for (auto& s : y) s *= r2;
            rep.carrier_phase_rad = wrap_pi(best_theta + best_ang);
            rep.decisions = detail::decide_all(y, fmt);
        }
        rep.rotation_ambiguous = false;
        std::size_t errs = 0;
        for (std::size_t k = 0; k < n_sym; ++k)
            if (rep.decisions[k] != ref[k]) ++errs;
        rep.ser = static_cast<double>(errs) / static_cast<double>(n_sym);
    }

    rep.recovered = std::move(y);
    const EvmStats evm = compute_evm(rep.recovered, fmt, opt.evm_blocks);
    rep.evm_avg_pct = evm.avg_pct;
    rep.evm_std_pct = evm.std_pct;

    rep.cluster_means.assign(fmt.size(), cdouble(0, 0));
    rep.cluster_sigmas.assign(fmt.size(), 0.0);
    rep.cluster_counts.assign(fmt.size(), 0);
    for (std::size_t k = 0; k < rep.recovered.size(); ++k) {
        const auto d = static_cast<std::size_t>(rep.decisions[k]);
        rep.cluster_means[d] += rep.recovered[k];
        ++rep.cluster_counts[d];
    }
    for (std::size_t i = 0; i < fmt.size(); ++i)
        if (rep.cluster_counts[i])
            rep.cluster_means[i] /= static_cast<double>(rep.cluster_counts[i]);
    for (std::size_t k = 0; k < rep.recovered.size(); ++k) {
        const auto d = static_cast<std::size_t>(rep.decisions[k]);
        rep.cluster_sigmas[d] += std::norm(rep.recovered[k] - rep.cluster_means[d]);
    }
    for (std::size_t i = 0; i < fmt.size(); ++i)
        if (rep.cluster_counts[i])
            rep.cluster_sigmas[i] =
                std::sqrt(rep.cluster_sigmas[i] / static_cast<double>(rep.cluster_counts[i]));

    try {
        rep.q_factor_linear = compute_q_factor(rep.recovered, rep.decisions, fmt);
        rep.q_factor_db = 20.0 * std::log10(rep.q_factor_linear);
    } catch (const InsufficientStatisticsError&) {
        rep.q_factor_linear = std::numeric_limits<double>::quiet_NaN();
        rep.q_factor_db = std::numeric_limits<double>::quiet_NaN();
    }
    return rep;
}

struct EyeDiagram {
    std::vector<int> counts_i;  // rows x cols, row-major, row 0 = lowest amplitude
    std::vector<int> counts_q;
    int rows = 0;
    int cols = 0;
    double amp_min = 0.0;
    double amp_max = 0.0;
};

// Fold the waveform modulo span_symbols periods into amplitude histograms of
// the I and Q components. Export only; no metric is derived here.
inline EyeDiagram eye_diagram(const ComplexEnvelope& x, double rate_baud, int span_symbols,
                              int rows = 128) {
    validate_envelope(x, "eye_diagram");
    const double sps_real = x.sample_rate_hz / rate_baud;
    const std::size_t sps = static_cast<std::size_t>(std::llround(sps_real));
    if (sps < 8) throw ConfigError("eye_diagram: needs at least 8 samples per symbol");
    if (span_symbols < 1) throw ConfigError("eye_diagram: span_symbols must be >= 1");
    EyeDiagram eye;
    eye.rows = rows;
    eye.cols = static_cast<int>(sps) * span_symbols;
    eye.counts_i.assign(static_cast<std::size_t>(eye.rows * eye.cols), 0);
    eye.counts_q.assign(static_cast<std::size_t>(eye.rows * eye.cols), 0);
    double amax = 0.0;
    for (const auto& s : x.samples) amax = std::max({amax, std::abs(s.real()), std::abs(s.imag())});
    if (amax == 0.0) amax = 1.0;
    eye.amp_min = -amax;
    eye.amp_max = amax;
    const double scale = (rows - 1) / (2.0 * amax);
    for (std::size_t k = 0; k < x.size(); ++k) {
        const int col = static_cast<int>(k % static_cast<std::size_t>(eye.cols));
        const int ri = static_cast<int>(std::lround((x.samples[k].real() + amax) * scale));
        const int rq = static_cast<int>(std::lround((x.samples[k].imag() + amax) * scale));
        ++eye.counts_i[static_cast<std::size_t>(ri * eye.cols + col)];
        ++eye.counts_q[static_cast<std::size_t>(rq * eye.cols + col)];
    }
    return eye;
}

}  // namespace optagg
