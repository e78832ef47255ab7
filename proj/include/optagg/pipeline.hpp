#pragma once

// Scenario execution: the full chain (two-tone comb -> waveshaper -> I/Q
// data -> dispersion -> ASE -> aggregating MZM -> band select -> coherent
// receiver -> DSP), tuning, sweeps and artifact writing.
//
// Everything is deterministic in the scenario seed: per-stage streams follow
// the documented splitting rule, tone phases are exact on the grid, and the
// exporters format numbers identically on every run.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "optagg/io.hpp"
#include "optagg/scenario.hpp"
#include "optagg/version.hpp"

namespace optagg {

struct RunResult {
    Scenario scenario;
    ParentChannels parents;
    ComplexEnvelope post_link;   // after dispersion and ASE, entering MZM-2
    ComplexEnvelope post_mzm2;   // full comb after the aggregating modulator
    ComplexEnvelope post_agg;    // band-selected aggregate
    ComplexEnvelope received;    // receiver output at samples_per_symbol_out
    FormatPrediction prediction;
    AggregationCalibration calibration;
    double phi_used_rad = 0.0;
    double alpha_used = 1.0;
    double rel_phase_rad = 0.0;
    double in_band_leak_power = 0.0;
    double resolved_noise_psd = 0.0;
    ConstellationReport report;
    std::optional<ConstellationReport> parent_report;
    std::vector<int> reference_indices;
    std::optional<TuneResult> tune_result;
};

namespace detail {

inline double pulse_power_factor(const PulseShape& p) {
    // Time-average power of a dense unit-energy stream relative to the
    // decision-sample energy (pulse peaks are normalized to 1).
    return p.kind == PulseKind::raised_cosine_nrz ? 1.0 - p.rolloff / 4.0
                                                  : 1.0 / p.comb_lines;
}

inline double band_power(const ComplexEnvelope& x, double lo_hz, double hi_hz) {
    const SpectrumView v = spectrum(x);
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double f = v.offset_hz(i);
        if (f >= lo_hz && f <= hi_hz) acc += std::norm(v.bins[i]);
    }
    return acc / static_cast<double>(v.size());  // mean power in mW
}

inline TxConfig tx_config_from(const Scenario& sc, double alpha) {
    TxConfig cfg;
    cfg.format = sc.parent_mod_format();
    cfg.rate_baud = sc.rate_baud;
    cfg.pulse = sc.pulse;
    cfg.independent_data = sc.independent_data;
    cfg.seed_ch1 = stage_seed(sc.seed, kSeedStageSymbolsCh1);
    cfg.seed_ch2 = sc.independent_data ? stage_seed(sc.seed, kSeedStageSymbolsCh2)
                                       : cfg.seed_ch1;
    cfg.carrier_spacing_hz = sc.carrier_spacing_hz;
    cfg.carrier_suppression_db = sc.carrier_suppression_db;
    cfg.mzm1_mod_index = sc.mzm1_mod_index;
    cfg.mzm1_rf_phase_rad = sc.mzm1_rf_phase_rad;
    cfg.alpha = alpha;
    return cfg;
}

inline AggregationPlan plan_from(const Scenario& sc, double phi) {
    AggregationPlan plan;
    plan.carrier1_offset_hz = -sc.carrier_spacing_hz / 2.0;
    plan.carrier2_offset_hz = +sc.carrier_spacing_hz / 2.0;
    plan.rf = RfDrive{sc.rf_freq_hz, sc.mod_index, 0.0};
    plan.mzm.v_pi = 6.0;
    plan.mzm.bias_v = sc.bias_v_over_vpi * plan.mzm.v_pi;
    plan.mzm.extinction_ratio_db = sc.extinction_ratio_db;
    plan.alpha = sc.alpha;
    plan.phi_rad = phi;
    plan.select_band = brickwall_bandpass(0.0, sc.select_bw_hz());
    return plan;
}

// Everything that is independent of (phi, alpha-free retuning) for one
// scenario: per-channel modulated envelopes and calibration tones, already
// through dispersion. ASE is not included here (calibration is noiseless;
// the runner adds noise on the assembled composite).
struct PreparedChain {
    ParentChannels parents;
    ComplexEnvelope ch1_path;  // channel 1 modulated, dispersed (no weight dependence)
    ComplexEnvelope ch2_path;  // channel 2 modulated, dispersed, at alpha = 1
    ComplexEnvelope cw1;       // carrier 1 through the same chain, data == 1
    ComplexEnvelope cw2;       // carrier 2, at alpha = 1
    ComplexEnvelope carriers;  // full weighted comb, dispersed (leak diagnostic)
};

inline PreparedChain prepare_chain(const Scenario& sc, std::size_t symbol_count) {
    Scenario s = sc;
    s.symbol_count = symbol_count;
    const SimGrid grid = s.grid();
    // Channel envelopes are built at alpha = 1; the runner scales channel 2,
    // which equals running the waveshaper first (everything downstream of the
    // weight is linear in the field).
    TxConfig cfg = tx_config_from(s, 1.0);
    PreparedChain pc;
    pc.parents = build_parent_channels(cfg, grid);
    const DispersionSpec disp{s.dispersion_ps_per_nm, s.dispersion_ref_wavelength_nm};
    const ComplexEnvelope d1 = shape_pulses(pc.parents.ch1, s.pulse, grid);
    const ComplexEnvelope d2 = s.independent_data
                                   ? shape_pulses(pc.parents.ch2, s.pulse, grid)
                                   : d1;
    pc.ch1_path = apply_dispersion(iq_modulate(pc.parents.carrier1, d1), disp);
    pc.ch2_path = apply_dispersion(iq_modulate(pc.parents.carrier2, d2), disp);
    pc.cw1 = apply_dispersion(pc.parents.carrier1, disp);
    pc.cw2 = apply_dispersion(pc.parents.carrier2, disp);
    pc.carriers = apply_dispersion(pc.parents.carriers, disp);
    return pc;
}

inline ComplexEnvelope assemble_composite(const PreparedChain& pc, double alpha) {
    return combine(pc.ch1_path, scaled(pc.ch2_path, alpha));
}

}  // namespace detail

// Relative optical phase that realizes the target constellation, and the phi
// solving it given the measured theta0.
inline double solve_phi_for_target(const Scenario& sc, double theta0,
                                   const TargetSolution& sol) {
    AggregationPlan plan = detail::plan_from(sc, 0.0);
    const SidebandOrders o = sideband_orders(plan);
    const int slope = o.from_ch1 + o.from_ch2;
    const double period = detail::kTwoPi / slope;
    double phi = (sol.rel_phase_rad - theta0) / slope;
    phi = std::fmod(phi, period);
    if (phi < 0) phi += period;
    return phi;
}

inline TuneResult tune_scenario(const Scenario& sc);

inline RunResult run_scenario(const Scenario& sc_in) {
    Scenario sc = sc_in;
    validate_scenario(sc);
    RunResult rr;

    double alpha = sc.alpha;
    std::optional<TuneResult> tuned;
    if (sc.aggregation_enabled && sc.phi_mode == Scenario::PhiMode::tune) {
        tuned = tune_scenario(sc);
        alpha = tuned->alpha_star;
    }

    detail::PreparedChain pc = detail::prepare_chain(sc, sc.symbol_count);
    ComplexEnvelope composite = detail::assemble_composite(pc, alpha);

    // ASE (post-transmitter insertion point)
    double psd = 0.0;
    if (sc.ase) {
        if (sc.ase->noise_psd) {
            psd = *sc.ase->noise_psd;
        } else {
            const double half_bw = sc.shape_bandwidth_hz() / 2.0;
            const double c1 = -sc.carrier_spacing_hz / 2.0;
            const double p_band =
                detail::band_power(composite, c1 - half_bw, c1 + half_bw);
            const double es = p_band / detail::pulse_power_factor(sc.pulse);
            psd = noise_psd_for_target_evm(*sc.ase->target_parent_evm_pct,
                                           sc.shape_bandwidth_hz(), es);
        }
        composite = apply_ase(composite, psd, sc.ase->bpf_bandwidth_hz,
                              stage_seed(sc.seed, kSeedStageAse));
    }
    rr.resolved_noise_psd = psd;
    rr.post_link = composite;

    const ModFormat parent_fmt = sc.parent_mod_format();
    if (sc.aggregation_enabled) {
        AggregationPlan plan = detail::plan_from(sc, 0.0);
        const AggregationCalibration cal0 =
            calibrate_aggregation(pc.cw1, scaled(pc.cw2, alpha), plan);

        double phi = sc.phi_rad;
        if (sc.phi_mode == Scenario::PhiMode::auto_solve) {
            const TargetSolution sol = canonical_target_solution(
                parent_fmt, parent_fmt, sc.target_mod_format());
            phi = solve_phi_for_target(sc, cal0.theta0_rad, sol);
        } else if (sc.phi_mode == Scenario::PhiMode::tune) {
            phi = tuned->phi_star_rad;
        }
        plan.phi_rad = phi;

        rr.post_mzm2 = mzm_modulate(composite, plan.mzm, effective_drive(plan));
        ComplexEnvelope agg = apply_filter(rr.post_mzm2, plan.select_band);
        if (sc.ase_post_aggregator) {
            const double p2 = sc.ase_post_aggregator->noise_psd.value_or(0.0);
            if (!sc.ase_post_aggregator->noise_psd)
                throw ConfigError(
                    "link.ase_post_aggregator: only noise_psd mode is meaningful after "
                    "aggregation");
            agg = apply_ase(agg, p2, sc.ase_post_aggregator->bpf_bandwidth_hz,
                            stage_seed(sc.seed, kSeedStageAsePostAgg));
        }
        rr.post_agg = agg;

        rr.calibration = cal0;
        rr.phi_used_rad = phi;
        rr.alpha_used = alpha;
        rr.rel_phase_rad = wrap_pi(relative_phase(plan, cal0));
        rr.in_band_leak_power = measure_in_band_leak(pc.carriers, cal0, plan);
        rr.prediction =
            predict_format(parent_fmt, parent_fmt, cal0.alpha_eff, rr.rel_phase_rad);

        rr.reference_indices.resize(sc.symbol_count);
        for (std::size_t k = 0; k < sc.symbol_count; ++k)
            rr.reference_indices[k] = static_cast<int>(rr.prediction.point_of_pair(
                static_cast<std::size_t>(pc.parents.ch1.indices[k]),
                static_cast<std::size_t>(pc.parents.ch2.indices[k])));

        RxConfig rx;
        rx.mode = sc.rx_mode;
        rx.band_center_offset_hz = superposition_offset_hz(plan);
        rx.lo_offset_hz = sc.lo_offset_hz;
        rx.lowpass_bw_hz = sc.rx_lowpass_hz();
        rx.samples_per_symbol_out = sc.samples_per_symbol_out;
        rr.received = receive(rr.post_agg, rx, sc.rate_baud);

        // Decision reference scaled against the realized pair mix: the
        // transmitted aggregate stream then has exactly unit power, matching
        // the receiver's unit-power normalization at any block length.
        ModFormat agg_fmt;
        {
            std::vector<cdouble> pts = rr.prediction.points;
            double e = 0.0;
            for (int idx : rr.reference_indices)
                e += std::norm(pts[static_cast<std::size_t>(idx)]);
            e /= static_cast<double>(rr.reference_indices.size());
            const double s = e > 0.0 ? 1.0 / std::sqrt(e) : 1.0;
            for (auto& p : pts) p *= s;
            agg_fmt = make_custom_format("aggregated-" + sc.target_format, pts, false);
        }
        RecoverOptions opt;
        opt.reference_indices = rr.reference_indices;
        rr.report = recover_symbols(rr.received, agg_fmt, sc.rate_baud, sc.pulse, opt);

        // Parent tap straight off the link, for degradation comparisons.
        RxConfig rx1;
        rx1.mode = RxConfig::Mode::homodyne_ideal;
        rx1.band_center_offset_hz = -sc.carrier_spacing_hz / 2.0;
        rx1.lowpass_bw_hz = sc.shape_bandwidth_hz();
        rx1.samples_per_symbol_out = sc.samples_per_symbol_out;
        RecoverOptions popt;
        popt.reference_indices = pc.parents.ch1.indices;
        rr.parent_report = recover_symbols(receive(rr.post_link, rx1, sc.rate_baud),
                                           parent_fmt, sc.rate_baud, sc.pulse, popt);
    } else {
        // Parent back-to-back: demodulate channel 1 directly.
        RxConfig rx;
        rx.mode = sc.rx_mode;
        rx.band_center_offset_hz = -sc.carrier_spacing_hz / 2.0;
        rx.lo_offset_hz = sc.lo_offset_hz;
        rx.lowpass_bw_hz = sc.rx_lowpass_hz();
        rx.samples_per_symbol_out = sc.samples_per_symbol_out;
        rr.received = receive(rr.post_link, rx, sc.rate_baud);
        RecoverOptions opt;
        opt.reference_indices = pc.parents.ch1.indices;
        rr.report = recover_symbols(rr.received, parent_fmt, sc.rate_baud, sc.pulse, opt);
        rr.reference_indices = pc.parents.ch1.indices;
        rr.post_agg = rr.post_link;
        rr.phi_used_rad = 0.0;
        rr.alpha_used = alpha;
    }

    rr.parents = std::move(pc.parents);
    rr.tune_result = tuned;
    rr.scenario = sc;
    return rr;
}

// EVM objective over (phi, alpha) on a short noiseless run, measured against
// the stock target format (blind recovery; no ground truth enters tuning).
inline TuneResult tune_scenario(const Scenario& sc_in) {
    Scenario sc = sc_in;
    sc.ase.reset();
    sc.ase_post_aggregator.reset();
    sc.symbol_count = sc.tune.calib_symbol_count;
    {  // keep every tone on the shortened window
        Scenario probe = sc;
        probe.phi_mode = Scenario::PhiMode::fixed;
        probe.phi_rad = 0.0;
        validate_scenario(probe);
    }

    const ModFormat parent_fmt = sc.parent_mod_format();
    const ModFormat target_fmt = sc.target_mod_format();
    const TargetSolution sol = canonical_target_solution(parent_fmt, parent_fmt, target_fmt);

    TuneSpec spec;
    spec.target = target_fmt;
    spec.phi_grid = sc.tune.phi_grid;
    spec.refine_iters = sc.tune.refine_iters;
    spec.alpha_lo = sc.tune.alpha_lo.value_or(sc.alpha);
    spec.alpha_hi = sc.tune.alpha_hi.value_or(sc.alpha);
    spec.seed = sc.seed;
    spec.objective = sc.tune.objective == "evm"
                         ? TuneSpec::Objective::evm
                         : TuneSpec::Objective::min_distance_penalized_evm;
    spec.validate();

    const detail::PreparedChain pc = detail::prepare_chain(sc, sc.symbol_count);
    AggregationPlan plan0 = detail::plan_from(sc, 0.0);
    const SidebandOrders orders = sideband_orders(plan0);
    const int slope = orders.from_ch1 + orders.from_ch2;
    const AggregationCalibration cal0 =
        calibrate_aggregation(pc.cw1, scaled(pc.cw2, spec.alpha_lo), plan0);

    RxConfig rx;
    rx.mode = RxConfig::Mode::homodyne_ideal;
    rx.band_center_offset_hz = superposition_offset_hz(plan0);
    rx.lowpass_bw_hz = sc.rx_lowpass_hz();
    rx.samples_per_symbol_out = sc.samples_per_symbol_out;

    const double d_ref = target_fmt.min_distance();
    auto objective = [&](double phi, double alpha) -> double {
        AggregationPlan plan = detail::plan_from(sc, phi);
        const ComplexEnvelope x = detail::assemble_composite(pc, alpha);
        const ComplexEnvelope agg = aggregate(x, plan);
        const ComplexEnvelope rxo = receive(agg, rx, sc.rate_baud);
        const ConstellationReport rep =
            recover_symbols(rxo, target_fmt, sc.rate_baud, sc.pulse);
        double obj = rep.evm_avg_pct;
        if (spec.objective == TuneSpec::Objective::min_distance_penalized_evm) {
            const double rel = slope * phi + cal0.theta0_rad;
            const FormatPrediction p =
                predict_format(parent_fmt, parent_fmt, alpha, rel);
            const ModFormat pf = p.as_format("probe");
            const double d = pf.min_distance();
            if (d < d_ref) obj += 100.0 * (d_ref - d) / d_ref;
        }
        return obj;
    };

    const double period = detail::kTwoPi / slope;
    TuneResult r = tune_controls(objective, spec, std::min(sol.alpha, spec.alpha_hi), period);
    r.theta0_rad = cal0.theta0_rad;

    // Validate at full length with the configured noise.
    Scenario full = sc_in;
    full.phi_mode = Scenario::PhiMode::fixed;
    full.phi_rad = r.phi_star_rad;
    full.alpha = r.alpha_star;
    const RunResult rv = run_scenario(full);
    r.evm_validated_pct = rv.report.evm_avg_pct;
    return r;
}

struct SweepRow {
    double value = 0.0;
    double evm_avg = 0.0;
    double evm_std = 0.0;
    double q_factor = 0.0;  // dB
    double ser = 0.0;
};

inline Scenario scenario_with_param(const Scenario& sc, const std::string& param, double value) {
    Scenario s = sc;
    if (param == "phi") {
        s.phi_mode = Scenario::PhiMode::fixed;
        s.phi_rad = value;
    } else if (param == "alpha") {
        s.alpha = value;
    } else if (param == "target_evm") {
        AseConfig a = s.ase.value_or(AseConfig{});
        a.noise_psd.reset();
        a.target_parent_evm_pct = value;
        s.ase = a;
    } else if (param == "rate") {
        s.rate_baud = value;
    } else {
        throw ConfigError("sweep: unknown parameter '" + param +
                          "' (expected phi, alpha, target_evm or rate)");
    }
    return s;
}

inline std::vector<SweepRow> sweep_scenario(const Scenario& sc, const std::string& param,
                                            const std::vector<double>& values) {
    if (values.empty()) throw ConfigError("sweep: empty value list");
    std::vector<SweepRow> rows;
    rows.reserve(values.size());
    for (double v : values) {
        const RunResult rr = run_scenario(scenario_with_param(sc, param, v));
        rows.push_back({v, rr.report.evm_avg_pct, rr.report.evm_std_pct,
                        rr.report.q_factor_db, rr.report.ser});
    }
    return rows;
}

// ---- artifact writing ----

inline json report_to_json(const ConstellationReport& rep) {
    json j;
    j["format"] = rep.format.label;
    j["n_symbols"] = rep.recovered.size();
    j["evm_avg_pct"] = rep.evm_avg_pct;
    j["evm_std_pct"] = rep.evm_std_pct;
    // +inf (noiseless) and NaN (insufficient statistics) are JSON-hostile;
    // they become the documented string sentinels.
    if (std::isfinite(rep.q_factor_db)) j["q_factor_db"] = rep.q_factor_db;
    else j["q_factor_db"] = std::isnan(rep.q_factor_db) ? "undefined" : "inf";
    if (std::isfinite(rep.q_factor_linear)) j["q_factor_linear"] = rep.q_factor_linear;
    else j["q_factor_linear"] = std::isnan(rep.q_factor_linear) ? "undefined" : "inf";
    if (std::isnan(rep.ser)) j["ser"] = nullptr;
    else j["ser"] = rep.ser;
    j["rotation_ambiguous"] = rep.rotation_ambiguous;
    j["timing_offset_samples"] = rep.timing_offset;
    j["carrier_phase_rad"] = rep.carrier_phase_rad;
    json clusters = json::array();
    for (std::size_t i = 0; i < rep.cluster_means.size(); ++i) {
        json c;
        c["point_re"] = rep.format.points[i].real();
        c["point_im"] = rep.format.points[i].imag();
        c["mean_re"] = rep.cluster_means[i].real();
        c["mean_im"] = rep.cluster_means[i].imag();
        c["sigma"] = rep.cluster_sigmas[i];
        c["count"] = rep.cluster_counts[i];
        c["bits"] = rep.format.bits_per_symbol ? rep.format.bits_string(i) : "";
        clusters.push_back(c);
    }
    j["clusters"] = clusters;
    return j;
}

inline json tune_result_to_json(const TuneResult& t) {
    json j;
    j["phi_star_rad"] = t.phi_star_rad;
    j["alpha_star"] = t.alpha_star;
    j["evm_at_opt_pct"] = t.evm_at_opt_pct;
    j["evm_validated_pct"] = t.evm_validated_pct;
    j["theta0_rad"] = t.theta0_rad;
    j["converged"] = t.converged;
    json land = json::array();
    for (std::size_t i = 0; i < t.phi_grid_rad.size(); ++i) {
        json p;
        p["phi_rad"] = t.phi_grid_rad[i];
        p["objective_evm_pct"] = t.phi_grid_objective[i];
        land.push_back(p);
    }
    j["landscape"] = land;
    return j;
}

inline json manifest_for(const Scenario& sc, const std::vector<std::string>& artifacts) {
    json m;
    m["optagg_manifest"] = true;
    m["version"] = kVersion;
    m["name"] = sc.name;
    m["seed"] = sc.seed;
    const json cfg = scenario_to_json(sc);
    m["config_hash_fnv1a64"] = hex64(fnv1a64(cfg.dump()));
    json seeds;
    seeds["symbols_ch1"] = stage_seed(sc.seed, kSeedStageSymbolsCh1);
    seeds["symbols_ch2"] = stage_seed(sc.seed, kSeedStageSymbolsCh2);
    seeds["ase"] = stage_seed(sc.seed, kSeedStageAse);
    seeds["ase_post_aggregator"] = stage_seed(sc.seed, kSeedStageAsePostAgg);
    m["stage_seeds"] = seeds;
    m["artifacts"] = artifacts;
    m["config"] = cfg;
    return m;
}

// Writes every configured artifact under out_dir and returns the manifest path.
inline std::filesystem::path write_run_artifacts(const RunResult& rr,
                                                 const std::filesystem::path& out_dir) {
    namespace fs = std::filesystem;
    const Scenario& sc = rr.scenario;
    fs::create_directories(out_dir);
    std::vector<std::string> artifacts;

    if (sc.out_constellation_json) {
        json j;
        j["scenario"] = sc.name;
        j["aggregate"] = report_to_json(rr.report);
        if (rr.parent_report) j["parent_channel1"] = report_to_json(*rr.parent_report);
        if (sc.aggregation_enabled) {
            j["phi_rad"] = rr.phi_used_rad;
            j["alpha"] = rr.alpha_used;
            j["relative_phase_rad"] = rr.rel_phase_rad;
            j["theta0_rad"] = rr.calibration.theta0_rad;
            j["predicted_min_distance"] = rr.prediction.min_distance;
            j["predicted_degenerate"] = rr.prediction.degenerate;
        }
        write_text_file(out_dir / "report.json", j.dump(2) + "\n");
        artifacts.push_back("report.json");
    }
    if (sc.out_constellation_csv) {
        write_constellation_csv(out_dir / "constellation.csv", rr.report);
        artifacts.push_back("constellation.csv");
    }
    if (sc.out_spectrum_csv) {
        const ComplexEnvelope& src =
            sc.aggregation_enabled ? rr.post_mzm2 : rr.post_link;
        write_spectrum_csv(out_dir / "spectrum.csv", spectrum(src));
        artifacts.push_back("spectrum.csv");
    }
    if (sc.out_eye_csv) {
        const int eye_sps = sc.pulse.kind == PulseKind::sinc_sequence ? 12 : 16;
        RxConfig rx;
        rx.mode = RxConfig::Mode::homodyne_ideal;
        rx.band_center_offset_hz = 0.0;
        rx.lowpass_bw_hz = sc.select_bw_hz();
        rx.samples_per_symbol_out = eye_sps;
        const ComplexEnvelope wave = receive(rr.post_agg, rx, sc.rate_baud);
        const EyeDiagram eye = eye_diagram(wave, sc.rate_baud, 2);
        write_eye_csv(out_dir / "eye_i.csv", eye.counts_i, eye.rows, eye.cols);
        write_eye_csv(out_dir / "eye_q.csv", eye.counts_q, eye.rows, eye.cols);
        artifacts.push_back("eye_i.csv");
        artifacts.push_back("eye_q.csv");
    }
    if (sc.out_symbols_csv) {
        write_symbols_csv(out_dir / "symbols.csv", {&rr.parents.ch1, &rr.parents.ch2});
        artifacts.push_back("symbols.csv");
    }
    if (sc.out_diagnostics_json && sc.aggregation_enabled) {
        json d;
        d["theta0_rad"] = rr.calibration.theta0_rad;
        d["alpha_eff"] = rr.calibration.alpha_eff;
        d["relative_phase_rad"] = rr.rel_phase_rad;
        d["ch1_contribution_re"] = rr.calibration.u.real();
        d["ch1_contribution_im"] = rr.calibration.u.imag();
        d["ch2_contribution_re"] = rr.calibration.v.real();
        d["ch2_contribution_im"] = rr.calibration.v.imag();
        const double sig = std::norm(rr.calibration.u) + std::norm(rr.calibration.v);
        d["in_band_carrier_leak_db"] =
            rr.in_band_leak_power > 0.0 && sig > 0.0
                ? json(10.0 * std::log10(rr.in_band_leak_power / sig))
                : json("-inf");
        d["resolved_noise_psd"] = rr.resolved_noise_psd;
        // per-bin power of the superposed band
        const SpectrumView v = spectrum(rr.post_agg);
        json band = json::array();
        const double half = sc.select_bw_hz() / 2.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double f = v.offset_hz(i);
            if (std::abs(f) > half) continue;
            const double pw = std::norm(v.bins[i]) / static_cast<double>(v.size());
            json row;
            row["offset_hz"] = f;
            row["power_dbm"] = pw > 0 ? std::max(10.0 * std::log10(pw), -400.0) : -400.0;
            band.push_back(row);
        }
        d["band_bins"] = band;
        write_text_file(out_dir / "diagnostics.json", d.dump(2) + "\n");
        artifacts.push_back("diagnostics.json");
    }
    if (rr.tune_result) {
        write_text_file(out_dir / "tune.json", tune_result_to_json(*rr.tune_result).dump(2) + "\n");
        artifacts.push_back("tune.json");
    }

    const json manifest = manifest_for(sc, artifacts);
    const fs::path mpath = out_dir / "manifest.json";
    write_text_file(mpath, manifest.dump(2) + "\n");
    return mpath;
}

inline void write_sweep_csv(const std::filesystem::path& path,
                            const std::vector<SweepRow>& rows) {
    std::string s = "value,evm_avg,evm_std,q_factor,ser\n";
    for (const auto& r : rows) {
        s += format_double(r.value);
        s += ',';
        s += format_double(r.evm_avg);
        s += ',';
        s += format_double(r.evm_std);
        s += ',';
        s += format_double(r.q_factor);
        s += ',';
        s += format_double(r.ser);
        s += '\n';
    }
    write_text_file(path, s);
}

// Accepts either a bare scenario config or a previously written manifest.
inline Scenario scenario_from_config_json(const json& j) {
    if (j.is_object() && j.contains("optagg_manifest") && j["optagg_manifest"].is_boolean() &&
        j["optagg_manifest"].get<bool>()) {
        return scenario_from_json(j.at("config"));
    }
    return scenario_from_json(j);
}

}  // namespace optagg
