#pragma once

// Scenario configuration: the JSON schema binding every stage of the chain,
// strict parsing/validation, and the bundled golden scenarios.
//
// Field names carry explicit units (_hz, _ps_per_nm, _db, _pct); unknown keys
// are errors. "inf" is accepted wherever a dB quantity may be unbounded.

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "optagg/aggregator.hpp"
#include "optagg/errors.hpp"
#include "optagg/format.hpp"
#include "optagg/link.hpp"
#include "optagg/receiver.hpp"
#include "optagg/transmitter.hpp"
#include "optagg/tuner.hpp"

namespace optagg {

using json = nlohmann::ordered_json;

struct AseConfig {
    std::optional<double> target_parent_evm_pct;
    std::optional<double> noise_psd;
    double bpf_bandwidth_hz = 375e9;
};

struct TuneConfig {
    int phi_grid = 64;
    int refine_iters = 20;
    std::optional<double> alpha_lo;  // both unset: alpha pinned at link.alpha
    std::optional<double> alpha_hi;
    std::string objective = "evm";
    std::size_t calib_symbol_count = 1280;
};

struct Scenario {
    std::string name = "scenario";
    std::uint64_t seed = 1;
    std::size_t symbol_count = 5120;
    double sample_rate_hz = 640e9;

    // transmitter
    std::string parent_format = "BPSK";
    double rate_baud = 10e9;
    PulseShape pulse;
    bool independent_data = true;
    double carrier_spacing_hz = 36e9;
    double carrier_suppression_db = 20.0;
    double mzm1_mod_index = 1.0;
    double mzm1_rf_phase_rad = 0.0;

    // link
    double alpha = 1.0;
    double dispersion_ps_per_nm = 0.0;
    double dispersion_ref_wavelength_nm = 1550.0;
    std::optional<AseConfig> ase;
    std::optional<AseConfig> ase_post_aggregator;

    // aggregation
    bool aggregation_enabled = true;
    double rf_freq_hz = 18e9;
    double mod_index = 1.0;
    double bias_v_over_vpi = 1.0;
    double extinction_ratio_db = 20.0;
    enum class PhiMode { fixed, auto_solve, tune } phi_mode = PhiMode::auto_solve;
    double phi_rad = 0.0;
    std::optional<double> select_bandwidth_hz;
    std::string target_format = "QPSK";
    TuneConfig tune;

    // receiver
    RxConfig::Mode rx_mode = RxConfig::Mode::homodyne_ideal;
    double lo_offset_hz = 40e9;
    std::optional<double> lowpass_bw_hz;
    int samples_per_symbol_out = 4;

    // outputs
    bool out_constellation_json = true;
    bool out_constellation_csv = true;
    bool out_spectrum_csv = true;
    bool out_eye_csv = false;
    bool out_symbols_csv = false;
    bool out_diagnostics_json = true;

    std::size_t samples_per_symbol() const {
        return static_cast<std::size_t>(std::llround(sample_rate_hz / rate_baud));
    }
    SimGrid grid() const { return {sample_rate_hz, symbol_count * samples_per_symbol()}; }
    ModFormat parent_mod_format() const { return mod_format_by_label(parent_format); }
    ModFormat target_mod_format() const { return mod_format_by_label(target_format); }
    double shape_bandwidth_hz() const { return pulse.occupied_bw_hz(rate_baud); }
    double select_bw_hz() const {
        return select_bandwidth_hz ? *select_bandwidth_hz : shape_bandwidth_hz();
    }
    double rx_lowpass_hz() const { return lowpass_bw_hz ? *lowpass_bw_hz : shape_bandwidth_hz(); }
};

// Stage ids for the documented seed-splitting rule.
enum : std::uint64_t {
    kSeedStageSymbolsCh1 = 1,
    kSeedStageSymbolsCh2 = 2,
    kSeedStageAse = 3,
    kSeedStageAsePostAgg = 4,
};

namespace detail {

class StrictObject {
  public:
    StrictObject(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
    }
    ~StrictObject() = default;

    bool has(const char* key) const { return j_.contains(key) && !j_[key].is_null(); }

    const json& raw(const char* key) {
        seen_.push_back(key);
        return j_.at(key);
    }

    template <typename T>
    T get(const char* key, T fallback) {
        seen_.push_back(key);
        if (!j_.contains(key) || j_[key].is_null()) return fallback;
        try {
            return j_[key].get<T>();
        } catch (const std::exception&) {
            throw ConfigError(path_ + "." + key + ": wrong type");
        }
    }

    double get_number_or_inf(const char* key, double fallback) {
        seen_.push_back(key);
        if (!j_.contains(key) || j_[key].is_null()) return fallback;
        const json& v = j_[key];
        if (v.is_string()) {
            if (v.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
            throw ConfigError(path_ + "." + key + ": expected a number or \"inf\"");
        }
        if (!v.is_number()) throw ConfigError(path_ + "." + key + ": expected a number or \"inf\"");
        return v.get<double>();
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            bool known = false;
            for (const auto& s : seen_)
                if (s == it.key()) known = true;
            if (!known) throw ConfigError(path_ + ": unknown field '" + it.key() + "'");
        }
    }

    const std::string& path() const { return path_; }

  private:
    const json& j_;
    std::string path_;
    std::vector<std::string> seen_;
};

inline AseConfig parse_ase(const json& j, const std::string& path) {
    StrictObject o(j, path);
    AseConfig a;
    if (o.has("target_parent_evm_pct"))
        a.target_parent_evm_pct = o.get<double>("target_parent_evm_pct", 0.0);
    else
        o.get<double>("target_parent_evm_pct", 0.0);
    if (o.has("noise_psd"))
        a.noise_psd = o.get<double>("noise_psd", 0.0);
    else
        o.get<double>("noise_psd", 0.0);
    a.bpf_bandwidth_hz = o.get<double>("bpf_bandwidth_hz", a.bpf_bandwidth_hz);
    o.finish();
    if (a.target_parent_evm_pct.has_value() == a.noise_psd.has_value())
        throw ConfigError(path + ": set exactly one of target_parent_evm_pct / noise_psd");
    return a;
}

}  // namespace detail

inline Scenario scenario_from_json(const json& j) {
    detail::StrictObject root(j, "config");
    Scenario sc;
    sc.name = root.get<std::string>("name", sc.name);
    sc.seed = root.get<std::uint64_t>("seed", sc.seed);
    sc.symbol_count = root.get<std::size_t>("symbol_count", sc.symbol_count);
    sc.sample_rate_hz = root.get<double>("sample_rate_hz", sc.sample_rate_hz);

    if (root.has("transmitter")) {
        detail::StrictObject t(root.raw("transmitter"), "transmitter");
        sc.parent_format = t.get<std::string>("format", sc.parent_format);
        sc.rate_baud = t.get<double>("rate_baud", sc.rate_baud);
        if (t.has("pulse")) {
            detail::StrictObject p(t.raw("pulse"), "transmitter.pulse");
            const std::string kind = p.get<std::string>("kind", "raised_cosine_nrz");
            if (kind == "raised_cosine_nrz") {
                sc.pulse.kind = PulseKind::raised_cosine_nrz;
            } else if (kind == "sinc_sequence") {
                sc.pulse.kind = PulseKind::sinc_sequence;
            } else {
                throw ConfigError("transmitter.pulse.kind: unknown kind '" + kind + "'");
            }
            sc.pulse.rolloff = p.get<double>("rolloff", sc.pulse.rolloff);
            sc.pulse.comb_lines = p.get<int>("comb_lines", sc.pulse.comb_lines);
            p.finish();
        } else {
            t.get<json>("pulse", json());
        }
        const std::string dec =
            t.get<std::string>("decorrelation", sc.independent_data ? "independent_data"
                                                                    : "shared_data");
        if (dec == "independent_data") {
            sc.independent_data = true;
        } else if (dec == "shared_data") {
            sc.independent_data = false;
        } else {
            throw ConfigError("transmitter.decorrelation: expected independent_data or shared_data");
        }
        sc.carrier_spacing_hz = t.get<double>("carrier_spacing_hz", sc.carrier_spacing_hz);
        sc.carrier_suppression_db =
            t.get_number_or_inf("carrier_suppression_db", sc.carrier_suppression_db);
        sc.mzm1_mod_index = t.get<double>("mzm1_mod_index", sc.mzm1_mod_index);
        sc.mzm1_rf_phase_rad = t.get<double>("mzm1_rf_phase_rad", sc.mzm1_rf_phase_rad);
        t.finish();
    }

    if (root.has("link")) {
        detail::StrictObject l(root.raw("link"), "link");
        sc.alpha = l.get<double>("alpha", sc.alpha);
        sc.dispersion_ps_per_nm = l.get<double>("dispersion_ps_per_nm", sc.dispersion_ps_per_nm);
        sc.dispersion_ref_wavelength_nm =
            l.get<double>("dispersion_ref_wavelength_nm", sc.dispersion_ref_wavelength_nm);
        if (l.has("ase")) sc.ase = detail::parse_ase(l.raw("ase"), "link.ase");
        else l.get<json>("ase", json());
        if (l.has("ase_post_aggregator"))
            sc.ase_post_aggregator =
                detail::parse_ase(l.raw("ase_post_aggregator"), "link.ase_post_aggregator");
        else
            l.get<json>("ase_post_aggregator", json());
        l.finish();
    }

    if (root.has("aggregation")) {
        detail::StrictObject a(root.raw("aggregation"), "aggregation");
        sc.aggregation_enabled = a.get<bool>("enabled", sc.aggregation_enabled);
        sc.rf_freq_hz = a.get<double>("rf_freq_hz", sc.rf_freq_hz);
        sc.mod_index = a.get<double>("mod_index", sc.mod_index);
        sc.bias_v_over_vpi = a.get<double>("bias_v_over_vpi", sc.bias_v_over_vpi);
        sc.extinction_ratio_db =
            a.get_number_or_inf("extinction_ratio_db", sc.extinction_ratio_db);
        if (a.has("phi")) {
            const json& v = a.raw("phi");
            if (v.is_string()) {
                const std::string s = v.get<std::string>();
                if (s == "auto") sc.phi_mode = Scenario::PhiMode::auto_solve;
                else if (s == "tune") sc.phi_mode = Scenario::PhiMode::tune;
                else throw ConfigError("aggregation.phi: expected a number, \"auto\" or \"tune\"");
            } else if (v.is_number()) {
                sc.phi_mode = Scenario::PhiMode::fixed;
                sc.phi_rad = v.get<double>();
            } else {
                throw ConfigError("aggregation.phi: expected a number, \"auto\" or \"tune\"");
            }
        }
        if (a.has("select_bandwidth_hz"))
            sc.select_bandwidth_hz = a.get<double>("select_bandwidth_hz", 0.0);
        else
            a.get<double>("select_bandwidth_hz", 0.0);
        sc.target_format = a.get<std::string>("target_format", sc.target_format);
        if (a.has("tune")) {
            detail::StrictObject tc(a.raw("tune"), "aggregation.tune");
            sc.tune.phi_grid = tc.get<int>("phi_grid", sc.tune.phi_grid);
            sc.tune.refine_iters = tc.get<int>("refine_iters", sc.tune.refine_iters);
            if (tc.has("alpha_lo")) sc.tune.alpha_lo = tc.get<double>("alpha_lo", 0.0);
            else tc.get<double>("alpha_lo", 0.0);
            if (tc.has("alpha_hi")) sc.tune.alpha_hi = tc.get<double>("alpha_hi", 0.0);
            else tc.get<double>("alpha_hi", 0.0);
            sc.tune.objective = tc.get<std::string>("objective", sc.tune.objective);
            sc.tune.calib_symbol_count =
                tc.get<std::size_t>("calib_symbol_count", sc.tune.calib_symbol_count);
            tc.finish();
        } else {
            a.get<json>("tune", json());
        }
        a.finish();
    }

    if (root.has("receiver")) {
        detail::StrictObject r(root.raw("receiver"), "receiver");
        const std::string mode = r.get<std::string>("mode", "homodyne_ideal");
        if (mode == "homodyne_ideal") sc.rx_mode = RxConfig::Mode::homodyne_ideal;
        else if (mode == "heterodyne") sc.rx_mode = RxConfig::Mode::heterodyne;
        else throw ConfigError("receiver.mode: expected homodyne_ideal or heterodyne");
        sc.lo_offset_hz = r.get<double>("lo_offset_hz", sc.lo_offset_hz);
        if (r.has("lowpass_bw_hz")) sc.lowpass_bw_hz = r.get<double>("lowpass_bw_hz", 0.0);
        else r.get<double>("lowpass_bw_hz", 0.0);
        sc.samples_per_symbol_out = r.get<int>("samples_per_symbol_out", sc.samples_per_symbol_out);
        r.finish();
    }

    if (root.has("outputs")) {
        detail::StrictObject o(root.raw("outputs"), "outputs");
        sc.out_constellation_json = o.get<bool>("constellation_json", sc.out_constellation_json);
        sc.out_constellation_csv = o.get<bool>("constellation_csv", sc.out_constellation_csv);
        sc.out_spectrum_csv = o.get<bool>("spectrum_csv", sc.out_spectrum_csv);
        sc.out_eye_csv = o.get<bool>("eye_csv", sc.out_eye_csv);
        sc.out_symbols_csv = o.get<bool>("symbols_csv", sc.out_symbols_csv);
        sc.out_diagnostics_json = o.get<bool>("diagnostics_json", sc.out_diagnostics_json);
        o.finish();
    }
    root.finish();
    return sc;
}

inline json ase_to_json(const AseConfig& a) {
    json j;
    if (a.target_parent_evm_pct) j["target_parent_evm_pct"] = *a.target_parent_evm_pct;
    if (a.noise_psd) j["noise_psd"] = *a.noise_psd;
    j["bpf_bandwidth_hz"] = a.bpf_bandwidth_hz;
    return j;
}

inline json scenario_to_json(const Scenario& sc) {
    json j;
    j["name"] = sc.name;
    j["seed"] = sc.seed;
    j["symbol_count"] = sc.symbol_count;
    j["sample_rate_hz"] = sc.sample_rate_hz;
    json t;
    t["format"] = sc.parent_format;
    t["rate_baud"] = sc.rate_baud;
    json p;
    p["kind"] = sc.pulse.kind == PulseKind::raised_cosine_nrz ? "raised_cosine_nrz"
                                                              : "sinc_sequence";
    p["rolloff"] = sc.pulse.rolloff;
    p["comb_lines"] = sc.pulse.comb_lines;
    t["pulse"] = p;
    t["decorrelation"] = sc.independent_data ? "independent_data" : "shared_data";
    t["carrier_spacing_hz"] = sc.carrier_spacing_hz;
    if (std::isinf(sc.carrier_suppression_db)) t["carrier_suppression_db"] = "inf";
    else t["carrier_suppression_db"] = sc.carrier_suppression_db;
    t["mzm1_mod_index"] = sc.mzm1_mod_index;
    t["mzm1_rf_phase_rad"] = sc.mzm1_rf_phase_rad;
    j["transmitter"] = t;
    json l;
    l["alpha"] = sc.alpha;
    l["dispersion_ps_per_nm"] = sc.dispersion_ps_per_nm;
    l["dispersion_ref_wavelength_nm"] = sc.dispersion_ref_wavelength_nm;
    l["ase"] = sc.ase ? ase_to_json(*sc.ase) : json(nullptr);
    l["ase_post_aggregator"] =
        sc.ase_post_aggregator ? ase_to_json(*sc.ase_post_aggregator) : json(nullptr);
    j["link"] = l;
    json a;
    a["enabled"] = sc.aggregation_enabled;
    a["rf_freq_hz"] = sc.rf_freq_hz;
    a["mod_index"] = sc.mod_index;
    a["bias_v_over_vpi"] = sc.bias_v_over_vpi;
    if (std::isinf(sc.extinction_ratio_db)) a["extinction_ratio_db"] = "inf";
    else a["extinction_ratio_db"] = sc.extinction_ratio_db;
    switch (sc.phi_mode) {
        case Scenario::PhiMode::fixed: a["phi"] = sc.phi_rad; break;
        case Scenario::PhiMode::auto_solve: a["phi"] = "auto"; break;
        case Scenario::PhiMode::tune: a["phi"] = "tune"; break;
    }
    a["select_bandwidth_hz"] =
        sc.select_bandwidth_hz ? json(*sc.select_bandwidth_hz) : json(nullptr);
    a["target_format"] = sc.target_format;
    json tc;
    tc["phi_grid"] = sc.tune.phi_grid;
    tc["refine_iters"] = sc.tune.refine_iters;
    tc["alpha_lo"] = sc.tune.alpha_lo ? json(*sc.tune.alpha_lo) : json(nullptr);
    tc["alpha_hi"] = sc.tune.alpha_hi ? json(*sc.tune.alpha_hi) : json(nullptr);
    tc["objective"] = sc.tune.objective;
    tc["calib_symbol_count"] = sc.tune.calib_symbol_count;
    a["tune"] = tc;
    j["aggregation"] = a;
    json r;
    r["mode"] = sc.rx_mode == RxConfig::Mode::homodyne_ideal ? "homodyne_ideal" : "heterodyne";
    r["lo_offset_hz"] = sc.lo_offset_hz;
    r["lowpass_bw_hz"] = sc.lowpass_bw_hz ? json(*sc.lowpass_bw_hz) : json(nullptr);
    r["samples_per_symbol_out"] = sc.samples_per_symbol_out;
    j["receiver"] = r;
    json o;
    o["constellation_json"] = sc.out_constellation_json;
    o["constellation_csv"] = sc.out_constellation_csv;
    o["spectrum_csv"] = sc.out_spectrum_csv;
    o["eye_csv"] = sc.out_eye_csv;
    o["symbols_csv"] = sc.out_symbols_csv;
    o["diagnostics_json"] = sc.out_diagnostics_json;
    j["outputs"] = o;
    return j;
}

// Static checks; anything that needs the signal itself is checked at run time.
inline void validate_scenario(const Scenario& sc) {
    if (sc.name.empty()) throw ConfigError("name: must not be empty");
    if (sc.symbol_count < 16) throw ConfigError("symbol_count: must be >= 16");
    if (!(sc.sample_rate_hz > 0.0)) throw ConfigError("sample_rate_hz: must be positive");
    if (!(sc.rate_baud > 0.0)) throw ConfigError("transmitter.rate_baud: must be positive");
    mod_format_by_label(sc.parent_format);
    sc.pulse.validate();

    const double sps_real = sc.sample_rate_hz / sc.rate_baud;
    if (std::abs(sps_real - std::round(sps_real)) > 1e-9 || sps_real < 1.0)
        throw ConfigError(
            "sample_rate_hz: must be an integer multiple of transmitter.rate_baud");
    const auto sps = static_cast<std::size_t>(std::llround(sps_real));
    if (sc.pulse.kind == PulseKind::sinc_sequence &&
        sps % static_cast<std::size_t>(sc.pulse.comb_lines) != 0)
        throw ConfigError(
            "sample_rate_hz: samples per symbol must be divisible by pulse.comb_lines so the "
            "sequence zero crossings sit on the grid");

    const double window_s = static_cast<double>(sc.symbol_count) / sc.rate_baud;
    auto on_grid = [&](double f) {
        const double cycles = f * window_s;
        return std::abs(cycles - std::round(cycles)) < 1e-6;
    };
    if (!on_grid(sc.carrier_spacing_hz / 2.0))
        throw ConfigError(
            "transmitter.carrier_spacing_hz: spacing/2 must be an integer number of cycles in "
            "the window (adjust symbol_count)");
    if (sc.shape_bandwidth_hz() > sc.sample_rate_hz)
        throw ConfigError("transmitter.pulse: occupied bandwidth exceeds the grid");
    if (sc.carrier_spacing_hz / 2.0 + sc.shape_bandwidth_hz() / 2.0 >= sc.sample_rate_hz / 2.0)
        throw ConfigError("transmitter.carrier_spacing_hz: parent channels exceed the grid");
    if (!(sc.alpha > 0.0) || sc.alpha > 1.0)
        throw ConfigError("link.alpha: must lie in (0, 1]");
    DispersionSpec{sc.dispersion_ps_per_nm, sc.dispersion_ref_wavelength_nm}.validate();
    auto check_ase = [&](const std::optional<AseConfig>& a, const char* path) {
        if (!a) return;
        AseNoiseSpec spec;
        spec.target_parent_evm_pct = a->target_parent_evm_pct;
        spec.noise_psd = a->noise_psd;
        spec.bpf_bandwidth_hz = a->bpf_bandwidth_hz;
        try {
            spec.validate();
        } catch (const ConfigError& e) {
            throw ConfigError(std::string(path) + ": " + e.what());
        }
        if (a->bpf_bandwidth_hz > sc.sample_rate_hz)
            throw ConfigError(std::string(path) + ".bpf_bandwidth_hz: exceeds the grid");
    };
    check_ase(sc.ase, "link.ase");
    check_ase(sc.ase_post_aggregator, "link.ase_post_aggregator");

    if (sc.aggregation_enabled) {
        if (!on_grid(sc.rf_freq_hz))
            throw ConfigError(
                "aggregation.rf_freq_hz: must be an integer number of cycles in the window");
        AggregationPlan plan;
        plan.carrier1_offset_hz = -sc.carrier_spacing_hz / 2.0;
        plan.carrier2_offset_hz = +sc.carrier_spacing_hz / 2.0;
        plan.rf.freq_hz = sc.rf_freq_hz;
        try {
            sideband_orders(plan);
        } catch (const GeometryError& e) {
            throw ConfigError(std::string("aggregation.rf_freq_hz: ") + e.what());
        }
        if (sc.select_bw_hz() > sc.sample_rate_hz)
            throw ConfigError("aggregation.select_bandwidth_hz: exceeds the grid");
        mod_format_by_label(sc.target_format);
        if (sc.phi_mode != Scenario::PhiMode::fixed) {
            try {
                canonical_target_solution(sc.parent_mod_format(), sc.parent_mod_format(),
                                          sc.target_mod_format());
            } catch (const InfeasibleTargetError& e) {
                throw ConfigError(std::string("aggregation.target_format: ") + e.what());
            }
        }
        if (sc.phi_mode == Scenario::PhiMode::tune) {
            TuneSpec ts;
            ts.phi_grid = sc.tune.phi_grid;
            ts.refine_iters = sc.tune.refine_iters;
            ts.alpha_lo = sc.tune.alpha_lo.value_or(sc.alpha);
            ts.alpha_hi = sc.tune.alpha_hi.value_or(sc.alpha);
            ts.target = sc.target_mod_format();
            try {
                ts.validate();
            } catch (const ConfigError& e) {
                throw ConfigError(std::string("aggregation.tune: ") + e.what());
            }
            if (sc.tune.objective != "evm" && sc.tune.objective != "min_distance_penalized_evm")
                throw ConfigError("aggregation.tune.objective: unknown objective");
        }
        if (!sc.independent_data && sc.dispersion_ps_per_nm == 0.0 &&
            sc.phi_mode != Scenario::PhiMode::fixed)
            throw ConfigError(
                "transmitter.decorrelation: shared_data without dispersion leaves the parent "
                "channels fully correlated; the aggregate constellation degenerates");
    }

    if (sc.samples_per_symbol_out < 1)
        throw ConfigError("receiver.samples_per_symbol_out: must be >= 1");
    const double fs_out = sc.rate_baud * sc.samples_per_symbol_out;
    if (sc.rx_lowpass_hz() > fs_out)
        throw ConfigError(
            "receiver.samples_per_symbol_out: too small for the configured lowpass band");
    if (sc.pulse.kind == PulseKind::sinc_sequence &&
        sc.samples_per_symbol_out % sc.pulse.comb_lines != 0)
        throw ConfigError(
            "receiver.samples_per_symbol_out: must be divisible by pulse.comb_lines");
    if (sc.rx_mode == RxConfig::Mode::heterodyne) {
        if (std::abs(sc.lo_offset_hz) <= sc.rx_lowpass_hz() / 2.0)
            throw ConfigError("receiver.lo_offset_hz: must exceed half the signal band");
        if (std::abs(sc.lo_offset_hz) + sc.rx_lowpass_hz() / 2.0 >= sc.sample_rate_hz / 2.0)
            throw ConfigError("receiver.lo_offset_hz: IF exceeds the grid");
    }
}

// Bundled scenarios reproducing the demonstrated aggregation cases. Sample
// rates are chosen per symbol rate so every tone sits on the grid and FFT
// sizes stay {2,3,5}-smooth.
inline std::vector<Scenario> golden_scenarios() {
    auto nrz10 = []() {
        Scenario sc;
        sc.sample_rate_hz = 640e9;
        sc.symbol_count = 5120;
        sc.rate_baud = 10e9;
        sc.pulse = {PulseKind::raised_cosine_nrz, 1.0, 3};
        sc.samples_per_symbol_out = 4;
        return sc;
    };
    auto nyq = [](double rate) {
        Scenario sc;
        sc.rate_baud = rate;
        sc.pulse = {PulseKind::sinc_sequence, 1.0, 3};
        sc.samples_per_symbol_out = 6;
        if (rate == 5e9) {
            sc.sample_rate_hz = 480e9;
            sc.symbol_count = 5120;
        } else {  // 8 GBd
            sc.sample_rate_hz = 576e9;
            sc.symbol_count = 4096;
        }
        return sc;
    };

    std::vector<Scenario> out;
    {
        Scenario sc = nrz10();
        sc.name = "fig5a";
        sc.parent_format = "BPSK";
        sc.target_format = "QPSK";
        sc.alpha = 1.0;
        out.push_back(sc);
    }
    {
        Scenario sc = nrz10();
        sc.name = "fig5b";
        sc.parent_format = "BPSK";
        sc.target_format = "PAM4";
        sc.alpha = 0.5;
        out.push_back(sc);
    }
    {
        Scenario sc = nrz10();
        sc.name = "fig6";
        sc.parent_format = "QPSK";
        sc.target_format = "QAM16";
        sc.alpha = 0.5;
        sc.out_eye_csv = true;
        out.push_back(sc);
    }
    {
        Scenario sc = nyq(5e9);
        sc.name = "fig7a";
        sc.parent_format = "BPSK";
        sc.target_format = "QPSK";
        sc.alpha = 1.0;
        out.push_back(sc);
    }
    {
        Scenario sc = nyq(8e9);
        sc.name = "fig7b";
        sc.parent_format = "BPSK";
        sc.target_format = "QPSK";
        sc.alpha = 1.0;
        out.push_back(sc);
    }
    {
        Scenario sc = nyq(5e9);
        sc.name = "fig7c";
        sc.parent_format = "BPSK";
        sc.target_format = "PAM4";
        sc.alpha = 0.5;
        out.push_back(sc);
    }
    {
        Scenario sc = nyq(8e9);
        sc.name = "fig7d";
        sc.parent_format = "BPSK";
        sc.target_format = "PAM4";
        sc.alpha = 0.5;
        out.push_back(sc);
    }
    {
        Scenario sc = nyq(5e9);
        sc.name = "fig8a";
        sc.parent_format = "QPSK";
        sc.target_format = "QAM16";
        sc.alpha = 0.5;
        out.push_back(sc);
    }
    {
        Scenario sc = nyq(8e9);
        sc.name = "fig8b";
        sc.parent_format = "QPSK";
        sc.target_format = "QAM16";
        sc.alpha = 0.5;
        sc.out_eye_csv = true;
        out.push_back(sc);
    }
    return out;
}

inline Scenario golden_scenario(const std::string& name) {
    for (const auto& sc : golden_scenarios())
        if (sc.name == name) return sc;
    throw ConfigError("unknown golden scenario '" + name + "'");
}

inline std::string golden_listing() {
    std::string s;
    s += "fig5a  two 10 GBd NRZ BPSK -> 10 GBd QPSK (alpha 1, quadrature)\n";
    s += "fig5b  two 10 GBd NRZ BPSK -> 10 GBd PAM-4 (alpha 0.5, in phase)\n";
    s += "fig6   two 10 GBd NRZ QPSK -> 10 GBd QAM-16 (spectrum + eye export)\n";
    s += "fig7a  two 5 GBd Nyquist BPSK -> QPSK\n";
    s += "fig7b  two 8 GBd Nyquist BPSK -> QPSK\n";
    s += "fig7c  two 5 GBd Nyquist BPSK -> PAM-4\n";
    s += "fig7d  two 8 GBd Nyquist BPSK -> PAM-4\n";
    s += "fig8a  two 5 GBd Nyquist QPSK -> QAM-16\n";
    s += "fig8b  two 8 GBd Nyquist QPSK -> QAM-16 (eye export)\n";
    return s;
}

}  // namespace optagg
