#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "optagg/link.hpp"
#include "optagg/receiver.hpp"
#include "optagg/transmitter.hpp"

using namespace optagg;

namespace {

const SimGrid kGrid{640e9, 64 * 640};

ComplexEnvelope two_channel_composite(bool shared_data, std::uint64_t seed) {
    TxConfig cfg;
    cfg.format = bpsk();
    cfg.rate_baud = 10e9;
    cfg.pulse = PulseShape{PulseKind::raised_cosine_nrz, 1.0, 3};
    cfg.independent_data = !shared_data;
    cfg.seed_ch1 = seed;
    cfg.seed_ch2 = seed + 1;
    return build_parent_channels(cfg, kGrid).composite;
}

// Delay between the two demodulated channel waveforms via the circular
// cross-correlation peak, in seconds (magnitude).
double measured_interchannel_delay(const ComplexEnvelope& composite) {
    auto baseband = [&](double center) {
        return frequency_shift(apply_filter(composite, brickwall_bandpass(center, 20e9)),
                               -center);
    };
    const ComplexEnvelope a = baseband(-18e9);
    const ComplexEnvelope b = baseband(+18e9);
    // correlate via the spectra: IFFT(A * conj(B))
    std::vector<cdouble> fa(a.samples), fb(b.samples);
    fft_forward(fa);
    fft_forward(fb);
    for (std::size_t i = 0; i < fa.size(); ++i) fa[i] *= std::conj(fb[i]);
    fft_inverse(fa);
    std::size_t best = 0;
    double best_mag = -1.0;
    for (std::size_t i = 0; i < fa.size(); ++i) {
        if (std::abs(fa[i]) > best_mag) {
            best_mag = std::abs(fa[i]);
            best = i;
        }
    }
    const long long n = static_cast<long long>(fa.size());
    long long lag = static_cast<long long>(best);
    if (lag > n / 2) lag -= n;  // signed circular lag
    return std::abs(static_cast<double>(lag)) / composite.sample_rate_hz;
}

}  // namespace

TEST_CASE("apply_weight scales only the selected band", "[link_elements]") {
    const ComplexEnvelope x = two_channel_composite(false, 5);

    SECTION("alpha = 1 is the identity") {
        const ComplexEnvelope y = apply_weight(x, WeightPlan{1.0, 8e9, 28e9});
        CHECK(rms_difference(y, x) == 0.0);
    }

    SECTION("alpha = 0.5 drops the band by 6.02 dB and leaves the rest") {
        const ComplexEnvelope y = apply_weight(x, WeightPlan{0.5, 8e9, 28e9});
        const double p2_before =
            spectrum(apply_filter(x, brickwall_bandpass(+18e9, 16e9))).sum_power();
        const double p2_after =
            spectrum(apply_filter(y, brickwall_bandpass(+18e9, 16e9))).sum_power();
        const double p1_before =
            spectrum(apply_filter(x, brickwall_bandpass(-18e9, 16e9))).sum_power();
        const double p1_after =
            spectrum(apply_filter(y, brickwall_bandpass(-18e9, 16e9))).sum_power();
        CHECK(10.0 * std::log10(p2_before / p2_after) == Catch::Approx(6.0206).margin(1e-3));
        CHECK(std::abs(p1_after - p1_before) / p1_before < 1e-9);
    }

    SECTION("per-bin phase is untouched") {
        const ComplexEnvelope y = apply_weight(x, WeightPlan{0.5, 8e9, 28e9});
        const SpectrumView vx = spectrum(x);
        const SpectrumView vy = spectrum(y);
        for (std::size_t i = 0; i < vx.size(); ++i) {
            if (std::abs(vx.bins[i]) < 1e-9) continue;
            REQUIRE(std::abs(wrap_pi(std::arg(vy.bins[i]) - std::arg(vx.bins[i]))) < 1e-9);
        }
    }

    SECTION("weighting commutes with combining out-of-band content") {
        const ComplexEnvelope t = make_tone(kGrid, -100e9, cdouble(0.4, 0.1));
        const WeightPlan w{0.5, 8e9, 28e9};
        const ComplexEnvelope lhs = combine(apply_weight(x, w), t);
        const ComplexEnvelope rhs = apply_weight(combine(x, t), w);
        CHECK(rms_difference(lhs, rhs) < 1e-12);
    }
}

TEST_CASE("apply_dispersion is a unitary all-pass", "[link_elements]") {
    const ComplexEnvelope x = two_channel_composite(false, 9);
    const DispersionSpec d{-270.0, 1550.0};

    SECTION("zero dispersion is the identity") {
        CHECK(rms_difference(apply_dispersion(x, DispersionSpec{0.0, 1550.0}), x) == 0.0);
    }

    SECTION("power is preserved") {
        const ComplexEnvelope y = apply_dispersion(x, d);
        CHECK(std::abs(y.mean_power() - x.mean_power()) / x.mean_power() < 1e-12);
        const SpectrumView vx = spectrum(x);
        const SpectrumView vy = spectrum(y);
        for (std::size_t i = 0; i < vx.size(); ++i)
            REQUIRE(std::abs(std::abs(vy.bins[i]) - std::abs(vx.bins[i])) < 1e-12);
    }

    SECTION("opposite dispersion inverts") {
        const ComplexEnvelope y =
            apply_dispersion(apply_dispersion(x, d), DispersionSpec{+270.0, 1550.0});
        CHECK(rms_difference(y, x) < 1e-10);
    }
}

TEST_CASE("dispersion delays 36 GHz-spaced channels by the analytic amount",
          "[link_elements]") {
    // shared data on both tones so the cross-correlation has a clean peak
    const ComplexEnvelope x = two_channel_composite(true, 13);

    SECTION("-270 ps/nm gives 77.9 ps") {
        const ComplexEnvelope y = apply_dispersion(x, DispersionSpec{-270.0, 1550.0});
        const double tau = measured_interchannel_delay(y);
        const double expect = 270e-12 / 1e-9 * 1550e-9 * 1550e-9 / kSpeedOfLight * 36e9;
        CHECK(std::abs(tau - expect) <= 1.0 / kGrid.sample_rate_hz);
    }

    SECTION("-520 ps/nm gives 150.0 ps") {
        const ComplexEnvelope y = apply_dispersion(x, DispersionSpec{-520.0, 1550.0});
        const double tau = measured_interchannel_delay(y);
        const double expect = 520e-12 / 1e-9 * 1550e-9 * 1550e-9 / kSpeedOfLight * 36e9;
        CHECK(std::abs(tau - expect) <= 1.0 / kGrid.sample_rate_hz);
    }
}

TEST_CASE("apply_ase adds seeded band-limited noise", "[link_elements]") {
    const ComplexEnvelope x = two_channel_composite(false, 17);

    SECTION("zero PSD is the identity") {
        CHECK(rms_difference(apply_ase(x, 0.0, 375e9, 1), x) == 0.0);
    }

    SECTION("noise power matches PSD times bandwidth") {
        const ComplexEnvelope quiet = make_cw(kGrid, cdouble(0, 0));
        const double psd = 1e-13;
        const ComplexEnvelope y = apply_ase(quiet, psd, 375e9, 42);
        CHECK(y.mean_power() == Catch::Approx(psd * 375e9).epsilon(0.02));
    }

    SECTION("different seeds decorrelate") {
        const ComplexEnvelope quiet = make_cw(kGrid, cdouble(0, 0));
        const ComplexEnvelope n1 = apply_ase(quiet, 1e-13, 375e9, 1);
        const ComplexEnvelope n2 = apply_ase(quiet, 1e-13, 375e9, 2);
        cdouble acc(0, 0);
        double p1 = 0, p2 = 0;
        for (std::size_t i = 0; i < n1.size(); ++i) {
            acc += n1.samples[i] * std::conj(n2.samples[i]);
            p1 += std::norm(n1.samples[i]);
            p2 += std::norm(n2.samples[i]);
        }
        CHECK(std::abs(acc) / std::sqrt(p1 * p2) <
              5.0 / std::sqrt(static_cast<double>(n1.size())));
    }
}

TEST_CASE("target-EVM calibration hits the measured EVM", "[link_elements]") {
    TxConfig cfg;
    cfg.format = bpsk();
    cfg.rate_baud = 10e9;
    cfg.pulse = PulseShape{PulseKind::raised_cosine_nrz, 1.0, 3};
    const SimGrid g{640e9, 64 * 2560};
    const ParentChannels pc = build_parent_channels(cfg, g);

    // closed-form PSD against the measured channel-1 band power
    const double p_band = [&] {
        const SpectrumView v =
            spectrum(apply_filter(pc.composite, brickwall_bandpass(-18e9, 20e9)));
        return v.sum_power() / static_cast<double>(v.size());
    }();
    const double kappa = 1.0 - cfg.pulse.rolloff / 4.0;
    const double target = 12.72;
    const double psd = noise_psd_for_target_evm(target, 20e9, p_band / kappa);
    const ComplexEnvelope noisy = apply_ase(pc.composite, psd, 375e9, 7);

    RxConfig rx;
    rx.band_center_offset_hz = -18e9;
    rx.lowpass_bw_hz = 20e9;
    rx.samples_per_symbol_out = 4;
    const ComplexEnvelope b = receive(noisy, rx, cfg.rate_baud);
    RecoverOptions opt;
    opt.reference_indices = pc.ch1.indices;
    const ConstellationReport rep =
        recover_symbols(b, cfg.format, cfg.rate_baud, cfg.pulse, opt);
    CHECK(std::abs(rep.evm_avg_pct - target) < 0.3);

    // measured vs closed-form prediction within 2%
    const double sigma2 = psd * 20e9 / (p_band / kappa);
    const double g_norm = std::sqrt(1.0 + sigma2);
    const double predicted =
        100.0 * std::sqrt(sigma2 / (1.0 + sigma2) + (1.0 - 1.0 / g_norm) * (1.0 - 1.0 / g_norm));
    CHECK(std::abs(rep.evm_avg_pct - predicted) / predicted < 0.02);
}

TEST_CASE("ase calibration rejects targets at the implementation floor", "[link_elements]") {
    CHECK_THROWS_AS(noise_psd_for_target_evm(0.005, 20e9, 1.0), CalibrationError);
}
