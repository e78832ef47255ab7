#pragma once

// Plot-ready CSV/JSON exports. All number formatting goes through
// std::to_chars (shortest round-trip, locale independent, '.' decimal
// separator) so re-runs are byte-identical.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "optagg/envelope.hpp"
#include "optagg/errors.hpp"
#include "optagg/receiver.hpp"

namespace optagg {

inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[static_cast<std::size_t>(i)] = digits[v & 0xF];
        v >>= 4;
    }
    return s;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw PipelineError("cannot open '" + path.string() + "' for writing");
    out << content;
    if (!out) throw PipelineError("write failed for '" + path.string() + "'");
}

// Spectrum CSV: offset_hz, power_dbm, phase_rad. Per-bin power is scaled so a
// pure tone's bin reads the tone's mean power; silent bins floor at -400 dBm.
inline void write_spectrum_csv(const std::filesystem::path& path, const SpectrumView& v) {
    std::string s = "offset_hz,power_dbm,phase_rad\n";
    const double n = static_cast<double>(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double p = std::norm(v.bins[i]) / n;
        const double dbm = p > 0.0 ? std::max(10.0 * std::log10(p), -400.0) : -400.0;
        s += format_double(v.offset_hz(i));
        s += ',';
        s += format_double(dbm);
        s += ',';
        s += format_double(std::arg(v.bins[i]));
        s += '\n';
    }
    write_text_file(path, s);
}

inline void write_envelope_csv(const std::filesystem::path& path, const ComplexEnvelope& x) {
    std::string s = "index,re,im\n";
    for (std::size_t i = 0; i < x.size(); ++i) {
        s += std::to_string(i);
        s += ',';
        s += format_double(x.samples[i].real());
        s += ',';
        s += format_double(x.samples[i].imag());
        s += '\n';
    }
    write_text_file(path, s);
}

// Per-symbol constellation CSV: index, re, im, decision.
inline void write_constellation_csv(const std::filesystem::path& path,
                                    const ConstellationReport& rep) {
    std::string s = "index,re,im,decision\n";
    for (std::size_t i = 0; i < rep.recovered.size(); ++i) {
        s += std::to_string(i);
        s += ',';
        s += format_double(rep.recovered[i].real());
        s += ',';
        s += format_double(rep.recovered[i].imag());
        s += ',';
        s += std::to_string(rep.decisions[i]);
        s += '\n';
    }
    write_text_file(path, s);
}

// Ground-truth symbols: channel, index, re, im, bits.
inline void write_symbols_csv(const std::filesystem::path& path,
                              const std::vector<const SymbolStream*>& channels) {
    std::string s = "channel,index,re,im,bits\n";
    for (std::size_t c = 0; c < channels.size(); ++c) {
        const SymbolStream& st = *channels[c];
        for (std::size_t k = 0; k < st.size(); ++k) {
            s += std::to_string(c + 1);
            s += ',';
            s += std::to_string(k);
            s += ',';
            s += format_double(st.symbols[k].real());
            s += ',';
            s += format_double(st.symbols[k].imag());
            s += ',';
            s += st.format.bits_string(static_cast<std::size_t>(st.indices[k]));
            s += '\n';
        }
    }
    write_text_file(path, s);
}

// Eye histogram matrix: one row per amplitude bin, one column per fold phase.
inline void write_eye_csv(const std::filesystem::path& path, const std::vector<int>& counts,
                          int rows, int cols) {
    std::string s;
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            if (c) s += ',';
            s += std::to_string(counts[static_cast<std::size_t>(r * cols + c)]);
        }
        s += '\n';
    }
    write_text_file(path, s);
}

}  // namespace optagg
