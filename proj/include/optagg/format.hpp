#pragma once

// Modulation formats and constellation geometry helpers.
//
// All stock constellations carry exactly unit average energy. Bit labels are
// Gray-coded and fixed (documented in the README); metrics never depend on
// them but exported bit streams must be deterministic.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "optagg/envelope.hpp"
#include "optagg/errors.hpp"

namespace optagg {

enum class FormatName { BPSK, QPSK, PAM4, QAM16, Custom };

struct ModFormat {
    FormatName name = FormatName::Custom;
    std::string label = "custom";
    std::vector<cdouble> points;
    std::vector<std::uint32_t> bit_labels;  // Gray code per point
    int bits_per_symbol = 0;

    std::size_t size() const { return points.size(); }

    double mean_energy() const {
        double acc = 0.0;
        for (const auto& p : points) acc += std::norm(p);
        return points.empty() ? 0.0 : acc / static_cast<double>(points.size());
    }

    double min_distance() const {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < points.size(); ++i)
            for (std::size_t j = i + 1; j < points.size(); ++j)
                best = std::min(best, std::abs(points[i] - points[j]));
        return best;
    }

    std::string bits_string(std::size_t point_index) const {
        std::string s;
        for (int b = bits_per_symbol - 1; b >= 0; --b)
            s += ((bit_labels[point_index] >> b) & 1u) ? '1' : '0';
        return s;
    }
};

inline ModFormat bpsk() {
    return {FormatName::BPSK, "BPSK", {cdouble(1, 0), cdouble(-1, 0)}, {0u, 1u}, 1};
}

inline ModFormat qpsk() {
    const double s = 1.0 / std::sqrt(2.0);
    return {FormatName::QPSK,
            "QPSK",
            {cdouble(s, s), cdouble(-s, s), cdouble(-s, -s), cdouble(s, -s)},
            {0b00u, 0b01u, 0b11u, 0b10u},
            2};
}

inline ModFormat pam4() {
    const double s = 1.0 / std::sqrt(5.0);
    return {FormatName::PAM4,
            "PAM4",
            {cdouble(-3 * s, 0), cdouble(-s, 0), cdouble(s, 0), cdouble(3 * s, 0)},
            {0b00u, 0b01u, 0b11u, 0b10u},
            2};
}

inline ModFormat qam16() {
    const double s = 1.0 / std::sqrt(10.0);
    const double level[4] = {-3 * s, -s, s, 3 * s};
    const std::uint32_t gray[4] = {0b00u, 0b01u, 0b11u, 0b10u};
    ModFormat f;
    f.name = FormatName::QAM16;
    f.label = "QAM16";
    f.bits_per_symbol = 4;
    for (int i = 0; i < 4; ++i) {
        for (int q = 0; q < 4; ++q) {
            f.points.emplace_back(level[i], level[q]);
            f.bit_labels.push_back((gray[i] << 2) | gray[q]);
        }
    }
    return f;
}

inline ModFormat mod_format(FormatName n) {
    switch (n) {
        case FormatName::BPSK: return bpsk();
        case FormatName::QPSK: return qpsk();
        case FormatName::PAM4: return pam4();
        case FormatName::QAM16: return qam16();
        case FormatName::Custom: break;
    }
    throw ConfigError("mod_format: no stock constellation for this name");
}

inline ModFormat mod_format_by_label(const std::string& label) {
    if (label == "BPSK") return bpsk();
    if (label == "QPSK") return qpsk();
    if (label == "PAM4") return pam4();
    if (label == "QAM16") return qam16();
    throw ConfigError("unknown modulation format '" + label + "'");
}

// Arbitrary point set as a decision reference. By default the set is
// normalized to unit average energy over the points; pass normalize = false
// when the caller has already scaled them (e.g. against a known symbol mix).
inline ModFormat make_custom_format(const std::string& label, std::vector<cdouble> points,
                                    bool normalize = true) {
    if (points.empty()) throw ConfigError("make_custom_format: empty point set");
    if (normalize) {
        double e = 0.0;
        for (const auto& p : points) e += std::norm(p);
        e /= static_cast<double>(points.size());
        const double s = (e > 0.0) ? 1.0 / std::sqrt(e) : 1.0;
        for (auto& p : points) p *= s;
    }
    ModFormat f;
    f.name = FormatName::Custom;
    f.label = label;
    f.points = std::move(points);
    f.bit_labels.resize(f.points.size());
    for (std::size_t i = 0; i < f.bit_labels.size(); ++i)
        f.bit_labels[i] = static_cast<std::uint32_t>(i);
    f.bits_per_symbol = 0;
    while ((std::size_t(1) << f.bits_per_symbol) < f.points.size()) ++f.bits_per_symbol;
    return f;
}

namespace detail {

// Rotations (radians in [0, 2*pi)) that map the point set onto itself.
// Always contains 0. Used for blind-phase ambiguity bookkeeping.
inline std::vector<double> symmetry_rotations(const std::vector<cdouble>& pts,
                                              double tol = 1e-9) {
    std::vector<double> out{0.0};
    if (pts.size() < 2) return out;
    // Reference: a point of maximal magnitude.
    std::size_t ref = 0;
    for (std::size_t i = 1; i < pts.size(); ++i)
        if (std::abs(pts[i]) > std::abs(pts[ref])) ref = i;
    const double rmag = std::abs(pts[ref]);
    if (rmag < tol) return out;

    auto set_invariant = [&](double ang) {
        const cdouble rot(std::cos(ang), std::sin(ang));
        for (const auto& p : pts) {
            const cdouble q = p * rot;
            double best = std::numeric_limits<double>::infinity();
            for (const auto& c : pts) best = std::min(best, std::abs(q - c));
            if (best > tol * std::max(1.0, rmag)) return false;
        }
        return true;
    };

    for (std::size_t j = 0; j < pts.size(); ++j) {
        if (j == ref) continue;
        if (std::abs(std::abs(pts[j]) - rmag) > tol) continue;
        double ang = std::arg(pts[j] / pts[ref]);
        if (ang < 0) ang += kTwoPi;
        if (ang < tol || kTwoPi - ang < tol) continue;
        bool dup = false;
        for (double a : out)
            if (std::abs(a - ang) < tol) dup = true;
        if (!dup && set_invariant(ang)) out.push_back(ang);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Order of the rotational symmetry group (1 when only identity).
inline int symmetry_order(const std::vector<cdouble>& pts) {
    return static_cast<int>(symmetry_rotations(pts).size());
}

// Hungarian algorithm (potentials form), O(n^3). cost is row-major n*n.
inline double min_cost_assignment(const std::vector<double>& cost, std::size_t n) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = p[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    double total = 0.0;
    for (std::size_t j = 1; j <= n; ++j) total += cost[(p[j] - 1) * n + (j - 1)];
    return total;
}

// Mean squared matching distance between two equal-size point sets after the
// best global rotation (scale is the caller's business; normalize first).
// Candidate rotations pair the largest-magnitude point of A with every
// compatible point of B.
inline double congruence_cost(const std::vector<cdouble>& a, const std::vector<cdouble>& b) {
    if (a.size() != b.size() || a.empty()) return std::numeric_limits<double>::infinity();
    const std::size_t n = a.size();
    std::size_t ref = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (std::abs(a[i]) > std::abs(a[ref])) ref = i;
    const double rmag = std::abs(a[ref]);

    double best = std::numeric_limits<double>::infinity();
    std::vector<double> cost(n * n);
    auto eval = [&](double ang) {
        const cdouble rot(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                cost[i * n + j] = std::norm(a[i] * rot - b[j]);
        best = std::min(best, min_cost_assignment(cost, n) / static_cast<double>(n));
    };
    if (rmag < 1e-12) {
        eval(0.0);
        return best;
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (std::abs(std::abs(b[j]) - rmag) > 0.05 * std::max(1.0, rmag)) continue;
        eval(std::arg(b[j] / a[ref]));
    }
    return best;
}

}  // namespace detail

}  // namespace optagg
