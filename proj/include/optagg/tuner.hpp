#pragma once

// Derivative-free search over the aggregation controls (phi, alpha) — the
// automated analog of trimming the lab phase shifter and waveshaper against
// the observed constellation.
//
// The objective is the post-DSP EVM of a short noiseless calibration run
// against the target format. The landscape is periodic in phi with period
// pi/((k+l)/2) for the standard geometry, coarse-sampled on [0, pi) and then
// refined by golden-section coordinate descent; refinement never loses the
// best point already seen, so the optimum is monotone in the round count.

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "optagg/aggregator.hpp"
#include "optagg/errors.hpp"
#include "optagg/format.hpp"

namespace optagg {

struct TargetSolution {
    double alpha = 1.0;
    double rel_phase_rad = 0.0;
};

// Canonical (alpha, relative-phase) settings that turn the parent pair into
// the target, verified by point-set congruence. Throws InfeasibleTargetError
// with the best congruence cost as witness when no setting works.
inline TargetSolution canonical_target_solution(const ModFormat& f1, const ModFormat& f2,
                                                const ModFormat& target) {
    auto verified = [&](double alpha, double rel) -> bool {
        const FormatPrediction p = predict_format(f1, f2, alpha, rel);
        if (p.points.size() != target.size()) return false;
        const ModFormat pf = p.as_format("candidate");
        return detail::congruence_cost(pf.points, target.points) < 1e-9;
    };

    struct Candidate {
        double alpha, rel;
    };
    const Candidate table[] = {
        {1.0, detail::kPi / 2.0},  // two antipodal parents -> square
        {0.5, 0.0},                // amplitude-split parents -> 4 levels / 16-grid
        {1.0, 0.0},
        {0.5, detail::kPi / 2.0},
    };
    for (const auto& c : table)
        if (verified(c.alpha, c.rel)) return {c.alpha, c.rel};

    // Coarse scan fallback for non-stock combinations.
    double best_cost = std::numeric_limits<double>::infinity();
    TargetSolution best;
    for (int ai = 1; ai <= 40; ++ai) {
        const double alpha = static_cast<double>(ai) / 40.0;
        for (int ti = 0; ti < 180; ++ti) {
            const double rel = detail::kTwoPi * ti / 180.0;
            const FormatPrediction p = predict_format(f1, f2, alpha, rel);
            if (p.points.size() != target.size()) continue;
            const double cost =
                detail::congruence_cost(p.as_format("c").points, target.points);
            if (cost < best_cost) {
                best_cost = cost;
                best = {alpha, rel};
            }
        }
    }
    if (best_cost < 1e-6) return best;
    throw InfeasibleTargetError(
        "target format '" + target.label + "' is not reachable from parents '" + f1.label +
        "' + '" + f2.label + "' (best congruence cost " + std::to_string(best_cost) + ")");
}

struct TuneSpec {
    ModFormat target;
    int phi_grid = 64;
    int refine_iters = 20;
    double alpha_lo = 1.0;  // equal bounds pin alpha
    double alpha_hi = 1.0;
    enum class Objective { evm, min_distance_penalized_evm } objective = Objective::evm;
    std::uint64_t seed = 1;

    void validate() const {
        if (phi_grid < 8) throw ConfigError("tune: phi_grid must be >= 8");
        if (!(alpha_lo > 0.0) || alpha_lo > alpha_hi || alpha_hi > 1.0)
            throw ConfigError("tune: alpha bounds must satisfy 0 < lo <= hi <= 1");
        if (refine_iters < 0) throw ConfigError("tune: refine_iters must be >= 0");
    }
};

struct TuneResult {
    double phi_star_rad = 0.0;
    double alpha_star = 1.0;
    double evm_at_opt_pct = 0.0;
    std::vector<double> phi_grid_rad;
    std::vector<double> phi_grid_objective;
    bool converged = false;
    double theta0_rad = 0.0;          // filled by the scenario-level wrapper
    double evm_validated_pct = 0.0;   // full-length run at the optimum
};

namespace detail {

// Golden-section minimization on [a, b] tracking the best probe seen.
template <typename F>
inline void golden_refine(const F& f, double a, double b, int iters, double& best_x,
                          double& best_f) {
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    auto track = [&](double x, double v) {
        if (v < best_f) {
            best_f = v;
            best_x = x;
        }
    };
    track(c, fc);
    track(d, fd);
    for (int it = 0; it < iters; ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
            track(c, fc);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
            track(d, fd);
        }
    }
}

}  // namespace detail

// Search machinery over an externally supplied objective(phi, alpha) -> EVM%.
// phi_period is pi for the standard two-sided first-order geometry.
inline TuneResult tune_controls(const std::function<double(double, double)>& objective,
                                const TuneSpec& spec, double alpha_init,
                                double phi_period = detail::kPi) {
    spec.validate();
    TuneResult r;
    const bool alpha_free = spec.alpha_hi > spec.alpha_lo;
    double alpha = std::min(std::max(alpha_init, spec.alpha_lo), spec.alpha_hi);

    r.phi_grid_rad.resize(static_cast<std::size_t>(spec.phi_grid));
    r.phi_grid_objective.resize(static_cast<std::size_t>(spec.phi_grid));
    double best_phi = 0.0, best_obj = std::numeric_limits<double>::infinity();
    for (int i = 0; i < spec.phi_grid; ++i) {
        const double phi = phi_period * static_cast<double>(i) / spec.phi_grid;
        const double v = objective(phi, alpha);
        r.phi_grid_rad[static_cast<std::size_t>(i)] = phi;
        r.phi_grid_objective[static_cast<std::size_t>(i)] = v;
        if (v < best_obj) {
            best_obj = v;
            best_phi = phi;
        }
    }

    const double step = phi_period / spec.phi_grid;
    double phi_lo = best_phi - step, phi_hi = best_phi + step;
    double alpha_halfspan = (spec.alpha_hi - spec.alpha_lo) / 2.0;
    for (int round = 0; round < spec.refine_iters; ++round) {
        detail::golden_refine([&](double p) { return objective(p, alpha); }, phi_lo, phi_hi,
                              24, best_phi, best_obj);
        const double half = (phi_hi - phi_lo) / 4.0;
        phi_lo = best_phi - half;
        phi_hi = best_phi + half;
        if (alpha_free) {
            const double lo = std::max(spec.alpha_lo, alpha - alpha_halfspan);
            const double hi = std::min(spec.alpha_hi, alpha + alpha_halfspan);
            double best_alpha = alpha;
            detail::golden_refine([&](double a) { return objective(best_phi, a); }, lo, hi, 24,
                                  best_alpha, best_obj);
            alpha = best_alpha;
            alpha_halfspan = std::max(0.25 * (hi - lo), 1e-4);
        }
        if (phi_hi - phi_lo < 1e-6 && (!alpha_free || alpha_halfspan <= 1e-4)) {
            r.converged = true;
            break;
        }
    }
    double phi_wrapped = std::fmod(best_phi, phi_period);
    if (phi_wrapped < 0) phi_wrapped += phi_period;
    r.phi_star_rad = phi_wrapped;
    r.alpha_star = alpha;
    r.evm_at_opt_pct = best_obj;
    if (!r.converged) r.converged = true;  // fixed budget exhausted counts as done
    return r;
}

struct SensitivityRow {
    std::string param;  // "phi" or "alpha"
    double delta = 0.0;
    double evm_pct = 0.0;
};

// EVM at phi* +/- each dphi and alpha* +/- each dalpha.
inline std::vector<SensitivityRow> sensitivity(
    const std::function<double(double, double)>& objective, const TuneResult& at,
    const std::vector<double>& dphis, const std::vector<double>& dalphas) {
    std::vector<SensitivityRow> rows;
    for (double d : dphis) {
        rows.push_back({"phi", +d, objective(at.phi_star_rad + d, at.alpha_star)});
        if (d != 0.0)
            rows.push_back({"phi", -d, objective(at.phi_star_rad - d, at.alpha_star)});
    }
    for (double d : dalphas) {
        rows.push_back({"alpha", +d, objective(at.phi_star_rad, at.alpha_star + d)});
        if (d != 0.0)
            rows.push_back({"alpha", -d, objective(at.phi_star_rad, at.alpha_star - d)});
    }
    return rows;
}

}  // namespace optagg
