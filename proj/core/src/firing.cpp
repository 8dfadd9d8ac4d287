#include "apfire/firing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "apfire/errors.hpp"

namespace apfire {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Verdict check_well_defined(const Stimulus& f) {
    if (f.mean() > 0.0) return Verdict::Defined;
    // Trigonometric polynomial with mean <= 0: the antiderivative is the
    // mean times t plus a bounded oscillation, so it never diverges to +inf.
    if (f.pure_trig()) return Verdict::Undefined;
    // Nonnegative a.e. with mean <= 0 forces mean 0 and f = 0 a.e.
    if (f.lower_bound() >= 0.0) return Verdict::Undefined;
    return Verdict::Unknown;
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Defined: return "Defined";
        case Verdict::Undefined: return "Undefined";
        case Verdict::Unknown: return "Unknown";
    }
    return "Unknown";
}

FiringEngine::FiringEngine(Stimulus stimulus, EngineOptions options)
    : stimulus_(std::move(stimulus)), options_(options), bound_(stimulus_.sup_bound()),
      verdict_(check_well_defined(stimulus_)) {
    if (!(options_.root_tolerance > 0.0))
        throw ParseError("engine: root_tolerance must be > 0");
    if (!(options_.search_horizon > 0.0))
        throw ParseError("engine: search_horizon must be > 0");
    if (verdict_ == Verdict::Undefined)
        throw UndefinedStimulusError(
            "firing map is not well defined for this stimulus (accumulated input stays bounded)");
    if (verdict_ == Verdict::Unknown && !options_.allow_unknown)
        throw UndefinedStimulusError(
            "cannot certify that the firing map is well defined; "
            "opt into horizon-bounded mode to query anyway");
}

FiringEngine::Crossing FiringEngine::next_crossing(double f_ref, double start, double level,
                                                   double deadline) const {
    double s = start;
    double g = stimulus_.antiderivative(s) - f_ref - level;
    while (true) {
        if (g >= 0.0) return {s, g};
        if (s >= deadline)
            throw NoFiringWithinHorizon("no crossing of level " + std::to_string(level) +
                                        " within horizon " +
                                        std::to_string(options_.search_horizon));
        const double piece_end = std::min(stimulus_.next_breakpoint_after(s), deadline);
        const double lip = stimulus_.piece_bound_at(s);
        // March inside the breakpoint-free piece [s, piece_end].
        while (s < piece_end) {
            if (g >= 0.0) return {s, g};
            if (lip <= 0.0) {
                s = piece_end;
                g = stimulus_.antiderivative(s) - f_ref - level;
                break;
            }
            const double jump = -g / lip;
            if (jump <= options_.root_tolerance) return {s, g};
            double s2 = s + jump;
            if (s2 >= piece_end) s2 = piece_end;
            if (s2 == s) return {s, g};  // step below 1 ulp: converged
            s = s2;
            g = stimulus_.antiderivative(s) - f_ref - level;
        }
    }
}

double FiringEngine::phi(double t) const { return phi_n(t, 1); }

double FiringEngine::phi_n(double t, std::int64_t n) const {
    if (n < 1) throw ParseError("phi_n: n must be >= 1");
    if (!std::isfinite(t)) throw ParseError("phi_n: t must be finite");
    const double f_ref = stimulus_.antiderivative(t);
    return next_crossing(f_ref, t, static_cast<double>(n), t + options_.search_horizon).time;
}

SpikeTrain FiringEngine::spike_train(double t0, std::int64_t n) const {
    if (n < 1) throw ParseError("spike_train: n must be >= 1");
    SpikeTrain train;
    train.start = t0;
    train.times.reserve(static_cast<std::size_t>(n));
    train.residuals.reserve(static_cast<std::size_t>(n));
    const double f_ref = stimulus_.antiderivative(t0);
    const double deadline = t0 + options_.search_horizon;
    double s = t0;
    for (std::int64_t k = 1; k <= n; ++k) {
        try {
            // First crossing of level k never precedes the level k-1 crossing,
            // so resuming the march from the previous spike is exact.
            const Crossing c = next_crossing(f_ref, s, static_cast<double>(k), deadline);
            train.times.push_back(c.time);
            train.residuals.push_back(std::abs(c.residual));
            s = c.time;
        } catch (const NoFiringWithinHorizon&) {
            train.truncated = true;
            break;
        }
    }
    return train;
}

DisplacementProfile FiringEngine::displacement(const Window& w) const {
    DisplacementProfile profile;
    profile.grid = w.grid();
    profile.values.reserve(profile.grid.size());
    for (double t : profile.grid) profile.values.push_back(phi(t) - t);
    return profile;
}

RateEstimate FiringEngine::firing_rate(double t0, std::int64_t n) const {
    RateEstimate est;
    est.n = n;
    est.phi_n = phi_n(t0, n);
    est.empirical_rate = static_cast<double>(n) / est.phi_n;
    est.mean_rate = stimulus_.mean();
    est.deviation = std::abs(est.empirical_rate - est.mean_rate);
    return est;
}

namespace {

// The single nonnegative PC part of a stimulus whose other parts are
// identically zero; throws UnsupportedStimulusError otherwise.
const PiecewiseConstant& exact_pc_part(const Stimulus& f) {
    const PiecewiseConstant* pc = nullptr;
    for (const auto& part : f.parts()) {
        if (const auto* trig = std::get_if<TrigPolynomial>(&part)) {
            if (trig->constant_term() != 0.0 || trig->amplitude_sum() != 0.0)
                throw UnsupportedStimulusError(
                    "discontinuity analysis is exact-only: trigonometric parts must vanish "
                    "identically");
        } else {
            const auto& cand = std::get<PiecewiseConstant>(part);
            const bool zero = cand.sup_bound() == 0.0;
            if (zero) continue;
            if (pc != nullptr)
                throw UnsupportedStimulusError(
                    "discontinuity analysis supports a single piecewise constant part");
            pc = &cand;
        }
    }
    if (pc == nullptr)
        throw UnsupportedStimulusError("discontinuity analysis needs a piecewise constant part");
    if (pc->lower_bound() < 0.0)
        throw UnsupportedStimulusError("discontinuity analysis requires f >= 0 a.e.");
    return *pc;
}

// Largest s < a with integral of f over [s, a] equal to `mass`, by an exact
// backward segment walk; NaN when the mass is not reachable. Assumes f >= 0.
double backward_crossing(const PiecewiseConstant& pc, double a, double mass) {
    const auto& bps = pc.breakpoints();
    const double lo_bp = bps.front();
    const double hi_bp = bps.back();
    double remaining = mass;
    double hi = a;
    while (true) {
        double seg_lo;
        double v;
        if (pc.is_periodic()) {
            const double T = hi_bp - lo_bp;
            double q = std::floor((hi - lo_bp) / T);
            double r = hi - q * T;
            if (r <= lo_bp) {
                r += T;
                q -= 1.0;
            }
            if (r > hi_bp) {
                r -= T;
                q += 1.0;
            }
            // segment whose interior lies just below r (r in (lo_bp, hi_bp])
            auto it = std::lower_bound(bps.begin(), bps.end(), r);
            std::size_t j =
                it == bps.begin() ? 0 : static_cast<std::size_t>(it - bps.begin()) - 1;
            j = std::min(j, pc.values().size() - 1);
            seg_lo = bps[j] + q * T;
            v = pc.values()[j];
        } else if (hi <= lo_bp) {
            v = pc.left_tail();
            if (v <= 0.0) return std::numeric_limits<double>::quiet_NaN();
            return hi - remaining / v;
        } else if (hi > hi_bp) {
            seg_lo = hi_bp;
            v = pc.right_tail();
        } else {
            auto it = std::lower_bound(bps.begin(), bps.end(), hi);
            std::size_t j =
                it == bps.begin() ? 0 : static_cast<std::size_t>(it - bps.begin()) - 1;
            j = std::min(j, pc.values().size() - 1);
            seg_lo = bps[j];
            v = pc.values()[j];
        }
        const double seg_mass = v * (hi - seg_lo);
        if (v > 0.0 && seg_mass >= remaining) return hi - remaining / v;
        remaining -= seg_mass;
        hi = seg_lo;
    }
}

}  // namespace

DiscontinuityReport FiringEngine::discontinuities(const Window& w) const {
    const PiecewiseConstant& pc = exact_pc_part(stimulus_);
    DiscontinuityReport report;
    // phi is non-decreasing for f >= 0, so every jump point abar in the
    // window has its plateau start a = phi(abar) inside [w.lo, phi(w.hi)].
    const double a_hi = phi(w.hi);
    for (const auto& plateau : pc.zero_plateaus(w.lo, a_hi)) {
        const double abar = backward_crossing(pc, plateau.start, 1.0);
        if (!std::isfinite(abar)) continue;
        if (abar < w.lo || abar > w.hi) continue;
        report.entries.push_back({abar, plateau.start, plateau.length, plateau.length});
    }
    std::sort(report.entries.begin(), report.entries.end(),
              [](const auto& x, const auto& y) { return x.abar < y.abar; });
    return report;
}

std::vector<RateEstimate> rate_sequence(const std::vector<Stimulus>& stimuli, double t0,
                                        std::int64_t n, const EngineOptions& options) {
    std::vector<RateEstimate> out;
    out.reserve(stimuli.size());
    for (const auto& f : stimuli) out.push_back(FiringEngine(f, options).firing_rate(t0, n));
    return out;
}

}  // namespace apfire
