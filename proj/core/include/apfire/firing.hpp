#pragma once

#include <cstdint>
#include <vector>

#include "apfire/stimulus.hpp"
#include "apfire/window.hpp"

namespace apfire {

/// Verdict on whether the firing map is defined on all of R.
///
/// Defined:   mean(f) > 0, so the accumulated input is unbounded above.
/// Undefined: provably not defined — a trigonometric polynomial with
///            nonpositive constant term, or a certified-nonnegative input
///            with zero mean (which must vanish a.e.).
/// Unknown:   neither certificate applies.
enum class Verdict { Defined, Undefined, Unknown };

Verdict check_well_defined(const Stimulus& f);
const char* to_string(Verdict v);

struct EngineOptions {
    double root_tolerance = 1e-10;
    double search_horizon = 1e6;
    /// Permit construction for Verdict::Unknown inputs; every firing query
    /// may then fail with NoFiringWithinHorizon.
    bool allow_unknown = false;
};

/// Ordered firing times phi^1(t0) < ... < phi^N(t0) with per-spike residual
/// certificates |F(phi^n(t0)) - F(t0) - n|.
struct SpikeTrain {
    double start = 0.0;
    std::vector<double> times;
    std::vector<double> residuals;
    /// True when the horizon was hit before all requested spikes; `times`
    /// then holds the spikes found so far.
    bool truncated = false;
};

/// Displacement psi(t) = phi(t) - t sampled on a grid.
struct DisplacementProfile {
    std::vector<double> grid;
    std::vector<double> values;
};

struct RateEstimate {
    std::int64_t n = 0;
    double phi_n = 0.0;
    double empirical_rate = 0.0;  // n / phi^n(t0)
    double mean_rate = 0.0;       // mean of the stimulus
    double deviation = 0.0;       // |empirical - mean|
};

/// Right-discontinuity points of the firing map. Each entry pairs a point
/// abar where phi jumps with the zero plateau [a, a + plateau_length] of the
/// stimulus that causes it (phi(abar) = a, jump = phi(abar+) - phi(abar)).
struct DiscontinuityReport {
    struct Entry {
        double abar;
        double a;
        double jump;
        double plateau_length;
    };
    std::vector<Entry> entries;
};

/// Firing map engine for x' = f(t) with reset 0 and threshold 1: computes
/// phi(t) = inf{s > t : F(s) - F(t) = 1} and its iterates as first level
/// crossings of the antiderivative.
///
/// Crossing search is a certified Lipschitz march: from s with
/// G(s) = F(s) - F(t) - n < 0 no crossing occurs before s + |G(s)|/L where
/// L bounds |f| on the current breakpoint-free piece, so the march never
/// skips a crossing and lands with G <= 0. For piecewise constant pieces
/// L equals the segment value and the landing point is the exact crossing.
/// Near-tangential approaches terminate once the certified step falls
/// below root_tolerance; the returned point then carries a residual
/// |G| <= root_tolerance·(1 + B). Construction precomputes the certified
/// march bound B >= sup|f|.
///
/// Engines are immutable after construction; all queries are pure and safe
/// to call concurrently.
class FiringEngine {
public:
    explicit FiringEngine(Stimulus stimulus, EngineOptions options = {});

    double phi(double t) const;
    double phi_n(double t, std::int64_t n) const;
    SpikeTrain spike_train(double t0, std::int64_t n) const;
    DisplacementProfile displacement(const Window& w) const;
    RateEstimate firing_rate(double t0, std::int64_t n) const;

    /// Exact discontinuity structure. Supported only for stimuli that
    /// reduce to a single piecewise constant part that is nonnegative;
    /// throws UnsupportedStimulusError otherwise. Reports every jump point
    /// abar inside [w.lo, w.hi].
    DiscontinuityReport discontinuities(const Window& w) const;

    const Stimulus& stimulus() const { return stimulus_; }
    double march_bound() const { return bound_; }
    const EngineOptions& options() const { return options_; }
    Verdict verdict() const { return verdict_; }

private:
    struct Crossing {
        double time;
        double residual;
    };
    /// First s > start with F(s) - f_ref - level >= 0 (within tolerance),
    /// never past `deadline`.
    Crossing next_crossing(double f_ref, double start, double level, double deadline) const;

    Stimulus stimulus_;
    EngineOptions options_;
    double bound_;
    Verdict verdict_;
};

/// One RateEstimate per stimulus at the same t0 and n; exhibits rate
/// convergence along a sequence of inputs.
std::vector<RateEstimate> rate_sequence(const std::vector<Stimulus>& stimuli, double t0,
                                        std::int64_t n, const EngineOptions& options = {});

}  // namespace apfire
