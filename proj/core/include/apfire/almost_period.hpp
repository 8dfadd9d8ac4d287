#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "apfire/firing.hpp"
#include "apfire/stimulus.hpp"
#include "apfire/window.hpp"

namespace apfire {

/// Parameters for an epsilon-almost-period scan over a range of shifts tau.
struct ScanParams {
    double epsilon;
    double tau_lo;
    double tau_hi;
    double tau_step = 1e-2;
    /// Grid shifts whose metric lands in [epsilon, refine_factor·epsilon)
    /// get a golden-section polish within one step, so narrow almost
    /// periods are not lost to gridding. Set to 1 to disable.
    double refine_factor = 3.0;
};

/// One evaluated shift (grid point or refined candidate).
struct ScanRecord {
    double tau;
    double metric;
    bool accepted;
};

/// Accepted epsilon-almost periods over [tau_lo, tau_hi]. max_gap is the
/// largest gap between consecutive accepted shifts, counting the range
/// endpoints: an empirical witness for the relative-density length l_eps.
struct AlmostPeriodScan {
    double epsilon;
    double tau_lo;
    double tau_hi;
    double tau_step;
    std::vector<double> accepted;
    std::vector<ScanRecord> records;
    double max_gap;
};

/// Accepts tau iff max over the window grid (plus breakpoints) of
/// |f(t + tau) - f(t)| < epsilon.
AlmostPeriodScan scan_sup_almost_periods(const Stimulus& f, const ScanParams& params,
                                         const Window& w);

/// Accepts tau iff stepanov_shift_distance(f, tau, w) < epsilon.
AlmostPeriodScan scan_stepanov_almost_periods(const Stimulus& f, const ScanParams& params,
                                              const Window& w);

/// Accepts tau iff max over the window grid of |psi(t + tau) - psi(t)| <
/// epsilon, psi the displacement of the engine's firing map.
AlmostPeriodScan scan_displacement_almost_periods(const FiringEngine& engine,
                                                  const ScanParams& params, const Window& w);

/// max_gap of a scan; callers compare against a target l_eps.
double relative_density_gap(const AlmostPeriodScan& scan);

/// Checks, over a finite window, that every Stepanov (delta^2·epsilon/2)-
/// almost period of the stimulus is an epsilon-almost period of the
/// displacement map, delta the certified lower bound of the stimulus.
struct ApVerificationReport {
    enum class Status { Pass, Fail, Inconclusive };

    double delta;
    double epsilon;
    double stepanov_threshold;  // delta^2 · epsilon / 2
    std::vector<double> candidates;
    std::vector<double> max_displacement_deviation;  // per candidate
    std::vector<double> violations;                  // candidates with deviation >= epsilon
    Status status;                                   // Pass needs candidates and no violations
};

ApVerificationReport verify_displacement_theorem(const FiringEngine& engine, double epsilon,
                                                 double tau_lo, double tau_hi, double tau_step,
                                                 const Window& w);

/// Compares the firing maps of f and an approximant f~: when
/// ||f - f~||_inf on the window stays below delta^2·epsilon/4 (delta the
/// certified lower bound of f), the firing maps stay within epsilon.
struct ApproximationReport {
    double sup_stimulus_distance;
    double required_bound;  // delta^2 · epsilon / 4
    double sup_phi_distance;
    double epsilon;
    bool precondition_met;   // sup_stimulus_distance < required_bound
    bool implication_holds;  // !precondition_met || sup_phi_distance < epsilon
};

ApproximationReport compare_with_periodic_approximant(const FiringEngine& engine,
                                                      const FiringEngine& approximant,
                                                      double epsilon, const Window& w);

/// Max over valid n of |eta[n + k] - eta[n]|, skipping the first
/// tail_offset entries. Exploration helper for interspike sequences.
double sequence_shift_deviation(std::span<const double> eta, std::int64_t k,
                                std::size_t tail_offset = 0);

/// Integer shifts k in [1, k_max] with sequence_shift_deviation < epsilon.
/// Requires eta.size() - tail_offset >= 2·k_max.
std::vector<std::int64_t> sequence_almost_periods(std::span<const double> eta, double epsilon,
                                                  std::int64_t k_max, std::size_t tail_offset = 0);

}  // namespace apfire
