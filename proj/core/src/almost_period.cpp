#include "apfire/almost_period.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "apfire/errors.hpp"

namespace apfire {

namespace {

void validate_params(const ScanParams& params) {
    if (!(params.epsilon > 0.0)) throw ParseError("scan: epsilon must be > 0");
    if (!(params.tau_lo <= params.tau_hi)) throw ParseError("scan: tau_lo must be <= tau_hi");
    if (!(params.tau_step > 0.0)) throw ParseError("scan: tau_step must be > 0");
    if ((params.tau_hi - params.tau_lo) / params.tau_step > 5e8)
        throw ParseError("scan: tau grid too fine (> 5e8 points)");
}

std::vector<double> tau_grid(const ScanParams& params) {
    std::vector<double> taus;
    const auto n = static_cast<std::size_t>(
        std::floor((params.tau_hi - params.tau_lo) / params.tau_step + 1e-9));
    taus.reserve(n + 2);
    for (std::size_t i = 0; i <= n; ++i)
        taus.push_back(params.tau_lo + static_cast<double>(i) * params.tau_step);
    if (taus.back() < params.tau_hi) taus.push_back(params.tau_hi);
    return taus;
}

// Deterministic golden-section minimization; depends only on the metric and
// the bracket, never on the acceptance threshold.
template <typename Metric>
std::pair<double, double> golden_minimize(const Metric& metric, double a, double b) {
    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double m1 = metric(x1);
    double m2 = metric(x2);
    for (int i = 0; i < 64 && b - a > 1e-12; ++i) {
        if (m1 <= m2) {
            b = x2;
            x2 = x1;
            m2 = m1;
            x1 = b - kInvPhi * (b - a);
            m1 = metric(x1);
        } else {
            a = x1;
            x1 = x2;
            m1 = m2;
            x2 = a + kInvPhi * (b - a);
            m2 = metric(x2);
        }
    }
    return m1 <= m2 ? std::make_pair(x1, m1) : std::make_pair(x2, m2);
}

template <typename Metric>
AlmostPeriodScan run_scan(const Metric& metric, const ScanParams& params) {
    validate_params(params);
    AlmostPeriodScan scan{params.epsilon, params.tau_lo, params.tau_hi,
                          params.tau_step, {},        {},
                          0.0};
    for (double tau : tau_grid(params)) {
        const double m = metric(tau);
        const bool accepted = m < params.epsilon;
        scan.records.push_back({tau, m, accepted});
        if (accepted) {
            scan.accepted.push_back(tau);
        } else if (params.refine_factor > 1.0 && m < params.refine_factor * params.epsilon) {
            const double lo = std::max(params.tau_lo, tau - params.tau_step);
            const double hi = std::min(params.tau_hi, tau + params.tau_step);
            const auto [tau_star, m_star] = golden_minimize(metric, lo, hi);
            if (m_star < params.epsilon) {
                scan.accepted.push_back(tau_star);
                scan.records.push_back({tau_star, m_star, true});
            }
        }
    }
    std::sort(scan.accepted.begin(), scan.accepted.end());
    scan.accepted.erase(std::unique(scan.accepted.begin(), scan.accepted.end(),
                                    [&](double x, double y) {
                                        return std::abs(y - x) <= 1e-6 * params.tau_step;
                                    }),
                        scan.accepted.end());
    std::sort(scan.records.begin(), scan.records.end(),
              [](const ScanRecord& x, const ScanRecord& y) { return x.tau < y.tau; });

    if (scan.accepted.empty()) {
        scan.max_gap = params.tau_hi - params.tau_lo;
    } else {
        double gap = scan.accepted.front() - params.tau_lo;
        for (std::size_t i = 0; i + 1 < scan.accepted.size(); ++i)
            gap = std::max(gap, scan.accepted[i + 1] - scan.accepted[i]);
        gap = std::max(gap, params.tau_hi - scan.accepted.back());
        scan.max_gap = gap;
    }
    return scan;
}

}  // namespace

AlmostPeriodScan scan_sup_almost_periods(const Stimulus& f, const ScanParams& params,
                                         const Window& w) {
    const std::vector<double> grid = w.grid();
    const auto metric = [&](double tau) {
        const Stimulus d = shift_difference(f, tau);
        double m = 0.0;
        for (double t : grid) m = std::max(m, std::abs(d.value(t)));
        for (double t : d.breakpoints_within(w.lo, w.hi)) m = std::max(m, std::abs(d.value(t)));
        return m;
    };
    return run_scan(metric, params);
}

AlmostPeriodScan scan_stepanov_almost_periods(const Stimulus& f, const ScanParams& params,
                                              const Window& w) {
    const auto metric = [&](double tau) { return stepanov_shift_distance(f, tau, w); };
    return run_scan(metric, params);
}

namespace {

std::vector<double> displacement_on(const FiringEngine& engine, const std::vector<double>& grid) {
    std::vector<double> psi;
    psi.reserve(grid.size());
    for (double t : grid) psi.push_back(engine.phi(t) - t);
    return psi;
}

double displacement_shift_deviation(const FiringEngine& engine, const std::vector<double>& grid,
                                    const std::vector<double>& psi0, double tau) {
    double m = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double shifted = grid[i] + tau;
        const double psi_tau = engine.phi(shifted) - shifted;
        m = std::max(m, std::abs(psi_tau - psi0[i]));
    }
    return m;
}

}  // namespace

AlmostPeriodScan scan_displacement_almost_periods(const FiringEngine& engine,
                                                  const ScanParams& params, const Window& w) {
    const std::vector<double> grid = w.grid();
    const std::vector<double> psi0 = displacement_on(engine, grid);
    const auto metric = [&](double tau) {
        return displacement_shift_deviation(engine, grid, psi0, tau);
    };
    return run_scan(metric, params);
}

double relative_density_gap(const AlmostPeriodScan& scan) { return scan.max_gap; }

ApVerificationReport verify_displacement_theorem(const FiringEngine& engine, double epsilon,
                                                 double tau_lo, double tau_hi, double tau_step,
                                                 const Window& w) {
    if (!(epsilon > 0.0)) throw ParseError("verify: epsilon must be > 0");
    const double delta = engine.stimulus().lower_bound();
    if (!(delta > 0.0))
        throw CannotCertifyPositivity("certified lower bound of the stimulus is " +
                                      std::to_string(delta) + "; need > 0");
    ApVerificationReport report;
    report.delta = delta;
    report.epsilon = epsilon;
    report.stepanov_threshold = delta * delta * epsilon / 2.0;

    ScanParams scan_params{report.stepanov_threshold, tau_lo, tau_hi, tau_step, 3.0};
    const AlmostPeriodScan scan =
        scan_stepanov_almost_periods(engine.stimulus(), scan_params, w);
    report.candidates = scan.accepted;

    const std::vector<double> grid = w.grid();
    const std::vector<double> psi0 = displacement_on(engine, grid);
    for (double tau : report.candidates) {
        const double dev = displacement_shift_deviation(engine, grid, psi0, tau);
        report.max_displacement_deviation.push_back(dev);
        if (dev >= epsilon) report.violations.push_back(tau);
    }
    if (report.candidates.empty())
        report.status = ApVerificationReport::Status::Inconclusive;
    else if (!report.violations.empty())
        report.status = ApVerificationReport::Status::Fail;
    else
        report.status = ApVerificationReport::Status::Pass;
    return report;
}

ApproximationReport compare_with_periodic_approximant(const FiringEngine& engine,
                                                      const FiringEngine& approximant,
                                                      double epsilon, const Window& w) {
    if (!(epsilon > 0.0)) throw ParseError("approx-compare: epsilon must be > 0");
    const double delta = engine.stimulus().lower_bound();
    if (!(delta > 0.0))
        throw CannotCertifyPositivity("certified lower bound of the stimulus is " +
                                      std::to_string(delta) + "; need > 0");
    ApproximationReport report;
    report.epsilon = epsilon;
    report.sup_stimulus_distance = sup_distance(engine.stimulus(), approximant.stimulus(), w);
    report.required_bound = delta * delta * epsilon / 4.0;
    double sup_phi = 0.0;
    for (double t : w.grid())
        sup_phi = std::max(sup_phi, std::abs(engine.phi(t) - approximant.phi(t)));
    report.sup_phi_distance = sup_phi;
    report.precondition_met = report.sup_stimulus_distance < report.required_bound;
    report.implication_holds = !report.precondition_met || report.sup_phi_distance < epsilon;
    return report;
}

double sequence_shift_deviation(std::span<const double> eta, std::int64_t k,
                                std::size_t tail_offset) {
    if (k < 1) throw ParseError("sequence: shift must be >= 1");
    const auto n = eta.size();
    const auto shift = static_cast<std::size_t>(k);
    if (tail_offset + shift >= n) throw ParseError("sequence: shift too large for sequence");
    double m = 0.0;
    for (std::size_t i = tail_offset; i + shift < n; ++i)
        m = std::max(m, std::abs(eta[i + shift] - eta[i]));
    return m;
}

std::vector<std::int64_t> sequence_almost_periods(std::span<const double> eta, double epsilon,
                                                  std::int64_t k_max, std::size_t tail_offset) {
    if (!(epsilon > 0.0)) throw ParseError("sequence: epsilon must be > 0");
    if (k_max < 1) throw ParseError("sequence: k_max must be >= 1");
    if (eta.size() < tail_offset + 2 * static_cast<std::size_t>(k_max))
        throw ParseError("sequence: need at least tail_offset + 2*k_max entries, got " +
                         std::to_string(eta.size()));
    std::vector<std::int64_t> accepted;
    for (std::int64_t k = 1; k <= k_max; ++k)
        if (sequence_shift_deviation(eta, k, tail_offset) < epsilon) accepted.push_back(k);
    return accepted;
}

}  // namespace apfire
