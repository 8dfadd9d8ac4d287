#pragma once

#include "apfire/stimulus.hpp"

namespace apfire {

/// Settings for the brute-force reference routines. grid_step·sup|f| should
/// be well below the levels being crossed so crossings localize in one cell.
struct OracleConfig {
    double grid_step = 1e-5;
    double max_span = 1e4;
};

/// Reference first-crossing time: accumulates midpoint Riemann sums of f
/// from t until the running integral reaches `level`, then interpolates
/// linearly inside the final cell. Shares no code with the closed-form
/// antiderivative path on purpose. Result is within grid_step·(1 + sup|f|)
/// of the true crossing. Throws NoCrossingWithinSpan past cfg.max_span.
double brute_first_crossing(const Stimulus& f, double t, double level,
                            const OracleConfig& cfg = {});

/// Reference mean: midpoint Riemann sum over [0, T] divided by T.
double brute_mean(const Stimulus& f, double T, const OracleConfig& cfg = {});

}  // namespace apfire
