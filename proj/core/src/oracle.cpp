#include "apfire/oracle.hpp"

#include <cmath>
#include <string>

#include "apfire/errors.hpp"

namespace apfire {

double brute_first_crossing(const Stimulus& f, double t, double level, const OracleConfig& cfg) {
    if (!(level > 0.0)) throw ParseError("oracle: level must be > 0");
    if (!(cfg.grid_step > 0.0)) throw ParseError("oracle: grid_step must be > 0");
    const double h = cfg.grid_step;
    double acc = 0.0;
    const auto cells = static_cast<long long>(std::ceil(cfg.max_span / h));
    for (long long i = 0; i < cells; ++i) {
        const double cell_lo = t + static_cast<double>(i) * h;
        const double mid = cell_lo + 0.5 * h;
        const double gain = f.value(mid) * h;
        if (acc + gain >= level) {
            const double frac = gain != 0.0 ? (level - acc) / gain : 1.0;
            return cell_lo + frac * h;
        }
        acc += gain;
    }
    throw NoCrossingWithinSpan("no crossing of level " + std::to_string(level) + " within span " +
                               std::to_string(cfg.max_span));
}

double brute_mean(const Stimulus& f, double T, const OracleConfig& cfg) {
    if (!(T >= 1e3 * cfg.grid_step)) throw ParseError("oracle: T must be >= 1000 grid steps");
    const double h = cfg.grid_step;
    const auto cells = static_cast<long long>(std::floor(T / h));
    double acc = 0.0;
    for (long long i = 0; i < cells; ++i)
        acc += f.value(static_cast<double>(i) * h + 0.5 * h) * h;
    const double covered = static_cast<double>(cells) * h;
    if (covered < T) acc += f.value(0.5 * (covered + T)) * (T - covered);
    return acc / T;
}

}  // namespace apfire
