#pragma once

#include <vector>

namespace apfire {

/// Finite analysis window [lo, hi] with a uniform evaluation grid.
///
/// Grid points are lo, lo + step, ... ; the endpoint hi is always included
/// as the final point. Every scan result quotes its window so runs are
/// reproducible.
struct Window {
    double lo;
    double hi;
    double step;

    Window(double lo_, double hi_, double step_);

    std::vector<double> grid() const;
    std::size_t grid_size() const;
};

}  // namespace apfire
