#include "apfire/window.hpp"

#include <cmath>

#include "apfire/errors.hpp"

namespace apfire {

Window::Window(double lo_, double hi_, double step_) : lo(lo_), hi(hi_), step(step_) {
    if (!std::isfinite(lo) || !std::isfinite(hi)) throw ParseError("window: bounds must be finite");
    if (!(lo < hi)) throw ParseError("window: lo must be < hi");
    if (!(step > 0.0)) throw ParseError("window: step must be > 0");
    if ((hi - lo) / step > 5e8) throw ParseError("window: grid too fine (> 5e8 points)");
}

std::vector<double> Window::grid() const {
    std::vector<double> pts;
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
    pts.reserve(n + 2);
    for (std::size_t i = 0; i <= n; ++i) pts.push_back(lo + static_cast<double>(i) * step);
    if (pts.back() < hi) pts.push_back(hi);
    return pts;
}

std::size_t Window::grid_size() const {
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
    return lo + static_cast<double>(n) * step < hi ? n + 2 : n + 1;
}

}  // namespace apfire
