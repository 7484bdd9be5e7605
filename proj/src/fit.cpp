#include "spherelab/fit.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace spherelab {

FitResult fit_linear(std::span<const std::pair<double, double>> pts, double flag_threshold) {
    if (pts.size() < 2) throw std::domain_error("fit: need at least two points");
    const double n = static_cast<double>(pts.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double det = n * sxx - sx * sx;
    if (det == 0.0) throw std::domain_error("fit: degenerate abscissas");
    FitResult r;
    r.slope = (n * sxy - sx * sy) / det;
    r.intercept = (sy - r.slope * sx) / n;
    double ss = 0.0;
    for (const auto& [x, y] : pts) {
        double e = y - (r.slope * x + r.intercept);
        ss += e * e;
    }
    r.residual_rms = std::sqrt(ss / n);
    r.n_used = static_cast<int>(pts.size());
    r.flagged = r.residual_rms > flag_threshold;
    return r;
}

FitResult fit_loglog(std::span<const std::pair<double, double>> pts, bool drop_first,
                     double flag_threshold) {
    std::vector<std::pair<double, double>> logs;
    logs.reserve(pts.size());
    for (const auto& [x, y] : pts) {
        if (x <= 0.0 || y <= 0.0)
            throw std::domain_error("fit_loglog: points must be positive");
        logs.emplace_back(std::log(x), std::log(y));
    }
    std::size_t skip = (drop_first && logs.size() >= 3) ? 1 : 0;
    return fit_linear(std::span<const std::pair<double, double>>(logs).subspan(skip),
                      flag_threshold);
}

}  // namespace spherelab
