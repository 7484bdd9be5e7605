#include "spherelab/common.hpp"

#include <cstdio>

namespace spherelab {

namespace {
double pairwise_sum_rec(const double* v, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    std::size_t half = n / 2;
    return pairwise_sum_rec(v, half) + pairwise_sum_rec(v + half, n - half);
}
}  // namespace

double pairwise_sum(std::span<const double> v) { return pairwise_sum_rec(v.data(), v.size()); }

std::string format_double(double v) {
    char buf[40];
    // shortest representation that parses back exactly
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        double back = 0.0;
        std::sscanf(buf, "%lf", &back);
        if (back == v || (std::isnan(back) && std::isnan(v))) return buf;
    }
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace spherelab
