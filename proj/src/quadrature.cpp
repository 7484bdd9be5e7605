#include "spherelab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

namespace spherelab {

namespace {

// Gauss 7 / Kronrod 15 nodes and weights on [-1,1] (symmetric half listed).
constexpr double kNodes[8] = {
    0.000000000000000, 0.405845151377397, 0.741531185599394, 0.949107912342759,
    0.207784955007898, 0.586087235467691, 0.864864423359769, 0.991455371120813};
constexpr double kGaussW[8] = {
    0.417959183673469, 0.381830050505119, 0.279705391489277, 0.129484966168870,
    0.0, 0.0, 0.0, 0.0};
constexpr double kKronrodW[8] = {
    0.209482141084728, 0.190350578064785, 0.140653259715525, 0.063092092629979,
    0.204432940075298, 0.169004726639267, 0.104790010322250, 0.022935322010529};

struct Panel {
    double a, b;
    cplx value;
    double err;
    bool operator<(const Panel& o) const { return err < o.err; }
};

Panel eval_panel(const std::function<cplx(double)>& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    cplx f0 = f(mid);
    cplx g7 = kGaussW[0] * f0;
    cplx k15 = kKronrodW[0] * f0;
    for (int i = 1; i < 8; ++i) {
        double dx = h * kNodes[i];
        cplx fi = f(mid + dx) + f(mid - dx);
        g7 += kGaussW[i] * fi;
        k15 += kKronrodW[i] * fi;
    }
    g7 *= h;
    k15 *= h;
    return Panel{a, b, k15, std::abs(k15 - g7)};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<cplx(double)>& f, double a, double b,
                                    const QuadratureOptions& opt) {
    QuadratureResult res;
    if (a == b) return res;

    std::priority_queue<Panel> queue;
    long evals = 0;

    int seed = 1;
    if (opt.initial_step > 0.0)
        seed = std::max<int>(1, static_cast<int>(std::ceil((b - a) / opt.initial_step)));
    seed = std::min(seed, 1 << 16);
    cplx total = 0.0;
    double total_err = 0.0;
    for (int i = 0; i < seed; ++i) {
        double lo = a + (b - a) * i / seed;
        double hi = a + (b - a) * (i + 1) / seed;
        Panel p = eval_panel(f, lo, hi);
        evals += 15;
        total += p.value;
        total_err += p.err;
        queue.push(p);
    }

    auto good_enough = [&] {
        return total_err <= opt.abs_tol || total_err <= opt.rel_tol * std::abs(total);
    };

    while (!good_enough()) {
        if (evals + 30 > opt.max_evals) {
            double rel = std::abs(total) > 0 ? total_err / std::abs(total) : total_err;
            throw quadrature_error(
                "adaptive quadrature did not converge on [" + std::to_string(a) + ", " +
                    std::to_string(b) + "]: est. rel error " + std::to_string(rel) + " after " +
                    std::to_string(evals) + " evals",
                rel, evals);
        }
        Panel worst = queue.top();
        queue.pop();
        total -= worst.value;
        total_err -= worst.err;
        double mid = 0.5 * (worst.a + worst.b);
        Panel left = eval_panel(f, worst.a, mid);
        Panel right = eval_panel(f, mid, worst.b);
        evals += 30;
        total += left.value + right.value;
        total_err += left.err + right.err;
        queue.push(left);
        queue.push(right);
    }

    res.value = total;
    res.error_estimate = total_err;
    res.evals = evals;
    return res;
}

}  // namespace spherelab
