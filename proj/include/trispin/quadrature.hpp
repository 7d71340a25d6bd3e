#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace trispin {

struct QuadratureFailure : std::runtime_error {
    double achieved_error;
    QuadratureFailure(const std::string& msg, double e)
        : std::runtime_error(msg + " (error estimate " + std::to_string(e) + ")"),
          achieved_error(e) {}
};

namespace detail {

// 15-point Kronrod nodes on [-1, 1] with the embedded 7-point Gauss rule.
inline constexpr double kGK15Nodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0,
};
inline constexpr double kGK15WeightsK[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728,
};
inline constexpr double kGK15WeightsG[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469,
};

struct GKResult {
    double value;
    double error;
};

template <typename F>
GKResult gk15(const F& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double k = 0.0, g = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double x = h * kGK15Nodes[i];
        const double fv = (i == 7) ? f(c) : f(c - x) + f(c + x);
        k += kGK15WeightsK[i] * fv;
        if (i % 2 == 1) g += kGK15WeightsG[i / 2] * fv;  // Gauss nodes: 1,3,5,7
    }
    return {k * h, std::abs(k - g) * h};
}

} // namespace detail

// Adaptive Gauss-Kronrod integration with caller-provided initial breakpoints
// (used to pin known kinks, e.g. square-root kinks at +-pi).
template <typename F>
double integrate_adaptive(const F& f, std::vector<double> breakpoints, double abs_tol = 1e-12,
                          int max_intervals = 4000) {
    std::sort(breakpoints.begin(), breakpoints.end());
    struct Interval {
        double a, b, value, error;
    };
    std::vector<Interval> work;
    for (size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        auto r = detail::gk15(f, breakpoints[i], breakpoints[i + 1]);
        work.push_back({breakpoints[i], breakpoints[i + 1], r.value, r.error});
    }
    auto total_error = [&] {
        double e = 0.0;
        for (auto& w : work) e += w.error;
        return e;
    };
    while (total_error() > abs_tol && int(work.size()) < max_intervals) {
        auto worst = std::max_element(work.begin(), work.end(),
                                      [](const Interval& x, const Interval& y) {
                                          return x.error < y.error;
                                      });
        const double a = worst->a, b = worst->b, mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;  // interval at roundoff limit
        auto r1 = detail::gk15(f, a, mid);
        auto r2 = detail::gk15(f, mid, b);
        *worst = {a, mid, r1.value, r1.error};
        work.push_back({mid, b, r2.value, r2.error});
    }
    const double err = total_error();
    if (err > std::max(abs_tol * 16, 1e-10))
        throw QuadratureFailure("adaptive quadrature did not reach tolerance", err);
    double v = 0.0;
    for (auto& w : work) v += w.value;
    return v;
}

} // namespace trispin
