#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <queue>
#include <vector>

#include "bellap/errors.hpp"

namespace bellap {

// Gauss-Kronrod 7-15 nodes on [-1, 1].  node[0] is the center; entries
// 1..3 are the Gauss points, 4..7 the Kronrod-only points.
inline constexpr double kGK15Nodes[8] = {
    0.000000000000000, 0.405845151377397, 0.741531185599394, 0.949107912342759,
    0.207784955007898, 0.586087235467691, 0.864864423359769, 0.991455371120813,
};
inline constexpr double kGK15WeightsK[8] = {
    0.209482141084728, 0.190350578064785, 0.140653259715525, 0.063092092629979,
    0.204432940075298, 0.169004726639267, 0.104790010322250, 0.022935322010529,
};
inline constexpr double kGK7WeightsG[4] = {
    0.417959183673469, 0.381830050505119, 0.279705391489277, 0.129484966168870,
};

template <class Value>
struct PanelEstimate {
    Value value;
    double error;
};

template <class Value, class F>
PanelEstimate<Value> gk15_panel(F&& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    Value center = f(mid);
    Value kronrod = kGK15WeightsK[0] * center;
    Value gauss = kGK7WeightsG[0] * center;
    for (int i = 1; i < 8; ++i) {
        const double dx = half * kGK15Nodes[i];
        Value pair = f(mid + dx) + f(mid - dx);
        kronrod += kGK15WeightsK[i] * pair;
        if (i < 4) gauss += kGK7WeightsG[i] * pair;
    }
    kronrod *= half;
    gauss *= half;
    return {kronrod, std::abs(kronrod - gauss)};
}

struct QuadratureConfig {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    double tail_epsilon = 1e-11;  // kernel*|f| threshold for the tail cutoff
    double max_interval = 1e6;    // hard cap on the upper integration limit
    int max_subdivisions = 2000;
};

template <class Value>
struct QuadOutcome {
    Value value{};
    double error_estimate = 0.0;
    int panels = 0;
    bool converged = false;
};

// Globally adaptive bisection: always split the panel with the largest
// error until the summed panel errors meet the tolerance or the budget
// runs out.  Works for real and complex integrands.
template <class Value, class F>
QuadOutcome<Value> integrate_adaptive(F&& f, double a, double b, double abs_tol,
                                      double rel_tol, int max_subdivisions) {
    struct Panel {
        double a, b, error;
        Value value;
        bool operator<(const Panel& rhs) const { return error < rhs.error; }
    };
    std::priority_queue<Panel> heap;
    // seed with several panels: one panel's shared nodes can straddle a
    // narrow feature and report spurious convergence
    const int init = std::clamp(max_subdivisions, 1, a == b ? 1 : 8);
    Value total{};
    double total_err = 0;
    int panels = 0;
    for (int i = 0; i < init; ++i) {
        const double lo = a + (b - a) * i / init;
        const double hi = a + (b - a) * (i + 1) / init;
        auto est = gk15_panel<Value>(f, lo, hi);
        heap.push({lo, hi, est.error, est.value});
        total += est.value;
        total_err += est.error;
        ++panels;
    }
    while (panels < max_subdivisions) {
        if (total_err <= std::max(abs_tol, rel_tol * std::abs(total))) break;
        Panel worst = heap.top();
        if (!(worst.error > 0) || worst.b - worst.a < 1e-15 * (b - a)) break;
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        auto left = gk15_panel<Value>(f, worst.a, mid);
        auto right = gk15_panel<Value>(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push({worst.a, mid, left.error, left.value});
        heap.push({mid, worst.b, right.error, right.value});
        ++panels;
    }
    return {total, total_err, panels,
            total_err <= std::max(abs_tol, rel_tol * std::abs(total))};
}

}  // namespace bellap
