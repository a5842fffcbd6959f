#pragma once

#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "bellap/blissard.hpp"
#include "bellap/expr.hpp"
#include "bellap/kernels.hpp"
#include "bellap/quadrature.hpp"

namespace bellap {

struct TransformFlags {
    bool tail_truncated = false;       // cutoff capped by max_interval before the
                                       // tail criterion was met
    bool finite_interval_mode = false; // value is a finite-interval integral only
    bool hp_violated = false;          // decay probe failed; implies finite-interval

    std::string joined() const {
        std::string out;
        auto push = [&](const char* name) {
            if (!out.empty()) out += ';';
            out += name;
        };
        if (tail_truncated) push("tail-truncated");
        if (finite_interval_mode) push("finite-interval-mode");
        if (hp_violated) push("hp-violated");
        return out;
    }
};

struct TransformResult {
    double value = 0.0;
    double error_estimate = 0.0;
    double cutoff_T = 0.0;
    DecayReport decay;
    TransformFlags flags;
};

namespace transform_detail {

inline double sampled_sup(const FunctionExpr& f, double lo, double hi, int points = 9) {
    double m = 0;
    for (int i = 0; i < points; ++i) {
        const double t = lo + (hi - lo) * i / (points - 1);
        m = std::max(m, std::abs(f.eval(t)));
    }
    return m;
}

inline bool function_grows(const FunctionExpr& f) {
    const double near = std::max(sampled_sup(f, 0.0, 2.0), 1.0);
    const double far = sampled_sup(f, 500.0, 1000.0);
    return far > 10.0 * near;
}

// log-log least-squares slope of |f| over a geometric grid; the sampled
// polynomial growth order of f
inline double growth_exponent(const FunctionExpr& f, double t_lo = 1.0,
                              double t_hi = 1e4, int points = 17) {
    double mx = 0, my = 0;
    std::vector<double> xs(points), ys(points);
    const double ratio = std::pow(t_hi / t_lo, 1.0 / (points - 1));
    double t = t_lo;
    for (int i = 0; i < points; ++i, t *= ratio) {
        xs[i] = std::log(t);
        ys[i] = std::log(std::max(std::abs(f.eval(t)), 1e-300));
        mx += xs[i];
        my += ys[i];
    }
    mx /= points;
    my /= points;
    double sxx = 0, sxy = 0;
    for (int i = 0; i < points; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    return sxy / sxx;
}

// integral of g1*(T/t)^p over [T, inf): the tail model used for the error
// estimate once the local doubling exponent p is measured
inline double tail_estimate(const std::function<double(double)>& integrand, double T) {
    const double g1 = std::abs(integrand(T));
    if (g1 < 1e-305) return 0.0;
    const double g2 = std::abs(integrand(2 * T));
    if (g2 > 0 && g2 < g1) {
        const double p = std::log2(g1 / g2);
        return p > 1 ? g1 * T / (p - 1) : g1 * T;
    }
    return g1 * T;
}

}  // namespace transform_detail

// F(s) = integral of kernel(s, t) * f(t) over [0, inf), realized on [0, T]
// with T from the tail criterion kernel(s,T) * sup|f| < tail_epsilon and the
// modeled tail folded into the error estimate.
inline TransformResult transform(const FunctionExpr& f, const KernelSpec& spec,
                                 double s, const QuadratureConfig& q = {}) {
    using transform_detail::sampled_sup;
    if (s <= 0) throw domain_error("transform needs s > 0");
    TransformResult res;
    const double probe_tmax = std::min(q.max_interval, std::max(20.0, 40.0 / s));
    res.decay = hp_decay_probe(spec, s, probe_tmax, 33);

    auto integrand = [&](double t) { return kernel_eval(spec, s, t) * f.eval(t); };

    using V = DecayReport::Verdict;
    if (res.decay.verdict == V::non_decaying ||
        res.decay.verdict == V::divergent_denominator) {
        if (transform_detail::function_grows(f))
            throw divergence_error(
                "kernel fails to decay and f grows; no finite-interval override");
        res.flags.hp_violated = true;
        res.flags.finite_interval_mode = true;
        double T = 0;
        for (std::size_t i = 0; i < res.decay.kernel_values.size(); ++i)
            if (std::isfinite(res.decay.kernel_values[i])) T = res.decay.grid[i];
        if (T <= 0)
            throw divergence_error("kernel denominator diverges arbitrarily close to 0");
        auto out = integrate_adaptive<double>(integrand, 0, T, q.abs_tol, q.rel_tol,
                                              q.max_subdivisions);
        if (!out.converged)
            throw tolerance_error("quadrature budget exhausted on [0, " +
                                  std::to_string(T) + "]");
        res.value = out.value;
        res.error_estimate = out.error_estimate;
        res.cutoff_T = T;
        return res;
    }

    double T = 2.0 / s;
    bool met = false;
    while (T <= q.max_interval) {
        const double kb =
            kernel_eval(spec, s, T) * std::max(sampled_sup(f, T, 2 * T), 1e-300);
        if (kb < q.tail_epsilon) {
            met = true;
            break;
        }
        T *= 2;
    }
    if (!met) {
        T = q.max_interval;
        res.flags.tail_truncated = true;
    }

    auto out = integrate_adaptive<double>(integrand, 0, T, q.abs_tol, q.rel_tol,
                                          q.max_subdivisions);
    if (!out.converged)
        throw tolerance_error("quadrature budget exhausted on [0, " + std::to_string(T) +
                              "]");
    res.value = out.value;
    res.error_estimate = out.error_estimate + transform_detail::tail_estimate(integrand, T);
    res.cutoff_T = T;
    return res;
}

// F_r^[n](s): the denominator is the degree-n truncation of e_r(st), an
// algebraically decaying kernel, so f may grow at most like t^{n-1-delta}.
inline TransformResult transform_truncated(const FunctionExpr& f, int r, int n, double s,
                                           const QuadratureConfig& q = {}) {
    if (n < 1) throw domain_error("truncation order must be >= 1");
    const double p_f = transform_detail::growth_exponent(f);
    if (p_f >= n - 1 - 0.1) {
        char msg[96];
        std::snprintf(msg, sizeof msg,
                      "sampled growth ~t^%.2f of f defeats the t^-%d kernel decay", p_f, n);
        throw non_integrable_error(msg);
    }
    TransformResult res = transform(f, KernelSpec::truncated_laguerre(r, n), s, q);
    if (res.decay.verdict == DecayReport::Verdict::sub_exponential)
        res.flags.finite_interval_mode = true;
    return res;
}

enum class TransformProperty { linearity, homothety, scaling, derivative_action };

struct PropertyParams {
    std::optional<FunctionExpr> g;  // linearity partner
    Rational alpha = Rational(2);
    Rational beta = Rational(3);
    Rational x = Rational(2);  // homothety scale
    Rational d = Rational(2);  // argument scale
};

namespace transform_detail {

inline UmbralSequence kernel_sequence(const KernelSpec& spec) {
    switch (spec.family) {
        case KernelSpec::Family::laguerre:
            return spec.r == 0 ? UmbralSequence::ones()
                               : UmbralSequence::laguerre_rule(spec.r);
        case KernelSpec::Family::reciprocal_egf:
            return *spec.a;
        default:
            throw domain_error("this identity needs a full (non-truncated) kernel");
    }
}

}  // namespace transform_detail

// |LHS - RHS| of one of the transform identities, both sides computed
// independently by quadrature.
inline double verify_property(TransformProperty prop, const FunctionExpr& f,
                              const KernelSpec& spec, double s,
                              const PropertyParams& params = {},
                              const QuadratureConfig& q = {}) {
    switch (prop) {
        case TransformProperty::linearity: {
            if (!params.g) throw domain_error("linearity needs a second function");
            FunctionExpr combo =
                FunctionExpr::linear_combination(params.alpha, f, params.beta, *params.g);
            const double lhs = transform(combo, spec, s, q).value;
            const double rhs = to_double(params.alpha) * transform(f, spec, s, q).value +
                               to_double(params.beta) * transform(*params.g, spec, s, q).value;
            return std::abs(lhs - rhs);
        }
        case TransformProperty::homothety: {
            if (params.x <= 0) throw domain_error("homothety scale must be positive");
            UmbralSequence a = transform_detail::kernel_sequence(spec);
            const double lhs =
                transform(f, KernelSpec::reciprocal_egf(a.scaled(params.x)), s, q).value;
            const double rhs = transform(f, spec, to_double(params.x) * s, q).value;
            return std::abs(lhs - rhs);
        }
        case TransformProperty::scaling: {
            if (params.d <= 0) throw domain_error("argument scale must be positive");
            const double d = to_double(params.d);
            const double lhs = transform(f.scale_argument(params.d), spec, s, q).value;
            const double rhs = transform(f, spec, s / d, q).value / d;
            return std::abs(lhs - rhs);
        }
        case TransformProperty::derivative_action: {
            UmbralSequence a = transform_detail::kernel_sequence(spec);
            const double lhs = transform(f.derivative(), spec, s, q).value;
            // shifted kernel sum C_{k+1}(a) x^k / k! = -E'(x)/E(x)^2, so the
            // stated right side -s * integral(shifted * f) - f(0) becomes
            // s * integral(E'/E^2 (st) * f(t)) - f(0)
            auto shifted = [&](double t) {
                const double x = s * t;
                const double den = egf_eval(a, x, spec.eval_tol, spec.max_terms);
                if (std::isinf(den)) return 0.0;
                return egf_derivative_eval(a, x, spec.eval_tol, spec.max_terms) /
                       (den * den) * f.eval(t);
            };
            double T = 2.0 / s;
            while (T <= q.max_interval) {
                if (std::abs(shifted(T)) < q.tail_epsilon) break;
                T *= 2;
            }
            auto out = integrate_adaptive<double>(shifted, 0, std::min(T, q.max_interval),
                                                  q.abs_tol, q.rel_tol, q.max_subdivisions);
            if (!out.converged)
                throw tolerance_error("quadrature budget exhausted in derivative identity");
            const double rhs = s * out.value - f.eval(0.0);
            return std::abs(lhs - rhs);
        }
    }
    throw domain_error("unknown property");
}

// --- formal term tables (never integrated) --------------------------------

enum class FormalKind { taylor, laurent };

// Entry (n, k) holds binom(n,k) * c_{n-k} * C_k(a); the attached monomial is
// s^k t^n / n! for the taylor kind and s^k t^{2k-n} / n! for the laurent
// kind.  Purely formal: term-wise integration over [0, inf) diverges and is
// deliberately not offered.
struct FormalTermTable {
    FormalKind kind;
    std::vector<std::vector<Rational>> rows;

    int s_power(int, int k) const { return k; }
    int t_power(int n, int k) const { return kind == FormalKind::taylor ? n : 2 * k - n; }

    // finite double resummation of every tabulated term; a consistency
    // device for small s*t, not an evaluation of the transform
    double resum(double s, double t) const {
        double acc = 0;
        double nfact = 1;
        for (std::size_t n = 0; n < rows.size(); ++n) {
            if (n > 0) nfact *= n;
            for (std::size_t k = 0; k < rows[n].size(); ++k) {
                if (rows[n][k] == 0) continue;
                acc += to_double(rows[n][k]) * std::pow(s, double(k)) *
                       std::pow(t, double(t_power(int(n), int(k)))) / nfact;
            }
        }
        return acc;
    }
};

inline FormalTermTable formal_integrand_series(const std::vector<Rational>& c,
                                               FormalKind kind, const UmbralSequence& a,
                                               int N) {
    if (N < 0) throw domain_error("order must be >= 0");
    if (static_cast<int>(c.size()) < N + 1)
        throw domain_error("need coefficients c_0..c_N");
    const std::vector<Rational> C = coeff_C(a, N);
    FormalTermTable table{kind, {}};
    table.rows.resize(N + 1);
    for (int n = 0; n <= N; ++n) {
        table.rows[n].resize(n + 1);
        for (int k = 0; k <= n; ++k)
            table.rows[n][k] = Rational(binomial(n, k)) * c[n - k] * C[k];
    }
    return table;
}

// --- experimental inversion ------------------------------------------------

struct InversionResult {
    double value = 0.0;
    double error_estimate = std::numeric_limits<double>::infinity();
    double contour_height = 0.0;  // |Im s| reached on the contour
    int segments = 0;
    bool converged = false;
    bool contour_divergence = false;  // integrand grew along the contour
};

// Contour integral (1/2pi) int e_r((gamma+iu) t) F(gamma+iu) du, realized by
// conjugate symmetry as (1/pi) Re int_0^U.  Half-period segments (length
// pi/t) are each integrated adaptively; the oscillating partial sums are
// tamed by iterated averaging.  For r = 0 this is the classical inversion
// integral; for r >= 1 the integrand typically grows along the contour and
// the run reports that growth instead of a certified value.
inline InversionResult bromwich_invert(
    const std::function<std::complex<double>(std::complex<double>)>& F, int r, double t,
    double gamma, const QuadratureConfig& q = {}) {
    if (t <= 0) throw domain_error("inversion needs t > 0");
    if (r < 0) throw domain_error("order r must be >= 0");
    const double L = std::numbers::pi / t;
    auto er = [&](std::complex<double> z) {
        return r == 0 ? std::exp(z) : laguerre_exp_complex(r, z);
    };
    auto g = [&](double u) {
        const std::complex<double> s(gamma, u);
        return (er(s * t) * F(s)).real();
    };

    constexpr int kLevels = 12;
    constexpr int kMaxSegments = 400;
    const double stop_tol = std::max(q.abs_tol, 1e-12) * 10;

    InversionResult res;
    std::vector<double> partials;
    double acc = 0;
    double first_mag = -1, prev_mag = 0;
    int grow_streak = 0, settle_streak = 0;
    double prev_est = std::numeric_limits<double>::quiet_NaN();

    auto averaged = [&] {
        std::vector<double> w(partials.end() - (kLevels + 1), partials.end());
        while (w.size() > 1) {
            for (std::size_t i = 0; i + 1 < w.size(); ++i) w[i] = 0.5 * (w[i] + w[i + 1]);
            w.pop_back();
        }
        return w[0] / std::numbers::pi;
    };

    for (int j = 0; j < kMaxSegments; ++j) {
        auto seg = integrate_adaptive<double>(g, j * L, (j + 1) * L, 1e-13, 1e-12, 60);
        res.segments = j + 1;
        res.contour_height = (j + 1) * L;
        if (!std::isfinite(seg.value)) {
            res.contour_divergence = true;
            break;
        }
        const double mag = std::abs(seg.value);
        if (j == 0) first_mag = std::max(mag, 1e-300);
        grow_streak = (j > 0 && mag > prev_mag) ? grow_streak + 1 : 0;
        prev_mag = mag;
        if (grow_streak >= 6 && mag > 100 * first_mag) {
            res.contour_divergence = true;
            break;
        }
        acc += seg.value;
        partials.push_back(acc);
        if (static_cast<int>(partials.size()) > 2 * kLevels && j % 4 == 0) {
            const double est = averaged();
            if (!std::isnan(prev_est)) {
                const double change = std::abs(est - prev_est);
                res.value = est;
                res.error_estimate = change;
                if (change < stop_tol) {
                    if (++settle_streak >= 2) {
                        res.converged = true;
                        return res;
                    }
                } else {
                    settle_streak = 0;
                }
            }
            prev_est = est;
        }
    }
    if (static_cast<int>(partials.size()) > kLevels) {
        res.value = averaged();
        if (!std::isnan(prev_est)) res.error_estimate = std::abs(res.value - prev_est);
    }
    return res;
}

// F_r(z) at complex z with Re z > 0; the numeric bridge that lets the
// inversion experiment run against transforms this library computed itself.
inline std::complex<double> transform_complex_s(const FunctionExpr& f, int r,
                                                std::complex<double> z,
                                                const QuadratureConfig& q = {}) {
    if (z.real() <= 0) throw domain_error("complex transform needs Re s > 0");
    auto kernel_c = [&](double t) -> std::complex<double> {
        const std::complex<double> den =
            r == 0 ? std::exp(z * t) : laguerre_exp_complex(r, z * t);
        if (!std::isfinite(std::abs(den))) return 0.0;
        return 1.0 / den;
    };
    auto integrand = [&](double t) { return kernel_c(t) * f.eval(t); };

    double T = 2.0 / std::abs(z);
    while (T <= q.max_interval) {
        const double kb = std::abs(kernel_c(T)) *
                          std::max(transform_detail::sampled_sup(f, T, 2 * T), 1e-300);
        if (kb < q.tail_epsilon) break;
        T *= 2;
    }
    T = std::min(T, q.max_interval);
    auto out = integrate_adaptive<std::complex<double>>(integrand, 0, T, q.abs_tol,
                                                        q.rel_tol, q.max_subdivisions);
    return out.value;
}

}  // namespace bellap
