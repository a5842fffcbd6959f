#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "bellap/sequence.hpp"

namespace bellap {

inline constexpr double kOverflowGuard = 1e300;

// Sum of a_k x^k / k! for x >= 0.  Terms advance by the exact ratio
// a_k / a_{k-1} * x / k so that huge a_k against tiny x^k/k! (and the
// reverse) never meet in a single doomed product; after a zero term the
// iteration reseeds from scratch.  Stops once two consecutive terms fall
// below tol relative to the partial sum.  A partial sum beyond the overflow
// guard means "converges but unrepresentable" for sequences known entire
// (reported as +inf) and is a divergence error otherwise.
inline double egf_eval(const UmbralSequence& a, double x, double tol,
                       int max_terms = 10000) {
    if (x < 0) throw domain_error("series evaluation needs x >= 0");
    if (tol <= 0) throw domain_error("tolerance must be positive");
    double sum = 1.0;  // a_0 = 1
    if (x == 0) return sum;
    double term = 1.0;
    Rational prev = 1;
    int small_streak = 0;
    for (int k = 1; k <= max_terms; ++k) {
        Rational ak = a.term(k);
        if (prev != 0) {
            term *= to_double(ak / prev) * x / k;
        } else {
            term = to_double(ak / factorial(k)) * std::pow(x, k);
        }
        prev = ak;
        if (!std::isfinite(term)) {
            if (a.entire_hint() && term > 0)
                return std::numeric_limits<double>::infinity();
            throw divergence_error("series term overflowed for sequence " + a.label());
        }
        sum += term;
        if (std::abs(sum) > kOverflowGuard) {
            if (a.entire_hint()) return std::numeric_limits<double>::infinity();
            throw divergence_error("partial sums overflowed for sequence " + a.label());
        }
        if (std::abs(term) < tol * std::max(std::abs(sum), 1e-300)) {
            if (++small_streak >= 2) return sum;
        } else {
            small_streak = 0;
        }
    }
    throw divergence_error("series stopping rule never fired for sequence " + a.label());
}

// Derivative of the same series: sum of a_{k+1} x^k / k!.
inline double egf_derivative_eval(const UmbralSequence& a, double x, double tol,
                                  int max_terms = 10000) {
    if (x < 0) throw domain_error("series evaluation needs x >= 0");
    double sum = to_double(a.term(1));
    double term = sum;
    Rational prev = a.term(1);
    int small_streak = 0;
    for (int k = 1; k <= max_terms; ++k) {
        Rational ak = a.term(k + 1);
        if (prev != 0 && term != 0) {
            term *= to_double(ak / prev) * x / k;
        } else {
            term = to_double(ak / factorial(k)) * std::pow(x, k);
        }
        prev = ak;
        if (!std::isfinite(term))
            throw divergence_error("series term overflowed for sequence " + a.label());
        sum += term;
        if (std::abs(sum) > kOverflowGuard)
            throw divergence_error("partial sums overflowed for sequence " + a.label());
        if (std::abs(term) < tol * std::max(std::abs(sum), 1e-300)) {
            if (++small_streak >= 2) return sum;
        } else {
            small_streak = 0;
        }
    }
    throw divergence_error("series stopping rule never fired for sequence " + a.label());
}

// e_r(x) = sum of x^k / (k!)^{r+1}; e_0 = exp.  Entire and increasing on
// x >= 0, so overflow cleanly means +inf.
inline double laguerre_exp(int r, double x, double tol = 1e-16, int max_terms = 10000) {
    if (r < 0) throw domain_error("order r must be >= 0");
    if (x < 0) throw domain_error("series evaluation needs x >= 0");
    double sum = 1.0, term = 1.0;
    if (x == 0) return sum;
    int small_streak = 0;
    for (int k = 0; k < max_terms; ++k) {
        double ratio = x;
        for (int j = 0; j <= r; ++j) ratio /= (k + 1);
        term *= ratio;
        sum += term;
        if (sum > kOverflowGuard) return std::numeric_limits<double>::infinity();
        if (term < tol * sum) {
            if (++small_streak >= 2) return sum;
        } else {
            small_streak = 0;
        }
    }
    throw divergence_error("Laguerre-type series did not settle");
}

// Same series at a complex argument; the coefficients are real, so
// e_r(conj z) = conj e_r(z).  Used by the inversion contour.
inline std::complex<double> laguerre_exp_complex(int r, std::complex<double> z,
                                                 double tol = 1e-16,
                                                 int max_terms = 10000) {
    if (r < 0) throw domain_error("order r must be >= 0");
    std::complex<double> sum = 1.0, term = 1.0;
    if (z == 0.0) return sum;
    int small_streak = 0;
    for (int k = 0; k < max_terms; ++k) {
        std::complex<double> ratio = z;
        for (int j = 0; j <= r; ++j) ratio /= double(k + 1);
        term *= ratio;
        sum += term;
        if (std::abs(sum) > kOverflowGuard)
            return {std::numeric_limits<double>::infinity(),
                    std::numeric_limits<double>::infinity()};
        if (std::abs(term) < tol * std::abs(sum)) {
            if (++small_streak >= 2) return sum;
        } else {
            small_streak = 0;
        }
    }
    throw divergence_error("Laguerre-type series did not settle at complex argument");
}

struct KernelSpec {
    enum class Family { reciprocal_egf, laguerre, truncated_laguerre, truncated_geometric };

    Family family;
    std::optional<UmbralSequence> a;  // reciprocal_egf only
    int r = 0;                        // laguerre orders
    int n = 0;                        // truncation degree
    double eval_tol = 1e-15;
    int max_terms = 10000;

    static KernelSpec reciprocal_egf(UmbralSequence seq) {
        KernelSpec k{Family::reciprocal_egf};
        k.a = std::move(seq);
        return k;
    }
    static KernelSpec laguerre(int r) {
        if (r < 0) throw domain_error("order r must be >= 0");
        KernelSpec k{Family::laguerre};
        k.r = r;
        return k;
    }
    static KernelSpec truncated_laguerre(int r, int n) {
        if (r < 0 || n < 1) throw domain_error("truncated kernel needs r >= 0, n >= 1");
        KernelSpec k{Family::truncated_laguerre};
        k.r = r;
        k.n = n;
        return k;
    }
    static KernelSpec truncated_geometric(int n) {
        if (n < 1) throw domain_error("truncated kernel needs n >= 1");
        KernelSpec k{Family::truncated_geometric};
        k.n = n;
        return k;
    }

    std::string label() const {
        switch (family) {
            case Family::reciprocal_egf:
                return "recip-egf(" + a->label() + ")";
            case Family::laguerre:
                return "laguerre(" + std::to_string(r) + ")";
            case Family::truncated_laguerre:
                return "trunc-laguerre(" + std::to_string(r) + "," + std::to_string(n) + ")";
            case Family::truncated_geometric:
                return "trunc-geom(" + std::to_string(n) + ")";
        }
        return "?";
    }

    // Algebraic decay exponent of the kernel tail for truncated families.
    std::optional<int> algebraic_tail_power() const {
        if (family == Family::truncated_laguerre || family == Family::truncated_geometric)
            return n;
        return std::nullopt;
    }
};

// Reciprocal of the (possibly truncated) denominator at x = s*t.
// A denominator of +inf is a kernel value of 0; a denominator that is zero,
// negative, or NaN means the kernel lost meaning for this sequence.
inline double kernel_eval(const KernelSpec& spec, double s, double t) {
    if (s <= 0) throw domain_error("kernel needs s > 0");
    if (t < 0) throw domain_error("kernel needs t >= 0");
    const double x = s * t;
    double den = 0;
    switch (spec.family) {
        case KernelSpec::Family::laguerre:
            den = laguerre_exp(spec.r, x, spec.eval_tol, spec.max_terms);
            break;
        case KernelSpec::Family::reciprocal_egf:
            den = egf_eval(*spec.a, x, spec.eval_tol, spec.max_terms);
            break;
        case KernelSpec::Family::truncated_laguerre: {
            double term = 1.0;
            den = 1.0;
            for (int k = 0; k < spec.n; ++k) {
                double ratio = x;
                for (int j = 0; j <= spec.r; ++j) ratio /= (k + 1);
                term *= ratio;
                den += term;
            }
            break;
        }
        case KernelSpec::Family::truncated_geometric: {
            den = 1.0;
            for (int k = spec.n; k >= 1; --k) den = den * x + 1.0;
            break;
        }
    }
    if (std::isinf(den) && den > 0) return 0.0;
    if (!std::isfinite(den))
        throw divergence_error("kernel denominator overflowed with mixed signs");
    if (den <= 0)
        throw domain_error("kernel denominator lost positivity at s*t = " + std::to_string(x));
    return 1.0 / den;
}

struct DecayReport {
    enum class Verdict { exponential_decay, sub_exponential, non_decaying, divergent_denominator };

    std::vector<double> grid;
    std::vector<double> kernel_values;
    double fitted_rate = 0.0;    // slope of log kernel vs t over the tail
    double fit_residual = 0.0;   // rms residual of that fit
    Verdict verdict = Verdict::non_decaying;
};

inline const char* to_string(DecayReport::Verdict v) {
    switch (v) {
        case DecayReport::Verdict::exponential_decay: return "exponential-decay";
        case DecayReport::Verdict::sub_exponential: return "sub-exponential";
        case DecayReport::Verdict::non_decaying: return "non-decaying";
        case DecayReport::Verdict::divergent_denominator: return "divergent-denominator";
    }
    return "?";
}

// Evaluate the kernel on a geometric grid and classify the tail.  The
// exponential verdict needs the tail log-linear fit to have slope below
// -rate_floor with small relative residual; anything decaying that misses
// that bar is sub-exponential.  Divergence is a verdict, never a throw.
inline DecayReport hp_decay_probe(const KernelSpec& spec, double s, double t_max,
                                  int n_points, double rate_floor = 0.05,
                                  double residual_frac = 0.10) {
    if (t_max <= 0) throw domain_error("decay probe needs t_max > 0");
    if (n_points < 8) throw domain_error("decay probe needs at least 8 points");
    DecayReport rep;
    const double t_min = t_max * 1e-3;
    const double ratio = std::pow(t_max / t_min, 1.0 / (n_points - 1));
    double t = t_min;
    for (int i = 0; i < n_points; ++i, t *= ratio) {
        rep.grid.push_back(t);
        try {
            rep.kernel_values.push_back(kernel_eval(spec, s, t));
        } catch (const error&) {
            rep.verdict = DecayReport::Verdict::divergent_denominator;
            rep.kernel_values.push_back(std::numeric_limits<double>::quiet_NaN());
            return rep;
        }
    }

    // tail = last half of the grid, positive values only (zeros are
    // underflow, i.e. decay too fast to measure on a log scale)
    std::vector<double> ts, ys;
    for (int i = n_points / 2; i < n_points; ++i) {
        if (rep.kernel_values[i] > 0) {
            ts.push_back(rep.grid[i]);
            ys.push_back(std::log(rep.kernel_values[i]));
        }
    }
    if (ts.size() < 4) {
        // the tail underflowed almost everywhere: decay faster than anything
        // we can fit, which certainly clears the exponential bar
        rep.verdict = DecayReport::Verdict::exponential_decay;
        rep.fitted_rate = -std::numeric_limits<double>::infinity();
        return rep;
    }

    const std::size_t m = ts.size();
    double mt = 0, my = 0;
    for (std::size_t i = 0; i < m; ++i) {
        mt += ts[i];
        my += ys[i];
    }
    mt /= m;
    my /= m;
    double stt = 0, sty = 0;
    for (std::size_t i = 0; i < m; ++i) {
        stt += (ts[i] - mt) * (ts[i] - mt);
        sty += (ts[i] - mt) * (ys[i] - my);
    }
    const double slope = sty / stt;
    double ss_res = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double pred = my + slope * (ts[i] - mt);
        ss_res += (ys[i] - pred) * (ys[i] - pred);
    }
    rep.fitted_rate = slope;
    rep.fit_residual = std::sqrt(ss_res / m);

    const double total_drop = ys.front() - ys.back();  // positive when decaying
    if (total_drop < 0.1) {
        rep.verdict = DecayReport::Verdict::non_decaying;
    } else if (slope < -rate_floor && rep.fit_residual <= residual_frac * total_drop) {
        rep.verdict = DecayReport::Verdict::exponential_decay;
    } else {
        rep.verdict = DecayReport::Verdict::sub_exponential;
    }
    return rep;
}

}  // namespace bellap
