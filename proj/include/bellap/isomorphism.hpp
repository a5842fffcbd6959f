#pragma once

#include <optional>
#include <string>
#include <utility>

#include "bellap/blissard.hpp"
#include "bellap/sequence.hpp"
#include "bellap/series.hpp"

namespace bellap {

// Coefficient map s^n -> s^n / (n!)^m, applied m-fold.  Sends the exp
// series to e_m.
inline FormalPowerSeries apply_iso(const FormalPowerSeries& p, int m) {
    if (m < 1) throw domain_error("iterate count must be >= 1");
    if (p.convention() != SeriesConvention::plain)
        throw domain_error("coefficient maps act on plain-convention series");
    std::vector<Rational> c(p.order() + 1);
    for (int n = 0; n <= p.order(); ++n)
        c[n] = p[n] / pow_int(factorial(n), m);
    return FormalPowerSeries(std::move(c));
}

// Coefficient map s^n -> a_n s^n; a_0 = 1 keeps constants fixed.
inline FormalPowerSeries apply_iso_general(const FormalPowerSeries& p,
                                           const UmbralSequence& a) {
    if (p.convention() != SeriesConvention::plain)
        throw domain_error("coefficient maps act on plain-convention series");
    std::vector<Rational> c(p.order() + 1);
    for (int n = 0; n <= p.order(); ++n) c[n] = p[n] * a.term(n);
    return FormalPowerSeries(std::move(c));
}

// Multiplicative convention: the image of 1/denominator is defined as the
// reciprocal of the image of the denominator.  Under this reading the map
// sends each reciprocal Laguerre-type kernel to the next one exactly.
inline FormalPowerSeries iso_reciprocal_convention(const FormalPowerSeries& denominator,
                                                   int m, int N) {
    if (N < 0) throw domain_error("order must be >= 0");
    if (N > denominator.order())
        throw domain_error("denominator series too short for requested order");
    return apply_iso(denominator.to_plain(), m).truncated(N).reciprocal();
}

// The two readings of the map on a reciprocal, compared on 1/exp: (A) the
// coefficient-wise image of the series of exp(-x), (B) the reciprocal of
// the image of exp(x).  They first part ways at order 2.
struct ConventionGap {
    int order = -1;           // first disagreeing order, -1 if none up to N
    Rational literal_value;   // reading (A) coefficient there
    Rational reciprocal_value;  // reading (B) coefficient there
};

inline ConventionGap convention_gap(int m, int N) {
    if (N < 2) throw domain_error("gap scan needs order >= 2");
    std::vector<Rational> neg_exp(N + 1);
    for (int k = 0; k <= N; ++k) {
        neg_exp[k] = Rational(1, factorial(k));
        if (k % 2) neg_exp[k] = -neg_exp[k];
    }
    FormalPowerSeries literal = apply_iso(FormalPowerSeries(std::move(neg_exp)), m);
    FormalPowerSeries recip =
        iso_reciprocal_convention(FormalPowerSeries::exp_series(N), m, N);
    for (int k = 0; k <= N; ++k) {
        if (literal[k] != recip[k]) return {k, literal[k], recip[k]};
    }
    return {-1, Rational(0), Rational(0)};
}

struct SeriesMap {
    enum class Kind { laguerre_iterate, general };

    Kind kind;
    int m = 1;
    std::optional<UmbralSequence> a;
    std::string description;

    static SeriesMap laguerre_iterate(int m) {
        if (m < 1) throw domain_error("iterate count must be >= 1");
        return {Kind::laguerre_iterate, m, std::nullopt,
                "s^n -> s^n/(n!)^" + std::to_string(m)};
    }
    static SeriesMap general(UmbralSequence seq) {
        std::string desc = "s^n -> a_n s^n with a = " + seq.label();
        return {Kind::general, 1, std::move(seq), std::move(desc)};
    }

    FormalPowerSeries apply(const FormalPowerSeries& p) const {
        return kind == Kind::laguerre_iterate ? apply_iso(p, m) : apply_iso_general(p, *a);
    }
};

}  // namespace bellap
