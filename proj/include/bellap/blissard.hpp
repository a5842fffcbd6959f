#pragma once

#include <vector>

#include "bellap/bell.hpp"
#include "bellap/sequence.hpp"
#include "bellap/series.hpp"

namespace bellap {

// Reciprocal sequence b of a under EGF multiplication: b_0 = 1 and
// b_n = Y_n with weights f_k = (-1)^k k! over inputs g_k = a_k.
inline std::vector<Rational> blissard_reciprocal(const UmbralSequence& a, int N) {
    if (N < 0) throw domain_error("order must be >= 0");
    std::vector<Rational> b;
    b.reserve(N + 1);
    b.push_back(1);
    if (N == 0) return b;
    std::vector<Rational> g;
    g.reserve(N);
    for (int k = 1; k <= N; ++k) g.push_back(a.term(k));
    PartialBellTable table(g, N);
    std::vector<Rational> f;
    f.reserve(N);
    for (int k = 1; k <= N; ++k) {
        Rational fk = Rational(factorial(k));
        f.push_back(k % 2 ? -fk : fk);
    }
    for (int n = 1; n <= N; ++n) b.push_back(table.complete(n, f));
    return b;
}

// Same result by truncated power-series long division of the EGF; kept as an
// independent cross-check of the Bell route.
inline std::vector<Rational> egf_reciprocal_oracle(const UmbralSequence& a, int N) {
    if (N < 0) throw domain_error("order must be >= 0");
    std::vector<Rational> plain(N + 1);
    for (int k = 0; k <= N; ++k) plain[k] = a.term(k) / factorial(k);
    FormalPowerSeries inv = FormalPowerSeries(std::move(plain)).reciprocal();
    std::vector<Rational> b(N + 1);
    for (int k = 0; k <= N; ++k) b[k] = inv[k] * factorial(k);
    return b;
}

// Kernel series coefficients: C_0 = 1, C_k = sum_{h=1}^{k} (-1)^h h! B(k,h)(a_1,...).
// Coincides with blissard_reciprocal; computed here via its own formula.
inline std::vector<Rational> coeff_C(const UmbralSequence& a, int N) {
    if (N < 0) throw domain_error("order must be >= 0");
    std::vector<Rational> C;
    C.reserve(N + 1);
    C.push_back(1);
    if (N == 0) return C;
    std::vector<Rational> g;
    g.reserve(N);
    for (int k = 1; k <= N; ++k) g.push_back(a.term(k));
    PartialBellTable table(g, N);
    for (int k = 1; k <= N; ++k) {
        Rational acc = 0;
        for (int h = 1; h <= k; ++h) {
            Rational t = Rational(factorial(h)) * table.at(k, h);
            acc += (h % 2) ? -t : t;
        }
        C.push_back(acc);
    }
    return C;
}

}  // namespace bellap
