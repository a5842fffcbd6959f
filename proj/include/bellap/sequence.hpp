#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "bellap/rational.hpp"

namespace bellap {

// A number sequence a_0 = 1, a_1, a_2, ... identified by a generation rule.
// Terms are computed on demand and never cached, so instances are immutable
// and freely shareable across threads.  Explicit sequences are zero beyond
// their stored terms, which is how finite denominators like 1 + t arise.
class UmbralSequence {
public:
    static UmbralSequence ones() {
        return UmbralSequence([](int) { return Rational(1); }, "ones", true);
    }

    // a_k = 1/(k!)^r, the sequence whose reciprocal-EGF kernel is 1/e_r.
    static UmbralSequence laguerre_rule(int r) {
        if (r < 0) throw domain_error("laguerre rule needs r >= 0");
        return UmbralSequence(
            [r](int k) { return Rational(1, pow_int(factorial(k), r)); },
            "laguerre:" + std::to_string(r), true);
    }

    // a_k = k!; the EGF is the geometric series, radius of convergence 1.
    static UmbralSequence factorial_rule() {
        return UmbralSequence([](int k) { return Rational(factorial(k)); },
                              "factorial", false);
    }

    // a_k = 1/(k+1); the EGF is (e^t - 1)/t.  Blissard reciprocal gives the
    // Bernoulli numbers.
    static UmbralSequence inv_succ() {
        return UmbralSequence([](int k) { return Rational(1, k + 1); },
                              "inv-succ", true);
    }

    static UmbralSequence explicit_terms(std::vector<Rational> terms,
                                         std::string label = "explicit") {
        if (terms.empty() || terms[0] != 1)
            throw domain_error("sequence must start with a_0 = 1");
        auto shared = std::make_shared<std::vector<Rational>>(std::move(terms));
        return UmbralSequence(
            [shared](int k) {
                return k < static_cast<int>(shared->size()) ? (*shared)[k] : Rational(0);
            },
            std::move(label), true);
    }

    Rational term(int k) const {
        if (k < 0) throw domain_error("sequence index must be >= 0");
        return gen_(k);
    }

    std::vector<Rational> prefix(int n) const {
        std::vector<Rational> out;
        out.reserve(n + 1);
        for (int k = 0; k <= n; ++k) out.push_back(term(k));
        return out;
    }

    // The homothety companion (x*a)_k = x^k a_k; keeps a_0 = 1.
    UmbralSequence scaled(const Rational& x) const {
        auto base = gen_;
        return UmbralSequence(
            [base, x](int k) { return pow_rat(x, k) * base(k); },
            "scaled(" + to_fraction_string(x) + ")*" + label_, entire_);
    }

    const std::string& label() const { return label_; }

    // True when the EGF is known to converge everywhere (rules with a_k/k!
    // decaying at least factorially, and finite explicit lists).
    bool entire_hint() const { return entire_; }

private:
    UmbralSequence(std::function<Rational(int)> gen, std::string label, bool entire)
        : gen_(std::move(gen)), label_(std::move(label)), entire_(entire) {
        if (gen_(0) != 1) throw domain_error("sequence must start with a_0 = 1");
    }

    std::function<Rational(int)> gen_;
    std::string label_;
    bool entire_;
};

}  // namespace bellap
