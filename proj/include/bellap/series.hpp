#pragma once

#include <utility>
#include <vector>

#include "bellap/rational.hpp"

namespace bellap {

enum class SeriesConvention {
    plain,  // c_k multiplies s^k
    egf,    // c_k multiplies s^k / k!
};

// Truncated power series with exact rational coefficients.  All arithmetic
// truncates to the smaller operand order; mixing conventions is an error
// rather than a silent coercion.
class FormalPowerSeries {
public:
    explicit FormalPowerSeries(std::vector<Rational> coeffs,
                               SeriesConvention conv = SeriesConvention::plain)
        : coeffs_(std::move(coeffs)), conv_(conv) {
        if (coeffs_.empty()) throw domain_error("series needs at least the constant term");
    }

    static FormalPowerSeries one(int order, SeriesConvention conv = SeriesConvention::plain) {
        std::vector<Rational> c(order + 1, Rational(0));
        c[0] = 1;
        return FormalPowerSeries(std::move(c), conv);
    }

    // exp(s) truncated: plain coefficients 1/k!.
    static FormalPowerSeries exp_series(int order) {
        std::vector<Rational> c(order + 1);
        for (int k = 0; k <= order; ++k) c[k] = Rational(1, factorial(k));
        return FormalPowerSeries(std::move(c), SeriesConvention::plain);
    }

    int order() const { return static_cast<int>(coeffs_.size()) - 1; }
    SeriesConvention convention() const { return conv_; }

    const Rational& operator[](int k) const {
        if (k < 0 || k > order()) throw domain_error("series coefficient out of range");
        return coeffs_[k];
    }

    const std::vector<Rational>& coefficients() const { return coeffs_; }

    FormalPowerSeries to_plain() const {
        if (conv_ == SeriesConvention::plain) return *this;
        std::vector<Rational> c = coeffs_;
        for (int k = 0; k <= order(); ++k) c[k] /= factorial(k);
        return FormalPowerSeries(std::move(c), SeriesConvention::plain);
    }

    FormalPowerSeries to_egf() const {
        if (conv_ == SeriesConvention::egf) return *this;
        std::vector<Rational> c = coeffs_;
        for (int k = 0; k <= order(); ++k) c[k] *= factorial(k);
        return FormalPowerSeries(std::move(c), SeriesConvention::egf);
    }

    FormalPowerSeries operator+(const FormalPowerSeries& rhs) const {
        check_convention(rhs);
        int n = std::min(order(), rhs.order());
        std::vector<Rational> c(n + 1);
        for (int k = 0; k <= n; ++k) c[k] = coeffs_[k] + rhs.coeffs_[k];
        return FormalPowerSeries(std::move(c), conv_);
    }

    FormalPowerSeries operator-(const FormalPowerSeries& rhs) const {
        check_convention(rhs);
        int n = std::min(order(), rhs.order());
        std::vector<Rational> c(n + 1);
        for (int k = 0; k <= n; ++k) c[k] = coeffs_[k] - rhs.coeffs_[k];
        return FormalPowerSeries(std::move(c), conv_);
    }

    FormalPowerSeries operator*(const FormalPowerSeries& rhs) const {
        check_convention(rhs);
        int n = std::min(order(), rhs.order());
        if (conv_ == SeriesConvention::egf)
            return (to_plain() * rhs.to_plain()).to_egf();
        std::vector<Rational> c(n + 1, Rational(0));
        for (int i = 0; i <= n; ++i) {
            if (coeffs_[i] == 0) continue;
            for (int j = 0; i + j <= n; ++j)
                if (rhs.coeffs_[j] != 0) c[i + j] += coeffs_[i] * rhs.coeffs_[j];
        }
        return FormalPowerSeries(std::move(c), conv_);
    }

    // 1 / this, by long division; needs a nonzero constant term.
    FormalPowerSeries reciprocal() const {
        if (conv_ == SeriesConvention::egf) return to_plain().reciprocal().to_egf();
        if (coeffs_[0] == 0)
            throw domain_error("series reciprocal needs a nonzero constant term");
        int n = order();
        std::vector<Rational> d(n + 1, Rational(0));
        d[0] = Rational(1) / coeffs_[0];
        for (int k = 1; k <= n; ++k) {
            Rational acc = 0;
            for (int j = 1; j <= k; ++j) acc += coeffs_[j] * d[k - j];
            d[k] = -acc / coeffs_[0];
        }
        return FormalPowerSeries(std::move(d), conv_);
    }

    FormalPowerSeries truncated(int new_order) const {
        if (new_order < 0 || new_order > order())
            throw domain_error("cannot truncate series to that order");
        return FormalPowerSeries(
            std::vector<Rational>(coeffs_.begin(), coeffs_.begin() + new_order + 1), conv_);
    }

    bool operator==(const FormalPowerSeries& rhs) const {
        return conv_ == rhs.conv_ && coeffs_ == rhs.coeffs_;
    }

private:
    void check_convention(const FormalPowerSeries& rhs) const {
        if (conv_ != rhs.conv_)
            throw domain_error("series conventions differ; convert explicitly");
    }

    std::vector<Rational> coeffs_;
    SeriesConvention conv_;
};

}  // namespace bellap
