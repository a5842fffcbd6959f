#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>

#include "bellap/quadrature.hpp"

using namespace bellap;

TEST_CASE("single panel is exact on low-degree polynomials") {
    // the 15-point Kronrod extension integrates degree <= 22 exactly
    auto poly = [](double x) {
        return 5 * std::pow(x, 10) - 3 * std::pow(x, 7) + x * x - 4;
    };
    // antiderivative: 5/11 x^11 - 3/8 x^8 + x^3/3 - 4x
    const double want = 5.0 / 11 - 3.0 / 8 + 1.0 / 3 - 4;
    auto p = gk15_panel<double>(poly, 0.0, 1.0);
    CHECK(p.value == Catch::Approx(want).epsilon(1e-14));
    CHECK(p.error < 1e-12);
}

TEST_CASE("adaptive integration of smooth functions") {
    auto out = integrate_adaptive<double>([](double x) { return std::exp(-x); }, 0.0,
                                          20.0, 1e-12, 1e-12, 500);
    CHECK(out.converged);
    CHECK(out.value == Catch::Approx(1.0 - std::exp(-20.0)).epsilon(1e-12));
    CHECK(std::abs(out.value - (1.0 - std::exp(-20.0))) <= 100 * out.error_estimate + 1e-15);

    auto osc = integrate_adaptive<double>([](double x) { return std::sin(x); }, 0.0,
                                          10 * std::numbers::pi, 1e-12, 1e-12, 500);
    CHECK(osc.converged);
    CHECK(std::abs(osc.value) < 1e-10);
}

TEST_CASE("adaptive refinement concentrates on hard spots") {
    // integrable endpoint singularity x^{-1/2}: value 2 on [0,1]
    auto out = integrate_adaptive<double>(
        [](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-8, 1e-8, 1900);
    CHECK(out.value == Catch::Approx(2.0).margin(2e-6));
    CHECK(out.panels > 20);  // the singularity forced real work

    // narrow spike far from the interval midpoint
    auto spike = integrate_adaptive<double>(
        [](double x) {
            const double d = x - 5.0;
            return std::exp(-d * d * 100.0);
        },
        0.0, 20.0, 1e-12, 1e-10, 1900);
    CHECK(spike.converged);
    CHECK(spike.value ==
          Catch::Approx(std::sqrt(std::numbers::pi) / 10).epsilon(1e-8));
}

TEST_CASE("budget exhaustion is reported, not papered over") {
    auto out = integrate_adaptive<double>(
        [](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-14, 1e-14, 8);
    CHECK_FALSE(out.converged);
    CHECK(out.panels == 8);
    CHECK(out.error_estimate > 1e-14);
}

TEST_CASE("complex-valued integrands") {
    using namespace std::complex_literals;
    auto out = integrate_adaptive<std::complex<double>>(
        [](double x) { return std::exp(1i * x); }, 0.0, 1.0, 1e-12, 1e-12, 200);
    CHECK(out.converged);
    CHECK(out.value.real() == Catch::Approx(std::sin(1.0)).epsilon(1e-12));
    CHECK(out.value.imag() == Catch::Approx(1.0 - std::cos(1.0)).epsilon(1e-12));
}

TEST_CASE("degenerate and reversed intervals") {
    auto zero = integrate_adaptive<double>([](double) { return 1.0; }, 3.0, 3.0, 1e-12,
                                           1e-12, 10);
    CHECK(zero.value == 0.0);

    // orientation flips the sign
    auto fwd = integrate_adaptive<double>([](double x) { return x; }, 0.0, 2.0, 1e-12,
                                          1e-12, 50);
    auto rev = integrate_adaptive<double>([](double x) { return x; }, 2.0, 0.0, 1e-12,
                                          1e-12, 50);
    CHECK(fwd.value == Catch::Approx(2.0));
    CHECK(rev.value == Catch::Approx(-2.0));
}

TEST_CASE("error estimates bound true error on a mixed corpus") {
    struct Case {
        double (*f)(double);
        double a, b, truth;
    };
    const Case cases[] = {
        {[](double x) { return std::exp(-x * x); }, -5.0, 5.0, std::sqrt(std::numbers::pi)},
        {[](double x) { return 1.0 / (1.0 + x * x); }, 0.0, 1.0, std::numbers::pi / 4},
        {[](double x) { return std::log(1.0 + x); }, 0.0, 1.0, 2 * std::log(2.0) - 1},
        {[](double x) { return std::cos(10 * x); }, 0.0, 2.0, std::sin(20.0) / 10},
    };
    for (const Case& c : cases) {
        auto out = integrate_adaptive<double>(c.f, c.a, c.b, 1e-11, 1e-11, 800);
        CHECK(out.converged);
        // the estimate may be pessimistic but must dominate the true error
        CHECK(std::abs(out.value - c.truth) <= std::max(out.error_estimate, 5e-14));
    }
}
