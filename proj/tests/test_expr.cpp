#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "bellap/expr.hpp"

using namespace bellap;

namespace {

FunctionExpr fn(const std::string& text) { return FunctionExpr::parse(text); }

double finite_diff(const FunctionExpr& f, double t) {
    const double h = 1e-6;
    return (f.eval(t + h) - f.eval(t - h)) / (2 * h);
}

}  // namespace

TEST_CASE("evaluation of basic expressions") {
    CHECK(fn("t").eval(3.0) == 3.0);
    CHECK(fn("2+3*4").eval(0.0) == 14.0);
    CHECK(fn("(2+3)*4").eval(0.0) == 20.0);
    CHECK(fn("t^3").eval(2.0) == 8.0);
    CHECK(fn("-t^2").eval(3.0) == -9.0);  // unary minus binds looser than ^
    CHECK(fn("2^3").eval(0.0) == 8.0);
    CHECK(fn("7/2").eval(0.0) == 3.5);
    CHECK(fn("exp(-t)").eval(1.0) == Catch::Approx(std::exp(-1.0)));
    CHECK(fn("sin(t)+cos(t)").eval(0.7) ==
          Catch::Approx(std::sin(0.7) + std::cos(0.7)));
    CHECK(fn("sqrt(t)").eval(4.0) == 2.0);
    CHECK(fn("ln(t)").eval(std::exp(2.0)) == Catch::Approx(2.0));
    CHECK(fn("log(t)").eval(std::exp(2.0)) == Catch::Approx(2.0));
    CHECK(fn("t^(-2)").eval(2.0) == 0.25);
    CHECK(fn("1 + 2 * t ^ 2").eval(3.0) == 19.0);
}

TEST_CASE("whitespace and nesting") {
    CHECK(fn("  exp( - ( t - 1 ) ^ 2 )  ").eval(1.0) == 1.0);
    CHECK(fn("((((t))))").eval(5.0) == 5.0);
    CHECK(fn("exp(sin(cos(t)))").eval(0.3) ==
          Catch::Approx(std::exp(std::sin(std::cos(0.3)))));
}

TEST_CASE("alternate variable names") {
    FunctionExpr F = FunctionExpr::parse("1/(s+1)", 's');
    CHECK(F.eval(1.0) == 0.5);
    CHECK(F.variable_name() == 's');
    // 't' is then just an unknown name
    CHECK_THROWS_AS(FunctionExpr::parse("t+1", 's'), parse_error);
}

TEST_CASE("print-parse round trip on a corpus") {
    const std::vector<std::string> corpus = {
        "t",
        "1",
        "-1",
        "3/4",
        "-3/4",
        "t+1",
        "t-1",
        "1-t",
        "2*t",
        "t/2",
        "t+2*t",
        "t*(t+1)",
        "(t+1)*(t-1)",
        "t^2",
        "t^10",
        "t^(-1)",
        "t^(-3)",
        "-t",
        "-t^2",
        "(-t)^2",
        "-(t+1)",
        "2-t-t",
        "t-(t-1)",
        "t/(t+1)",
        "1/(t^2+1)",
        "(t/(t+1))/(t+2)",
        "t/(t*(t+1))",
        "exp(t)",
        "exp(-t)",
        "exp(-2*t)",
        "sin(t)",
        "cos(t)",
        "sin(2*t)+cos(3*t)",
        "sqrt(t)",
        "sqrt(t+1)",
        "ln(t)",
        "ln(t+1)",
        "exp(-t^2)",
        "exp(-(t-1)^2)",
        "t*exp(-t)",
        "t^2*exp(-t)*sin(t)",
        "exp(sin(t))",
        "sin(cos(t))",
        "1/2*t",
        "2/3+t/5",
        "(1+t)^4",
        "t^2+2*t+1",
        "t^3-3*t^2+3*t-1",
        "sin(t)^2+cos(t)^2",
        "exp(-t)/(1+t)",
        "(2+t)*(3+t)*(4+t)",
        "1/(1+1/(1+1/(1+t)))",
        "-(-(-t))",
        "sqrt(1+t^2)",
        "ln(1+exp(-t))",
    };
    for (const std::string& text : corpus) {
        FunctionExpr e = fn(text);
        const std::string printed = e.str();
        FunctionExpr again = fn(printed);
        // identical trees print identically; also spot-check values
        CHECK(again.str() == printed);
        for (double t : {0.3, 1.1, 2.7}) {
            const double a = e.eval(t);
            const double b = again.eval(t);
            if (std::isfinite(a))
                CHECK(b == Catch::Approx(a).epsilon(1e-14).margin(1e-300));
        }
    }
}

TEST_CASE("integer division of constants folds exactly") {
    // constant p/q subtrees print back as fraction literals
    CHECK(fn("7/2").str() == "7/2");
    CHECK(fn("4/2").str() == "2");
    CHECK(fn("1/3").eval(0.0) == Catch::Approx(1.0 / 3.0));
}

TEST_CASE("parse errors carry byte offsets") {
    auto offset_of = [](const std::string& text) -> std::size_t {
        try {
            FunctionExpr::parse(text);
        } catch (const parse_error& e) {
            return e.offset;
        }
        return static_cast<std::size_t>(-1);
    };
    CHECK(offset_of("") == 0);
    CHECK(offset_of("t+") == 2);
    CHECK(offset_of("t++1") == 2);
    CHECK(offset_of("(t") == 2);
    CHECK(offset_of("t)") == 1);      // trailing garbage
    CHECK(offset_of("t+q") == 2);     // unknown name
    CHECK(offset_of("sin t") == 4);   // missing parenthesis
    CHECK(offset_of("t^1.5") == 3);   // the decimal point ends the exponent
    CHECK(offset_of("t^t") == 2);     // variable exponent
    CHECK(offset_of("exp()") == 4);
    CHECK(offset_of("1 + bogus(t)") == 4);
}

TEST_CASE("domain faults during evaluation") {
    CHECK_THROWS_AS(fn("1/t").eval(0.0), domain_error);
    CHECK_THROWS_AS(fn("ln(t)").eval(0.0), domain_error);
    CHECK_THROWS_AS(fn("ln(t-2)").eval(1.0), domain_error);
    CHECK_THROWS_AS(fn("sqrt(t-1)").eval(0.5), domain_error);
    CHECK_THROWS_AS(fn("t^(-1)").eval(0.0), domain_error);
    CHECK(std::isfinite(fn("1/t").eval(1e-12)));
}

TEST_CASE("complex evaluation matches real on the real axis") {
    for (const char* text : {"exp(-t)", "1/(t+1)", "t^2-t", "sin(t)"}) {
        FunctionExpr e = fn(text);
        std::complex<double> z = e.eval_complex({0.7, 0.0});
        CHECK(z.real() == Catch::Approx(e.eval(0.7)).epsilon(1e-14));
        CHECK(z.imag() == 0.0);
    }
    // genuine complex arithmetic: 1/(s+1) at s = i
    FunctionExpr F = FunctionExpr::parse("1/(s+1)", 's');
    std::complex<double> got = F.eval_complex({0.0, 1.0});
    std::complex<double> want = 1.0 / std::complex<double>(1.0, 1.0);
    CHECK(std::abs(got - want) < 1e-15);
}

TEST_CASE("symbolic derivative agrees with finite differences") {
    const std::vector<std::string> corpus = {
        "t^3",       "exp(-t)",         "sin(2*t)",     "t*exp(-t)",
        "1/(t+1)",   "sqrt(t+1)",       "ln(t+1)",      "cos(t)^2",
        "exp(-t^2)", "t/(t^2+1)",       "sin(t)*cos(t)", "(t+1)^5",
    };
    for (const std::string& text : corpus) {
        FunctionExpr f = fn(text);
        FunctionExpr df = f.derivative();
        for (double t : {0.2, 1.0, 2.5})
            CHECK(df.eval(t) == Catch::Approx(finite_diff(f, t)).epsilon(2e-9).margin(1e-9));
    }
}

TEST_CASE("derivatives of the hand cases") {
    CHECK(fn("t^2").derivative().eval(3.0) == 6.0);
    CHECK(fn("exp(-t)").derivative().eval(0.0) == -1.0);
    CHECK(fn("sin(t)").derivative().eval(0.0) == 1.0);
    CHECK(fn("7").derivative().eval(5.0) == 0.0);
    // chain rule through nesting
    CHECK(fn("exp(sin(t))").derivative().eval(0.5) ==
          Catch::Approx(std::exp(std::sin(0.5)) * std::cos(0.5)));
}

TEST_CASE("exact series coefficients") {
    // e^{-t}: EGF coefficients (-1)^k
    auto c = fn("exp(-t)").taylor_egf(8);
    REQUIRE(c);
    for (int k = 0; k <= 8; ++k) CHECK((*c)[k] == (k % 2 ? -1 : 1));

    // polynomial: t^2 has c_2 = 2, zero elsewhere
    auto p = fn("t^2").taylor_egf(5);
    REQUIRE(p);
    for (int k = 0; k <= 5; ++k) CHECK((*p)[k] == (k == 2 ? 2 : 0));

    // sin: 0, 1, 0, -1, ...
    auto s = fn("sin(t)").taylor_egf(7);
    REQUIRE(s);
    const int want[] = {0, 1, 0, -1, 0, 1, 0, -1};
    for (int k = 0; k <= 7; ++k) CHECK((*s)[k] == want[k]);

    // geometric: 1/(1-t) has EGF coefficients k!
    FunctionExpr geo = fn("1/(1-t)");
    auto g = geo.taylor_egf(6);
    REQUIRE(g);
    for (int k = 0; k <= 6; ++k) CHECK((*g)[k] == Rational(factorial(k)));

    // sqrt(1+t) and ln(1+t) have the binomial/harmonic patterns
    auto r = fn("sqrt(1+t)").taylor_egf(4);
    REQUIRE(r);
    CHECK((*r)[0] == 1);
    CHECK((*r)[1] == Rational(1, 2));
    CHECK((*r)[2] == Rational(-1, 4));
    auto l = fn("ln(1+t)").taylor_egf(5);
    REQUIRE(l);
    CHECK((*l)[0] == 0);
    for (int k = 1; k <= 5; ++k)
        CHECK((*l)[k] == Rational(factorial(k - 1)) * (k % 2 ? 1 : -1));

    // compositions that exact series cannot expand report nullopt
    CHECK_FALSE(fn("exp(t+1)").taylor_egf(4));
    CHECK_FALSE(fn("ln(t)").taylor_egf(4));
    CHECK_FALSE(fn("sqrt(t)").taylor_egf(4));
    CHECK_FALSE(fn("1/t").taylor_egf(4));
}

TEST_CASE("series coefficients match numeric derivatives") {
    // f = exp(-t^2): compare c_k / k! against high-order finite differences
    // of small order, and against the known closed pattern
    auto c = fn("exp(-t^2)").taylor_egf(6);
    REQUIRE(c);
    // exp(-t^2) = sum (-1)^m t^{2m} / m!: c_{2m} = (2m)!/m! (-1)^m
    CHECK((*c)[0] == 1);
    CHECK((*c)[1] == 0);
    CHECK((*c)[2] == -2);
    CHECK((*c)[3] == 0);
    CHECK((*c)[4] == 12);
    CHECK((*c)[6] == -120);
}

TEST_CASE("tree builders used by the transform layer") {
    FunctionExpr f = fn("exp(-t)");
    FunctionExpr g = fn("sin(t)");
    FunctionExpr combo = FunctionExpr::linear_combination(Rational(2), f, Rational(-1, 2), g);
    for (double t : {0.0, 0.8, 2.0})
        CHECK(combo.eval(t) ==
              Catch::Approx(2 * std::exp(-t) - 0.5 * std::sin(t)).epsilon(1e-14));

    FunctionExpr scaled = f.scale_argument(Rational(3));
    for (double t : {0.5, 1.5})
        CHECK(scaled.eval(t) == Catch::Approx(std::exp(-3 * t)).epsilon(1e-14));
    // printing shows the substituted argument
    CHECK(scaled.str() == "exp(-(3*t))");
}
