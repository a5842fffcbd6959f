#include <catch2/catch_amalgamated.hpp>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <limits>

#include "bellap/blissard.hpp"
#include "bellap/kernels.hpp"

using namespace bellap;
using BigFloat = boost::multiprecision::cpp_bin_float_50;

namespace {

// Extended-precision partial summation of x^k/(k!)^{r+1}; the referee for
// every double-precision evaluation below.
BigFloat big_laguerre_exp(int r, const BigFloat& x) {
    BigFloat sum = 1, term = 1;
    for (int k = 1; k < 2000; ++k) {
        term *= x;
        for (int i = 0; i <= r; ++i) term /= k;
        sum += term;
        if (term < BigFloat("1e-45") * sum) return sum;
    }
    throw std::runtime_error("big_laguerre_exp did not converge");
}

double rel_err(double got, const BigFloat& want) {
    return std::abs(((BigFloat(got) - want) / want).convert_to<double>());
}

double gap_from(const BigFloat& got, const char* reference) {
    return std::abs((got - BigFloat(reference)).convert_to<double>());
}

}  // namespace

TEST_CASE("extended-precision oracle sanity") {
    // r = 0 is exp, checkable against libm
    for (double x : {0.25, 1.0, 4.0, 10.0})
        CHECK(rel_err(std::exp(x), big_laguerre_exp(0, BigFloat(x))) < 1e-15);

    // independently computed 50-digit reference values
    CHECK(gap_from(big_laguerre_exp(1, BigFloat(1)),
                   "2.2795853023360672674372044408115333532858411027855") < 1e-40);
    CHECK(gap_from(big_laguerre_exp(1, BigFloat(4)),
                   "11.301921952136330496356270183217102497412616594435") < 1e-40);
    CHECK(gap_from(big_laguerre_exp(12, BigFloat(1)),
                   "2.0001220703890656108072137233396072159336190967297") < 1e-40);
}

TEST_CASE("higher-order exponentials against the oracle") {
    for (int r : {1, 2, 5, 12})
        for (double x : {0.25, 1.0, 4.0, 10.0})
            CHECK(rel_err(laguerre_exp(r, x), big_laguerre_exp(r, BigFloat(x))) < 1e-12);
    CHECK(laguerre_exp(1, 0.0) == 1.0);
    CHECK_THROWS_AS(laguerre_exp(-1, 1.0), domain_error);
    CHECK_THROWS_AS(laguerre_exp(1, -0.5), domain_error);
}

TEST_CASE("limit claim: reciprocal of e_12 near 1/(1+t) at t = 1") {
    const double v = 1.0 / laguerre_exp(12, 1.0);
    CHECK(std::abs(v - 0.5) < 2e-3);
    // and the gap shrinks as r grows
    CHECK(std::abs(1.0 / laguerre_exp(20, 1.0) - 0.5) < std::abs(v - 0.5));
}

TEST_CASE("general series evaluation agrees with the dedicated routine") {
    for (int r : {1, 2, 5}) {
        UmbralSequence a = UmbralSequence::laguerre_rule(r);
        for (double x : {0.25, 1.0, 4.0, 10.0}) {
            const double general = egf_eval(a, x, 1e-16);
            const double direct = laguerre_exp(r, x);
            CHECK(std::abs(general - direct) <= 1e-13 * direct);
        }
    }
}

TEST_CASE("series evaluation on closed-form sequences") {
    for (double x : {0.0, 0.5, 1.0, 3.0})
        CHECK(egf_eval(UmbralSequence::ones(), x, 1e-16) ==
              Catch::Approx(std::exp(x)).epsilon(1e-13));

    // sum k! x^k / k! is geometric: 1/(1-x) inside the unit radius
    CHECK(egf_eval(UmbralSequence::factorial_rule(), 0.5, 1e-16) ==
          Catch::Approx(2.0).epsilon(1e-12));
    CHECK(egf_eval(UmbralSequence::factorial_rule(), 0.9, 1e-16) ==
          Catch::Approx(10.0).epsilon(1e-10));

    // (e^x - 1)/x
    for (double x : {0.5, 2.0})
        CHECK(egf_eval(UmbralSequence::inv_succ(), x, 1e-16) ==
              Catch::Approx(std::expm1(x) / x).epsilon(1e-13));

    // explicit lists are polynomials
    UmbralSequence poly = UmbralSequence::explicit_terms(
        {Rational(1), Rational(2), Rational(6)}, "1+2t+3t^2");
    CHECK(egf_eval(poly, 2.0, 1e-16) == Catch::Approx(1 + 4 + 12).epsilon(1e-14));
}

TEST_CASE("series evaluation failure modes are honest") {
    // outside the geometric radius the partial sums blow up: the sequence is
    // not entire, so this is a divergence error
    CHECK_THROWS_AS(egf_eval(UmbralSequence::factorial_rule(), 1.5, 1e-16),
                    divergence_error);
    // entire sequence overflowing double range reports +inf instead
    CHECK(std::isinf(egf_eval(UmbralSequence::ones(), 1000.0, 1e-16)));
    CHECK_THROWS_AS(egf_eval(UmbralSequence::ones(), -1.0, 1e-16), domain_error);
    CHECK_THROWS_AS(egf_eval(UmbralSequence::ones(), 1.0, 0.0), domain_error);
}

TEST_CASE("series derivative evaluation") {
    // d/dx e^x = e^x; d/dx of the inv-succ EGF has closed form too
    for (double x : {0.5, 1.0, 2.0})
        CHECK(egf_derivative_eval(UmbralSequence::ones(), x, 1e-16) ==
              Catch::Approx(std::exp(x)).epsilon(1e-13));
    // E(x) = (e^x-1)/x, E'(x) = (x e^x - e^x + 1)/x^2
    for (double x : {0.5, 2.0}) {
        const double want = (x * std::exp(x) - std::exp(x) + 1) / (x * x);
        CHECK(egf_derivative_eval(UmbralSequence::inv_succ(), x, 1e-16) ==
              Catch::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("kernel evaluation by family") {
    // laguerre(0) is the classical e^{-st}
    KernelSpec k0 = KernelSpec::laguerre(0);
    for (double s : {0.5, 1.0, 2.0})
        for (double t : {0.0, 0.5, 1.0, 4.0})
            CHECK(kernel_eval(k0, s, t) == Catch::Approx(std::exp(-s * t)).epsilon(1e-13));

    // laguerre(1) against the oracle
    KernelSpec k1 = KernelSpec::laguerre(1);
    CHECK(rel_err(kernel_eval(k1, 1.0, 1.0),
                  1 / big_laguerre_exp(1, BigFloat(1))) < 1e-12);

    // reciprocal-EGF route matches the dedicated laguerre route
    KernelSpec kg = KernelSpec::reciprocal_egf(UmbralSequence::laguerre_rule(1));
    for (double t : {0.25, 1.0, 3.0})
        CHECK(kernel_eval(kg, 1.0, t) == Catch::Approx(kernel_eval(k1, 1.0, t)).epsilon(1e-12));

    // truncated laguerre r=0, n=2: 1/(1 + x + x^2/2)
    KernelSpec t2 = KernelSpec::truncated_laguerre(0, 2);
    for (double x : {0.5, 1.0, 10.0})
        CHECK(kernel_eval(t2, 1.0, x) == Catch::Approx(1 / (1 + x + x * x / 2)).epsilon(1e-14));

    // truncated geometric n=2: 1/(1 + x + x^2)
    KernelSpec g2 = KernelSpec::truncated_geometric(2);
    for (double x : {0.5, 1.0, 10.0})
        CHECK(kernel_eval(g2, 1.0, x) == Catch::Approx(1 / (1 + x + x * x)).epsilon(1e-14));

    CHECK_THROWS_AS(kernel_eval(k0, 0.0, 1.0), domain_error);
    CHECK_THROWS_AS(kernel_eval(k0, 1.0, -1.0), domain_error);
}

TEST_CASE("kernel size ordering in the order r") {
    // e_r(x) decreases in r for fixed x > 0, so 1/e_r increases
    for (double x : {0.5, 1.0, 4.0}) {
        double prev = kernel_eval(KernelSpec::laguerre(0), 1.0, x);
        for (int r = 1; r <= 4; ++r) {
            double cur = kernel_eval(KernelSpec::laguerre(r), 1.0, x);
            CHECK(cur > prev);
            CHECK(cur <= 1.0 / (1.0 + x) + 1e-12);  // e_r(x) >= 1 + x always
            prev = cur;
        }
    }
}

TEST_CASE("kernel of an entire sequence underflows to zero, never throws") {
    // e^{-st} at st = 1000 is below double range through the reciprocal:
    // denominator +inf maps to kernel 0
    CHECK(kernel_eval(KernelSpec::laguerre(0), 1.0, 1000.0) == 0.0);
    // outside the geometric radius the denominator diverges for real
    KernelSpec geo = KernelSpec::reciprocal_egf(UmbralSequence::factorial_rule());
    CHECK_THROWS_AS(kernel_eval(geo, 1.0, 2.0), divergence_error);
    // vanishing denominator: 1 - x/2 at x = 2
    KernelSpec half = KernelSpec::reciprocal_egf(
        UmbralSequence::explicit_terms({Rational(1), Rational(-1, 2)}, "1-t/2"));
    CHECK_THROWS_AS(kernel_eval(half, 1.0, 2.0), domain_error);
}

TEST_CASE("truncated kernels converge to the full one") {
    const double s = 1.0, t = 1.5;
    const double full = kernel_eval(KernelSpec::laguerre(1), s, t);
    double prev_gap = std::numeric_limits<double>::infinity();
    for (int n : {2, 5, 10, 20, 40}) {
        const double gap =
            std::abs(kernel_eval(KernelSpec::truncated_laguerre(1, n), s, t) - full);
        CHECK(gap <= prev_gap);  // hits 0 exactly once the tail underflows
        prev_gap = gap;
    }
    CHECK(prev_gap < 1e-14);
}

TEST_CASE("series form of the kernel at small argument") {
    // sum C_k(a) (st)^k / k! converges to 1/E_a(st) well inside radius;
    // 25 terms at st = 0.25 is plenty for 1e-10
    const double st = 0.25;
    for (const UmbralSequence& a :
         {UmbralSequence::ones(), UmbralSequence::laguerre_rule(1),
          UmbralSequence::inv_succ()}) {
        auto C = coeff_C(a, 25);
        double acc = 0, kfact = 1;
        for (int k = 0; k <= 25; ++k) {
            if (k > 0) kfact *= k;
            acc += to_double(C[k]) * std::pow(st, k) / kfact;
        }
        KernelSpec spec = KernelSpec::reciprocal_egf(a);
        CHECK(acc == Catch::Approx(kernel_eval(spec, 1.0, st)).epsilon(1e-10));
    }
}

TEST_CASE("decay probe verdicts") {
    DecayReport exp_rep = hp_decay_probe(KernelSpec::laguerre(0), 1.0, 50.0, 33);
    CHECK(exp_rep.verdict == DecayReport::Verdict::exponential_decay);
    CHECK(exp_rep.fitted_rate == Catch::Approx(-1.0).margin(1e-6));

    // steeper s steepens the fitted rate
    DecayReport steep = hp_decay_probe(KernelSpec::laguerre(0), 2.0, 20.0, 33);
    CHECK(steep.fitted_rate == Catch::Approx(-2.0).margin(1e-6));

    DecayReport alg = hp_decay_probe(KernelSpec::truncated_geometric(2), 1.0, 100.0, 33);
    CHECK(alg.verdict == DecayReport::Verdict::sub_exponential);

    DecayReport flat = hp_decay_probe(
        KernelSpec::reciprocal_egf(UmbralSequence::explicit_terms({Rational(1)}, "one")),
        1.0, 100.0, 33);
    CHECK(flat.verdict == DecayReport::Verdict::non_decaying);

    DecayReport div = hp_decay_probe(
        KernelSpec::reciprocal_egf(UmbralSequence::factorial_rule()), 1.0, 10.0, 33);
    CHECK(div.verdict == DecayReport::Verdict::divergent_denominator);

    // the laguerre(1) kernel decays like exp(-2 sqrt(t)): recorded, either
    // decaying verdict is defensible, never the other two
    DecayReport mid = hp_decay_probe(KernelSpec::laguerre(1), 1.0, 100.0, 33);
    CHECK((mid.verdict == DecayReport::Verdict::exponential_decay ||
           mid.verdict == DecayReport::Verdict::sub_exponential));

    CHECK_THROWS_AS(hp_decay_probe(KernelSpec::laguerre(0), 1.0, -1.0, 33), domain_error);
    CHECK_THROWS_AS(hp_decay_probe(KernelSpec::laguerre(0), 1.0, 10.0, 4), domain_error);
}

TEST_CASE("verdict names") {
    CHECK(std::string(to_string(DecayReport::Verdict::exponential_decay)) ==
          "exponential-decay");
    CHECK(std::string(to_string(DecayReport::Verdict::sub_exponential)) == "sub-exponential");
    CHECK(std::string(to_string(DecayReport::Verdict::non_decaying)) == "non-decaying");
    CHECK(std::string(to_string(DecayReport::Verdict::divergent_denominator)) ==
          "divergent-denominator");
}

TEST_CASE("complex evaluation of the higher-order exponentials") {
    using namespace std::complex_literals;
    // matches the real routine on the real axis
    for (int r : {0, 1, 3}) {
        std::complex<double> z = laguerre_exp_complex(r, {2.0, 0.0});
        CHECK(z.real() == Catch::Approx(laguerre_exp(r, 2.0)).epsilon(1e-13));
        CHECK(std::abs(z.imag()) < 1e-13);
    }
    // r = 0 on the imaginary axis is cos + i sin
    std::complex<double> e_i = laguerre_exp_complex(0, {0.0, 1.0});
    CHECK(e_i.real() == Catch::Approx(std::cos(1.0)).epsilon(1e-12));
    CHECK(e_i.imag() == Catch::Approx(std::sin(1.0)).epsilon(1e-12));
    // conjugate symmetry for real coefficient series
    std::complex<double> plus = laguerre_exp_complex(1, {1.0, 2.0});
    std::complex<double> minus = laguerre_exp_complex(1, {1.0, -2.0});
    CHECK(plus.real() == Catch::Approx(minus.real()).epsilon(1e-13));
    CHECK(plus.imag() == Catch::Approx(-minus.imag()).epsilon(1e-13));
}
