#include "permtrace/approximation.hpp"
#include "permtrace/errors.hpp"
#include "permtrace/exact_expectations.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace permtrace;

namespace {

const double kPi = std::acos(-1.0);
const double kInf = std::numeric_limits<double>::infinity();

QPoly random_poly(std::mt19937& rng, int q) {
    std::uniform_int_distribution<int> c(-1000, 1000);
    std::vector<Rational> coeffs;
    for (int k = 0; k <= q; ++k) coeffs.emplace_back(c(rng), 1000);
    if (coeffs.back() == 0) coeffs.back() = 1;
    return QPoly(coeffs);
}

}  // namespace

TEST_CASE("chebyshev polynomials match the trigonometric definition") {
    for (int j = 0; j <= 20; ++j) {
        QPoly T = chebyshev_polynomial(j, Rational(3, 2));
        CHECK(T.degree() == j);
        for (double x : {-1.5, -0.7, 0.0, 0.4, 1.5}) {
            CHECK(T.eval(x) == doctest::Approx(std::cos(j * std::acos(x / 1.5))).epsilon(1e-9));
        }
    }
}

TEST_CASE("chebyshev round trip") {
    std::mt19937 rng(3);
    for (int q = 0; q <= 30; ++q) {
        QPoly h = random_poly(rng, q);
        auto exact = cheb_expand_exact(h, 2);
        CHECK(cheb_reconstruct_exact(exact, 2) == h);
        ChebyshevExpansion e = cheb_expand(h, 2.0);
        double scale = sup_norm(h, -2, 2).value, err = 0;
        for (int i = 0; i <= 400; ++i) {
            double x = -2 + 4.0 * i / 400;
            err = std::max(err, std::abs(e.eval(x) - h.eval(x)));
        }
        CHECK(err <= 1e-10 * std::max(1.0, scale));
        for (std::size_t j = 0; j < exact.size(); ++j) CHECK(e.coeffs[j] == doctest::Approx(to_double(exact[j])).epsilon(1e-9).scale(1.0));
    }
}

TEST_CASE("sup norm never exceeds the true supremum and finds interior maxima") {
    QPoly h({0, 0, -3, 0, 1});  // x^4 - 3x^2, extrema at +-sqrt(3/2) with value -9/4
    SupNorm s = sup_norm(h, -2, 2);
    CHECK(s.value == doctest::Approx(4.0));
    SupNorm t = sup_norm(h, -1.5, 1.5);
    CHECK(t.value == doctest::Approx(2.25).epsilon(1e-9));
    CHECK(t.value <= 2.25 + 1e-15);
}

TEST_CASE("markov inequality is sharp at mapped chebyshev polynomials") {
    for (int q = 1; q <= 15; ++q) {
        for (Rational a : {Rational(1), Rational(1, 3)}) {
            QPoly T = mapped_chebyshev(q, a);
            CHECK(markov_bound_check(T, to_double(a), 1).ratio == doctest::Approx(1.0).epsilon(1e-6));
            // Higher derivatives: T_q^(m)(1) = prod_{j<m} (q^2 - j^2) / (2j + 1)
            for (int m = 2; m <= 3; ++m) {
                double expect = 1;
                for (int j = 0; j < m; ++j) expect *= (1.0 - double(j * j) / (q * q));
                CHECK(markov_bound_check(T, to_double(a), m).ratio == doctest::Approx(expect).epsilon(1e-6));
            }
        }
    }
}

TEST_CASE("markov and interpolation inequalities on random polynomials") {
    std::mt19937 rng(17);
    for (int q = 1; q <= 15; ++q) {
        for (int trial = 0; trial < 100; ++trial) {
            QPoly h = random_poly(rng, q);
            const double a = 0.25 + (trial % 4);
            CHECK(markov_bound_check(h, a, 1 + trial % 3).holds);
            std::vector<double> pts;
            const int n = 2 * q * q;
            for (int i = 0; i <= n; ++i) pts.push_back(a * i / n);
            CHECK(interpolation_check(h, a, pts).holds);
        }
    }
    CHECK_THROWS_AS(interpolation_check(QPoly({0, 0, 1}), 1.0, {0.0, 1.0}), PreconditionError);
    CHECK_THROWS_AS(markov_bound_check(QPoly({1}), 0.0, 1), PreconditionError);
}

TEST_CASE("rational markov inequality on expected traces") {
    ExpectationEngine engine;
    for (const char* w : {"abAB", "aab", "aaa", "abab"}) {
        RationalFunctionQ r = engine.word_expectation(parse_word(w));
        for (int m = 1; m <= 3; ++m) CHECK(rational_markov_check(r, 0.4, m).holds);
    }
    RationalFunctionQ pole(QPoly::constant(1), {{2, 1}});
    CHECK_THROWS_AS(rational_markov_check(pole, 0.6, 1), PreconditionError);
    CHECK(rational_markov_check(pole, 0.4, 1).c == doctest::Approx(5.0));
}

TEST_CASE("quadrature and norms") {
    CHECK(beta_star(kInf) == 1.0);
    CHECK(beta_star(2.0) == doctest::Approx(2.0));
    CHECK(adaptive_simpson([](double x) { return std::sin(x); }, 0, kPi) == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(lp_norm([](double x) { return x; }, 0, 1, 2.0) == doctest::Approx(1 / std::sqrt(3.0)).epsilon(1e-8));
    CHECK(lp_norm([](double x) { return std::sin(x); }, 0, kPi, kInf) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("cosine series derivatives and Zygmund sums") {
    QPoly h({1, -2, 0, 3});
    ChebyshevExpansion e = cheb_expand(h, 1.5);
    const double t = 0.7, dt = 1e-4;
    auto f0 = [&](double th) { return cosine_series_derivative(e, 0, th); };
    CHECK(f0(t) == doctest::Approx(h.eval(1.5 * std::cos(t))));
    CHECK(cosine_series_derivative(e, 1, t) == doctest::Approx((f0(t + dt) - f0(t - dt)) / (2 * dt)).epsilon(1e-6));
    auto z = zygmund_sum(e, 1, kInf);
    double expect = 0;
    for (std::size_t j = 1; j < e.coeffs.size(); ++j) expect += j * std::abs(e.coeffs[j]);
    CHECK(z.lhs == doctest::Approx(expect));
    CHECK(z.rhs > 0);
    CHECK(z.constant > 0);
}

TEST_CASE("test function invariants") {
    const double rho = 2 * std::sqrt(3.0), eps = 0.5, K = 4.0;
    for (int m : {1, 2, 8}) {
        TestFunction tf(rho, eps, K, m);
        double prev = 0;
        for (int i = 0; i <= 10000; ++i) {
            const double x = K * i / 10000.0;
            const double c = tf.chi(x);
            CHECK(c >= 0.0);
            CHECK(c <= 1.0);
            CHECK(c == tf.chi(-x));
            if (x <= rho + eps / 2) CHECK(c == 0.0);
            if (x >= rho + eps) CHECK(c == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(c >= prev - 1e-14);
            prev = c;
        }
        CHECK(tf.step(0) == 0.0);
        CHECK(tf.step(tf.delta()) == doctest::Approx(1.0).epsilon(1e-12));
        const double y = 0.37 * tf.delta(), h = 1e-6;
        CHECK(tf.step_derivative(1, y) == doctest::Approx((tf.step(y + h) - tf.step(y - h)) / (2 * h)).epsilon(1e-5));
        CHECK(std::isfinite(tf.fitted_constant()));
    }
    TestFunction tf1(rho, eps, K, 1);
    const double th = std::asin((rho + 0.8 * eps) / K) + kPi / 2, h = 1e-4;
    const double fd2 = (tf1.f(th + h) - 2 * tf1.f(th) + tf1.f(th - h)) / (h * h);
    CHECK(tf1.f_top_derivative(th) == doctest::Approx(fd2).epsilon(1e-3));
    CHECK_THROWS_AS(TestFunction(rho, eps, 3.5, 8), PreconditionError);
}

TEST_CASE("tail certificate") {
    auto c4 = friedman_certificate(2, 0.5, 1e4);
    auto c5 = friedman_certificate(2, 0.5, 1e5);
    auto c6 = friedman_certificate(2, 0.5, 1e6);
    CHECK(c4.bound / c5.bound == doctest::Approx(10.0).epsilon(0.01));
    CHECK(c5.bound / c6.bound == doctest::Approx(10.0).epsilon(0.01));
    double prev = kInf;
    for (double eps = 0.05; eps < 0.53; eps += 0.05) {
        double b = friedman_certificate(2, eps, 1e6).bound;
        CHECK(b < prev);
        prev = b;
    }
    CHECK(c4.m == 8);
    CHECK(c4.K == 4.0);
    CHECK(c4.up_to_universal_constant);
    CHECK_THROWS_AS(friedman_certificate(2, 3.0, 1e6), PreconditionError);
    CHECK_THROWS_AS(friedman_certificate(2, 0.0, 1e6), PreconditionError);
}
