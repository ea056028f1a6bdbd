#include "permtrace/errors.hpp"
#include "permtrace/polynomial.hpp"
#include "permtrace/rational.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace permtrace;

TEST_CASE("rational parsing and printing") {
    CHECK(parse_rational("3/6") == Rational(1, 2));
    CHECK(parse_rational("-0.25") == Rational(-1, 4));
    CHECK(parse_rational("1e-3") == Rational(1, 1000));
    CHECK(parse_rational("7") == 7);
    CHECK(to_string(Rational(2, 4)) == "1/2");
    CHECK(to_string(Rational(-3)) == "-3");
    CHECK_THROWS_AS(parse_rational("x"), PreconditionError);
    CHECK_THROWS_AS(parse_rational("1/0"), PreconditionError);
    CHECK(rational_from_double(0.375) == Rational(3, 8));
}

TEST_CASE("gaussian rationals") {
    GaussianRational z = parse_gaussian("1/2+3i");
    CHECK(z.re == Rational(1, 2));
    CHECK(z.im == 3);
    CHECK(parse_gaussian("-i") == GaussianRational(0, -1));
    CHECK((z * z.conj()) == GaussianRational(Rational(37, 4)));
}

TEST_CASE("polynomial arithmetic") {
    QPoly p({1, 2, 3});  // 1 + 2x + 3x^2
    QPoly q = QPoly::one_minus(2);
    CHECK((p * q).coeffs().size() == 4);
    CHECK((p * q).eval(Rational(1, 2)) == 0);
    QPoly quot;
    CHECK((p * q).try_divide_one_minus(2, quot));
    CHECK(quot == p);
    CHECK_FALSE(p.try_divide_one_minus(3, quot));
    CHECK(p.derivative() == QPoly({2, 6}));
    CHECK((p - p).is_zero());
    CHECK((p - p).degree() == -1);
    CHECK(p.eval(2.0) == doctest::Approx(17.0));
}

TEST_CASE("taylor coefficients of linear-factor rational functions") {
    // 1 / ((1 - x)(1 - 2x)) has coefficients 2^(k+1) - 1.
    RationalFunctionQ f(QPoly::constant(1), {{1, 1}, {2, 1}});
    auto c = f.taylor(10);
    for (int k = 0; k <= 10; ++k) CHECK(c[static_cast<std::size_t>(k)] == (Integer(1) << (k + 1)) - 1);
    // x / (1 - 3x)^2 = sum k 3^(k-1) x^k
    RationalFunctionQ g(QPoly::monomial(1), {{3, 2}});
    auto d = g.taylor(6);
    CHECK(d[0] == 0);
    Rational pow3 = 1;
    for (int k = 1; k <= 6; ++k) {
        CHECK(d[static_cast<std::size_t>(k)] == k * pow3);
        pow3 *= 3;
    }
}

TEST_CASE("taylor_at matches finite differences") {
    RationalFunctionQ f(QPoly({1, -1, 2}), {{1, 1}, {3, 2}});
    const double x0 = 0.05;
    auto c = f.taylor_at(x0, 2);
    const double h = 1e-4;
    CHECK(c[0] == doctest::Approx(f.eval(x0)));
    CHECK(c[1] == doctest::Approx((f.eval(x0 + h) - f.eval(x0 - h)) / (2 * h)).epsilon(1e-6));
    CHECK(2 * c[2] == doctest::Approx((f.eval(x0 + h) - 2 * f.eval(x0) + f.eval(x0 - h)) / (h * h)).epsilon(1e-4));
}

TEST_CASE("reduction cancels common factors and preserves the function") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> coef(-5, 5), root(1, 4);
    for (int trial = 0; trial < 50; ++trial) {
        QPoly num({coef(rng), coef(rng), coef(rng)});
        if (num.is_zero()) continue;
        const int c = root(rng);
        RationalFunctionQ f(num * QPoly::one_minus(c), {{c, 2}, {root(rng), 1}});
        RationalFunctionQ r = f.reduced();
        CHECK(r == f);
        CHECK(r.denominator_degree() < f.denominator_degree());
        for (int n = 5; n < 9; ++n) CHECK(r.eval(Rational(1, n)) == f.eval(Rational(1, n)));
    }
}

TEST_CASE("rational function arithmetic") {
    RationalFunctionQ a(QPoly::constant(1), {{1, 1}});
    RationalFunctionQ b(QPoly::constant(1), {{2, 1}});
    RationalFunctionQ s = a + b;
    const Rational x(1, 7);
    CHECK(s.eval(x) == a.eval(x) + b.eval(x));
    CHECK((a * b).eval(x) == a.eval(x) * b.eval(x));
    CHECK((a - a).is_zero());
    CHECK(RationalFunctionQ(QPoly({0, 1})).to_string() == "(x)");
}
