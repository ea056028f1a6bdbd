#include "oracles.hpp"
#include "permtrace/asymptotics.hpp"
#include "permtrace/errors.hpp"
#include "permtrace/limit_model.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace permtrace;

namespace {

// Largest k such that the cyclically reduced core of w is a k-fold repetition.
int oracle_exponent(std::vector<Letter> w) {
    while (w.size() >= 2 && w.front() == w.back().inverse()) {
        w.erase(w.begin());
        w.pop_back();
    }
    const std::size_t n = w.size();
    for (std::size_t k = n; k >= 2; --k) {
        if (n % k != 0) continue;
        const std::size_t period = n / k;
        bool ok = true;
        for (std::size_t i = period; ok && i < n; ++i) ok = w[i] == w[i - period];
        if (ok) return static_cast<int>(k);
    }
    return 1;
}

}  // namespace

TEST_CASE("taylor functionals of single words") {
    ExpectationEngine engine;
    auto nu = taylor_nu(engine.word_expectation(parse_word("aa")), 2);
    CHECK(nu[0] == 0);
    CHECK(nu[1] == 1);
    CHECK(nu[2] == 0);
    auto e = taylor_nu(engine.word_expectation(parse_word("abBA")), 1);
    CHECK(e[0] == 1);
    CHECK(e[1] == -1);
    CHECK_THROWS_AS(taylor_nu(RationalFunctionQ(), -1), PreconditionError);
}

TEST_CASE("first-order limits of powers are divisor counts minus one") {
    ExpectationEngine engine;
    const std::vector<std::string> bases{"a", "ab", "aB", "abb", "aab", "abAB"};
    const std::vector<std::string> conjugators{"", "b", "aB"};
    for (const auto& b : bases) {
        for (const auto& g : conjugators) {
            for (int k = 1; k <= 6; ++k) {
                ReducedWord base = parse_reduced(b, 2);
                if (static_cast<int>(base.size()) * k > 12) continue;
                ReducedWord c = parse_reduced(g.empty() ? "1" : g, 2);
                ReducedWord w = multiply(multiply(c, power(base, k)), inverse(c));
                auto nu = taylor_nu(engine.word_expectation(w), 1);
                CHECK(nu[0] == 0);
                CHECK(nu[1] == oracle::divisors(k) - 1);
            }
        }
    }
}

TEST_CASE("proper power counts match an independent exponent oracle") {
    for (int d = 1; d <= 2; ++d) {
        auto counts = proper_power_counts(d, 7);
        for (int len = 1; len <= 7; ++len) {
            std::vector<long> expect(8, 0);
            for (const auto& w : oracle::reduced_words(d, len)) {
                const int k = oracle_exponent(w);
                if (k >= 2) ++expect[static_cast<std::size_t>(k)];
            }
            for (int k = 2; k <= 7; ++k) CHECK(counts[static_cast<std::size_t>(len)][static_cast<std::size_t>(k)] == expect[static_cast<std::size_t>(k)]);
        }
    }
}

TEST_CASE("two routes to nu_1 agree for the adjacency operator") {
    ExpectationEngine engine;
    for (int d = 2; d <= 3; ++d) {
        const NCPolynomial A = NCPolynomial::adjacency(d);
        for (int p = 1; p <= (d == 2 ? 6 : 4); ++p) {
            auto nu = taylor_nu(engine.polynomial_trace_expectation(A, QPoly::monomial(p)), 1);
            CHECK(Rational(nu1_adjacency_wordcount(d, p)) == nu[1]);
            CHECK(nu1_polynomial_wordcount(A, p) == GaussianRational(nu[1]));
            // nu_0 is the limiting moment
            CHECK(GaussianRational(nu[0]) == tau_moment(A, p));
        }
    }
    CHECK(nu1_adjacency_wordcount(2, 2) == 0);
    CHECK(nu1_adjacency_wordcount(2, 3) == 4);
}

TEST_CASE("word-count route for a general scalar-coefficient polynomial") {
    ExpectationEngine engine;
    NCPolynomial P = parse_nc_polynomial("a + A + 1/2*ab + 1/2*BA - 1/3*1");
    for (int p = 1; p <= 4; ++p) {
        auto nu = taylor_nu(engine.polynomial_trace_expectation(P, QPoly::monomial(p)), 1);
        CHECK(nu1_polynomial_wordcount(P, p) == GaussianRational(nu[1]));
    }
}

TEST_CASE("support estimates") {
    std::vector<double> geometric;
    for (int p = 1; p <= 12; ++p) geometric.push_back(std::pow(3.0, p));
    auto est = support_estimate(geometric, SupportNormalizer::none, 3.0);
    CHECK(est.rho_hat == doctest::Approx(3.0));
    CHECK(est.within_target);
    auto f = support_estimate(geometric, SupportNormalizer::friedman, 3.0);
    for (int p = 1; p <= 12; ++p) {
        const double n = 1 + std::pow(p, 2) * std::pow(p + 1, 4);
        CHECK(f.normalized[static_cast<std::size_t>(p - 1)] == doctest::Approx(3.0 / std::pow(n, 1.0 / p)));
    }
    CHECK_THROWS_AS(support_estimate({1.0, 2.0}, SupportNormalizer::none), PreconditionError);

    std::vector<double> nu1;
    for (int p = 1; p <= 8; ++p) nu1.push_back(nu1_adjacency_wordcount(2, p).get_d());
    CHECK(support_estimate(nu1, SupportNormalizer::friedman, kesten_norm(2)).within_target);
}

TEST_CASE("master inequality") {
    ExpectationEngine engine;
    const NCPolynomial A = NCPolynomial::adjacency(2);
    auto r = verify_master_inequality(engine, A, QPoly::monomial(2), 100, 2);
    CHECK(r.lhs == 0);
    CHECK(r.holds);
    CHECK(r.q == 2);
    CHECK(r.q0 == 1);
    CHECK(r.rhs == doctest::Approx(std::pow(4.0 * 2 * (1 + std::log(2.0)), 8) / 1e4 * 16));

    // constant h: the 1/N term survives at m = 1 and vanishes from m = 2 on
    auto c1 = verify_master_inequality(engine, A, QPoly::constant(5), 10, 1);
    CHECK(c1.lhs == Rational(1, 2));
    CHECK(c1.holds);
    CHECK(verify_master_inequality(engine, A, QPoly::constant(5), 10, 2).lhs == 0);

    std::mt19937 rng(5);
    std::uniform_int_distribution<int> coef(-9, 9);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Rational> c;
        for (int k = 0; k <= 4; ++k) c.emplace_back(coef(rng), 7);
        QPoly h(c);
        RationalFunctionQ psi = engine.polynomial_trace_expectation(A, h);
        for (int N : {10, 100}) {
            for (int m : {1, 2, 3}) CHECK(verify_master_inequality(psi, A, h, N, m).holds);
        }
        for (const auto& b : nu_bound_check(psi, A, h, 3)) CHECK(b.holds);
    }
    CHECK_THROWS_AS(verify_master_inequality(engine, A, QPoly::monomial(2), 0, 1), PreconditionError);
}

TEST_CASE("master constant") {
    CHECK(master_constant(1, 1, 1, 1) == doctest::Approx(256.0));
    CHECK(master_constant(2, 1, 2, 0) == doctest::Approx(1.0));
}
