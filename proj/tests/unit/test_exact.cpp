#include "oracles.hpp"
#include "permtrace/errors.hpp"
#include "permtrace/exact_expectations.hpp"

#include <doctest.h>

#include <cmath>

using namespace permtrace;

namespace {

Word relabel(const Word& w, bool swap_generators, bool invert_a) {
    std::vector<Letter> out;
    for (Letter l : w.letters()) {
        int g = l.generator_number();
        bool inv = l.is_inverse();
        if (swap_generators && g > 0) g = 3 - g;
        if (invert_a && g == 1) inv = !inv;
        out.push_back(g == 0 ? Letter::identity() : (inv ? Letter::inverse_generator(g) : Letter::generator(g)));
    }
    return Word(w.rank(), out);
}

}  // namespace

TEST_CASE("simple expectations") {
    ExpectationEngine engine;
    CHECK(engine.word_expectation(parse_word("aa")) == RationalFunctionQ(QPoly({0, 1})));
    CHECK(engine.word_expectation(parse_word("ab")).is_zero());
    CHECK(engine.word_expectation(parse_word("aA")) == RationalFunctionQ(QPoly({1, -1})));
    CHECK(engine.word_expectation(parse_word("1")) == RationalFunctionQ(QPoly({1, -1})));
    CHECK(engine.word_expectation(parse_word("a")).is_zero());
}

TEST_CASE("symbolic expectations agree with exhaustive permutation averages") {
    ExpectationEngine engine;
    for (int len = 1; len <= 4; ++len) {
        for (const auto& letters : oracle::reduced_words(2, len)) {
            Word w(2, letters);
            auto detail = engine.word_expectation_detail(w);
            const int core = static_cast<int>(detail.core.size());
            for (int N = std::max(core, 1); N <= 4; ++N) {
                REQUIRE_MESSAGE(detail.value.eval(Rational(1, N)) == oracle::brute_force_trace(letters, 2, N),
                                oracle::text(letters), " N=", N);
            }
        }
    }
}

TEST_CASE("pattern sums are exact at every N, including N below the core length") {
    for (int len = 1; len <= 4; ++len) {
        for (const auto& letters : oracle::reduced_words(2, len)) {
            Word w(2, letters);
            for (int N = 1; N <= 4; ++N) {
                REQUIRE_MESSAGE(pattern_sum_expectation(w, N) == oracle::brute_force_trace(letters, 2, N),
                                oracle::text(letters), " N=", N);
            }
        }
    }
    CHECK(pattern_sum_expectation(parse_word("aaa"), 2) == 0);
    CHECK(pattern_sum_expectation(Word(2, {}), 3) == Rational(2, 3));
}

TEST_CASE("library brute force matches the independent oracle") {
    for (const char* s : {"aa", "abAB", "aab", "a1b"}) {
        Word w = parse_word(s, 2);
        std::vector<Letter> letters(w.letters().begin(), w.letters().end());
        for (int N = 1; N <= 4; ++N) CHECK(brute_force_expectation(w, N) == oracle::brute_force_trace(letters, 2, N));
    }
    Budget tiny;
    tiny.max_brute_force_tuples = 100;
    CHECK_THROWS_AS(brute_force_expectation(parse_word("ab"), 6, tiny), BudgetError);
}

TEST_CASE("invariance under conjugation, rotation, inversion and relabeling") {
    ExpectationEngine engine;
    for (int len = 2; len <= 6; ++len) {
        int index = 0;
        for (const auto& letters : oracle::reduced_words(2, len)) {
            if (index++ % 7 != 0) continue;
            Word w(2, letters);
            RationalFunctionQ f = engine.word_expectation(w);
            std::vector<Letter> rot(letters.begin() + 1, letters.end());
            rot.push_back(letters.front());
            CHECK(engine.word_expectation(Word(2, rot)) == f);
            CHECK(engine.word_expectation(w.inverse()) == f);
            CHECK(engine.word_expectation(relabel(w, true, false)) == f);
            CHECK(engine.word_expectation(relabel(w, false, true)) == f);
            Word conj = parse_word("bA", 2).concat(w).concat(parse_word("aB", 2));
            CHECK(engine.word_expectation(conj) == f);
        }
    }
}

TEST_CASE("denominator structure") {
    ExpectationEngine engine;
    for (int len = 1; len <= 7; ++len) {
        for (const auto& letters : oracle::reduced_words(2, len)) {
            if (letters.size() >= 6 && oracle::text(letters).substr(0, 2) != "ab") continue;
            auto detail = engine.word_expectation_detail(Word(2, letters));
            if (detail.core.is_identity()) continue;
            const int q = static_cast<int>(detail.core.size());
            RationalFunctionQ r = detail.value.reduced();
            CHECK(factors_divide(r.denominator_factors(), denominator_gq(q, 2)));
            const double bound = q * (1 + std::log(2.0));
            CHECK(r.denominator_degree() <= bound);
            CHECK(r.numerator().degree() <= bound);
        }
    }
    auto g = denominator_gq(6, 2);
    CHECK(g.at(1) == 2);
    CHECK(g.at(2) == 2);
    CHECK(g.at(3) == 1);
    CHECK(g.at(5) == 1);
}

TEST_CASE("quotient enumeration") {
    auto patterns = enumerate_quotients(parse_word("aa"));
    CHECK(patterns.size() == 2);
    for (const auto& p : patterns) CHECK(p.vertex_count >= 1);
    CHECK(enumerate_quotients(parse_word("ab")).size() == 2);  // v0 != v1 and v0 = v1
}

TEST_CASE("polynomial trace expectations") {
    ExpectationEngine engine;
    const NCPolynomial A = NCPolynomial::adjacency(2);
    CHECK(engine.polynomial_trace_expectation(A, QPoly::monomial(2)) == RationalFunctionQ::constant(4));
    CHECK(engine.polynomial_trace_expectation(A, QPoly::monomial(1)).is_zero());
    CHECK(engine.polynomial_trace_expectation(A, QPoly::constant(3)) == RationalFunctionQ(QPoly({3, -3})));
    CHECK(engine.cache_size() > 0);

    // x^4 cross-checked at small N against brute-force averages of every word in the expansion
    RationalFunctionQ psi = engine.polynomial_trace_expectation(A, QPoly::monomial(4));
    Rational expect = 0;
    for (const auto& t : trace_word_expansion(A, QPoly::monomial(4))) {
        std::vector<Letter> letters(t.word.letters().begin(), t.word.letters().end());
        expect += t.coeff.re * oracle::brute_force_trace(letters, 2, 4);
    }
    CHECK(psi.eval(Rational(1, 4)) == expect);

    NCPolynomial skew = parse_nc_polynomial("i*1 + a + A", 2);
    CHECK_THROWS_AS(engine.polynomial_trace_expectation(skew, QPoly::monomial(1)), PreconditionError);
}

TEST_CASE("budgets") {
    Budget b;
    b.max_word_length = 4;
    ExpectationEngine engine(b);
    CHECK_THROWS_AS(engine.word_expectation(parse_word("ababa")), BudgetError);
    CHECK_NOTHROW(engine.word_expectation(parse_word("abaBA")));  // core "a"
}
