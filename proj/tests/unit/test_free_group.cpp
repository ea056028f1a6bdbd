#include "oracles.hpp"
#include "permtrace/errors.hpp"
#include "permtrace/free_group.hpp"

#include <doctest.h>

using namespace permtrace;

TEST_CASE("parse and print words") {
    Word w = parse_word("abAB");
    CHECK(w.rank() == 2);
    CHECK(w.size() == 4);
    CHECK(to_string(w) == "abAB");
    CHECK(parse_word("a1b").size() == 3);
    CHECK(parse_word("a", 3).rank() == 3);
    CHECK_THROWS_AS(parse_word("a?"), PreconditionError);
    CHECK_THROWS_AS(parse_word("c", 2), PreconditionError);
    CHECK(to_string(reduce(parse_word("aA"))) == "1");
}

TEST_CASE("reduction agrees with naive cancellation on all short words") {
    const auto alpha = oracle::alphabet(2, true);
    for (int len = 0; len <= 6; ++len) {
        for (const auto& letters : oracle::all_words(alpha, len)) {
            Word w(2, letters);
            ReducedWord r = reduce(w);
            auto expect = oracle::naive_reduce(letters);
            REQUIRE(std::vector<Letter>(r.letters().begin(), r.letters().end()) == expect);
            std::size_t nonid = 0;
            for (Letter l : letters) nonid += !l.is_identity();
            CHECK((nonid - r.size()) % 2 == 0);
            // idempotent
            CHECK(reduce(r.as_word()) == r);
        }
    }
}

TEST_CASE("cyclic reduction") {
    auto c = cyclic_reduce(parse_reduced("Abba"));
    CHECK(to_string(c.conjugator) == "A");
    CHECK(to_string(c.core) == "bb");
    c = cyclic_reduce(parse_reduced("ab"));
    CHECK(c.conjugator.is_identity());
    CHECK(to_string(c.core) == "ab");
    for (int len = 1; len <= 6; ++len) {
        for (const auto& letters : oracle::reduced_words(2, len)) {
            ReducedWord w = reduce(Word(2, letters));
            auto [g, core] = cyclic_reduce(w);
            CHECK(multiply(multiply(g, core), inverse(g)) == w);
            if (core.size() > 1) CHECK(core[0] != core[core.size() - 1].inverse());
        }
    }
}

TEST_CASE("power decomposition") {
    auto p = power_decompose(parse_reduced("aa"));
    CHECK(to_string(p.base) == "a");
    CHECK(p.exponent == 2);
    p = power_decompose(parse_reduced("abab"));
    CHECK(to_string(p.base) == "ab");
    CHECK(p.exponent == 2);
    p = power_decompose(parse_reduced("abbA"));
    CHECK(to_string(p.base) == "abA");
    CHECK(p.exponent == 2);
    CHECK_THROWS_AS(power_decompose(ReducedWord(2)), PreconditionError);

    for (int len = 1; len <= 7; ++len) {
        for (const auto& letters : oracle::reduced_words(2, len)) {
            ReducedWord w = reduce(Word(2, letters));
            auto [base, k] = power_decompose(w);
            REQUIRE(power(base, k) == w);
            CHECK(power_decompose(base).exponent == 1);
        }
    }
}

TEST_CASE("power exponent equals the largest root found by exhaustive search") {
    std::vector<ReducedWord> roots;
    for (int len = 1; len <= 5; ++len) {
        for (const auto& letters : oracle::reduced_words(2, len)) roots.push_back(reduce(Word(2, letters)));
    }
    for (const auto& w : roots) {
        int best = 1;
        for (const auto& u : roots) {
            for (int k = 2; k <= 5; ++k) {
                if (power(u, k) == w) best = std::max(best, k);
            }
        }
        CHECK(power_decompose(w).exponent == best);
    }
}

TEST_CASE("powers multiply exponents") {
    for (int len = 1; len <= 3; ++len) {
        for (const auto& letters : oracle::reduced_words(2, len)) {
            ReducedWord u = reduce(Word(2, letters));
            const int ku = power_decompose(u).exponent;
            for (int k = 1; k <= 4; ++k) {
                ReducedWord w = power(u, k);
                CHECK(power_decompose(w).exponent == k * ku);
            }
        }
    }
}

TEST_CASE("divisor counts") {
    CHECK(divisor_count(1) == 1);
    CHECK(divisor_count(2) == 2);
    CHECK(divisor_count(12) == 6);
    for (int k = 1; k <= 200; ++k) CHECK(divisor_count(k) == oracle::divisors(k));
    CHECK_THROWS_AS(divisor_count(0), PreconditionError);
}

TEST_CASE("first-visit relation") {
    CHECK(is_first_visit(parse_word("a"), parse_reduced("a")));
    CHECK(is_first_visit(parse_word("aaA"), parse_reduced("a")));
    CHECK_FALSE(is_first_visit(parse_word("aAa"), parse_reduced("a")));
    CHECK_FALSE(is_first_visit(parse_word("ab"), parse_reduced("a")));
}

TEST_CASE("first-visit split is unique") {
    const auto alpha = oracle::alphabet(2, true);
    for (int len = 1; len <= 6; ++len) {
        for (const auto& letters : oracle::all_words(alpha, len)) {
            Word w(2, letters);
            ReducedWord v = reduce(w);
            if (v.is_identity()) continue;
            int hits = 0;
            for (int l = 0; l < len; ++l) {
                Word suffix(2, std::vector<Letter>(letters.begin() + l, letters.end()));
                hits += is_first_visit(suffix, v);
            }
            CHECK(hits == 1);
        }
    }
}

TEST_CASE("canonical cyclic key is a rotation invariant") {
    for (const auto& letters : oracle::reduced_words(2, 5)) {
        ReducedWord w = reduce(Word(2, letters));
        auto core = cyclic_reduce(w).core;
        std::vector<Letter> c(core.letters().begin(), core.letters().end());
        const std::string key = canonical_cyclic_key(c);
        for (std::size_t r = 1; r < c.size(); ++r) {
            std::rotate(c.begin(), c.begin() + 1, c.end());
            CHECK(canonical_cyclic_key(c) == key);
        }
    }
}
