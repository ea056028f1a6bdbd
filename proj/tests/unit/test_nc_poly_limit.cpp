#include "first_visit_identity.hpp"
#include "oracles.hpp"
#include "permtrace/errors.hpp"
#include "permtrace/limit_model.hpp"
#include "permtrace/nc_poly.hpp"
#include "permtrace/poly_json.hpp"

#include <doctest.h>

#include <cmath>

using namespace permtrace;

TEST_CASE("polynomial parsing") {
    NCPolynomial A = parse_nc_polynomial("a + A + b + B");
    CHECK(A == NCPolynomial::adjacency(2));
    CHECK(parse_nc_polynomial("adjacency", 3) == NCPolynomial::adjacency(3));
    CHECK(A.is_self_adjoint());
    CHECK(A.degree() == 1);
    CHECK(A.coefficient_norm_sum() == doctest::Approx(4.0));

    NCPolynomial P = parse_nc_polynomial("2*ab - 1/2*1 + i*B");
    CHECK(P.rank() == 2);
    CHECK(P.size() == 3);
    CHECK_FALSE(P.is_self_adjoint());
    CHECK(P.adjoint().adjoint() == P);
    CHECK((P + P.adjoint()).is_self_adjoint());

    NCPolynomial M = parse_nc_polynomial("[[1,0],[0,2]]*a + [[1,0],[0,2]]*A");
    CHECK(M.dim() == 2);
    CHECK(M.is_self_adjoint());
    CHECK(M.coefficient_norm_sum() == doctest::Approx(4.0));

    CHECK_THROWS_AS(parse_nc_polynomial("a +"), PreconditionError);
    CHECK_THROWS_AS(parse_nc_polynomial("c", 2), PreconditionError);
    CHECK_THROWS_AS(parse_nc_polynomial("[[1,2]]*a"), PreconditionError);
}

TEST_CASE("scalar polynomial parsing") {
    CHECK(parse_scalar_polynomial("0,0,1") == QPoly::monomial(2));
    CHECK(parse_scalar_polynomial("x^2") == QPoly::monomial(2));
    CHECK(parse_scalar_polynomial("x^3 - 2*x + 1/2") == QPoly({Rational(1, 2), -2, 0, 1}));
}

TEST_CASE("trace word expansion of adjacency powers") {
    const NCPolynomial A = NCPolynomial::adjacency(2);
    auto terms = trace_word_expansion(A, QPoly::monomial(2));
    // A^2 = 4 e + sum over 12 reduced words of length 2
    GaussianRational at_identity;
    std::size_t others = 0;
    for (const auto& t : terms) {
        if (t.word.is_identity()) {
            at_identity = t.coeff;
        } else {
            ++others;
            CHECK(t.word.size() == 2);
            CHECK(t.coeff == GaussianRational(1));
        }
    }
    CHECK(at_identity == GaussianRational(4));
    CHECK(others == 12);

    Budget tiny;
    tiny.max_expansion_products = 10;
    CHECK_THROWS_AS(trace_word_expansion(A, QPoly::monomial(6), tiny), BudgetError);
}

TEST_CASE("json polynomial round trip") {
    NCPolynomial P = parse_nc_polynomial("[[1,i],[-i,2]]*ab + [[1,i],[-i,2]]*BA + [[3,0],[0,0]]*1");
    NCPolynomial Q = parse_nc_polynomial_json(nc_polynomial_to_json(P));
    CHECK(Q == P);
    NCPolynomial R = parse_nc_polynomial_json(R"({"rank": 2, "terms": [{"word": "a", "coeff": 1}, {"word": "A", "coeff": "1"}]})");
    CHECK(R == parse_nc_polynomial("a + A", 2));
    CHECK_FALSE(R.is_approximate());
    NCPolynomial F = parse_nc_polynomial_json(R"({"terms": [{"word": "a", "coeff": 0.5}]})");
    CHECK(F.is_approximate());
    CHECK(parse_nc_polynomial_json(R"({"text": "adjacency", "rank": 2})", 2) == NCPolynomial::adjacency(2));
    CHECK_THROWS_AS(parse_nc_polynomial_json("{"), PreconditionError);
    CHECK_THROWS_AS(parse_nc_polynomial_json(R"({"terms": [{"word": "a"}]})"), PreconditionError);
}

TEST_CASE("tau moments match closed walks on the tree") {
    for (int d = 1; d <= 3; ++d) {
        auto expect = oracle::tree_closed_walks(d, 8);
        auto series = tau_moments(NCPolynomial::adjacency(d), 8);
        for (int p = 0; p <= 8; ++p) {
            CHECK(series.values[static_cast<std::size_t>(p)] == GaussianRational(Rational(static_cast<long>(expect[static_cast<std::size_t>(p)]))));
            CHECK(tau_moment(NCPolynomial::adjacency(d), p) == series.values[static_cast<std::size_t>(p)]);
        }
    }
}

TEST_CASE("walk counts match exhaustive letter sequences") {
    const auto alpha = oracle::alphabet(2, false);
    for (int p = 0; p <= 5; ++p) {
        std::map<ReducedWord, long> counts;
        for (const auto& letters : oracle::all_words(alpha, p)) ++counts[reduce(Word(2, letters))];
        for (const auto& [v, n] : counts) CHECK(walk_count(v, p, 2) == n);
        auto by_distance = tree_walk_counts(p, 2);
        for (const auto& [v, n] : counts) CHECK(by_distance[v.size()] == n);
    }
}

TEST_CASE("matrix coefficients: moments of a block-diagonal polynomial average over blocks") {
    NCPolynomial M = parse_nc_polynomial("[[1,0],[0,2]]*a + [[1,0],[0,2]]*A");
    auto walks = oracle::tree_closed_walks(1, 6);
    auto series = tau_moments(M, 6);
    for (int p = 0; p <= 6; ++p) {
        const long expect = static_cast<long>(walks[static_cast<std::size_t>(p)]) * (1 + (1L << p));
        CHECK(series.values[static_cast<std::size_t>(p)] == GaussianRational(Rational(expect) / 2));
    }
}

TEST_CASE("norm estimates approach the Kesten norm from below") {
    CHECK(kesten_norm(2) == doctest::Approx(2 * std::sqrt(3.0)));
    auto est = limit_norm_estimate(NCPolynomial::adjacency(2), 8);
    CHECK(est.lower <= kesten_norm(2));
    CHECK_FALSE(est.used_square);
    for (std::size_t i = 1; i < est.ratio.size(); ++i) CHECK(est.ratio[i] >= est.ratio[i - 1] - 1e-12);
    CHECK(est.ratio.back() <= kesten_norm(2) + 1e-9);
    auto sq = limit_norm_estimate(parse_nc_polynomial("a + b"), 4);
    CHECK(sq.used_square);
    CHECK(sq.lower <= 2.0 + 1e-12);
}

TEST_CASE("first-visit indicator equals its Q-projected matrix-element expansion") {
    auto r = oracle::first_visit_identity(2, 6, 3);
    CHECK(r.checked == 19530L * 53);
    CHECK_MESSAGE(r.mismatches == 0, r.first_mismatch);
}
