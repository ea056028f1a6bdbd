#include "permtrace/errors.hpp"
#include "permtrace/exact_expectations.hpp"
#include "permtrace/rng.hpp"
#include "permtrace/simulation.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace permtrace;

TEST_CASE("counter rng is a pure function of its key") {
    CounterRng a(7, 3, 1), b(7, 3, 1), c(7, 4, 1), s(7, 3, 2);
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next();
        CHECK(x == b.next());
        CHECK(x != c.next());
        CHECK(x != s.next());
    }
    CounterRng r(1, 0, 0);
    std::vector<int> hist(6, 0);
    for (int i = 0; i < 60000; ++i) {
        const auto v = r.below(6);
        REQUIRE(v < 6);
        ++hist[static_cast<std::size_t>(v)];
    }
    double chi2 = 0;
    for (int h : hist) chi2 += (h - 10000.0) * (h - 10000.0) / 10000.0;
    CHECK(chi2 < 25.0);  // 5 degrees of freedom, p ~ 1e-4
    for (int i = 0; i < 1000; ++i) {
        const double u = r.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("sampled tuples") {
    PermTuple t = sample_tuple(50, 3, 9, 2);
    CHECK(t.perms.size() == 3);
    for (const auto& p : t.perms) CHECK(is_permutation(p));
    CHECK(sample_tuple(50, 3, 9, 2).perms == t.perms);
    CHECK(sample_tuple(50, 3, 9, 3).perms != t.perms);
    CHECK_FALSE(is_permutation({0, 0, 1}));
    PermTuple planted = sample_planted_tuple(50, 3, 2, 9, 2);
    CHECK(planted.perms[0][0] == 0);
    CHECK(planted.perms[1][0] == 0);
    CHECK(planted.perms[2] == t.perms[2]);
    for (const auto& p : planted.perms) CHECK(is_permutation(p));
    CHECK_THROWS_AS(sample_planted_tuple(10, 2, 3, 0, 0), PreconditionError);
}

TEST_CASE("uniformity: fixed points of a random permutation average one") {
    const Word w = parse_word("a");
    const Word c = parse_word("abAB");
    double sum = 0, sum_c = 0;
    const int trials = 4000;
    for (int t = 0; t < trials; ++t) {
        PermTuple tuple = sample_tuple(40, 2, 123, static_cast<std::uint64_t>(t));
        sum += fixed_points(w, tuple);
        sum_c += fixed_points(c, tuple);
    }
    CHECK(std::abs(sum / trials - 1.0) < 4.0 / std::sqrt(trials));
    // E Fix = 1 + N * Psi(1/N), exact at N = 40 >= |core|
    ExpectationEngine engine;
    const double exact_c = 1 + 40 * to_double(engine.word_expectation(c).eval(Rational(1, 40)));
    CHECK(std::abs(sum_c / trials - exact_c) < 0.15);
}

TEST_CASE("first-position uniformity of Fisher-Yates") {
    std::vector<int> hist(5, 0);
    for (int t = 0; t < 5000; ++t) ++hist[static_cast<std::size_t>(sample_tuple(5, 1, 77, static_cast<std::uint64_t>(t)).perms[0][0])];
    for (int h : hist) CHECK(std::abs(h - 1000) < 150);
}

TEST_CASE("operator application matches the dense matrix") {
    PermTuple t = sample_tuple(12, 2, 5, 0);
    for (const char* text : {"a + A + b + B", "i*ab - i*BA + 2*1", "[[1,i],[-i,0]]*a + [[1,i],[-i,0]]*A + [[0,1],[1,0]]*b + [[0,1],[1,0]]*B"}) {
        NCPolynomial P = parse_nc_polynomial(text, 2);
        SparsePermOperator op(P, t);
        Eigen::MatrixXcd M = op.dense();
        CHECK((M - M.adjoint()).norm() < 1e-12);
        Eigen::VectorXcd x = Eigen::VectorXcd::Random(op.size()), y;
        op.apply(x, y);
        CHECK((y - M * x).norm() < 1e-10);
    }
}

TEST_CASE("lanczos agrees with the dense projected spectrum") {
    for (const char* text : {"a + A + b + B", "i*ab - i*BA + a + A", "[[1,i],[-i,0]]*a + [[1,i],[-i,0]]*A + [[0,1],[1,0]]*b + [[0,1],[1,0]]*B"}) {
        NCPolynomial P = parse_nc_polynomial(text, 2);
        for (std::uint64_t trial = 0; trial < 3; ++trial) {
            SparsePermOperator op(P, sample_tuple(60, 2, 11, trial));
            auto dense = dense_projected_eigenvalues(op);
            REQUIRE(dense.size() == static_cast<std::size_t>(op.D() * 59));
            auto rep = extreme_eigs(op, 2, 1e-10);
            CHECK(rep.top[0] == doctest::Approx(dense.back()).epsilon(1e-8));
            CHECK(rep.bottom[0] == doctest::Approx(dense.front()).epsilon(1e-8));
            CHECK(rep.top[1] == doctest::Approx(dense[dense.size() - 2]).epsilon(1e-7));
            CHECK(rep.norm == doctest::Approx(std::max(std::abs(dense.front()), std::abs(dense.back()))));
        }
    }
    SparsePermOperator bad(parse_nc_polynomial("a + b"), sample_tuple(10, 2, 0, 0));
    CHECK_THROWS_AS(extreme_eigs(bad), PreconditionError);
}

TEST_CASE("projected spectrum excludes the trivial eigenvalue") {
    SparsePermOperator op(NCPolynomial::adjacency(2), sample_tuple(30, 2, 2, 0));
    auto dense = dense_projected_eigenvalues(op);
    CHECK(dense.back() < 4.0 - 1e-9);
}

TEST_CASE("wilson interval") {
    auto ci = wilson_interval(0, 100);
    CHECK(ci.lo == 0.0);
    CHECK(ci.hi == doctest::Approx(3.8414588 / 103.8414588).epsilon(1e-6));
    auto mid = wilson_interval(50, 100);
    CHECK(mid.lo + mid.hi == doctest::Approx(1.0));
    CHECK_THROWS_AS(wilson_interval(0, 0), PreconditionError);
}

TEST_CASE("experiments do not depend on the worker count") {
    auto a = tail_experiment(2, 200, 0.3, 6, 42, 1);
    auto b = tail_experiment(2, 200, 0.3, 6, 42, 3);
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].lambda2 == b.rows[i].lambda2);
        CHECK(a.rows[i].iterations == b.rows[i].iterations);
    }
    CHECK(a.median == b.median);
    CHECK(a.threshold == doctest::Approx(2 * std::sqrt(3.0) + 0.3));
}

TEST_CASE("staircase preconditions and radii") {
    CHECK(staircase_rho(3, 2) == doctest::Approx(14.0 / 3));
    CHECK(staircase_rho(2, 1) == doctest::Approx(4.0));
    CHECK_THROWS_AS(staircase_experiment(3, 100, 1, 2, 0), PreconditionError);
    CHECK_THROWS_AS(staircase_experiment(3, 100, 4, 2, 0), PreconditionError);
    auto s = staircase_experiment(3, 300, 3, 2, 0);
    CHECK(s.rho_m == doctest::Approx(6.0));
    CHECK(s.degenerate);
}

TEST_CASE("weak convergence probe") {
    ExpectationEngine engine;
    auto rep = weak_convergence_probe(engine, NCPolynomial::adjacency(2), QPoly::monomial(4), {20, 40, 80}, 300, 9);
    CHECK(rep.nu0 == 28);
    CHECK_FALSE(rep.residual_identically_zero);
    CHECK(rep.slope < -1.5);
    for (const auto& row : rep.rows) {
        CHECK(row.mc_trials == 300);
        CHECK(row.z < 5.0);
    }
    auto flat = weak_convergence_probe(engine, NCPolynomial::adjacency(2), QPoly::monomial(2), {10, 20}, 0, 0);
    CHECK(flat.residual_identically_zero);
    CHECK(std::isnan(flat.slope));
}

TEST_CASE("workers from environment") {
    setenv("WORKERS", "3", 1);
    CHECK(workers_from_env() == 3);
    setenv("WORKERS", "zero", 1);
    CHECK_THROWS_AS(workers_from_env(), PreconditionError);
    unsetenv("WORKERS");
    CHECK(workers_from_env() == 1);
}
