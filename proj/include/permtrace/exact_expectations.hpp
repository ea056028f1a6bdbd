#pragma once

// Exact expected normalized traces E[tr_N w(S^N)] of words in i.i.d. uniform
// random permutation matrices restricted to the complement of the all-ones
// vector, as rational functions of x = 1/N.
//
// E[#fixed points of w(sigma)] is a sum over coincidence patterns of the
// closed walk spelled by w: a partition of the q walk positions into blocks
// such that, for every generator, the distinct edges it induces form a
// partial injection. A pattern with v blocks and e_j distinct edges of color
// j contributes (N)_v / prod_j (N)_{e_j}. Restricting to 1_N^perp and
// normalizing by N gives E[tr_N w] = (E[Fix] - 1) / N.

#include "permtrace/budget.hpp"
#include "permtrace/free_group.hpp"
#include "permtrace/nc_poly.hpp"
#include "permtrace/polynomial.hpp"

#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

namespace permtrace {

struct QuotientGraph {
    /// Block of each walk position, restricted-growth labelled (blocks[0] == 0).
    std::vector<int> blocks;
    int vertex_count = 0;
    /// Distinct edges per generator color, index 0 unused.
    std::vector<int> edges_per_color;

    int edge_count() const;
};

/// g_q(x) = prod_{j=1}^{q-1} (1 - j x)^{d_j}, d_j = min(d, floor(q / (j + 1))).
LinearFactors denominator_gq(int q, int rank);

/// Visits every admissible coincidence pattern of the cyclic word w exactly
/// once, in restricted-growth order. Identity letters are stripped first; the
/// word need not be reduced. Throws BudgetError above budget.max_word_length.
void enumerate_quotients(const Word& w, const std::function<void(const QuotientGraph&)>& visit,
                         const Budget& budget = {});
std::vector<QuotientGraph> enumerate_quotients(const Word& w, const Budget& budget = {});

/// Full record of one exact expectation.
struct WordExpectation {
    /// E[tr_N w(S^N)] in lowest terms.
    RationalFunctionQ value;
    /// Cyclically reduced core that was enumerated (empty when w reduces to e).
    ReducedWord core;
    /// f with value = f / g_{|core|} before cancellation.
    QPoly numerator_over_gq;
    LinearFactors gq;
    std::size_t quotient_count = 0;
};

/// Exact expectations with a cache keyed by the canonical cyclic class of a
/// word (rotation, inversion, generator relabelling). Thread-safe.
class ExpectationEngine {
public:
    explicit ExpectationEngine(Budget budget = {}) : budget_(budget) {}

    /// E[tr_N w(S^N)] as a reduced rational function of x = 1/N. Words that
    /// reduce to e give 1 - x. Valid for all N >= |w|.
    RationalFunctionQ word_expectation(const Word& w);
    RationalFunctionQ word_expectation(const ReducedWord& w);

    /// Uncached computation with all intermediate data. Checks the degree
    /// and denominator structure and throws InternalError if violated.
    WordExpectation word_expectation_detail(const Word& w) const;

    /// Psi_h(x) with E[tr_{DN} h(P(S^N, S^N*))] = Psi_h(1/N). The identity
    /// word contributes coefficient * (1 - x). Throws PreconditionError if
    /// the trace has a nonzero imaginary part.
    RationalFunctionQ polynomial_trace_expectation(const NCPolynomial& p, const ScalarPolynomial& h);
    RationalFunctionQ expansion_expectation(const std::vector<WordTerm>& expansion);

    const Budget& budget() const { return budget_; }
    std::size_t cache_size() const;

private:
    Budget budget_;
    mutable std::mutex mutex_;
    std::unordered_map<std::string, RationalFunctionQ> cache_;
};

/// E[tr_N w(S^N)] at a fixed N >= 1 by summing (N)_v / prod_j (N)_{e_j} over
/// the patterns with v <= N. Agrees with the rational function for N >= |core|
/// and stays exact below that, where patterns with more blocks than points drop out.
Rational pattern_sum_expectation(const Word& w, int n, const Budget& budget = {});

/// Exact average of tr_N w(S^N) over all tuples of permutations of [N] for
/// the generators that occur in w. Oracle for word_expectation.
Rational brute_force_expectation(const Word& w, int n, const Budget& budget = {});

}  // namespace permtrace
