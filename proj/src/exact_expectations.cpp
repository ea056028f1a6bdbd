#include "permtrace/exact_expectations.hpp"

#include "permtrace/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace permtrace {

int QuotientGraph::edge_count() const { return std::accumulate(edges_per_color.begin(), edges_per_color.end(), 0); }

LinearFactors denominator_gq(int q, int rank) {
    if (q < 1 || rank < 1) throw PreconditionError("denominator_gq requires q >= 1 and d >= 1");
    LinearFactors g;
    for (int j = 1; j <= q - 1; ++j) {
        int dj = std::min(rank, q / (j + 1));
        if (dj > 0) g[Rational(j)] = dj;
    }
    return g;
}

namespace {

// Depth-first search over coincidence patterns of a cyclic word. Positions
// are assigned blocks in order; an existing edge of the same color out of
// (into) the current block forces the next block, which is where most of
// the pruning comes from.
class QuotientSearch {
public:
    QuotientSearch(std::span<const Letter> letters, int colors)
        : letters_(letters.begin(), letters.end()),
          q_(static_cast<int>(letters.size())),
          colors_(colors),
          out_(static_cast<std::size_t>((colors + 1) * q_), -1),
          in_(static_cast<std::size_t>((colors + 1) * q_), -1) {
        graph_.blocks.assign(static_cast<std::size_t>(q_), -1);
        graph_.edges_per_color.assign(static_cast<std::size_t>(colors + 1), 0);
    }

    void run(const std::function<void(const QuotientGraph&)>& visit) {
        visit_ = &visit;
        if (q_ == 0) return;
        graph_.blocks[0] = 0;
        graph_.vertex_count = 1;
        step(0);
    }

private:
    int& out(int color, int block) { return out_[static_cast<std::size_t>(color * q_ + block)]; }
    int& in(int color, int block) { return in_[static_cast<std::size_t>(color * q_ + block)]; }

    // Edge t joins positions t and t+1 (mod q); block of position t is known.
    void step(int t) {
        const Letter l = letters_[static_cast<std::size_t>(t)];
        const int color = l.generator_number();
        const bool forward = !l.is_inverse();
        const int here = graph_.blocks[static_cast<std::size_t>(t)];
        const bool closing = t + 1 == q_;

        // Existing edge at 'here' in the walking direction forces the next block.
        const int forced = forward ? out(color, here) : in(color, here);
        if (closing) {
            const int there = graph_.blocks[0];
            if (forced >= 0) {
                if (forced == there) emit();
                return;
            }
            // there must be free on the opposite side.
            if ((forward ? in(color, there) : out(color, there)) >= 0) return;
            link(color, forward, here, there);
            emit();
            unlink(color, forward, here, there);
            return;
        }
        auto& next_block = graph_.blocks[static_cast<std::size_t>(t + 1)];
        if (forced >= 0) {
            next_block = forced;
            step(t + 1);
            next_block = -1;
            return;
        }
        const int existing = graph_.vertex_count;
        for (int b = 0; b <= existing; ++b) {
            const bool fresh = b == existing;
            if (!fresh && (forward ? in(color, b) : out(color, b)) >= 0) continue;
            next_block = b;
            if (fresh) ++graph_.vertex_count;
            link(color, forward, here, b);
            step(t + 1);
            unlink(color, forward, here, b);
            if (fresh) --graph_.vertex_count;
        }
        next_block = -1;
    }

    void link(int color, bool forward, int here, int there) {
        int src = forward ? here : there;
        int dst = forward ? there : here;
        out(color, src) = dst;
        in(color, dst) = src;
        ++graph_.edges_per_color[static_cast<std::size_t>(color)];
    }

    void unlink(int color, bool forward, int here, int there) {
        int src = forward ? here : there;
        int dst = forward ? there : here;
        out(color, src) = -1;
        in(color, dst) = -1;
        --graph_.edges_per_color[static_cast<std::size_t>(color)];
    }

    void emit() { (*visit_)(graph_); }

    std::vector<Letter> letters_;
    int q_;
    int colors_;
    std::vector<int> out_;
    std::vector<int> in_;
    QuotientGraph graph_;
    const std::function<void(const QuotientGraph&)>* visit_ = nullptr;
};

int max_color(std::span<const Letter> letters) {
    int c = 0;
    for (Letter l : letters) c = std::max(c, l.generator_number());
    return c;
}

int distinct_generators(std::span<const Letter> letters) {
    std::vector<int> seen;
    for (Letter l : letters) seen.push_back(l.generator_number());
    std::sort(seen.begin(), seen.end());
    return static_cast<int>(std::unique(seen.begin(), seen.end()) - seen.begin());
}

RationalFunctionQ one_minus_x() { return RationalFunctionQ(QPoly::one_minus(1)); }

}  // namespace

void enumerate_quotients(const Word& w, const std::function<void(const QuotientGraph&)>& visit, const Budget& budget) {
    Word stripped = w.strip_identity();
    if (static_cast<int>(stripped.size()) > budget.max_word_length) {
        throw BudgetError("enumerate_quotients: word length " + std::to_string(stripped.size()) + " exceeds cap " +
                          std::to_string(budget.max_word_length) + " (BUDGET_WORD_LENGTH)");
    }
    QuotientSearch search(stripped.letters(), max_color(stripped.letters()));
    search.run(visit);
}

std::vector<QuotientGraph> enumerate_quotients(const Word& w, const Budget& budget) {
    std::vector<QuotientGraph> out;
    enumerate_quotients(w, [&](const QuotientGraph& g) { out.push_back(g); }, budget);
    return out;
}

WordExpectation ExpectationEngine::word_expectation_detail(const Word& w) const {
    WordExpectation result;
    ReducedWord r = reduce(w);
    if (r.is_identity()) {
        result.value = one_minus_x();
        result.numerator_over_gq = QPoly::one_minus(1);
        result.core = ReducedWord(w.rank());
        return result;
    }
    result.core = cyclic_reduce(r).core;
    auto core = result.core.letters();
    const int q = static_cast<int>(core.size());
    if (q > budget_.max_word_length) {
        throw BudgetError("word_expectation: cyclic core length " + std::to_string(q) + " exceeds cap " +
                          std::to_string(budget_.max_word_length) + " (BUDGET_WORD_LENGTH)");
    }
    const int colors = max_color(core);
    const int used = distinct_generators(core);

    // Patterns only matter through (v, multiset of e_j).
    std::map<std::vector<int>, long long> classes;
    QuotientSearch search(core, colors);
    std::function<void(const QuotientGraph&)> visit = [&](const QuotientGraph& g) {
        std::vector<int> key{g.vertex_count};
        for (int c = 1; c <= colors; ++c) key.push_back(g.edges_per_color[static_cast<std::size_t>(c)]);
        std::sort(key.begin() + 1, key.end());
        ++classes[key];
        ++result.quotient_count;
    };
    search.run(visit);

    result.gq = denominator_gq(q, used);
    auto gq_mult = [&](int i) {
        auto it = result.gq.find(Rational(i));
        return it == result.gq.end() ? 0 : it->second;
    };

    // f(x) = -x g_q(x) + sum_Gamma x^{e-v+1} prod_{l<v}(1 - l x) prod_i (1 - i x)^{d_i - d_i^Gamma}
    QPoly f = QPoly::monomial(1, -1) * expand_factors(result.gq);
    for (const auto& [key, count] : classes) {
        const int v = key[0];
        int e = 0;
        for (std::size_t c = 1; c < key.size(); ++c) e += key[c];
        if (e - v + 1 < 0) throw InternalError("disconnected coincidence pattern");
        QPoly term = QPoly::monomial(e - v + 1, Rational(static_cast<long>(count)));
        for (int l = 1; l < v; ++l) term = term * QPoly::one_minus(l);
        for (int i = 1; i <= q - 1; ++i) {
            int di_gamma = 0;
            for (std::size_t c = 1; c < key.size(); ++c) di_gamma += key[c] >= i + 1 ? 1 : 0;
            int extra = gq_mult(i) - di_gamma;
            if (extra < 0) throw InternalError("pattern denominator does not divide g_q");
            for (int k = 0; k < extra; ++k) term = term * QPoly::one_minus(i);
        }
        f += term;
    }
    const double bound = q * (1.0 + std::log(static_cast<double>(used)));
    if (f.degree() > bound + 1e-9 || factor_degree(result.gq) > bound + 1e-9) {
        throw InternalError("degree bound q(1+log d) violated for word " + to_string(w));
    }
    result.numerator_over_gq = f;
    result.value = RationalFunctionQ(f, result.gq).reduced();
    return result;
}

RationalFunctionQ ExpectationEngine::word_expectation(const ReducedWord& r) {
    if (r.is_identity()) return one_minus_x();
    ReducedWord core = cyclic_reduce(r).core;
    std::string key = canonical_cyclic_key(core.letters());
    {
        std::lock_guard lock(mutex_);
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    }
    RationalFunctionQ value = word_expectation_detail(core.as_word()).value;
    std::lock_guard lock(mutex_);
    cache_.emplace(key, value);
    return value;
}

RationalFunctionQ ExpectationEngine::word_expectation(const Word& w) { return word_expectation(reduce(w)); }

RationalFunctionQ ExpectationEngine::expansion_expectation(const std::vector<WordTerm>& expansion) {
    RationalFunctionQ re, im;
    for (const auto& t : expansion) {
        RationalFunctionQ e = word_expectation(t.word);
        if (t.coeff.re != 0) re += e * t.coeff.re;
        if (t.coeff.im != 0) im += e * t.coeff.im;
    }
    if (!im.reduced().is_zero()) {
        throw PreconditionError("expected trace has a nonzero imaginary part; use a self-adjoint polynomial (e.g. P^*P)");
    }
    return re.reduced();
}

RationalFunctionQ ExpectationEngine::polynomial_trace_expectation(const NCPolynomial& p, const ScalarPolynomial& h) {
    return expansion_expectation(trace_word_expansion(p, h, budget_));
}

std::size_t ExpectationEngine::cache_size() const {
    std::lock_guard lock(mutex_);
    return cache_.size();
}

Rational pattern_sum_expectation(const Word& w, int n, const Budget& budget) {
    if (n < 1) throw PreconditionError("pattern_sum_expectation requires N >= 1");
    ReducedWord r = reduce(w);
    if (r.is_identity()) return Rational(n - 1, n);
    ReducedWord core = cyclic_reduce(r).core;
    auto falling = [](int top, int k) {
        Integer acc = 1;
        for (int i = 0; i < k; ++i) acc *= top - i;
        return acc;
    };
    Rational fix = 0;
    enumerate_quotients(
        core.as_word(),
        [&](const QuotientGraph& g) {
            if (g.vertex_count > n) return;
            Integer den = 1;
            for (int e : g.edges_per_color) den *= falling(n, e);
            Rational term(falling(n, g.vertex_count), den);
            term.canonicalize();
            fix += term;
        },
        budget);
    return Rational((fix - 1) / n);
}

Rational brute_force_expectation(const Word& w, int n, const Budget& budget) {
    if (n < 1) throw PreconditionError("brute_force_expectation requires N >= 1");
    Word stripped = w.strip_identity();
    std::vector<int> gens;
    for (Letter l : stripped.letters()) gens.push_back(l.generator_number());
    std::sort(gens.begin(), gens.end());
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());

    std::vector<std::vector<int>> perms;
    std::vector<int> base(static_cast<std::size_t>(n));
    std::iota(base.begin(), base.end(), 0);
    do perms.push_back(base);
    while (std::next_permutation(base.begin(), base.end()));
    std::vector<std::vector<int>> inverses;
    for (const auto& p : perms) {
        std::vector<int> inv(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) inv[static_cast<std::size_t>(p[i])] = static_cast<int>(i);
        inverses.push_back(std::move(inv));
    }

    double tuples = std::pow(static_cast<double>(perms.size()), static_cast<double>(gens.size()));
    if (tuples > static_cast<double>(budget.max_brute_force_tuples)) {
        throw BudgetError("brute_force_expectation: " + std::to_string(static_cast<long long>(tuples)) +
                          " permutation tuples exceed BUDGET_BRUTE_FORCE=" + std::to_string(budget.max_brute_force_tuples));
    }

    // Letter -> (generator slot, inverse?)
    std::vector<std::pair<std::size_t, bool>> program;
    for (Letter l : stripped.letters()) {
        auto slot = static_cast<std::size_t>(std::lower_bound(gens.begin(), gens.end(), l.generator_number()) - gens.begin());
        program.emplace_back(slot, l.is_inverse());
    }

    std::vector<std::size_t> choice(gens.size(), 0);
    Integer fixed_total = 0;
    long count = 0;
    while (true) {
        long fixed = 0;
        for (int x = 0; x < n; ++x) {
            int y = x;
            for (auto it = program.rbegin(); it != program.rend(); ++it) {
                const auto& table = it->second ? inverses[choice[it->first]] : perms[choice[it->first]];
                y = table[static_cast<std::size_t>(y)];
            }
            fixed += y == x;
        }
        fixed_total += fixed;
        ++count;
        std::size_t k = 0;
        while (k < choice.size() && ++choice[k] == perms.size()) choice[k++] = 0;
        if (k == choice.size()) break;
    }
    Rational mean_fix(fixed_total, Integer(static_cast<long>(count)));
    mean_fix.canonicalize();
    return Rational((mean_fix - 1) / n);
}

}  // namespace permtrace
