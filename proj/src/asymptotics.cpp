#include "permtrace/asymptotics.hpp"

#include "permtrace/approximation.hpp"
#include "permtrace/errors.hpp"
#include "permtrace/limit_model.hpp"

#include <algorithm>
#include <cmath>

namespace permtrace {

std::string to_string(NuRoute r) { return r == NuRoute::taylor ? "taylor" : "wordcount"; }

std::vector<Rational> taylor_nu(const RationalFunctionQ& psi, int m) {
    if (m < 0) throw PreconditionError("taylor_nu requires m >= 0");
    return psi.taylor(m);
}

std::vector<std::vector<Integer>> proper_power_counts(int d, int p, const Budget& budget) {
    if (d < 1 || p < 0) throw PreconditionError("proper_power_counts requires d >= 1 and p >= 0");
    double ball = 1;
    for (int len = 1; len <= p; ++len) ball += 2.0 * d * std::pow(2.0 * d - 1, len - 1);
    if (ball > static_cast<double>(budget.max_group_vector)) {
        throw BudgetError("proper_power_counts: ball of radius " + std::to_string(p) + " has " +
                          std::to_string(static_cast<long long>(ball)) + " elements (BUDGET_GROUP_VECTOR=" +
                          std::to_string(budget.max_group_vector) + ")");
    }
    std::vector<std::vector<long long>> counts(static_cast<std::size_t>(p) + 1,
                                               std::vector<long long>(static_cast<std::size_t>(p) + 1, 0));
    std::vector<Letter> word;
    word.reserve(static_cast<std::size_t>(p));
    // Iterative DFS over reduced words; choice[i] indexes the 2d letters.
    std::vector<int> choice;
    auto letter_of = [d](int c) { return c < d ? Letter::generator(c + 1) : Letter::inverse_generator(c - d + 1); };
    choice.push_back(-1);
    while (!choice.empty()) {
        const std::size_t depth = choice.size() - 1;
        int& c = choice.back();
        ++c;
        if (c >= 2 * d || static_cast<int>(depth) >= p) {
            choice.pop_back();
            if (!word.empty()) word.pop_back();
            continue;
        }
        Letter l = letter_of(c);
        if (!word.empty() && word.back() == l.inverse()) continue;
        word.push_back(l);
        const int k = power_exponent(word);
        if (k >= 2) ++counts[word.size()][static_cast<std::size_t>(k)];
        choice.push_back(-1);
    }
    std::vector<std::vector<Integer>> out(counts.size());
    for (std::size_t len = 0; len < counts.size(); ++len) {
        for (long long v : counts[len]) out[len].emplace_back(static_cast<long>(v));
    }
    return out;
}

Integer nu1_adjacency_wordcount(int d, int p, const Budget& budget) {
    if (p < 1) throw PreconditionError("nu1_adjacency_wordcount requires p >= 1");
    const auto walks = tree_walk_counts(p, d);
    const auto powers = proper_power_counts(d, p, budget);
    Integer nu = -walks[0];
    for (int len = 2; len <= p; ++len) {
        if ((p - len) % 2 != 0) continue;
        for (int k = 2; k <= len; ++k) {
            const Integer& n = powers[static_cast<std::size_t>(len)][static_cast<std::size_t>(k)];
            if (n != 0) nu += n * (divisor_count(k) - 1) * walks[static_cast<std::size_t>(len)];
        }
    }
    return nu;
}

GaussianRational nu1_polynomial_wordcount(const NCPolynomial& P, int p, const Budget& budget) {
    if (p < 1) throw PreconditionError("nu1_polynomial_wordcount requires p >= 1");
    GaussianRational nu;
    for (const auto& t : trace_word_expansion(P, QPoly::monomial(p), budget)) {
        if (t.word.is_identity()) {
            nu -= t.coeff;
            continue;
        }
        const int k = power_exponent(t.word.letters());
        if (k >= 2) nu += t.coeff * Rational(divisor_count(k) - 1);
    }
    return nu;
}

SupportEstimate support_estimate(const std::vector<double>& moments, SupportNormalizer normalizer, double target,
                                 double tolerance) {
    if (moments.size() < 3) throw PreconditionError("support_estimate requires at least 3 moments");
    SupportEstimate est;
    est.p_max = static_cast<int>(moments.size());
    est.target = target;
    est.tolerance = tolerance;
    for (int p = 1; p <= est.p_max; ++p) {
        double norm = 1;
        if (normalizer == SupportNormalizer::friedman) norm = 1 + std::pow(p, 2) * std::pow(p + 1, 4);
        double m = std::abs(moments[static_cast<std::size_t>(p - 1)]);
        if (!std::isfinite(m)) throw PreconditionError("support_estimate: non-finite moment");
        est.normalized.push_back(m > 0 ? std::pow(m / norm, 1.0 / p) : 0.0);
    }
    const int start = est.p_max - (est.p_max + 2) / 3;
    for (int i = 0; i < est.p_max; ++i) {
        est.max_normalized = std::max(est.max_normalized, est.normalized[static_cast<std::size_t>(i)]);
        if (i >= start) est.rho_hat = std::max(est.rho_hat, est.normalized[static_cast<std::size_t>(i)]);
    }
    est.within_target = est.max_normalized <= target + tolerance;
    return est;
}

double master_constant(int q, int q0, int d, int m) {
    return std::pow(4.0 * q * q0 * (1 + std::log(static_cast<double>(d))), 4.0 * m);
}

MasterInequalityReport verify_master_inequality(const RationalFunctionQ& psi, const NCPolynomial& P,
                                                const ScalarPolynomial& h, int N, int m) {
    if (N < 1 || m < 1) throw PreconditionError("verify_master_inequality requires N >= 1 and m >= 1");
    MasterInequalityReport rep;
    rep.N = N;
    rep.m = m;
    rep.q = std::max(1, h.degree());
    rep.q0 = P.degree();
    rep.d = P.rank();
    rep.K = P.coefficient_norm_sum();
    const Rational x(1, N);
    rep.psi_at_N = psi.eval(x);
    rep.nu = taylor_nu(psi, m - 1);
    Rational partial = 0, xi = 1;
    for (const auto& v : rep.nu) {
        partial += v * xi;
        xi *= x;
    }
    rep.lhs = abs(rep.psi_at_N - partial);
    rep.lhs_double = to_double(rep.lhs);
    // The refined grid maximum never exceeds the true sup, so the RHS is never inflated.
    rep.sup_norm = sup_norm(h, -rep.K, rep.K).value;
    rep.rhs = master_constant(rep.q, rep.q0, rep.d, m) / std::pow(static_cast<double>(N), m) * rep.sup_norm;
    rep.holds = rep.lhs_double <= rep.rhs;
    return rep;
}

MasterInequalityReport verify_master_inequality(ExpectationEngine& engine, const NCPolynomial& P,
                                                const ScalarPolynomial& h, int N, int m) {
    return verify_master_inequality(engine.polynomial_trace_expectation(P, h), P, h, N, m);
}

std::vector<NuBoundReport> nu_bound_check(const RationalFunctionQ& psi, const NCPolynomial& P,
                                          const ScalarPolynomial& h, int m_max) {
    const int q = std::max(1, h.degree());
    const double K = P.coefficient_norm_sum();
    const double sup = sup_norm(h, -K, K).value;
    const auto nu = taylor_nu(psi, m_max);
    std::vector<NuBoundReport> out;
    for (int m = 0; m <= m_max; ++m) {
        NuBoundReport r;
        r.m = m;
        r.nu = nu[static_cast<std::size_t>(m)];
        r.bound = master_constant(q, P.degree(), P.rank(), m) * sup;
        r.holds = std::abs(to_double(r.nu)) <= r.bound;
        out.push_back(r);
    }
    return out;
}

}  // namespace permtrace
