#pragma once

// Taylor functionals nu_m of Psi_h at x = 0, the word-counting route for
// nu_1, moment-growth support estimates and numerical checks of the master
// inequalities.

#include "permtrace/budget.hpp"
#include "permtrace/exact_expectations.hpp"
#include "permtrace/nc_poly.hpp"
#include "permtrace/polynomial.hpp"

#include <string>
#include <vector>

namespace permtrace {

enum class NuRoute { taylor, wordcount };
std::string to_string(NuRoute r);

struct NuFunctionalValue {
    int order = 0;
    Rational value;
    NuRoute route = NuRoute::taylor;
};

/// nu_0..nu_m with nu_k = Psi^(k)(0) / k!. Throws InternalError on a pole at 0.
std::vector<Rational> taylor_nu(const RationalFunctionQ& psi, int m);

/// nu_1(x^p) for the adjacency polynomial: -tau(A_F^p) plus, over all reduced
/// g != e with |g| <= p and g = v^k (v a non-power, k >= 2), (omega(k) - 1)
/// times the number of length-p walks from e to g.
Integer nu1_adjacency_wordcount(int d, int p, const Budget& budget = {});

/// Number of reduced words of each length 0..p that are proper powers v^k,
/// bucketed by k: result[len][k]. Found by enumerating the ball.
std::vector<std::vector<Integer>> proper_power_counts(int d, int p, const Budget& budget = {});

/// nu_1(x^p) from the word expansion of tr_D(P^p): identity words weigh -1,
/// words reducing to v^k weigh omega(k) - 1.
GaussianRational nu1_polynomial_wordcount(const NCPolynomial& P, int p, const Budget& budget = {});

enum class SupportNormalizer { none, friedman };

struct SupportEstimate {
    int p_max = 0;
    /// (|m_p| / n(p))^(1/p) for p = 1..p_max.
    std::vector<double> normalized;
    /// Max of the normalized values over the top third of p.
    double rho_hat = 0;
    /// Max over all p.
    double max_normalized = 0;
    double target = 0;
    double tolerance = 0;
    bool within_target = true;
};

/// moments[p - 1] = nu(x^p). friedman normalizes by 1 + p^2 (p+1)^4.
SupportEstimate support_estimate(const std::vector<double>& moments, SupportNormalizer normalizer,
                                 double target = 0, double tolerance = 0.01);

/// (4 q q0 (1 + log d))^(4m)
double master_constant(int q, int q0, int d, int m);

struct MasterInequalityReport {
    int N = 0;
    int m = 0;
    int q = 0;
    int q0 = 0;
    int d = 0;
    double K = 0;
    Rational psi_at_N;
    std::vector<Rational> nu;
    Rational lhs;
    double lhs_double = 0;
    double sup_norm = 0;
    double rhs = 0;
    bool holds = false;
};

/// |Psi_h(1/N) - sum_{i<m} nu_i(h) / N^i| against
/// (4 q q0 (1 + log d))^(4m) / N^m ||h||_{C0[-K,K]}, K = sum of coefficient
/// norms, q = max(1, deg h).
MasterInequalityReport verify_master_inequality(ExpectationEngine& engine, const NCPolynomial& P,
                                                const ScalarPolynomial& h, int N, int m);
/// Same with Psi_h already computed.
MasterInequalityReport verify_master_inequality(const RationalFunctionQ& psi, const NCPolynomial& P,
                                                const ScalarPolynomial& h, int N, int m);

struct NuBoundReport {
    int m = 0;
    Rational nu;
    double bound = 0;
    bool holds = false;
};

/// |nu_m(h)| <= (4 q q0 (1 + log d))^(4m) ||h||_{C0[-K,K]} for each m <= m_max.
std::vector<NuBoundReport> nu_bound_check(const RationalFunctionQ& psi, const NCPolynomial& P,
                                          const ScalarPolynomial& h, int m_max);

}  // namespace permtrace
