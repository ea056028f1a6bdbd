#pragma once

// The limiting model: s_i = lambda(g_i) acting on l^2(F_d) (tensored with C^D
// for matrix coefficients), the vector state tau(a) = <delta_e, a delta_e>,
// walk counts on the 2d-regular tree and moment-based norm estimates.

#include "permtrace/budget.hpp"
#include "permtrace/free_group.hpp"
#include "permtrace/nc_poly.hpp"
#include "permtrace/rational.hpp"

#include <unordered_map>
#include <vector>

namespace permtrace {

/// Finitely supported vector in C^D (x) l^2(F_d) with exact amplitudes.
class GroupVector {
public:
    using Amplitudes = std::vector<GaussianRational>;  // one per coordinate
    using Map = std::unordered_map<ReducedWord, Amplitudes, ReducedWordHash>;

    GroupVector(int rank, int dim = 1) : rank_(rank), dim_(dim) {}

    /// e_coord (x) delta_g
    static GroupVector delta(int rank, int dim, const ReducedWord& g, int coord = 0);

    int rank() const { return rank_; }
    int dim() const { return dim_; }
    std::size_t support_size() const { return entries_.size(); }
    const Map& entries() const { return entries_; }

    GaussianRational at(const ReducedWord& g, int coord = 0) const;
    void add(const ReducedWord& g, int coord, const GaussianRational& a);
    /// Drops group elements whose amplitudes all vanish.
    void prune();

    /// <this, other>, conjugate-linear in the first argument.
    GaussianRational inner(const GroupVector& other) const;

private:
    int rank_;
    int dim_;
    Map entries_;
};

/// P(s, s^*) psi via the left-regular representation.
GroupVector apply(const NCPolynomial& p, const GroupVector& psi, const Budget& budget = {});

/// <delta_v, A_F^p delta_e>: number of length-p sequences over the 2d letters
/// g_i^{+-1} whose product is v. Computed by repeated application.
Integer walk_count(const ReducedWord& v, int p, int rank, const Budget& budget = {});

/// Walk counts on the 2d-regular tree by distance: entry r is the number of
/// length-p walks from the root to one fixed vertex at distance r.
std::vector<Integer> tree_walk_counts(int p, int rank);

/// (tr_D (x) tau)(P^p), exact.
GaussianRational tau_moment(const NCPolynomial& p, int power, const Budget& budget = {});

/// Exact moments m_0..m_{p_max} of X_F = P(s, s^*).
struct LimitMomentSeries {
    int rank = 1;
    int p_max = 0;
    std::vector<GaussianRational> values;
};

/// m_0..m_{p_max}. For self-adjoint P the vectors P^k psi are reused through
/// m_{a+b} = <P^a psi, P^b psi>, halving the radius that has to be explored.
LimitMomentSeries tau_moments(const NCPolynomial& p, int p_max, const Budget& budget = {});

/// Kesten: norm of the adjacency operator of the 2d-regular tree, 2 sqrt(2d - 1).
double kesten_norm(int rank);

struct NormEstimate {
    /// Certified lower bound max_p m_{2p}^{1/2p} on ||P(s, s^*)||.
    double lower = 0;
    /// m_{2p}^{1/2p}, p = 1..p_max.
    std::vector<double> lower_by_p;
    /// sqrt(m_{2p+2}/m_{2p}), p = 1..p_max-1; nondecreasing towards the norm.
    std::vector<double> ratio;
    /// Moments m_0..m_{2 p_max} of the operator actually used (P or P^* P).
    LimitMomentSeries series;
    /// P was not self-adjoint and the estimate went through P^* P.
    bool used_square = false;
};

NormEstimate limit_norm_estimate(const NCPolynomial& p, int p_max, const Budget& budget = {});

}  // namespace permtrace
