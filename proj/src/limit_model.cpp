#include "permtrace/limit_model.hpp"

#include "permtrace/errors.hpp"

#include <cmath>

namespace permtrace {

GroupVector GroupVector::delta(int rank, int dim, const ReducedWord& g, int coord) {
    GroupVector v(rank, dim);
    v.add(g, coord, 1);
    return v;
}

GaussianRational GroupVector::at(const ReducedWord& g, int coord) const {
    auto it = entries_.find(g);
    if (it == entries_.end()) return {};
    return it->second[static_cast<std::size_t>(coord)];
}

void GroupVector::add(const ReducedWord& g, int coord, const GaussianRational& a) {
    if (coord < 0 || coord >= dim_) throw PreconditionError("group vector coordinate out of range");
    if (a.is_zero()) return;
    auto [it, inserted] = entries_.try_emplace(g, Amplitudes(static_cast<std::size_t>(dim_)));
    it->second[static_cast<std::size_t>(coord)] += a;
}

void GroupVector::prune() {
    for (auto it = entries_.begin(); it != entries_.end();) {
        bool zero = true;
        for (const auto& a : it->second) zero = zero && a.is_zero();
        it = zero ? entries_.erase(it) : std::next(it);
    }
}

GaussianRational GroupVector::inner(const GroupVector& other) const {
    const GroupVector& small = entries_.size() <= other.entries_.size() ? *this : other;
    const GroupVector& large = &small == this ? other : *this;
    GaussianRational acc;
    for (const auto& [g, amps] : small.entries_) {
        auto it = large.entries_.find(g);
        if (it == large.entries_.end()) continue;
        for (std::size_t j = 0; j < amps.size(); ++j) {
            // <this, other> = sum conj(this) * other
            const auto& mine = &small == this ? amps[j] : it->second[j];
            const auto& theirs = &small == this ? it->second[j] : amps[j];
            acc += mine.conj() * theirs;
        }
    }
    return acc;
}

GroupVector apply(const NCPolynomial& p, const GroupVector& psi, const Budget& budget) {
    if (p.dim() != psi.dim()) throw PreconditionError("apply: coefficient dimension mismatch");
    GroupVector out(std::max(p.rank(), psi.rank()), p.dim());
    const int dim = p.dim();
    for (const auto& [w, a] : p.terms()) {
        for (const auto& [g, amps] : psi.entries()) {
            ReducedWord target = multiply(w, g);
            for (int j = 0; j < dim; ++j) {
                const auto& x = amps[static_cast<std::size_t>(j)];
                if (x.is_zero()) continue;
                for (int i = 0; i < dim; ++i) {
                    const auto& aij = a(i, j);
                    if (!aij.is_zero()) out.add(target, i, aij * x);
                }
            }
        }
        if (out.support_size() > budget.max_group_vector) {
            throw BudgetError("apply: group vector exceeds " + std::to_string(budget.max_group_vector) +
                              " entries (BUDGET_GROUP_VECTOR)");
        }
    }
    out.prune();
    return out;
}

Integer walk_count(const ReducedWord& v, int p, int rank, const Budget& budget) {
    if (p < 0) throw PreconditionError("walk_count requires p >= 0");
    if (static_cast<int>(v.size()) > p || (static_cast<int>(v.size()) - p) % 2 != 0) return 0;
    NCPolynomial adj = NCPolynomial::adjacency(rank);
    GroupVector psi = GroupVector::delta(rank, 1, ReducedWord(rank));
    for (int t = 0; t < p; ++t) psi = apply(adj, psi, budget);
    return psi.at(v).re.get_num();
}

std::vector<Integer> tree_walk_counts(int p, int rank) {
    if (p < 0 || rank < 1) throw PreconditionError("tree_walk_counts: need p >= 0 and rank >= 1");
    const long deg = 2L * rank;
    // mass[r] = number of walks of the current length ending anywhere at distance r.
    std::vector<Integer> mass(static_cast<std::size_t>(p) + 2);
    mass[0] = 1;
    for (int t = 0; t < p; ++t) {
        std::vector<Integer> next(mass.size());
        for (std::size_t r = 0; r + 1 < mass.size(); ++r) {
            if (mass[r] == 0) continue;
            if (r == 0) {
                next[1] += mass[0] * deg;
            } else {
                next[r - 1] += mass[r];
                next[r + 1] += mass[r] * (deg - 1);
            }
        }
        mass = std::move(next);
    }
    std::vector<Integer> out(static_cast<std::size_t>(p) + 1);
    Integer sphere = 1;
    for (int r = 0; r <= p; ++r) {
        if (r == 1) sphere = deg;
        if (r > 1) sphere *= deg - 1;
        out[static_cast<std::size_t>(r)] = mass[static_cast<std::size_t>(r)] / sphere;
    }
    return out;
}

GaussianRational tau_moment(const NCPolynomial& p, int power, const Budget& budget) {
    if (power < 0) throw PreconditionError("tau_moment requires p >= 0");
    if (power == 0) return 1;
    GaussianRational acc;
    const ReducedWord e(p.rank());
    for (int j = 0; j < p.dim(); ++j) {
        GroupVector psi = GroupVector::delta(p.rank(), p.dim(), e, j);
        for (int t = 0; t < power; ++t) psi = apply(p, psi, budget);
        acc += psi.at(e, j);
    }
    return acc / Rational(p.dim());
}

LimitMomentSeries tau_moments(const NCPolynomial& p, int p_max, const Budget& budget) {
    if (p_max < 0) throw PreconditionError("tau_moments requires p_max >= 0");
    LimitMomentSeries series;
    series.rank = p.rank();
    series.p_max = p_max;
    series.values.assign(static_cast<std::size_t>(p_max) + 1, GaussianRational{});
    const ReducedWord e(p.rank());
    const bool self_adjoint = p.is_self_adjoint();
    for (int j = 0; j < p.dim(); ++j) {
        GroupVector start = GroupVector::delta(p.rank(), p.dim(), e, j);
        if (self_adjoint) {
            const int half = (p_max + 1) / 2;
            std::vector<GroupVector> v{start};
            for (int k = 1; k <= half; ++k) v.push_back(apply(p, v.back(), budget));
            for (int m = 0; m <= p_max; ++m) {
                int a = m / 2, b = m - m / 2;
                series.values[static_cast<std::size_t>(m)] += v[static_cast<std::size_t>(a)].inner(v[static_cast<std::size_t>(b)]);
            }
        } else {
            GroupVector psi = start;
            series.values[0] += 1;
            for (int m = 1; m <= p_max; ++m) {
                psi = apply(p, psi, budget);
                series.values[static_cast<std::size_t>(m)] += psi.at(e, j);
            }
        }
    }
    for (auto& v : series.values) v = v / Rational(p.dim());
    return series;
}

double kesten_norm(int rank) {
    if (rank < 1) throw PreconditionError("kesten_norm requires d >= 1");
    return 2.0 * std::sqrt(2.0 * rank - 1.0);
}

NormEstimate limit_norm_estimate(const NCPolynomial& p, int p_max, const Budget& budget) {
    if (p_max < 1) throw PreconditionError("limit_norm_estimate requires p_max >= 1");
    NormEstimate est;
    est.used_square = !p.is_self_adjoint();
    NCPolynomial op = est.used_square ? multiply(p.adjoint(), p) : p;
    est.series = tau_moments(op, 2 * p_max, budget);
    const double root = est.used_square ? 0.5 : 1.0;  // ||P|| = ||P^* P||^{1/2}
    std::vector<double> even;
    for (int k = 1; k <= p_max; ++k) {
        double m = to_double(est.series.values[static_cast<std::size_t>(2 * k)].re);
        even.push_back(m);
        double l = m > 0 ? std::pow(m, root / (2.0 * k)) : 0.0;
        est.lower_by_p.push_back(l);
        est.lower = std::max(est.lower, l);
    }
    for (std::size_t k = 0; k + 1 < even.size(); ++k) {
        est.ratio.push_back(even[k] > 0 ? std::pow(even[k + 1] / even[k], root / 2.0) : 0.0);
    }
    return est;
}

}  // namespace permtrace
