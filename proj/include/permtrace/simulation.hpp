#pragma once

// Monte Carlo side: random permutation tuples, the matrix-free operator
// P(S^N, S^N*) on the complement of the constant vectors, extreme
// eigenvalues by Lanczos, and the tail / staircase / weak-convergence
// experiments.

#include "permtrace/budget.hpp"
#include "permtrace/exact_expectations.hpp"
#include "permtrace/nc_poly.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <vector>

namespace permtrace {

using Permutation = std::vector<std::int32_t>;

struct PermTuple {
    int N = 0;
    std::uint64_t seed = 0;
    std::uint64_t trial = 0;
    /// perms[i] is sigma_{i+1}; S e_k = e_{sigma(k)}.
    std::vector<Permutation> perms;
};

/// d i.i.d. uniform permutations of [N] (Fisher-Yates), a pure function of
/// (N, d, seed, trial).
PermTuple sample_tuple(int N, int d, std::uint64_t seed, std::uint64_t trial);

/// As sample_tuple, but sigma_1..sigma_m are uniform among permutations
/// fixing vertex 0.
PermTuple sample_planted_tuple(int N, int d, int m, std::uint64_t seed, std::uint64_t trial);

bool is_permutation(const Permutation& p);

/// Number of fixed points of w(sigma).
int fixed_points(const Word& w, const PermTuple& t);

/// P(S^N, S^N*) acting on C^D (x) C^N. Each word collapses to one
/// permutation, so an apply costs O(#terms D^2 N).
class SparsePermOperator {
public:
    using Vector = Eigen::VectorXcd;

    SparsePermOperator(const NCPolynomial& P, const PermTuple& t);

    int N() const { return N_; }
    int D() const { return D_; }
    Eigen::Index size() const { return static_cast<Eigen::Index>(D_) * N_; }
    bool is_real() const { return real_; }
    bool self_adjoint() const { return self_adjoint_; }

    void apply(const Vector& x, Vector& y) const;
    void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const;

    /// Removes the component along e_j (x) 1 for every coordinate j.
    template <class Vec>
    void project(Vec& x) const {
        for (int j = 0; j < D_; ++j) {
            auto block = x.segment(static_cast<Eigen::Index>(j) * N_, N_);
            block.array() -= block.mean();
        }
    }

    /// Dense matrix of the full operator (small N only).
    Eigen::MatrixXcd dense() const;

private:
    struct Term {
        std::vector<std::complex<double>> coeff;  // D x D row-major
        Permutation pi;                           // (w(S) v)[pi[k]] = v[k]
    };
    int N_, D_;
    bool self_adjoint_;
    bool real_ = true;
    std::vector<Term> terms_;
};

struct SpectralReport {
    int requested = 0;
    /// Largest eigenvalues on the projected space, descending.
    std::vector<double> top;
    /// Smallest eigenvalues, ascending.
    std::vector<double> bottom;
    std::vector<double> top_residuals;
    std::vector<double> bottom_residuals;
    /// max(|top[0]|, |bottom[0]|)
    double norm = 0;
    int iterations = 0;
    double wall_seconds = 0;
};

/// k extreme eigenvalues at each end of the spectrum of the operator on the
/// complement of the constant vectors, by Lanczos with full
/// reorthogonalization. Throws PreconditionError unless P is self-adjoint
/// and ConvergenceError if residuals stay above tol * max(1, |lambda|).
SpectralReport extreme_eigs(const SparsePermOperator& op, int k = 1, double tol = 1e-8, int max_iter = 1000,
                            std::uint64_t start_seed = 0);

/// All eigenvalues of the projected operator by a dense Hermitian solver.
std::vector<double> dense_projected_eigenvalues(const SparsePermOperator& op);

/// Wilson score interval for successes / trials.
struct Interval {
    double lo = 0, hi = 0;
};
Interval wilson_interval(long successes, long trials, double z = 1.959963984540054);

/// Worker count from WORKERS (default 1).
int workers_from_env();

/// Runs body(trial) for trial = 0..trials-1 on a small thread pool.
void parallel_trials(int trials, int workers, const std::function<void(int)>& body);

struct TailRow {
    int trial = 0;
    double lambda2 = 0;
    double lambda_min = 0;
    double norm = 0;
    int iterations = 0;
};

struct TailReport {
    int d = 0, N = 0, trials = 0;
    double eps = 0;
    std::uint64_t seed = 0;
    double threshold = 0;
    long exceed = 0;
    double fraction = 0;
    Interval ci;
    long norm_exceed = 0;
    double norm_fraction = 0;
    double median = 0, q05 = 0, q95 = 0;
    std::vector<TailRow> rows;
};

/// Fraction of trials with lambda_2(A^N) >= 2 sqrt(2d-1) + eps.
TailReport tail_experiment(int d, int N, double eps, int trials, std::uint64_t seed, int workers = 1);

double staircase_rho(int d, int m);

struct StaircaseReport {
    int d = 0, N = 0, m = 0, trials = 0;
    std::uint64_t seed = 0;
    double rho_m = 0;
    /// rho_m coincides with the trivial eigenvalue 2d.
    bool degenerate = false;
    std::vector<double> planted_top;
    std::vector<double> control_top;
    /// Planted trials with |top - rho_m| <= window.
    int planted_hits = 0;
    /// Unplanted trials with top > rho_m - window.
    int control_hits = 0;
    double window = 0.1;
};

/// Throws PreconditionError unless 2m - 1 > sqrt(2d - 1) and 1 <= m <= d.
StaircaseReport staircase_experiment(int d, int N, int m, int trials, std::uint64_t seed, int workers = 1,
                                     double window = 0.1);

struct WeakProbeRow {
    int N = 0;
    Rational exact;
    Rational residual;  // |Psi(1/N) - nu_0 - nu_1/N|
    double mc_mean = 0;
    double mc_stderr = 0;
    int mc_trials = 0;
    /// |mc_mean - exact| / stderr (0 when no sampling or stderr = 0)
    double z = 0;
};

struct WeakProbeReport {
    RationalFunctionQ psi;
    Rational nu0, nu1;
    std::vector<WeakProbeRow> rows;
    /// Least-squares slope of log residual against log N (NaN if any residual vanishes).
    double slope = 0;
    bool residual_identically_zero = false;
};

/// Exact residuals on N_grid, plus trials Monte Carlo samples per N of
/// sum coeff (Fix(w(sigma)) - 1) / N over the word expansion of tr h(P).
WeakProbeReport weak_convergence_probe(ExpectationEngine& engine, const NCPolynomial& P, const ScalarPolynomial& h,
                                       const std::vector<int>& N_grid, int trials, std::uint64_t seed,
                                       int workers = 1);

}  // namespace permtrace
