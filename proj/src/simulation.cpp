#include "permtrace/simulation.hpp"

#include "permtrace/asymptotics.hpp"
#include "permtrace/errors.hpp"
#include "permtrace/rng.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

namespace permtrace {

namespace {

void shuffle_range(Permutation& p, std::size_t first, CounterRng& rng) {
    // Fisher-Yates on p[first..]
    for (std::size_t k = p.size(); k-- > first + 1;) {
        std::size_t j = first + static_cast<std::size_t>(rng.below(k - first + 1));
        std::swap(p[k], p[j]);
    }
}

Permutation identity_permutation(int N) {
    Permutation p(static_cast<std::size_t>(N));
    std::iota(p.begin(), p.end(), 0);
    return p;
}

Permutation inverse_permutation(const Permutation& p) {
    Permutation inv(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) inv[static_cast<std::size_t>(p[k])] = static_cast<std::int32_t>(k);
    return inv;
}

// pi with (w(S) v)[pi[k]] = v[k]; letters act right to left.
Permutation word_permutation(std::span<const Letter> letters, const PermTuple& t,
                             const std::vector<Permutation>& inverses) {
    Permutation pi = identity_permutation(t.N);
    for (auto it = letters.rbegin(); it != letters.rend(); ++it) {
        if (it->is_identity()) continue;
        const auto g = static_cast<std::size_t>(it->generator_number() - 1);
        if (g >= t.perms.size()) throw PreconditionError("word uses a generator beyond the sampled tuple");
        const Permutation& s = it->is_inverse() ? inverses[g] : t.perms[g];
        for (auto& v : pi) v = s[static_cast<std::size_t>(v)];
    }
    return pi;
}

std::vector<Permutation> all_inverses(const PermTuple& t) {
    std::vector<Permutation> out;
    for (const auto& p : t.perms) out.push_back(inverse_permutation(p));
    return out;
}

double quantile(std::vector<double> v, double q) {
    if (v.empty()) return 0;
    std::sort(v.begin(), v.end());
    double pos = q * static_cast<double>(v.size() - 1);
    auto lo = static_cast<std::size_t>(std::floor(pos));
    auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

template <class Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <class Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <class Scalar>
SpectralReport lanczos(const SparsePermOperator& op, int k, double tol, int max_iter, std::uint64_t start_seed) {
    const auto t0 = std::chrono::steady_clock::now();
    const Eigen::Index n = op.size();
    const int dim = op.D() * (op.N() - 1);
    SpectralReport rep;
    rep.requested = k;
    if (dim <= 0) throw PreconditionError("extreme_eigs: projected space is empty (N = 1)");
    const int cap = std::min(max_iter, dim);

    Mat<Scalar> V(n, cap + 1);
    std::vector<double> alpha, beta;
    Vec<Scalar> v(n);
    CounterRng rng(start_seed, 0, 0x51a7);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = Scalar(rng.uniform() - 0.5);
    op.project(v);
    v.normalize();
    V.col(0) = v;

    Vec<Scalar> w(n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    auto converged = [&](int m, double last_beta) {
        Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), m);
        Eigen::VectorXd sub = m > 1 ? Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(beta.data(), m - 1)) : Eigen::VectorXd();
        tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
        const auto& theta = tri.eigenvalues();
        const auto& s = tri.eigenvectors();
        const int kk = std::min(k, m);
        rep.top.clear();
        rep.bottom.clear();
        rep.top_residuals.clear();
        rep.bottom_residuals.clear();
        bool ok = true;
        for (int i = 0; i < kk; ++i) {
            int hi = m - 1 - i, lo = i;
            double rt = std::abs(last_beta * s(m - 1, hi)), rb = std::abs(last_beta * s(m - 1, lo));
            rep.top.push_back(theta[hi]);
            rep.top_residuals.push_back(rt);
            rep.bottom.push_back(theta[lo]);
            rep.bottom_residuals.push_back(rb);
            ok = ok && rt <= tol * std::max(1.0, std::abs(theta[hi])) && rb <= tol * std::max(1.0, std::abs(theta[lo]));
        }
        return ok && kk == k;
    };

    for (int j = 0; j < cap; ++j) {
        op.apply(Vec<Scalar>(V.col(j)), w);
        op.project(w);
        double a = std::real(V.col(j).dot(w));
        alpha.push_back(a);
        w -= a * V.col(j);
        if (j > 0) w -= beta.back() * V.col(j - 1);
        for (int pass = 0; pass < 2; ++pass) {
            Vec<Scalar> h = V.leftCols(j + 1).adjoint() * w;
            w -= V.leftCols(j + 1) * h;
        }
        op.project(w);
        double b = w.norm();
        const int m = j + 1;
        rep.iterations = m;
        const bool invariant = b <= 1e-12 * std::max(1.0, std::abs(a));
        if (invariant || m == cap || (m >= 2 * k && m % 5 == 0)) {
            if (converged(m, invariant ? 0.0 : b)) {
                rep.norm = std::max(std::abs(rep.top.front()), std::abs(rep.bottom.front()));
                rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                return rep;
            }
            if (invariant || m == cap) break;
        }
        beta.push_back(b);
        V.col(j + 1) = w / b;
    }
    std::string worst = rep.top_residuals.empty() ? "n/a" : std::to_string(*std::max_element(rep.top_residuals.begin(), rep.top_residuals.end()));
    throw ConvergenceError("extreme_eigs: no convergence after " + std::to_string(rep.iterations) +
                           " iterations (top residual " + worst + ", tol " + std::to_string(tol) + ")");
}

}  // namespace

PermTuple sample_tuple(int N, int d, std::uint64_t seed, std::uint64_t trial) {
    if (N < 1 || d < 1) throw PreconditionError("sample_tuple requires N >= 1 and d >= 1");
    PermTuple t;
    t.N = N;
    t.seed = seed;
    t.trial = trial;
    for (int i = 0; i < d; ++i) {
        CounterRng rng(seed, trial, static_cast<std::uint64_t>(i));
        Permutation p = identity_permutation(N);
        shuffle_range(p, 0, rng);
        t.perms.push_back(std::move(p));
    }
    return t;
}

PermTuple sample_planted_tuple(int N, int d, int m, std::uint64_t seed, std::uint64_t trial) {
    if (m < 0 || m > d) throw PreconditionError("sample_planted_tuple requires 0 <= m <= d");
    PermTuple t = sample_tuple(N, d, seed, trial);
    for (int i = 0; i < m; ++i) {
        CounterRng rng(seed, trial, static_cast<std::uint64_t>(d + i));
        Permutation p = identity_permutation(N);
        shuffle_range(p, 1, rng);
        t.perms[static_cast<std::size_t>(i)] = std::move(p);
    }
    return t;
}

bool is_permutation(const Permutation& p) {
    std::vector<bool> seen(p.size(), false);
    for (auto v : p) {
        if (v < 0 || static_cast<std::size_t>(v) >= p.size() || seen[static_cast<std::size_t>(v)]) return false;
        seen[static_cast<std::size_t>(v)] = true;
    }
    return true;
}

int fixed_points(const Word& w, const PermTuple& t) {
    Permutation pi = word_permutation(w.letters(), t, all_inverses(t));
    int count = 0;
    for (std::size_t k = 0; k < pi.size(); ++k) count += pi[k] == static_cast<std::int32_t>(k);
    return count;
}

SparsePermOperator::SparsePermOperator(const NCPolynomial& P, const PermTuple& t)
    : N_(t.N), D_(P.dim()), self_adjoint_(P.is_self_adjoint()) {
    if (P.rank() > static_cast<int>(t.perms.size())) throw PreconditionError("operator rank exceeds sampled tuple");
    auto inverses = all_inverses(t);
    for (const auto& [w, a] : P.terms()) {
        Term term;
        for (int i = 0; i < D_; ++i) {
            for (int j = 0; j < D_; ++j) {
                const auto& z = a(i, j);
                term.coeff.emplace_back(to_double(z.re), to_double(z.im));
                real_ = real_ && z.im == 0;
            }
        }
        term.pi = word_permutation(w.letters(), t, inverses);
        terms_.push_back(std::move(term));
    }
}

void SparsePermOperator::apply(const Vector& x, Vector& y) const {
    y.setZero(size());
    for (const auto& term : terms_) {
        for (int i = 0; i < D_; ++i) {
            for (int j = 0; j < D_; ++j) {
                const auto c = term.coeff[static_cast<std::size_t>(i * D_ + j)];
                if (c == 0.0) continue;
                const std::complex<double>* src = x.data() + static_cast<std::ptrdiff_t>(j) * N_;
                std::complex<double>* dst = y.data() + static_cast<std::ptrdiff_t>(i) * N_;
                for (int k = 0; k < N_; ++k) dst[term.pi[static_cast<std::size_t>(k)]] += c * src[k];
            }
        }
    }
}

void SparsePermOperator::apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
    if (!real_) throw InternalError("real apply on an operator with complex coefficients");
    y.setZero(size());
    for (const auto& term : terms_) {
        for (int i = 0; i < D_; ++i) {
            for (int j = 0; j < D_; ++j) {
                const double c = term.coeff[static_cast<std::size_t>(i * D_ + j)].real();
                if (c == 0.0) continue;
                const double* src = x.data() + static_cast<std::ptrdiff_t>(j) * N_;
                double* dst = y.data() + static_cast<std::ptrdiff_t>(i) * N_;
                for (int k = 0; k < N_; ++k) dst[term.pi[static_cast<std::size_t>(k)]] += c * src[k];
            }
        }
    }
}

Eigen::MatrixXcd SparsePermOperator::dense() const {
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(size(), size());
    for (const auto& term : terms_) {
        for (int i = 0; i < D_; ++i) {
            for (int j = 0; j < D_; ++j) {
                const auto c = term.coeff[static_cast<std::size_t>(i * D_ + j)];
                for (int k = 0; k < N_; ++k) M(i * N_ + term.pi[static_cast<std::size_t>(k)], j * N_ + k) += c;
            }
        }
    }
    return M;
}

SpectralReport extreme_eigs(const SparsePermOperator& op, int k, double tol, int max_iter, std::uint64_t start_seed) {
    if (k < 1) throw PreconditionError("extreme_eigs requires k >= 1");
    if (!op.self_adjoint()) throw PreconditionError("extreme_eigs requires a self-adjoint polynomial");
    return op.is_real() ? lanczos<double>(op, k, tol, max_iter, start_seed)
                        : lanczos<std::complex<double>>(op, k, tol, max_iter, start_seed);
}

std::vector<double> dense_projected_eigenvalues(const SparsePermOperator& op) {
    const int N = op.N(), D = op.D();
    if (N < 2) return {};
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(Eigen::MatrixXd::Ones(N, 1));
    Eigen::MatrixXd Q = qr.householderQ();
    Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(D) * N, static_cast<Eigen::Index>(D) * (N - 1));
    for (int j = 0; j < D; ++j) B.block(j * N, j * (N - 1), N, N - 1) = Q.rightCols(N - 1).cast<std::complex<double>>();
    Eigen::MatrixXcd M = B.adjoint() * op.dense() * B;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(M, Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();
    return std::vector<double>(ev.data(), ev.data() + ev.size());
}

Interval wilson_interval(long successes, long trials, double z) {
    if (trials <= 0) throw PreconditionError("wilson_interval requires trials > 0");
    const double n = static_cast<double>(trials), p = static_cast<double>(successes) / n;
    const double denom = 1 + z * z / n;
    const double center = (p + z * z / (2 * n)) / denom;
    const double half = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom;
    return {successes == 0 ? 0.0 : std::max(0.0, center - half), successes == trials ? 1.0 : std::min(1.0, center + half)};
}

int workers_from_env() {
    const char* s = std::getenv("WORKERS");
    if (!s || !*s) return 1;
    char* end = nullptr;
    long v = std::strtol(s, &end, 10);
    if (*end != '\0' || v < 1) throw PreconditionError("WORKERS must be a positive integer");
    return static_cast<int>(v);
}

void parallel_trials(int trials, int workers, const std::function<void(int)>& body) {
    if (trials <= 0) return;
    workers = std::max(1, std::min(workers, trials));
    if (workers == 1) {
        for (int t = 0; t < trials; ++t) body(t);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (int t = next++; t < trials; t = next++) {
                try {
                    body(t);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

TailReport tail_experiment(int d, int N, double eps, int trials, std::uint64_t seed, int workers) {
    if (trials < 1) throw PreconditionError("tail_experiment requires trials >= 1");
    if (N < 2 || d < 1) throw PreconditionError("tail_experiment requires N >= 2 and d >= 1");
    TailReport rep;
    rep.d = d;
    rep.N = N;
    rep.eps = eps;
    rep.trials = trials;
    rep.seed = seed;
    rep.threshold = 2 * std::sqrt(2.0 * d - 1) + eps;
    rep.rows.resize(static_cast<std::size_t>(trials));
    const NCPolynomial A = NCPolynomial::adjacency(d);
    parallel_trials(trials, workers, [&](int t) {
        PermTuple tuple = sample_tuple(N, d, seed, static_cast<std::uint64_t>(t));
        SparsePermOperator op(A, tuple);
        SpectralReport s = extreme_eigs(op, 1, 1e-8, 1000, splitmix64(seed) ^ static_cast<std::uint64_t>(t));
        rep.rows[static_cast<std::size_t>(t)] = {t, s.top[0], s.bottom[0], s.norm, s.iterations};
    });
    std::vector<double> l2;
    for (const auto& r : rep.rows) {
        l2.push_back(r.lambda2);
        rep.exceed += r.lambda2 >= rep.threshold;
        rep.norm_exceed += r.norm >= rep.threshold;
    }
    rep.fraction = static_cast<double>(rep.exceed) / trials;
    rep.norm_fraction = static_cast<double>(rep.norm_exceed) / trials;
    rep.ci = wilson_interval(rep.exceed, trials);
    rep.median = quantile(l2, 0.5);
    rep.q05 = quantile(l2, 0.05);
    rep.q95 = quantile(l2, 0.95);
    return rep;
}

double staircase_rho(int d, int m) {
    if (m < 1 || d < 1) throw PreconditionError("staircase_rho requires d, m >= 1");
    return (2.0 * m - 1) + (2.0 * d - 1) / (2.0 * m - 1);
}

StaircaseReport staircase_experiment(int d, int N, int m, int trials, std::uint64_t seed, int workers, double window) {
    if (m < 1 || m > d) throw PreconditionError("staircase_experiment requires 1 <= m <= d");
    if (!(2.0 * m - 1 > std::sqrt(2.0 * d - 1))) {
        throw PreconditionError("staircase_experiment: 2m-1 <= sqrt(2d-1), so rho_m = 2 sqrt(2d-1) lies in the bulk and no outlier separates");
    }
    if (trials < 1 || N < 2) throw PreconditionError("staircase_experiment requires trials >= 1 and N >= 2");
    StaircaseReport rep;
    rep.d = d;
    rep.N = N;
    rep.m = m;
    rep.trials = trials;
    rep.seed = seed;
    rep.window = window;
    rep.rho_m = staircase_rho(d, m);
    rep.degenerate = std::abs(rep.rho_m - 2.0 * d) < 1e-12;
    rep.planted_top.resize(static_cast<std::size_t>(trials));
    rep.control_top.resize(static_cast<std::size_t>(trials));
    const NCPolynomial A = NCPolynomial::adjacency(d);
    const std::uint64_t control_seed = splitmix64(seed ^ 0x636f6e74726f6cULL);
    parallel_trials(trials, workers, [&](int t) {
        const auto tt = static_cast<std::uint64_t>(t);
        SparsePermOperator planted(A, sample_planted_tuple(N, d, m, seed, tt));
        rep.planted_top[tt] = extreme_eigs(planted, 1, 1e-8, 1000, splitmix64(seed) ^ tt).top[0];
        SparsePermOperator control(A, sample_tuple(N, d, control_seed, tt));
        rep.control_top[tt] = extreme_eigs(control, 1, 1e-8, 1000, splitmix64(control_seed) ^ tt).top[0];
    });
    for (int t = 0; t < trials; ++t) {
        rep.planted_hits += std::abs(rep.planted_top[static_cast<std::size_t>(t)] - rep.rho_m) <= window;
        rep.control_hits += rep.control_top[static_cast<std::size_t>(t)] > rep.rho_m - window;
    }
    return rep;
}

WeakProbeReport weak_convergence_probe(ExpectationEngine& engine, const NCPolynomial& P, const ScalarPolynomial& h,
                                       const std::vector<int>& N_grid, int trials, std::uint64_t seed, int workers) {
    if (N_grid.empty()) throw PreconditionError("weak_convergence_probe requires a nonempty N grid");
    if (trials < 0) throw PreconditionError("weak_convergence_probe requires trials >= 0");
    WeakProbeReport rep;
    rep.psi = engine.polynomial_trace_expectation(P, h);
    auto nu = taylor_nu(rep.psi, 1);
    rep.nu0 = nu[0];
    rep.nu1 = nu[1];
    const auto expansion = trials > 0 ? trace_word_expansion(P, h, engine.budget()) : std::vector<WordTerm>{};
    std::vector<double> lx, ly;
    rep.residual_identically_zero = true;
    for (int N : N_grid) {
        if (N < 1) throw PreconditionError("weak_convergence_probe: N must be positive");
        WeakProbeRow row;
        row.N = N;
        const Rational x(1, N);
        row.exact = rep.psi.eval(x);
        row.residual = abs(row.exact - rep.nu0 - rep.nu1 * x);
        if (row.residual != 0) rep.residual_identically_zero = false;
        lx.push_back(std::log(static_cast<double>(N)));
        ly.push_back(row.residual == 0 ? -std::numeric_limits<double>::infinity() : std::log(to_double(row.residual)));
        if (trials > 0) {
            std::vector<double> samples(static_cast<std::size_t>(trials));
            const std::uint64_t nseed = splitmix64(seed ^ static_cast<std::uint64_t>(N));
            parallel_trials(trials, workers, [&](int t) {
                PermTuple tuple = sample_tuple(N, P.rank(), nseed, static_cast<std::uint64_t>(t));
                auto inverses = all_inverses(tuple);
                double acc = 0;
                for (const auto& term : expansion) {
                    Permutation pi = word_permutation(term.word.letters(), tuple, inverses);
                    int fix = 0;
                    for (std::size_t k = 0; k < pi.size(); ++k) fix += pi[k] == static_cast<std::int32_t>(k);
                    acc += to_double(term.coeff.re) * (fix - 1) / N;
                }
                samples[static_cast<std::size_t>(t)] = acc;
            });
            double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / trials;
            double var = 0;
            for (double s : samples) var += (s - mean) * (s - mean);
            var = trials > 1 ? var / (trials - 1) : 0;
            row.mc_mean = mean;
            row.mc_trials = trials;
            row.mc_stderr = std::sqrt(var / trials);
            row.z = row.mc_stderr > 0 ? std::abs(mean - to_double(row.exact)) / row.mc_stderr : 0;
        }
        rep.rows.push_back(row);
    }
    const double n = static_cast<double>(lx.size());
    if (rep.residual_identically_zero || n < 2) {
        rep.slope = std::numeric_limits<double>::quiet_NaN();
    } else {
        double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n, my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
        double sxy = 0, sxx = 0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            sxy += (lx[i] - mx) * (ly[i] - my);
            sxx += (lx[i] - mx) * (lx[i] - mx);
        }
        rep.slope = sxy / sxx;
    }
    return rep;
}

}  // namespace permtrace
