#pragma once

// Univariate toolkit: Chebyshev expansions on [-K, K], Markov-type
// inequality checks, Zygmund coefficient sums, the smooth 0/1 test function
// used to turn trace bounds into norm tail bounds, and tail certificates.

#include "permtrace/polynomial.hpp"
#include "permtrace/rational.hpp"

#include <functional>
#include <vector>

namespace permtrace {

struct SupNorm {
    double value = 0;
    double argmax = 0;
};

/// sup |h| on [lo, hi]: Chebyshev grid of 8q+1 points plus endpoints, then
/// golden-section refinement around every local maximum of the grid. The
/// result never exceeds the true supremum.
SupNorm sup_norm(const QPoly& h, double lo, double hi);
SupNorm sup_norm(const std::function<double(double)>& f, double lo, double hi, int grid);

/// h(x) = sum_j a_j T_j(x / K).
struct ChebyshevExpansion {
    double K = 1;
    std::vector<double> coeffs;

    /// Clenshaw evaluation.
    double eval(double x) const;
};

ChebyshevExpansion cheb_expand(const QPoly& h, double K);
/// Exact change of basis for rational K.
std::vector<Rational> cheb_expand_exact(const QPoly& h, const Rational& K);
/// Inverse of cheb_expand_exact.
QPoly cheb_reconstruct_exact(const std::vector<Rational>& coeffs, const Rational& K);
/// T_j(x / K) as a polynomial in x.
QPoly chebyshev_polynomial(int j, const Rational& K = 1);
/// T_q mapped to [0, a]: T_q(2x/a - 1).
QPoly mapped_chebyshev(int q, const Rational& a);

struct InequalityReport {
    double lhs = 0;
    double rhs = 0;
    /// lhs / rhs (0 when both vanish).
    double ratio = 0;
    bool holds = true;
};

/// ||h^(m)||_[0,a] <= (2q^2/a)^m / (2m-1)!! ||h||_[0,a] with q = deg h.
InequalityReport markov_bound_check(const QPoly& h, double a, int m);

/// ||h||_[0,a] <= 2 max_I |h|. Throws PreconditionError unless every point of
/// [0, a] lies within a / (4 q^2) of I.
InequalityReport interpolation_check(const QPoly& h, double a, std::vector<double> points);

struct RationalMarkovReport : InequalityReport {
    /// sup_{x,y in [0,a]} |g(x) / g(y)|
    double c = 1;
    int q = 0;
};

/// ||r^(m)||_[0,a] <= m! (5 c q^2 / a)^m ||r||_[0,a], q = max(deg f, deg g).
/// Throws PreconditionError if the denominator vanishes on [0, a].
RationalMarkovReport rational_markov_check(const RationalFunctionQ& r, double a, int m);

/// 1/beta_* = 1 - 1/beta; beta = infinity gives beta_* = 1.
double beta_star(double beta);

/// L^beta[lo, hi] norm by adaptive Simpson (relative tolerance tol);
/// beta = infinity gives a refined sup.
double lp_norm(const std::function<double(double)>& f, double lo, double hi, double beta, double tol = 1e-8);

/// Adaptive Simpson quadrature with relative tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-8,
                        int max_depth = 40);

struct ZygmundReport {
    /// sum_{j>=1} j^m |a_j|
    double lhs = 0;
    /// beta_* ||f^(m+1)||_{L^beta[0, 2 pi]}, f(theta) = h(K cos theta)
    double rhs = 0;
    /// lhs / rhs: the empirical value of the unspecified absolute constant.
    double constant = 0;
    double beta = 0;
};

/// f^(k)(theta) for f(theta) = sum_j a_j cos(j theta).
double cosine_series_derivative(const ChebyshevExpansion& e, int k, double theta);
ZygmundReport zygmund_sum(const ChebyshevExpansion& e, int m, double beta);

/// Smooth chi with chi = 0 on [-rho - eps/2, rho + eps/2], chi = 1 outside
/// [-rho - eps, rho + eps], nondecreasing in |x|. Built from a normalized
/// (u(1-u))^k bump convolved with m box kernels and composed with arcsin.
class TestFunction {
public:
    TestFunction(double rho, double eps, double K, int m);

    double rho() const { return rho_; }
    double eps() const { return eps_; }
    double K() const { return K_; }
    int m() const { return m_; }
    double delta() const { return delta_; }
    double phi() const { return phi_; }

    /// The one-sided step: 0 for y <= 0, 1 for y >= delta.
    double step(double y) const;
    /// step^(k)(y) for k = 1 (density) and k = m + 1 (closed form).
    double step_derivative(int k, double y) const;

    double chi(double x) const;
    /// f(theta) = chi(K cos theta)
    double f(double theta) const;
    /// f^(m+1)(theta), exact up to rounding.
    double f_top_derivative(double theta) const;

    /// ||f^(m+1)||_{L^beta[0, 2 pi]}
    double top_derivative_norm(double beta) const;
    /// C with ||f^(m+1)||_inf = (C m)^m (K / eps)^(m+1).
    double fitted_constant() const;

    /// Bump F on [0, 1] with unit mass.
    double bump(double u) const;

private:
    double cdf_boxes(double t) const;

    double rho_, eps_, K_;
    int m_;
    int bump_power_;
    double bump_norm_;
    double phi_, delta_, box_;
};

struct TailCertificate {
    int d = 2;
    double eps = 0;
    double N = 0;
    int m = 8;
    double K = 0;
    double rho = 0;
    double beta_star = 0;
    double beta = 0;
    double delta = 0;
    double derivative_norm = 0;
    double master_constant = 0;
    double universal_constant = 1;
    double trace_bound = 0;
    /// Bound on P[||A^N|| >= 2 sqrt(2d-1) + eps].
    double bound = 0;
    bool up_to_universal_constant = true;
};

/// Assembles C (4 (1 + log d))^8 / N^2 beta_* ||f^(9)||_{L^beta} for the
/// trace and multiplies by N. Throws PreconditionError unless
/// 0 < eps < 2d - 2 sqrt(2d-1).
TailCertificate friedman_certificate(int d, double eps, double N, double universal_constant = 1);

}  // namespace permtrace
