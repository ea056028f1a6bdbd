#include "permtrace/approximation.hpp"

#include "permtrace/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace permtrace {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<long double> to_long_doubles(const QPoly& h) {
    std::vector<long double> out;
    for (const auto& c : h.coeffs()) {
        out.push_back(static_cast<long double>(c.get_num().get_d()) / static_cast<long double>(c.get_den().get_d()));
    }
    return out;
}

double horner(const std::vector<long double>& c, double x) {
    long double acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return static_cast<double>(acc);
}

double golden_max(const std::function<double(double)>& g, double lo, double hi, double& arg) {
    const double r = (std::sqrt(5.0) - 1) / 2;
    double a = lo, b = hi;
    double x1 = b - r * (b - a), x2 = a + r * (b - a);
    double f1 = g(x1), f2 = g(x2);
    for (int it = 0; it < 80 && b - a > 1e-15 * (1 + std::abs(a) + std::abs(b)); ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = g(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = g(x1);
        }
    }
    arg = f1 > f2 ? x1 : x2;
    return std::max(f1, f2);
}

SupNorm refine_on_grid(const std::function<double(double)>& absf, std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::vector<double> ys(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) ys[i] = absf(xs[i]);
    SupNorm best;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (ys[i] > best.value || i == 0) best = {ys[i], xs[i]};
    }
    for (std::size_t i = 0; i < xs.size(); ++i) {
        bool left = i == 0 || ys[i] >= ys[i - 1];
        bool right = i + 1 == xs.size() || ys[i] >= ys[i + 1];
        if (!left || !right) continue;
        double lo = xs[i == 0 ? 0 : i - 1], hi = xs[i + 1 == xs.size() ? i : i + 1];
        if (hi <= lo) continue;
        double arg = xs[i];
        double v = golden_max(absf, lo, hi, arg);
        if (v > best.value) best = {v, arg};
    }
    return best;
}

std::vector<double> chebyshev_grid(double lo, double hi, int n) {
    std::vector<double> xs;
    const double mid = (lo + hi) / 2, half = (hi - lo) / 2;
    for (int i = 0; i <= n; ++i) xs.push_back(mid + half * std::cos(kPi * i / n));
    xs.front() = hi;
    xs.back() = lo;
    return xs;
}

// Gauss-Legendre nodes and weights on [0, 1].
struct GaussRule {
    std::vector<double> x, w;
};

GaussRule gauss_legendre(int n) {
    GaussRule rule;
    for (int i = 1; i <= n; ++i) {
        double z = std::cos(kPi * (i - 0.25) / (n + 0.5));
        double dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1, p1 = z;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1);
            double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        rule.x.push_back((1 - z) / 2);
        rule.w.push_back(1.0 / ((1 - z * z) * dp * dp));
    }
    return rule;
}

const GaussRule& gauss10() {
    static const GaussRule rule = gauss_legendre(10);
    return rule;
}

double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth) {
    double m = (a + b) / 2;
    double lm = (a + m) / 2, rm = (m + b) / 2;
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6 * (fa + 4 * flm + fm);
    double right = (b - m) / 6 * (fm + 4 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15 * tol) return left + right + delta / 15;
    return simpson_rec(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

double adaptive_simpson_breaks(const std::function<double(double)>& f, std::vector<double> breaks, double tol,
                               int max_depth) {
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    // Coarse pass for the scale of the relative tolerance.
    std::vector<double> nodes;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        for (int k = 0; k < 16; ++k) nodes.push_back(breaks[i] + (breaks[i + 1] - breaks[i]) * k / 16.0);
    }
    nodes.push_back(breaks.back());
    double scale = 0;
    std::vector<double> fv(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        fv[i] = f(nodes[i]);
        if (i > 0) scale += std::abs(fv[i] + fv[i - 1]) / 2 * (nodes[i] - nodes[i - 1]);
    }
    const double abs_tol = tol * std::max(scale, std::numeric_limits<double>::min());
    const double total_len = breaks.back() - breaks.front();
    double total = 0;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        double a = nodes[i], b = nodes[i + 1];
        if (b <= a) continue;
        double fm = f((a + b) / 2);
        double whole = (b - a) / 6 * (fv[i] + 4 * fm + fv[i + 1]);
        total += simpson_rec(f, a, b, fv[i], fm, fv[i + 1], whole, abs_tol * (b - a) / total_len, max_depth);
    }
    return total;
}

double lp_norm_breaks(const std::function<double(double)>& f, std::vector<double> breaks, double beta, double tol) {
    if (std::isinf(beta)) {
        std::vector<double> xs;
        std::sort(breaks.begin(), breaks.end());
        for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
            for (int k = 0; k <= 256; ++k) xs.push_back(breaks[i] + (breaks[i + 1] - breaks[i]) * k / 256.0);
        }
        return refine_on_grid([&](double x) { return std::abs(f(x)); }, xs).value;
    }
    double integral = adaptive_simpson_breaks([&](double x) { return std::pow(std::abs(f(x)), beta); }, breaks, tol, 40);
    return std::pow(integral, 1.0 / beta);
}

double double_factorial_odd(int m) {
    double r = 1;
    for (int k = 2 * m - 1; k > 1; k -= 2) r *= k;
    return r;
}

double binomial(int n, int k) {
    double r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

InequalityReport make_report(double lhs, double rhs) {
    InequalityReport r;
    r.lhs = lhs;
    r.rhs = rhs;
    r.ratio = rhs > 0 ? lhs / rhs : (lhs > 0 ? std::numeric_limits<double>::infinity() : 0.0);
    r.holds = lhs <= rhs * (1 + 1e-9) + 1e-300;
    return r;
}

}  // namespace

SupNorm sup_norm(const QPoly& h, double lo, double hi) {
    if (hi < lo) throw PreconditionError("sup_norm: empty interval");
    auto c = to_long_doubles(h);
    const int q = std::max(1, h.degree());
    auto absf = [&](double x) { return std::abs(horner(c, x)); };
    if (hi == lo) return {absf(lo), lo};
    return refine_on_grid(absf, chebyshev_grid(lo, hi, 8 * q));
}

SupNorm sup_norm(const std::function<double(double)>& f, double lo, double hi, int grid) {
    if (hi < lo) throw PreconditionError("sup_norm: empty interval");
    auto absf = [&](double x) { return std::abs(f(x)); };
    if (hi == lo) return {absf(lo), lo};
    return refine_on_grid(absf, chebyshev_grid(lo, hi, std::max(grid, 2)));
}

double ChebyshevExpansion::eval(double x) const {
    const double t = x / K;
    double b1 = 0, b2 = 0;
    for (std::size_t j = coeffs.size(); j-- > 1;) {
        double b0 = 2 * t * b1 - b2 + coeffs[j];
        b2 = b1;
        b1 = b0;
    }
    return t * b1 - b2 + (coeffs.empty() ? 0.0 : coeffs[0]);
}

namespace {

// Horner in the Chebyshev basis: acc <- (K t) acc + c_k, with
// t T_0 = T_1 and t T_j = (T_{j+1} + T_{j-1}) / 2.
template <class Scalar>
std::vector<Scalar> monomial_to_chebyshev(const std::vector<Scalar>& c, const Scalar& K) {
    if (c.empty()) return {Scalar(0)};
    std::vector<Scalar> acc{c.back()};
    for (std::size_t k = c.size() - 1; k-- > 0;) {
        std::vector<Scalar> next(acc.size() + 1, Scalar(0));
        for (std::size_t j = 0; j < acc.size(); ++j) {
            Scalar v = acc[j] * K;
            if (j == 0) {
                next[1] += v;
            } else {
                next[j + 1] += v / 2;
                next[j - 1] += v / 2;
            }
        }
        next[0] += c[k];
        acc = std::move(next);
    }
    while (acc.size() > 1 && acc.back() == Scalar(0)) acc.pop_back();
    return acc;
}

}  // namespace

ChebyshevExpansion cheb_expand(const QPoly& h, double K) {
    if (!(K > 0)) throw PreconditionError("cheb_expand requires K > 0");
    ChebyshevExpansion e;
    e.K = K;
    std::vector<long double> c = to_long_doubles(h);
    auto a = monomial_to_chebyshev<long double>(c, K);
    for (auto v : a) e.coeffs.push_back(static_cast<double>(v));
    e.coeffs.resize(std::max<std::size_t>(e.coeffs.size(), static_cast<std::size_t>(std::max(h.degree(), 0)) + 1), 0.0);
    return e;
}

std::vector<Rational> cheb_expand_exact(const QPoly& h, const Rational& K) {
    if (K <= 0) throw PreconditionError("cheb_expand requires K > 0");
    std::vector<Rational> c(h.coeffs().begin(), h.coeffs().end());
    auto a = monomial_to_chebyshev<Rational>(c, K);
    a.resize(std::max<std::size_t>(a.size(), static_cast<std::size_t>(std::max(h.degree(), 0)) + 1), Rational(0));
    return a;
}

QPoly chebyshev_polynomial(int j, const Rational& K) {
    if (j < 0) throw PreconditionError("chebyshev_polynomial requires j >= 0");
    if (K <= 0) throw PreconditionError("chebyshev_polynomial requires K > 0");
    const QPoly t = QPoly::monomial(1, Rational(1 / K));
    QPoly prev = QPoly::constant(1), cur = t;
    if (j == 0) return prev;
    for (int k = 1; k < j; ++k) {
        QPoly next = QPoly(t * cur) * Rational(2) - prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

QPoly cheb_reconstruct_exact(const std::vector<Rational>& coeffs, const Rational& K) {
    QPoly out;
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
        if (coeffs[j] != 0) out += chebyshev_polynomial(static_cast<int>(j), K) * coeffs[j];
    }
    return out;
}

QPoly mapped_chebyshev(int q, const Rational& a) {
    if (a <= 0) throw PreconditionError("mapped_chebyshev requires a > 0");
    // T_q(s) with s = 2x/a - 1
    const QPoly s = QPoly::monomial(1, Rational(2 / a)) - QPoly::constant(1);
    QPoly prev = QPoly::constant(1), cur = s;
    if (q == 0) return prev;
    for (int k = 1; k < q; ++k) {
        QPoly next = QPoly(s * cur) * Rational(2) - prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

InequalityReport markov_bound_check(const QPoly& h, double a, int m) {
    if (!(a > 0)) throw PreconditionError("markov_bound_check requires a > 0");
    if (m < 1) throw PreconditionError("markov_bound_check requires m >= 1");
    const int q = std::max(h.degree(), 0);
    QPoly dh = h;
    for (int k = 0; k < m; ++k) dh = dh.derivative();
    double lhs = sup_norm(dh, 0, a).value;
    double rhs = std::pow(2.0 * q * q / a, m) / double_factorial_odd(m) * sup_norm(h, 0, a).value;
    return make_report(lhs, rhs);
}

InequalityReport interpolation_check(const QPoly& h, double a, std::vector<double> points) {
    if (!(a > 0)) throw PreconditionError("interpolation_check requires a > 0");
    if (points.empty()) throw PreconditionError("interpolation_check: empty point set");
    const int q = std::max(h.degree(), 1);
    const double r = a / (4.0 * q * q);
    std::sort(points.begin(), points.end());
    if (points.front() < 0 || points.back() > a) throw PreconditionError("interpolation_check: points outside [0, a]");
    bool covered = points.front() <= r * (1 + 1e-12) && points.back() >= a - r * (1 + 1e-12);
    for (std::size_t i = 0; covered && i + 1 < points.size(); ++i) covered = points[i + 1] - points[i] <= 2 * r * (1 + 1e-12);
    if (!covered) {
        throw PreconditionError("interpolation_check: point set mesh exceeds a/(4q^2) = " + std::to_string(r));
    }
    auto c = to_long_doubles(h);
    double on_set = 0;
    for (double x : points) on_set = std::max(on_set, std::abs(horner(c, x)));
    return make_report(sup_norm(h, 0, a).value, 2 * on_set);
}

RationalMarkovReport rational_markov_check(const RationalFunctionQ& r_in, double a, int m) {
    if (!(a > 0)) throw PreconditionError("rational_markov_check requires a > 0");
    if (m < 1) throw PreconditionError("rational_markov_check requires m >= 1");
    RationalFunctionQ r = r_in.reduced();
    for (const auto& [c, mult] : r.denominator_factors()) {
        if (c > 0 && to_double(Rational(1 / c)) <= a) {
            throw PreconditionError("rational_markov_check: pole at x = " + to_string(Rational(1 / c)) + " in [0, a]");
        }
    }
    const QPoly g = r.denominator();
    auto gc = to_long_doubles(g);
    const int grid = 64 * std::max(1, std::max(r.numerator().degree(), g.degree()));
    double gmax = sup_norm(g, 0, a).value;
    double inv_gmin = sup_norm([&](double x) { return 1.0 / horner(gc, x); }, 0, a, grid).value;

    RationalMarkovReport rep;
    rep.c = gmax * inv_gmin;
    rep.q = std::max(std::max(r.numerator().degree(), g.degree()), 0);
    double mfact = std::tgamma(m + 1.0);
    auto deriv = [&](double x) { return r.taylor_at(x, m)[static_cast<std::size_t>(m)] * mfact; };
    double lhs = sup_norm(deriv, 0, a, grid).value;
    double norm_r = sup_norm([&](double x) { return r.eval(x); }, 0, a, grid).value;
    double rhs = mfact * std::pow(5.0 * rep.c * rep.q * rep.q / a, m) * norm_r;
    static_cast<InequalityReport&>(rep) = make_report(lhs, rhs);
    return rep;
}

double beta_star(double beta) {
    if (!(beta > 1)) throw PreconditionError("beta must exceed 1");
    if (std::isinf(beta)) return 1;
    return beta / (beta - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double lo, double hi, double tol, int max_depth) {
    if (hi <= lo) return 0;
    return adaptive_simpson_breaks(f, {lo, hi}, tol, max_depth);
}

double lp_norm(const std::function<double(double)>& f, double lo, double hi, double beta, double tol) {
    if (!(beta >= 1)) throw PreconditionError("lp_norm requires beta >= 1");
    return lp_norm_breaks(f, {lo, hi}, beta, tol);
}

double cosine_series_derivative(const ChebyshevExpansion& e, int k, double theta) {
    double acc = 0;
    for (std::size_t j = 1; j < e.coeffs.size(); ++j) {
        double jj = static_cast<double>(j);
        acc += e.coeffs[j] * std::pow(jj, k) * std::cos(jj * theta + k * kPi / 2);
    }
    if (k == 0 && !e.coeffs.empty()) acc += e.coeffs[0];
    return acc;
}

ZygmundReport zygmund_sum(const ChebyshevExpansion& e, int m, double beta) {
    if (m < 0) throw PreconditionError("zygmund_sum requires m >= 0");
    ZygmundReport rep;
    rep.beta = beta;
    for (std::size_t j = 1; j < e.coeffs.size(); ++j) rep.lhs += std::pow(static_cast<double>(j), m) * std::abs(e.coeffs[j]);
    const int q = static_cast<int>(e.coeffs.size());
    std::vector<double> breaks;
    for (int i = 0; i <= 4 * q + 4; ++i) breaks.push_back(2 * kPi * i / (4 * q + 4));
    double norm = lp_norm_breaks([&](double t) { return cosine_series_derivative(e, m + 1, t); }, breaks, beta, 1e-10);
    rep.rhs = beta_star(beta) * norm;
    rep.constant = rep.rhs > 0 ? rep.lhs / rep.rhs : 0;
    return rep;
}

TestFunction::TestFunction(double rho, double eps, double K, int m)
    : rho_(rho), eps_(eps), K_(K), m_(m) {
    if (!(rho >= 0) || !(eps > 0) || !(K > 0)) throw PreconditionError("test function requires rho >= 0, eps > 0, K > 0");
    if (!(rho + eps < K)) throw PreconditionError("test function requires rho + eps < K");
    if (m < 1) throw PreconditionError("test function requires m >= 1");
    bump_power_ = m + 1;
    // int_0^1 (u(1-u))^k du = (k!)^2 / (2k+1)!
    bump_norm_ = std::exp(2 * std::lgamma(bump_power_ + 1.0) - std::lgamma(2.0 * bump_power_ + 2));
    phi_ = std::asin((rho + eps / 2) / K);
    delta_ = std::asin((rho + eps) / K) - phi_;
    box_ = delta_ / (2.0 * m);
}

double TestFunction::bump(double u) const {
    if (u <= 0 || u >= 1) return 0;
    return std::pow(u * (1 - u), bump_power_) / bump_norm_;
}

// CDF of a sum of m independent U[0,1], as sum_j N_{m+1}(t - j) with
// cardinal B-splines from the Cox-de Boor recursion.
double TestFunction::cdf_boxes(double t) const {
    if (t <= 0) return 0;
    if (t >= m_) return 1;
    const int order = m_ + 1;
    const int top = static_cast<int>(std::floor(t));
    std::vector<double> v(static_cast<std::size_t>(top + order + 2), 0.0);
    v[static_cast<std::size_t>(top)] = 1;  // N_1(t - j) = 1 iff j = floor(t)
    for (int k = 2; k <= order; ++k) {
        for (int j = 0; j <= top; ++j) {
            double s = t - j;
            v[static_cast<std::size_t>(j)] = (s * v[static_cast<std::size_t>(j)] + (k - s) * v[static_cast<std::size_t>(j + 1)]) / (k - 1);
        }
    }
    double acc = 0;
    for (int j = 0; j <= top; ++j) acc += v[static_cast<std::size_t>(j)];
    return std::clamp(acc, 0.0, 1.0);
}

double TestFunction::step(double y) const {
    if (y <= 0) return 0;
    if (y >= delta_) return 1;
    // int_0^1 F(u) G((y - u delta/2) / box) du, split where the argument of G is an integer.
    std::vector<double> cuts{0.0, 1.0};
    for (int j = 0; j <= m_; ++j) {
        double u = (y - j * box_) * 2 / delta_;
        if (u > 0 && u < 1) cuts.push_back(u);
    }
    std::sort(cuts.begin(), cuts.end());
    const auto& rule = gauss10();
    double acc = 0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = cuts[i], len = cuts[i + 1] - cuts[i];
        if (len <= 0) continue;
        for (int p = 0; p < 4; ++p) {
            const double plo = lo + len * p / 4, plen = len / 4;
            for (std::size_t k = 0; k < rule.x.size(); ++k) {
                double u = plo + plen * rule.x[k];
                acc += plen * rule.w[k] * bump(u) * cdf_boxes((y - u * delta_ / 2) / box_);
            }
        }
    }
    return std::clamp(acc, 0.0, 1.0);
}

double TestFunction::step_derivative(int k, double y) const {
    if (k == 1) {
        // (F_{delta/2} * H^{*m})(y) = int_0^1 F(u) g((y - u delta/2)/box) / box du, g the Irwin-Hall density.
        if (y <= 0 || y >= delta_) return 0;
        auto density = [&](double t) {
            if (t <= 0 || t >= m_) return 0.0;
            if (m_ == 1) return 1.0;
            // Irwin-Hall density: the cardinal B-spline N_m.
            std::vector<double> v(static_cast<std::size_t>(m_ + 2), 0.0);
            const int top = static_cast<int>(std::floor(t));
            v[static_cast<std::size_t>(top)] = 1;
            for (int ord = 2; ord <= m_; ++ord) {
                for (int j = 0; j <= top; ++j) {
                    double s = t - j;
                    v[static_cast<std::size_t>(j)] = (s * v[static_cast<std::size_t>(j)] + (ord - s) * v[static_cast<std::size_t>(j + 1)]) / (ord - 1);
                }
            }
            return v[0];
        };
        std::vector<double> cuts{0.0, 1.0};
        for (int j = 0; j <= m_; ++j) {
            double u = (y - j * box_) * 2 / delta_;
            if (u > 0 && u < 1) cuts.push_back(u);
        }
        std::sort(cuts.begin(), cuts.end());
        const auto& rule = gauss10();
        double acc = 0;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            const double lo = cuts[i], len = cuts[i + 1] - cuts[i];
            for (int p = 0; p < 4; ++p) {
                const double plo = lo + len * p / 4, plen = len / 4;
                for (std::size_t q = 0; q < rule.x.size(); ++q) {
                    double u = plo + plen * rule.x[q];
                    acc += plen * rule.w[q] * bump(u) * density((y - u * delta_ / 2) / box_) / box_;
                }
            }
        }
        return acc;
    }
    if (k == m_ + 1) {
        // box_^{-m} sum_i C(m, i) (-1)^i F_{delta/2}(y - i box_)
        double acc = 0;
        for (int i = 0; i <= m_; ++i) {
            double u = (y - i * box_) * 2 / delta_;
            double term = binomial(m_, i) * bump(u) * 2 / delta_;
            acc += i % 2 == 0 ? term : -term;
        }
        return acc / std::pow(box_, m_);
    }
    throw PreconditionError("step_derivative supports k = 1 and k = m + 1");
}

double TestFunction::chi(double x) const {
    if (std::abs(x) >= K_) return 1;
    const double s = std::asin(x / K_);
    return step(s - phi_) + step(-s - phi_);
}

double TestFunction::f(double theta) const { return chi(K_ * std::cos(theta)); }

double TestFunction::f_top_derivative(double theta) const {
    theta = std::fmod(theta, 2 * kPi);
    if (theta < 0) theta += 2 * kPi;
    const int k = m_ + 1;
    double sign = 1;
    if (theta > kPi) {
        theta = 2 * kPi - theta;
        sign = k % 2 == 0 ? 1 : -1;
    }
    const double first = step_derivative(k, kPi / 2 - theta - phi_) * (k % 2 == 0 ? 1 : -1);
    const double second = step_derivative(k, theta - kPi / 2 - phi_);
    return sign * (first + second);
}

double TestFunction::top_derivative_norm(double beta) const {
    std::vector<double> breaks{0, kPi, 2 * kPi};
    for (int i = 0; i <= m_; ++i) {
        for (double y : {i * box_, i * box_ + delta_ / 2}) {
            if (y > delta_) continue;
            for (double t : {kPi / 2 - phi_ - y, kPi / 2 + phi_ + y}) {
                breaks.push_back(t);
                breaks.push_back(2 * kPi - t);
            }
        }
    }
    return lp_norm_breaks([this](double t) { return f_top_derivative(t); }, breaks, beta, 1e-8);
}

double TestFunction::fitted_constant() const {
    const double sup = top_derivative_norm(std::numeric_limits<double>::infinity());
    return std::pow(sup / std::pow(K_ / eps_, m_ + 1), 1.0 / m_) / m_;
}

TailCertificate friedman_certificate(int d, double eps, double N, double universal_constant) {
    if (d < 1) throw PreconditionError("friedman_certificate requires d >= 1");
    const double rho = 2 * std::sqrt(2.0 * d - 1);
    const double K = 2.0 * d;
    if (!(eps > 0) || !(eps < K - rho)) {
        throw PreconditionError("friedman_certificate requires 0 < eps < 2d - 2 sqrt(2d-1) = " + std::to_string(K - rho));
    }
    if (!(N >= 1)) throw PreconditionError("friedman_certificate requires N >= 1");
    TailCertificate c;
    c.d = d;
    c.eps = eps;
    c.N = N;
    c.m = 8;
    c.K = K;
    c.rho = rho;
    c.beta_star = 1 + std::log(2.0 * d / eps);
    c.beta = c.beta_star / (c.beta_star - 1);
    TestFunction chi(rho, eps, K, c.m);
    c.delta = chi.delta();
    c.derivative_norm = chi.top_derivative_norm(c.beta);
    c.master_constant = std::pow(4 * (1 + std::log(static_cast<double>(d))), 8);
    c.universal_constant = universal_constant;
    c.trace_bound = universal_constant * c.master_constant * c.beta_star * c.derivative_norm / (N * N);
    c.bound = N * c.trace_bound;
    return c;
}

}  // namespace permtrace
