#pragma once

// Univariate polynomials over Q and rational functions whose denominators are
// products of linear factors (1 - c x). Expected traces of words live here,
// with x standing for 1/N.

#include "permtrace/rational.hpp"

#include <map>
#include <span>
#include <string>
#include <vector>

namespace permtrace {

/// Dense polynomial with rational coefficients, ascending powers. The zero
/// polynomial has no stored coefficients and degree -1.
class QPoly {
public:
    QPoly() = default;
    explicit QPoly(std::vector<Rational> ascending);

    static QPoly constant(const Rational& c);
    static QPoly monomial(int k, const Rational& c = 1);
    /// 1 - c x
    static QPoly one_minus(const Rational& c);

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    std::span<const Rational> coeffs() const { return coeffs_; }
    Rational coeff(int k) const;

    Rational eval(const Rational& x) const;
    double eval(double x) const;
    QPoly derivative() const;

    /// Quotient by (1 - c x) when it divides exactly, otherwise an empty optional
    /// signalled by returning false.
    bool try_divide_one_minus(const Rational& c, QPoly& quotient) const;

    QPoly& operator+=(const QPoly& o);
    QPoly& operator-=(const QPoly& o);
    QPoly& operator*=(const Rational& s);
    friend QPoly operator+(QPoly a, const QPoly& b) { return a += b; }
    friend QPoly operator-(QPoly a, const QPoly& b) { return a -= b; }
    friend QPoly operator*(QPoly a, const Rational& s) { return a *= s; }
    friend QPoly operator*(const Rational& s, QPoly a) { return a *= s; }
    friend QPoly operator*(const QPoly& a, const QPoly& b);
    friend bool operator==(const QPoly& a, const QPoly& b) { return a.coeffs_ == b.coeffs_; }

    std::vector<double> to_doubles() const;

private:
    void trim();
    std::vector<Rational> coeffs_;
};

/// Multiplicities of linear factors (1 - c x), keyed by c != 0.
using LinearFactors = std::map<Rational, int>;

QPoly expand_factors(const LinearFactors& factors);
int factor_degree(const LinearFactors& factors);
/// True when every factor of a appears in b with at least the same multiplicity.
bool factors_divide(const LinearFactors& a, const LinearFactors& b);

/// numerator(x) / prod (1 - c x)^mult. The denominator is 1 at x = 0, so the
/// function is analytic at the origin.
class RationalFunctionQ {
public:
    RationalFunctionQ() = default;
    explicit RationalFunctionQ(QPoly numerator, LinearFactors factors = {});

    static RationalFunctionQ constant(const Rational& c) { return RationalFunctionQ(QPoly::constant(c)); }

    const QPoly& numerator() const { return numerator_; }
    const LinearFactors& denominator_factors() const { return factors_; }
    QPoly denominator() const { return expand_factors(factors_); }
    int denominator_degree() const { return factor_degree(factors_); }
    bool is_zero() const { return numerator_.is_zero(); }

    /// Cancels every denominator factor that divides the numerator.
    RationalFunctionQ reduced() const;

    Rational eval(const Rational& x) const;
    double eval(double x) const;

    /// Taylor coefficients c_0..c_m at x = 0 (exact power-series division).
    std::vector<Rational> taylor(int m) const;
    /// Taylor coefficients c_0..c_m at x0 in floating point; r^{(k)}(x0) = k! c_k.
    std::vector<double> taylor_at(double x0, int m) const;

    RationalFunctionQ& operator+=(const RationalFunctionQ& o);
    RationalFunctionQ& operator-=(const RationalFunctionQ& o);
    RationalFunctionQ& operator*=(const Rational& s);
    friend RationalFunctionQ operator+(RationalFunctionQ a, const RationalFunctionQ& b) { return a += b; }
    friend RationalFunctionQ operator-(RationalFunctionQ a, const RationalFunctionQ& b) { return a -= b; }
    friend RationalFunctionQ operator*(RationalFunctionQ a, const Rational& s) { return a *= s; }
    friend RationalFunctionQ operator*(const Rational& s, RationalFunctionQ a) { return a *= s; }
    friend RationalFunctionQ operator*(const RationalFunctionQ& a, const RationalFunctionQ& b);

    /// Equality as functions (cross multiplication), independent of representation.
    friend bool operator==(const RationalFunctionQ& a, const RationalFunctionQ& b);

    std::string to_string() const;

private:
    QPoly numerator_;
    LinearFactors factors_;
};

}  // namespace permtrace
