#pragma once

// Exact scalars: arbitrary-precision rationals (GMP) and Gaussian rationals.

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace permtrace {

using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "p", "p/q", "-p/q" and finite decimals such as "0.125" or "-2.5e-3"
/// exactly. Throws PreconditionError on malformed input.
Rational parse_rational(std::string_view text);

/// "p/q" (or "p" when q = 1), always in lowest terms.
std::string to_string(const Rational& r);

double to_double(const Rational& r);

/// Exact value of a finite double.
Rational rational_from_double(double x);

/// Gaussian rational re + i*im.
struct GaussianRational {
    Rational re;
    Rational im;

    GaussianRational() = default;
    GaussianRational(Rational r) : re(std::move(r)) {}  // NOLINT: implicit by design of the field embedding
    GaussianRational(long r) : re(r) {}                 // NOLINT
    GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }
    GaussianRational conj() const { return {re, -im}; }

    GaussianRational& operator+=(const GaussianRational& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    GaussianRational& operator-=(const GaussianRational& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
    friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
    friend GaussianRational operator-(const GaussianRational& a) { return {-a.re, -a.im}; }
    friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
        return {Rational(a.re * b.re - a.im * b.im), Rational(a.re * b.im + a.im * b.re)};
    }
    friend GaussianRational operator/(const GaussianRational& a, const Rational& s) {
        return {Rational(a.re / s), Rational(a.im / s)};
    }
    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re == b.re && a.im == b.im;
    }
};

/// Accepts a rational, "<r>i", "i", "-i" or a parenthesised sum "(<r>+<r>i)".
GaussianRational parse_gaussian(std::string_view text);
std::string to_string(const GaussianRational& z);

}  // namespace permtrace
