"""Expected traces and spectra of polynomials in random permutation matrices."""

from fractions import Fraction

from . import _permtrace as _core
from ._permtrace import (
    BudgetError,
    ConvergenceError,
    PreconditionError,
    cheb_expand,
    cyclic_reduce,
    friedman_certificate,
    is_first_visit,
    kesten_norm,
    markov_ratio,
    master_constant,
    power_decompose,
    reduce_word,
    sample_tuple,
    staircase_experiment,
    tail_experiment,
    test_function,
)

__version__ = _core.__version__


class RationalFunction:
    """numerator(x) / denominator(x) with exact coefficients, x = 1/N."""

    def __init__(self, raw):
        self.numerator = [Fraction(c) for c in raw["numerator"]]
        self.denominator = [Fraction(c) for c in raw["denominator"]]
        self.factors = [(Fraction(c), k) for c, k in raw["denominator_factors"]]
        self.text = raw["text"]

    def __call__(self, x):
        x = Fraction(x)
        num = sum(c * x**k for k, c in enumerate(self.numerator))
        den = sum(c * x**k for k, c in enumerate(self.denominator))
        return num / den

    def at_N(self, N):
        return self(Fraction(1, N))

    def __repr__(self):
        return f"RationalFunction({self.text})"


def _h(h):
    return h if isinstance(h, str) else [str(Fraction(c)) for c in h]


def word_expectation(word):
    """E[tr_N w] as an exact rational function of x = 1/N (exact for N >= |core|)."""
    return RationalFunction(_core.word_expectation(word))


def pattern_sum_expectation(word, N):
    return Fraction(_core.pattern_sum_expectation(word, N))


def brute_force_expectation(word, N):
    return Fraction(_core.brute_force_expectation(word, N))


def polynomial_trace_expectation(poly, h, d=0):
    return RationalFunction(_core.polynomial_trace_expectation(poly, _h(h), d))


def nu(poly, h, order=1, d=0):
    return [Fraction(c) for c in _core.nu(poly, _h(h), order, d)]


def nu1_adjacency_wordcount(d, p):
    return int(_core.nu1_adjacency_wordcount(d, p))


def tau_moment(poly, p, d=0):
    return _core.tau_moment(poly, p, d)


def master_inequality(poly, h, N, m, d=0):
    out = _core.master_inequality(poly, _h(h), N, m, d)
    out["lhs"] = Fraction(out["lhs"])
    return out


def mapped_chebyshev(q, a="1"):
    return [Fraction(c) for c in _core.mapped_chebyshev(q, str(Fraction(a)))]
