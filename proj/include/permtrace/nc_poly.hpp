#pragma once

// Noncommutative polynomials P = sum_w A_w (x) w with D x D Gaussian-rational
// matrix coefficients, in the generators s_1..s_d and their adjoints.

#include "permtrace/budget.hpp"
#include "permtrace/free_group.hpp"
#include "permtrace/polynomial.hpp"
#include "permtrace/rational.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace permtrace {

/// Dense square matrix over the Gaussian rationals, row-major.
class CoeffMatrix {
public:
    CoeffMatrix() = default;
    CoeffMatrix(int dim, std::vector<GaussianRational> row_major);

    static CoeffMatrix zero(int dim);
    static CoeffMatrix identity(int dim);
    static CoeffMatrix scalar(int dim, const GaussianRational& z);

    int dim() const { return dim_; }
    const GaussianRational& operator()(int i, int j) const { return entries_[static_cast<std::size_t>(i * dim_ + j)]; }
    GaussianRational& operator()(int i, int j) { return entries_[static_cast<std::size_t>(i * dim_ + j)]; }

    bool is_zero() const;
    CoeffMatrix adjoint() const;
    GaussianRational trace() const;
    /// Spectral norm, computed in double precision.
    double operator_norm() const;

    CoeffMatrix& operator+=(const CoeffMatrix& o);
    friend CoeffMatrix operator+(CoeffMatrix a, const CoeffMatrix& b) { return a += b; }
    friend CoeffMatrix operator*(const CoeffMatrix& a, const CoeffMatrix& b);
    friend CoeffMatrix operator*(const GaussianRational& s, const CoeffMatrix& a);
    friend bool operator==(const CoeffMatrix& a, const CoeffMatrix& b) = default;

    std::string to_string() const;

private:
    int dim_ = 1;
    std::vector<GaussianRational> entries_{GaussianRational{}};
};

/// Univariate real test polynomial h (ascending coefficients).
using ScalarPolynomial = QPoly;

class NCPolynomial {
public:
    using TermMap = std::map<ReducedWord, CoeffMatrix>;

    NCPolynomial(int rank, int dim = 1);

    /// s_1 + s_1^* + ... + s_d + s_d^*
    static NCPolynomial adjacency(int rank);
    /// c * w with scalar coefficient (D = 1).
    static NCPolynomial monomial(const Word& w, const GaussianRational& c = 1);
    static NCPolynomial identity(int rank, int dim = 1);

    int rank() const { return rank_; }
    int dim() const { return dim_; }
    const TermMap& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    /// Longest reduced word with a nonzero coefficient; 0 for constants and the zero polynomial.
    int degree() const;

    /// Input contained floating point coefficients; exact-equality checks downstream are disabled.
    bool is_approximate() const { return approximate_; }
    void mark_approximate() { approximate_ = true; }

    /// Adds A (x) w, merging with the existing coefficient of reduce(w).
    void add_term(const CoeffMatrix& a, const Word& w);
    void add_term(const CoeffMatrix& a, const ReducedWord& w);

    NCPolynomial adjoint() const;
    bool is_self_adjoint() const;
    /// Sum of operator norms of the coefficients, an upper bound on the norm
    /// of P in M_D (x) C*(F_d).
    double coefficient_norm_sum() const;

    NCPolynomial& operator+=(const NCPolynomial& o);
    friend NCPolynomial operator+(NCPolynomial a, const NCPolynomial& b) { return a += b; }
    friend NCPolynomial operator*(const GaussianRational& s, const NCPolynomial& p);
    friend bool operator==(const NCPolynomial& a, const NCPolynomial& b) {
        return a.rank_ == b.rank_ && a.dim_ == b.dim_ && a.terms_ == b.terms_;
    }

    std::string to_string() const;

private:
    int rank_;
    int dim_;
    bool approximate_ = false;
    TermMap terms_;
};

/// Product with word concatenation and free reduction. Throws on dimension mismatch.
NCPolynomial multiply(const NCPolynomial& p, const NCPolynomial& q);

/// One scalar-coefficient term of an expansion into reduced words.
struct WordTerm {
    GaussianRational coeff;
    ReducedWord word;
};

/// (tr_D (x) id)(h(P)) as a combination of reduced words, tr_D normalized by D.
/// Terms are sorted by word and have nonzero coefficients. The constant term
/// of h contributes to the identity word.
std::vector<WordTerm> trace_word_expansion(const NCPolynomial& p, const ScalarPolynomial& h,
                                           const Budget& budget = {});

/// Text form: terms joined by + and -, each "coeff*word", "word" or "coeff".
/// coeff is a Gaussian rational ("2", "-1/3", "0.5", "(1+2i)") or a row-major
/// matrix "[[1,0],[0,-1]]". The literal "adjacency" expands to the adjacency
/// polynomial of the given rank. rank == 0 infers it from the letters used.
NCPolynomial parse_nc_polynomial(std::string_view text, int rank = 0);

/// Ascending coefficient list "c0,c1,...,cq" or a single monomial "x^k" / "c*x^k".
ScalarPolynomial parse_scalar_polynomial(std::string_view text);

}  // namespace permtrace
