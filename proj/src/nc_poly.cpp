#include "permtrace/nc_poly.hpp"

#include "permtrace/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cctype>

namespace permtrace {

CoeffMatrix::CoeffMatrix(int dim, std::vector<GaussianRational> row_major) : dim_(dim), entries_(std::move(row_major)) {
    if (dim_ < 1) throw PreconditionError("coefficient dimension must be positive");
    if (entries_.size() != static_cast<std::size_t>(dim_ * dim_)) {
        throw PreconditionError("coefficient matrix needs " + std::to_string(dim_ * dim_) + " entries, got " +
                                std::to_string(entries_.size()));
    }
}

CoeffMatrix CoeffMatrix::zero(int dim) {
    return CoeffMatrix(dim, std::vector<GaussianRational>(static_cast<std::size_t>(dim * dim)));
}

CoeffMatrix CoeffMatrix::identity(int dim) { return scalar(dim, 1); }

CoeffMatrix CoeffMatrix::scalar(int dim, const GaussianRational& z) {
    CoeffMatrix m = zero(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = z;
    return m;
}

bool CoeffMatrix::is_zero() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const GaussianRational& z) { return z.is_zero(); });
}

CoeffMatrix CoeffMatrix::adjoint() const {
    CoeffMatrix m = zero(dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) m(j, i) = (*this)(i, j).conj();
    return m;
}

GaussianRational CoeffMatrix::trace() const {
    GaussianRational t;
    for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
}

double CoeffMatrix::operator_norm() const {
    if (dim_ == 1) {
        double re = to_double(entries_[0].re), im = to_double(entries_[0].im);
        return std::hypot(re, im);
    }
    Eigen::MatrixXcd m(dim_, dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) m(i, j) = {to_double((*this)(i, j).re), to_double((*this)(i, j).im)};
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

CoeffMatrix& CoeffMatrix::operator+=(const CoeffMatrix& o) {
    if (o.dim_ != dim_) throw PreconditionError("coefficient dimension mismatch");
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += o.entries_[k];
    return *this;
}

CoeffMatrix operator*(const CoeffMatrix& a, const CoeffMatrix& b) {
    if (a.dim_ != b.dim_) throw PreconditionError("coefficient dimension mismatch");
    if (a.dim_ == 1) return CoeffMatrix(1, {a.entries_[0] * b.entries_[0]});
    CoeffMatrix m = CoeffMatrix::zero(a.dim_);
    for (int i = 0; i < a.dim_; ++i)
        for (int k = 0; k < a.dim_; ++k) {
            const auto& aik = a(i, k);
            if (aik.is_zero()) continue;
            for (int j = 0; j < a.dim_; ++j) m(i, j) += aik * b(k, j);
        }
    return m;
}

CoeffMatrix operator*(const GaussianRational& s, const CoeffMatrix& a) {
    CoeffMatrix m = a;
    for (auto& e : m.entries_) e = s * e;
    return m;
}

std::string CoeffMatrix::to_string() const {
    if (dim_ == 1) return permtrace::to_string(entries_[0]);
    std::string s = "[";
    for (int i = 0; i < dim_; ++i) {
        s += i ? ",[" : "[";
        for (int j = 0; j < dim_; ++j) s += (j ? "," : "") + permtrace::to_string((*this)(i, j));
        s += "]";
    }
    return s + "]";
}

NCPolynomial::NCPolynomial(int rank, int dim) : rank_(rank), dim_(dim) {
    if (rank < 1) throw PreconditionError("rank must be positive");
    if (dim < 1) throw PreconditionError("coefficient dimension must be positive");
}

NCPolynomial NCPolynomial::adjacency(int rank) {
    NCPolynomial p(rank, 1);
    for (int i = 1; i <= rank; ++i) {
        p.add_term(CoeffMatrix::identity(1), Word(rank, {Letter::generator(i)}));
        p.add_term(CoeffMatrix::identity(1), Word(rank, {Letter::inverse_generator(i)}));
    }
    return p;
}

NCPolynomial NCPolynomial::monomial(const Word& w, const GaussianRational& c) {
    NCPolynomial p(w.rank(), 1);
    p.add_term(CoeffMatrix::scalar(1, c), w);
    return p;
}

NCPolynomial NCPolynomial::identity(int rank, int dim) {
    NCPolynomial p(rank, dim);
    p.add_term(CoeffMatrix::identity(dim), ReducedWord(rank));
    return p;
}

int NCPolynomial::degree() const {
    int deg = 0;
    for (const auto& [w, a] : terms_) deg = std::max(deg, static_cast<int>(w.size()));
    return deg;
}

void NCPolynomial::add_term(const CoeffMatrix& a, const Word& w) { add_term(a, reduce(w)); }

void NCPolynomial::add_term(const CoeffMatrix& a, const ReducedWord& w) {
    if (a.dim() != dim_) throw PreconditionError("coefficient dimension mismatch");
    for (Letter l : w.letters()) {
        if (l.generator_number() > rank_) throw PreconditionError("word uses a generator beyond the rank");
    }
    auto [it, inserted] = terms_.try_emplace(w, a);
    if (!inserted) it->second += a;
    if (it->second.is_zero()) terms_.erase(it);
}

NCPolynomial NCPolynomial::adjoint() const {
    NCPolynomial out(rank_, dim_);
    out.approximate_ = approximate_;
    for (const auto& [w, a] : terms_) out.add_term(a.adjoint(), inverse(w));
    return out;
}

bool NCPolynomial::is_self_adjoint() const { return adjoint() == *this; }

double NCPolynomial::coefficient_norm_sum() const {
    double s = 0;
    for (const auto& [w, a] : terms_) s += a.operator_norm();
    return s;
}

NCPolynomial& NCPolynomial::operator+=(const NCPolynomial& o) {
    if (o.dim_ != dim_) throw PreconditionError("coefficient dimension mismatch");
    rank_ = std::max(rank_, o.rank_);
    approximate_ = approximate_ || o.approximate_;
    for (const auto& [w, a] : o.terms_) add_term(a, w);
    return *this;
}

NCPolynomial operator*(const GaussianRational& s, const NCPolynomial& p) {
    NCPolynomial out(p.rank_, p.dim_);
    out.approximate_ = p.approximate_;
    if (s.is_zero()) return out;
    for (const auto& [w, a] : p.terms_) out.add_term(s * a, w);
    return out;
}

NCPolynomial multiply(const NCPolynomial& p, const NCPolynomial& q) {
    if (p.dim() != q.dim()) throw PreconditionError("dimension mismatch in multiply");
    NCPolynomial out(std::max(p.rank(), q.rank()), p.dim());
    if (p.is_approximate() || q.is_approximate()) out.mark_approximate();
    for (const auto& [wp, ap] : p.terms())
        for (const auto& [wq, aq] : q.terms()) out.add_term(ap * aq, multiply(wp, wq));
    return out;
}

std::string NCPolynomial::to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [w, a] : terms_) {
        if (!s.empty()) s += " + ";
        s += a.to_string() + "*" + permtrace::to_string(w);
    }
    return s;
}

std::vector<WordTerm> trace_word_expansion(const NCPolynomial& p, const ScalarPolynomial& h, const Budget& budget) {
    const int q = h.degree();
    std::vector<WordTerm> out;
    if (q < 0) return out;
    const std::size_t terms = p.size();
    NCPolynomial power = NCPolynomial::identity(p.rank(), p.dim());
    NCPolynomial total(p.rank(), p.dim());
    std::size_t products = 0;
    for (int k = 0; k <= q; ++k) {
        if (k > 0) {
            products += power.size() * terms;
            if (products > budget.max_expansion_products) {
                throw BudgetError("trace_word_expansion: more than " + std::to_string(budget.max_expansion_products) +
                                  " term products (BUDGET_EXPANSION) needed for degree " + std::to_string(q) +
                                  " with " + std::to_string(terms) + " terms");
            }
            power = multiply(power, p);
        }
        const Rational& c = h.coeff(k);
        if (c != 0) total += GaussianRational(c) * power;
    }
    const Rational dim(p.dim());
    out.reserve(total.size());
    for (const auto& [w, a] : total.terms()) {
        GaussianRational t = a.trace() / dim;
        if (!t.is_zero()) out.push_back({std::move(t), w});
    }
    return out;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool is_word_text(std::string_view s) {
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(), [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '1'; });
}

// Splits at top-level '+'/'-' (outside brackets/parentheses, not after an
// exponent marker or '*'); each piece keeps its sign.
std::vector<std::string> split_terms(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    char prev_sig = '\0';
    for (char c : text) {
        if (c == '[' || c == '(') ++depth;
        if (c == ']' || c == ')') --depth;
        bool sign = (c == '+' || c == '-') && depth == 0;
        bool after_exp = (prev_sig == 'e' || prev_sig == 'E') && !cur.empty() &&
                         std::isdigit(static_cast<unsigned char>(cur[cur.size() >= 2 ? cur.size() - 2 : 0]));
        if (sign && !after_exp && prev_sig != '*' && prev_sig != '\0' && prev_sig != '+' && prev_sig != '-') {
            out.push_back(cur);
            cur.clear();
        }
        cur.push_back(c);
        if (!std::isspace(static_cast<unsigned char>(c))) prev_sig = c;
    }
    if (depth != 0) throw PreconditionError("unbalanced brackets in polynomial");
    out.push_back(cur);
    return out;
}

std::vector<std::string> split_top(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char c : s) {
        if (c == '[' || c == '(') ++depth;
        if (c == ']' || c == ')') --depth;
        if (c == sep && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

CoeffMatrix parse_matrix(std::string_view text) {
    std::string_view s = trim(text);
    if (s.size() < 4 || s.front() != '[' || s.back() != ']') throw PreconditionError("malformed matrix '" + std::string(text) + "'");
    auto rows = split_top(s.substr(1, s.size() - 2), ',');
    std::vector<GaussianRational> entries;
    for (const auto& r : rows) {
        std::string_view rv = trim(r);
        if (rv.size() < 2 || rv.front() != '[' || rv.back() != ']') throw PreconditionError("malformed matrix row '" + r + "'");
        auto cells = split_top(rv.substr(1, rv.size() - 2), ',');
        if (cells.size() != rows.size()) throw PreconditionError("coefficient matrix must be square");
        for (const auto& c : cells) entries.push_back(parse_gaussian(c));
    }
    return CoeffMatrix(static_cast<int>(rows.size()), std::move(entries));
}

}  // namespace

NCPolynomial parse_nc_polynomial(std::string_view text, int rank) {
    struct Piece {
        bool negative;
        std::string coeff;
        std::string word;
        bool adjacency;
    };
    std::vector<Piece> pieces;
    int max_gen = 0;
    int dim = 1;
    for (const auto& raw : split_terms(text)) {
        std::string_view t = trim(raw);
        if (t.empty()) throw PreconditionError("empty term in polynomial '" + std::string(text) + "'");
        Piece piece{false, "1", "", false};
        while (!t.empty() && (t.front() == '+' || t.front() == '-')) {
            if (t.front() == '-') piece.negative = !piece.negative;
            t = trim(t.substr(1));
        }
        if (t.empty()) throw PreconditionError("dangling sign in polynomial '" + std::string(text) + "'");
        auto star = t.rfind('*');
        std::string_view coeff_part, word_part;
        if (star == std::string_view::npos) {
            if (is_word_text(t)) {
                word_part = t;
            } else {
                coeff_part = t;
            }
        } else {
            coeff_part = trim(t.substr(0, star));
            word_part = trim(t.substr(star + 1));
        }
        if (!coeff_part.empty()) piece.coeff = std::string(coeff_part);
        if (word_part == "adjacency") {
            piece.adjacency = true;
        } else if (!word_part.empty()) {
            if (!is_word_text(word_part)) throw PreconditionError("malformed word '" + std::string(word_part) + "'");
            piece.word = std::string(word_part);
            Word w = parse_word(piece.word);
            for (Letter l : w.letters()) max_gen = std::max(max_gen, l.generator_number());
        }
        if (trim(piece.coeff).front() == '[') dim = parse_matrix(piece.coeff).dim();
        pieces.push_back(std::move(piece));
    }
    if (rank == 0) rank = std::max(1, max_gen);
    if (max_gen > rank) throw PreconditionError("polynomial uses generators beyond rank " + std::to_string(rank));
    NCPolynomial p(rank, dim);
    for (const auto& piece : pieces) {
        CoeffMatrix a = trim(piece.coeff).front() == '['
                            ? parse_matrix(piece.coeff)
                            : CoeffMatrix::scalar(dim, parse_gaussian(piece.coeff));
        if (a.dim() != dim) throw PreconditionError("mixed coefficient dimensions in polynomial");
        if (piece.negative) a = GaussianRational(-1) * a;
        if (piece.adjacency) {
            const NCPolynomial adj = NCPolynomial::adjacency(rank);
            for (const auto& [w, c] : adj.terms()) p.add_term(a * CoeffMatrix::scalar(dim, 1), w);
        } else {
            p.add_term(a, parse_word(piece.word, rank));
        }
    }
    return p;
}

namespace {

QPoly parse_monomial(std::string_view term) {
    std::string_view s = trim(term);
    bool negative = false;
    while (!s.empty() && (s.front() == '+' || s.front() == '-')) {
        if (s.front() == '-') negative = !negative;
        s = trim(s.substr(1));
    }
    if (s.empty()) throw PreconditionError("empty term in '" + std::string(term) + "'");
    Rational c = 1;
    int k = 0;
    if (auto xpos = s.find('x'); xpos != std::string_view::npos) {
        std::string_view pre = trim(s.substr(0, xpos));
        if (!pre.empty()) {
            if (pre.back() != '*') throw PreconditionError("expected 'c*x^k', got '" + std::string(s) + "'");
            c = parse_rational(trim(pre.substr(0, pre.size() - 1)));
        }
        std::string_view post = trim(s.substr(xpos + 1));
        k = 1;
        if (!post.empty()) {
            if (post.front() != '^') throw PreconditionError("expected 'x^k', got '" + std::string(s) + "'");
            std::string ex(trim(post.substr(1)));
            std::size_t used = 0;
            try {
                k = std::stoi(ex, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == 0 || used != ex.size()) throw PreconditionError("bad exponent in '" + std::string(s) + "'");
            if (k < 0) throw PreconditionError("negative exponent in '" + std::string(s) + "'");
        }
    } else {
        c = parse_rational(s);
    }
    return QPoly::monomial(k, negative ? Rational(-c) : c);
}

}  // namespace

ScalarPolynomial parse_scalar_polynomial(std::string_view text) {
    std::string_view s = trim(text);
    if (s.empty()) throw PreconditionError("empty polynomial");
    if (s.find('x') != std::string_view::npos) {
        QPoly out;
        for (const auto& term : split_terms(s)) out = out + parse_monomial(term);
        return out;
    }
    std::vector<Rational> coeffs;
    for (const auto& part : split_top(s, ',')) coeffs.push_back(parse_rational(part));
    return QPoly(std::move(coeffs));
}

}  // namespace permtrace
