#include "permtrace/polynomial.hpp"

#include "permtrace/errors.hpp"

#include <algorithm>

namespace permtrace {

QPoly::QPoly(std::vector<Rational> ascending) : coeffs_(std::move(ascending)) {
    for (auto& c : coeffs_) c.canonicalize();
    trim();
}

QPoly QPoly::constant(const Rational& c) { return QPoly(std::vector<Rational>{c}); }

QPoly QPoly::monomial(int k, const Rational& c) {
    std::vector<Rational> v(static_cast<std::size_t>(k) + 1);
    v[static_cast<std::size_t>(k)] = c;
    return QPoly(std::move(v));
}

QPoly QPoly::one_minus(const Rational& c) { return QPoly(std::vector<Rational>{1, -c}); }

void QPoly::trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Rational QPoly::coeff(int k) const {
    if (k < 0 || k > degree()) return 0;
    return coeffs_[static_cast<std::size_t>(k)];
}

Rational QPoly::eval(const Rational& x) const {
    Rational acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

double QPoly::eval(double x) const {
    double acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + to_double(*it);
    return acc;
}

QPoly QPoly::derivative() const {
    if (coeffs_.size() <= 1) return {};
    std::vector<Rational> d(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = coeffs_[k] * static_cast<long>(k);
    return QPoly(std::move(d));
}

bool QPoly::try_divide_one_minus(const Rational& c, QPoly& quotient) const {
    // p(x) = (1 - c x) s(x): s_k = p_k + c s_{k-1}; exact iff the final remainder vanishes.
    if (is_zero()) {
        quotient = {};
        return true;
    }
    std::vector<Rational> s(coeffs_.size());
    Rational prev = 0;
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        s[k] = coeffs_[k] + c * prev;
        prev = s[k];
    }
    if (s.back() != 0) return false;
    s.pop_back();
    quotient = QPoly(std::move(s));
    return true;
}

QPoly& QPoly::operator+=(const QPoly& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
    trim();
    return *this;
}

QPoly& QPoly::operator-=(const QPoly& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
    for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
    trim();
    return *this;
}

QPoly& QPoly::operator*=(const Rational& s) {
    if (s == 0) {
        coeffs_.clear();
        return *this;
    }
    for (auto& c : coeffs_) c *= s;
    return *this;
}

QPoly operator*(const QPoly& a, const QPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> out(a.coeffs_.size() + b.coeffs_.size() - 1);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
        if (a.coeffs_[i] == 0) continue;
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return QPoly(std::move(out));
}

std::vector<double> QPoly::to_doubles() const {
    std::vector<double> out;
    out.reserve(coeffs_.size());
    for (const auto& c : coeffs_) out.push_back(to_double(c));
    return out;
}

QPoly expand_factors(const LinearFactors& factors) {
    QPoly out = QPoly::constant(1);
    for (const auto& [c, mult] : factors) {
        for (int i = 0; i < mult; ++i) out = out * QPoly::one_minus(c);
    }
    return out;
}

int factor_degree(const LinearFactors& factors) {
    int deg = 0;
    for (const auto& [c, mult] : factors) deg += mult;
    return deg;
}

bool factors_divide(const LinearFactors& a, const LinearFactors& b) {
    for (const auto& [c, mult] : a) {
        auto it = b.find(c);
        if (it == b.end() || it->second < mult) return false;
    }
    return true;
}

RationalFunctionQ::RationalFunctionQ(QPoly numerator, LinearFactors factors)
    : numerator_(std::move(numerator)), factors_(std::move(factors)) {
    for (auto it = factors_.begin(); it != factors_.end();) {
        if (it->first == 0) throw PreconditionError("linear factor (1 - 0x) is not allowed");
        if (it->second < 0) throw PreconditionError("negative factor multiplicity");
        it = it->second == 0 ? factors_.erase(it) : std::next(it);
    }
    if (numerator_.is_zero()) factors_.clear();
}

RationalFunctionQ RationalFunctionQ::reduced() const {
    QPoly num = numerator_;
    LinearFactors left;
    for (const auto& [c, mult] : factors_) {
        int remaining = mult;
        QPoly q;
        while (remaining > 0 && num.try_divide_one_minus(c, q)) {
            num = std::move(q);
            --remaining;
            if (num.is_zero()) break;
        }
        if (remaining > 0) left[c] = remaining;
    }
    return RationalFunctionQ(std::move(num), std::move(left));
}

Rational RationalFunctionQ::eval(const Rational& x) const {
    Rational den = 1;
    for (const auto& [c, mult] : factors_) {
        Rational f = 1 - c * x;
        for (int i = 0; i < mult; ++i) den *= f;
    }
    if (den == 0) {
        // Might be a removable singularity of an unreduced representation.
        RationalFunctionQ r = reduced();
        if (r.factors_ != factors_) return r.eval(x);
        throw PreconditionError("rational function has a pole at x = " + permtrace::to_string(x));
    }
    return numerator_.eval(x) / den;
}

double RationalFunctionQ::eval(double x) const {
    double den = 1;
    for (const auto& [c, mult] : factors_) {
        double f = 1 - to_double(c) * x;
        for (int i = 0; i < mult; ++i) den *= f;
    }
    return numerator_.eval(x) / den;
}

std::vector<Rational> RationalFunctionQ::taylor(int m) const {
    if (m < 0) return {};
    QPoly den = denominator();
    std::vector<Rational> s(static_cast<std::size_t>(m) + 1);
    for (int n = 0; n <= m; ++n) {
        Rational acc = numerator_.coeff(n);
        for (int k = 1; k <= std::min(n, den.degree()); ++k) acc -= den.coeff(k) * s[static_cast<std::size_t>(n - k)];
        s[static_cast<std::size_t>(n)] = acc;  // den(0) = 1
    }
    return s;
}

namespace {

// Coefficients of p(x0 + t) in t.
std::vector<double> taylor_shift(std::vector<double> p, double x0) {
    const std::size_t n = p.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = n - 1; j > i; --j) p[j - 1] += x0 * p[j];
    }
    return p;
}

}  // namespace

std::vector<double> RationalFunctionQ::taylor_at(double x0, int m) const {
    std::vector<double> num = taylor_shift(numerator_.to_doubles(), x0);
    std::vector<double> den = taylor_shift(denominator().to_doubles(), x0);
    if (den.empty() || den[0] == 0) throw PreconditionError("taylor_at: pole at expansion point");
    std::vector<double> s(static_cast<std::size_t>(m) + 1, 0.0);
    for (int n = 0; n <= m; ++n) {
        double acc = static_cast<std::size_t>(n) < num.size() ? num[static_cast<std::size_t>(n)] : 0.0;
        for (int k = 1; k <= n && static_cast<std::size_t>(k) < den.size(); ++k) {
            acc -= den[static_cast<std::size_t>(k)] * s[static_cast<std::size_t>(n - k)];
        }
        s[static_cast<std::size_t>(n)] = acc / den[0];
    }
    return s;
}

namespace {

LinearFactors lcm_factors(const LinearFactors& a, const LinearFactors& b) {
    LinearFactors out = a;
    for (const auto& [c, mult] : b) out[c] = std::max(out[c], mult);
    return out;
}

QPoly lift(const QPoly& num, const LinearFactors& from, const LinearFactors& to) {
    QPoly out = num;
    for (const auto& [c, mult] : to) {
        auto it = from.find(c);
        int have = it == from.end() ? 0 : it->second;
        for (int i = have; i < mult; ++i) out = out * QPoly::one_minus(c);
    }
    return out;
}

}  // namespace

RationalFunctionQ& RationalFunctionQ::operator+=(const RationalFunctionQ& o) {
    if (o.is_zero()) return *this;
    if (is_zero()) return *this = o;
    LinearFactors common = lcm_factors(factors_, o.factors_);
    QPoly num = lift(numerator_, factors_, common) + lift(o.numerator_, o.factors_, common);
    *this = RationalFunctionQ(std::move(num), std::move(common));
    return *this;
}

RationalFunctionQ& RationalFunctionQ::operator-=(const RationalFunctionQ& o) { return *this += o * Rational(-1); }

RationalFunctionQ& RationalFunctionQ::operator*=(const Rational& s) {
    numerator_ *= s;
    if (numerator_.is_zero()) factors_.clear();
    return *this;
}

RationalFunctionQ operator*(const RationalFunctionQ& a, const RationalFunctionQ& b) {
    LinearFactors f = a.factors_;
    for (const auto& [c, mult] : b.factors_) f[c] += mult;
    return RationalFunctionQ(a.numerator_ * b.numerator_, std::move(f));
}

bool operator==(const RationalFunctionQ& a, const RationalFunctionQ& b) {
    return a.numerator_ * b.denominator() == b.numerator_ * a.denominator();
}

std::string RationalFunctionQ::to_string() const {
    auto poly_str = [](const QPoly& p) {
        if (p.is_zero()) return std::string("0");
        std::string s;
        for (int k = 0; k <= p.degree(); ++k) {
            const Rational& c = p.coeffs()[static_cast<std::size_t>(k)];
            if (c == 0) continue;
            std::string term = permtrace::to_string(abs(c));
            if (k > 0) term = (abs(c) == 1 ? std::string() : term + "*") + "x" + (k > 1 ? "^" + std::to_string(k) : "");
            if (s.empty()) {
                s = (c < 0 ? "-" : "") + term;
            } else {
                s += (c < 0 ? " - " : " + ") + term;
            }
        }
        return s;
    };
    std::string out = "(" + poly_str(numerator_) + ")";
    for (const auto& [c, mult] : factors_) {
        out += " / (1 - " + (c == 1 ? std::string() : permtrace::to_string(c) + "*") + "x)";
        if (mult > 1) out += "^" + std::to_string(mult);
    }
    return out;
}

}  // namespace permtrace
