#include "permtrace/rational.hpp"

#include "permtrace/errors.hpp"

#include <cctype>
#include <cmath>
#include <string>

namespace permtrace {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

Integer pow10(long e) {
    Integer r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, static_cast<unsigned long>(e));
    return r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::string_view s = trim(text);
    if (s.empty()) throw PreconditionError("empty rational literal");
    bool negative = false;
    std::string_view body = s;
    if (body.front() == '+' || body.front() == '-') {
        negative = body.front() == '-';
        body.remove_prefix(1);
    }
    Rational out;
    if (auto slash = body.find('/'); slash != std::string_view::npos) {
        auto num = body.substr(0, slash);
        auto den = body.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) throw PreconditionError("malformed rational '" + std::string(s) + "'");
        Integer n(std::string(num), 10), d(std::string(den), 10);
        if (d == 0) throw PreconditionError("zero denominator in '" + std::string(s) + "'");
        out = Rational(n, d);
        out.canonicalize();
    } else {
        std::string_view mant = body;
        long exp10 = 0;
        if (auto e = body.find_first_of("eE"); e != std::string_view::npos) {
            mant = body.substr(0, e);
            std::string ex(body.substr(e + 1));
            try {
                std::size_t used = 0;
                exp10 = std::stol(ex, &used);
                if (used != ex.size()) throw std::invalid_argument("trailing");
            } catch (const std::exception&) {
                throw PreconditionError("malformed exponent in '" + std::string(s) + "'");
            }
        }
        std::string_view ip = mant, fp;
        if (auto dot = mant.find('.'); dot != std::string_view::npos) {
            ip = mant.substr(0, dot);
            fp = mant.substr(dot + 1);
        }
        if ((ip.empty() && fp.empty()) || (!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp))) {
            throw PreconditionError("malformed number '" + std::string(s) + "'");
        }
        Integer digits(std::string(ip) + std::string(fp), 10);
        long scale = static_cast<long>(fp.size()) - exp10;
        if (scale >= 0) {
            out = Rational(digits, pow10(scale));
        } else {
            out = Rational(digits * pow10(-scale));
        }
        out.canonicalize();
    }
    return negative ? Rational(-out) : out;
}

std::string to_string(const Rational& r_in) {
    Rational r = r_in;
    r.canonicalize();
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

double to_double(const Rational& r) { return mpq_get_d(r.get_mpq_t()); }

Rational rational_from_double(double x) {
    if (!std::isfinite(x)) throw PreconditionError("non-finite coefficient");
    Rational r;
    mpq_set_d(r.get_mpq_t(), x);
    return r;
}

GaussianRational parse_gaussian(std::string_view text) {
    std::string_view s = trim(text);
    if (s.size() >= 2 && s.front() == '(' && s.back() == ')') s = trim(s.substr(1, s.size() - 2));
    if (s.empty()) throw PreconditionError("empty coefficient");
    // Split at a sign that is not the leading sign and not part of an exponent.
    std::size_t split = std::string_view::npos;
    for (std::size_t i = 1; i < s.size(); ++i) {
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') split = i;
    }
    auto parse_part = [](std::string_view part, GaussianRational& acc) {
        part = trim(part);
        if (!part.empty() && part.back() == 'i') {
            std::string_view c = trim(part.substr(0, part.size() - 1));
            if (c.empty() || c == "+") {
                acc.im += 1;
            } else if (c == "-") {
                acc.im -= 1;
            } else {
                if (c.back() == '*') c = trim(c.substr(0, c.size() - 1));
                acc.im += parse_rational(c);
            }
        } else {
            acc.re += parse_rational(part);
        }
    };
    GaussianRational z;
    if (split == std::string_view::npos) {
        parse_part(s, z);
    } else {
        parse_part(s.substr(0, split), z);
        parse_part(s.substr(split), z);
    }
    return z;
}

std::string to_string(const GaussianRational& z) {
    if (z.im == 0) return to_string(z.re);
    std::string im = to_string(z.im) + "i";
    if (z.re == 0) return im;
    return "(" + to_string(z.re) + (z.im > 0 ? "+" : "") + im + ")";
}

}  // namespace permtrace
