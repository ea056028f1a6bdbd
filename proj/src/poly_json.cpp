#include "permtrace/poly_json.hpp"

#include "permtrace/errors.hpp"

#include <json.hpp>

#include <algorithm>

namespace permtrace {

namespace {

using nlohmann::json;

Rational number_to_rational(const json& v, bool& approximate) {
    if (v.is_number_integer()) return Rational(v.get<long>());
    if (v.is_number_unsigned()) return Rational(static_cast<unsigned long>(v.get<std::uint64_t>()));
    if (v.is_number_float()) {
        approximate = true;
        return rational_from_double(v.get<double>());
    }
    if (v.is_string()) return parse_rational(v.get<std::string>());
    throw PreconditionError("expected a number, got " + v.dump());
}

GaussianRational scalar_from_json(const json& v, bool& approximate) {
    if (v.is_string()) return parse_gaussian(v.get<std::string>());
    if (v.is_number()) return GaussianRational{number_to_rational(v, approximate), 0};
    if (v.is_object()) {
        GaussianRational z;
        if (v.contains("re")) z.re = number_to_rational(v.at("re"), approximate);
        if (v.contains("im")) z.im = number_to_rational(v.at("im"), approximate);
        return z;
    }
    throw PreconditionError("malformed coefficient " + v.dump());
}

CoeffMatrix coeff_from_json(const json& v, int dim, bool& approximate) {
    if (!v.is_array()) return CoeffMatrix::scalar(dim, scalar_from_json(v, approximate));
    const auto n = static_cast<int>(v.size());
    if (n != dim) throw PreconditionError("coefficient matrix is " + std::to_string(n) + " rows, expected " + std::to_string(dim));
    std::vector<GaussianRational> entries;
    for (const auto& row : v) {
        if (!row.is_array() || static_cast<int>(row.size()) != dim) throw PreconditionError("coefficient matrix is not square");
        for (const auto& e : row) entries.push_back(scalar_from_json(e, approximate));
    }
    return CoeffMatrix(dim, std::move(entries));
}

json scalar_to_json(const GaussianRational& z) { return to_string(z); }

}  // namespace

NCPolynomial parse_nc_polynomial_json(std::string_view json_text, int rank) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw PreconditionError(std::string("polynomial JSON: ") + e.what());
    }
    if (!doc.is_object()) throw PreconditionError("polynomial JSON must be an object");
    if (doc.contains("text")) return parse_nc_polynomial(doc.at("text").get<std::string>(), rank);
    if (!doc.contains("terms") || !doc.at("terms").is_array()) throw PreconditionError("polynomial JSON needs a 'terms' array");

    int dim = doc.value("dim", 0);
    int max_gen = 0;
    std::vector<Word> words;
    for (const auto& t : doc.at("terms")) {
        if (!t.is_object() || !t.contains("coeff")) throw PreconditionError("each term needs 'coeff'");
        const std::string text = t.value("word", std::string());
        Word w = text.empty() ? Word(1, {}) : parse_word(text);
        for (Letter l : w.letters()) max_gen = std::max(max_gen, l.generator_number());
        words.push_back(std::move(w));
        if (dim == 0 && t.at("coeff").is_array()) dim = static_cast<int>(t.at("coeff").size());
    }
    if (dim == 0) dim = 1;
    if (rank == 0) rank = doc.value("rank", 0);
    if (rank == 0) rank = std::max(1, max_gen);
    if (max_gen > rank) throw PreconditionError("polynomial uses generators beyond rank " + std::to_string(rank));

    NCPolynomial p(rank, dim);
    bool approximate = false;
    std::size_t i = 0;
    for (const auto& t : doc.at("terms")) {
        CoeffMatrix a = coeff_from_json(t.at("coeff"), dim, approximate);
        p.add_term(a, Word(rank, std::vector<Letter>(words[i].letters().begin(), words[i].letters().end())));
        ++i;
    }
    if (approximate) p.mark_approximate();
    return p;
}

std::string nc_polynomial_to_json(const NCPolynomial& p) {
    json doc;
    doc["rank"] = p.rank();
    doc["dim"] = p.dim();
    doc["approximate"] = p.is_approximate();
    json terms = json::array();
    for (const auto& [w, a] : p.terms()) {
        json coeff;
        if (p.dim() == 1) {
            coeff = scalar_to_json(a(0, 0));
        } else {
            coeff = json::array();
            for (int r = 0; r < p.dim(); ++r) {
                json row = json::array();
                for (int c = 0; c < p.dim(); ++c) row.push_back(scalar_to_json(a(r, c)));
                coeff.push_back(row);
            }
        }
        terms.push_back({{"word", to_string(w)}, {"coeff", coeff}});
    }
    doc["terms"] = terms;
    return doc.dump();
}

}  // namespace permtrace
