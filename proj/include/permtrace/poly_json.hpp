#pragma once

// JSON form of noncommutative polynomials:
//
//   {"rank": 2, "dim": 2,
//    "terms": [{"word": "a", "coeff": [["1", "0"], ["0", "-1"]]},
//              {"word": "A", "coeff": [[1, 0], [0, -1]]},
//              {"word": "",  "coeff": "(1/2+i)"}]}
//
// A scalar coefficient is a string in the text syntax, an integer, a float,
// or {"re": .., "im": ..}; a matrix is a row-major array of scalars. Floats
// are converted exactly from their binary value and mark the polynomial
// approximate. "rank" and "dim" are optional. {"text": "..."} is accepted
// as an alias for the text syntax.

#include "permtrace/nc_poly.hpp"

#include <string>
#include <string_view>

namespace permtrace {

NCPolynomial parse_nc_polynomial_json(std::string_view json_text, int rank = 0);
std::string nc_polynomial_to_json(const NCPolynomial& p);

}  // namespace permtrace
