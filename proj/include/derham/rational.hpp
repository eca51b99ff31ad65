#ifndef DERHAM_RATIONAL_HPP
#define DERHAM_RATIONAL_HPP

#include <boost/multiprecision/gmp.hpp>

#include <string>
#include <string_view>

namespace derham {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

/// Parses "p", "-p" or "p/q" (q != 0). Throws ValidationError otherwise.
Rational parse_rational(std::string_view text);

/// Prints "p" for integers and "p/q" otherwise, always in lowest terms.
std::string to_string(const Rational& r);

inline bool is_integer(const Rational& r) { return denominator(r) == 1; }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace derham

#endif
