#include "derham/rational.hpp"

#include "derham/error.hpp"

#include <cctype>

namespace derham {

namespace {

bool valid_integer(std::string_view s) {
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

Integer to_integer(std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    return Integer(std::string(s));
}

}  // namespace

Rational parse_rational(std::string_view text) {
    auto slash = text.find('/');
    std::string_view num = text.substr(0, slash);
    std::string_view den = slash == std::string_view::npos ? std::string_view("1")
                                                           : text.substr(slash + 1);
    if (!valid_integer(num) || !valid_integer(den)) {
        throw ValidationError("malformed rational '" + std::string(text) + "'");
    }
    Integer q = to_integer(den);
    if (q == 0) throw ValidationError("zero denominator in rational '" + std::string(text) + "'");
    return Rational(to_integer(num), q);
}

std::string to_string(const Rational& r) {
    if (is_integer(r)) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

}  // namespace derham
