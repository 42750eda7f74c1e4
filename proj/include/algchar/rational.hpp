#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "error.hpp"

namespace algchar {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer numerator_of(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer denominator_of(const Rational& q) { return boost::multiprecision::denominator(q); }

inline bool is_integral(const Rational& q) { return denominator_of(q) == 1; }

inline std::int64_t to_int64(const Rational& q)
{
    if (!is_integral(q)) {
        throw InternalError("expected an integral rational, got " + q.str());
    }
    return numerator_of(q).convert_to<std::int64_t>();
}

// "p" for integers, "p/q" otherwise.
inline std::string to_string(const Rational& q)
{
    if (is_integral(q)) {
        return numerator_of(q).str();
    }
    return numerator_of(q).str() + "/" + denominator_of(q).str();
}

inline Rational parse_rational(std::string_view text)
{
    auto parse_int = [&](std::string_view s) {
        std::size_t i = 0;
        if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
            i = 1;
        }
        if (i == s.size()) {
            throw ValidationError("malformed rational '" + std::string(text) + "'");
        }
        for (std::size_t j = i; j < s.size(); ++j) {
            if (s[j] < '0' || s[j] > '9') {
                throw ValidationError("malformed rational '" + std::string(text) + "'");
            }
        }
        return Integer(std::string(s[0] == '+' ? s.substr(1) : s));
    };
    auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        return Rational(parse_int(text));
    }
    Integer den = parse_int(text.substr(slash + 1));
    if (den == 0) {
        throw ValidationError("zero denominator in '" + std::string(text) + "'");
    }
    return Rational(parse_int(text.substr(0, slash)), den);
}

inline Integer binomial(std::int64_t n, std::int64_t k)
{
    if (k < 0 || n < 0 || k > n) {
        return 0;
    }
    k = std::min(k, n - k);
    Integer r = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

} // namespace algchar
