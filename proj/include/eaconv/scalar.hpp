#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <charconv>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace eaconv {

/// Exact backend for problems whose data are ratios of integers. The default
/// backend is plain double; every templated operation in the library accepts
/// either.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

template <typename T>
struct scalar_traits;

template <>
struct scalar_traits<double> {
    static constexpr bool exact = false;
    /// Tolerance below which two diagonal entries count as colliding.
    static double default_eps_diag() { return 1e-9; }
    /// Slack allowed on column sums before a kernel is rejected.
    static double column_slack() { return 1e-12; }
    static const char* backend_name() { return "floating"; }
};

template <>
struct scalar_traits<Rational> {
    static constexpr bool exact = true;
    static Rational default_eps_diag() { return Rational(0); }
    static Rational column_slack() { return Rational(0); }
    static const char* backend_name() { return "rational"; }
};

inline double to_double(double v) { return v; }
inline double to_double(const Rational& v) { return v.convert_to<double>(); }

/// base^e for integer e >= 0 with the 0^0 = 1 convention.
template <typename T>
T pow_nonneg(T base, long long e) {
    if (e < 0) throw std::invalid_argument("pow_nonneg: negative exponent");
    T result(1);
    while (e > 0) {
        if (e & 1) result = result * base;
        base = base * base;
        e >>= 1;
    }
    return result;
}

namespace detail {

inline BigInt pow10_big(long long k) {
    BigInt r(1), ten(10);
    for (long long i = 0; i < k; ++i) r *= ten;
    return r;
}

/// Decimal literal -> exact rational: "0.75" -> 3/4, "1e-3" -> 1/1000.
inline Rational rational_from_decimal(std::string_view s) {
    std::size_t pos = 0;
    bool negative = false;
    if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
        negative = (s[pos] == '-');
        ++pos;
    }
    std::string digits;
    long long frac_digits = 0;
    bool seen_digit = false, seen_dot = false;
    for (; pos < s.size(); ++pos) {
        char c = s[pos];
        if (c >= '0' && c <= '9') {
            digits.push_back(c);
            seen_digit = true;
            if (seen_dot) ++frac_digits;
        } else if (c == '.' && !seen_dot) {
            seen_dot = true;
        } else {
            break;
        }
    }
    if (!seen_digit) throw std::invalid_argument("not a number: '" + std::string(s) + "'");
    long long exponent = 0;
    if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E')) {
        ++pos;
        bool exp_neg = false;
        if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
            exp_neg = (s[pos] == '-');
            ++pos;
        }
        if (pos >= s.size()) throw std::invalid_argument("bad exponent in '" + std::string(s) + "'");
        long long ev = 0;
        for (; pos < s.size() && s[pos] >= '0' && s[pos] <= '9'; ++pos) ev = ev * 10 + (s[pos] - '0');
        exponent = exp_neg ? -ev : ev;
    }
    if (pos != s.size()) throw std::invalid_argument("trailing characters in number '" + std::string(s) + "'");

    BigInt num(digits.empty() ? "0" : digits);
    BigInt den = pow10_big(frac_digits);
    if (exponent > 0)
        num *= pow10_big(exponent);
    else if (exponent < 0)
        den *= pow10_big(-exponent);
    Rational r(num, den);
    return negative ? -r : r;
}

}  // namespace detail

/// Parses "3/4", "0.75", "-1.5e-2", ... into the requested backend.
template <typename T>
T parse_scalar(std::string_view s);

template <>
inline Rational parse_scalar<Rational>(std::string_view s) {
    auto slash = s.find('/');
    if (slash == std::string_view::npos) return detail::rational_from_decimal(s);
    Rational num = detail::rational_from_decimal(s.substr(0, slash));
    Rational den = detail::rational_from_decimal(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(s) + "'");
    return num / den;
}

template <>
inline double parse_scalar<double>(std::string_view s) {
    auto parse_one = [](std::string_view part) {
        double v = 0;
        // from_chars rejects a leading '+'
        if (!part.empty() && part.front() == '+') part.remove_prefix(1);
        auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
        if (ec != std::errc() || ptr != part.data() + part.size())
            throw std::invalid_argument("not a number: '" + std::string(part) + "'");
        return v;
    };
    auto slash = s.find('/');
    if (slash == std::string_view::npos) return parse_one(s);
    double den = parse_one(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(s) + "'");
    return parse_one(s.substr(0, slash)) / den;
}

/// Shortest round-trip decimal for doubles; "num/den" (or plain integer) for
/// rationals. Locale independent.
inline std::string format_scalar(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) return "nan";
    return std::string(buf, ptr);
}

inline std::string format_scalar(const Rational& v) {
    std::string s = numerator(v).str();
    if (denominator(v) != 1) {
        s += '/';
        s += denominator(v).str();
    }
    return s;
}

}  // namespace eaconv
