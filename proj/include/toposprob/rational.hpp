#pragma once

#include <gmpxx.h>

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

#include "toposprob/error.hpp"

namespace toposprob {

using Rational = mpq_class;

/// Grid used when a floating trace is turned into a rational.
inline constexpr long kRationalizeDenominator = 1'000'000'000L;

/// Parses "p", "p/q", or a finite decimal such as "-0.125" or "2.5e-3".
/// The result is canonicalized.
inline Rational parse_rational(std::string_view text) {
    std::string s(text);
    if (s.empty()) {
        fail(ErrorKind::ParseError, "empty rational literal");
    }
    if (auto e = s.find_first_of("eE"); e != std::string::npos) {
        if (s.find('/') != std::string::npos || e + 1 == s.size()) {
            fail(ErrorKind::ParseError, "unsupported rational literal '" + s + "'");
        }
        const std::string exp_text = s.substr(e + 1);
        std::size_t used = 0;
        long exp = 0;
        try {
            exp = std::stol(exp_text, &used);
        } catch (const std::exception &) {
            used = 0;
        }
        if (used != exp_text.size() || exp > 400 || exp < -400) {
            fail(ErrorKind::ParseError, "bad exponent in '" + s + "'");
        }
        Rational q = parse_rational(std::string_view(s).substr(0, e));
        mpz_class scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exp < 0 ? -exp : exp));
        if (exp < 0) {
            q /= Rational(scale);
        } else {
            q *= Rational(scale);
        }
        q.canonicalize();
        return q;
    }
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        if (s.find('/') != std::string::npos) {
            fail(ErrorKind::ParseError, "unsupported rational literal '" + s + "'");
        }
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        std::size_t scale = s.size() - dot - 1;
        if (digits == "-" || digits == "+" || digits.empty()) {
            fail(ErrorKind::ParseError, "bad decimal '" + s + "'");
        }
        if (digits.front() == '+') {
            digits.erase(0, 1);
        }
        mpz_class num;
        if (num.set_str(digits, 10) != 0) {
            fail(ErrorKind::ParseError, "bad decimal '" + s + "'");
        }
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, scale);
        Rational q(num, den);
        q.canonicalize();
        return q;
    }
    if (s.front() == '+') {
        s.erase(0, 1);
    }
    Rational q;
    if (q.set_str(s, 10) != 0) {
        fail(ErrorKind::ParseError, "bad rational literal '" + std::string(text) + "'");
    }
    if (q.get_den() == 0) {
        fail(ErrorKind::ParseError, "zero denominator in '" + std::string(text) + "'");
    }
    q.canonicalize();
    return q;
}

inline std::string to_string(const Rational &q) { return q.get_str(); }

inline double to_double(const Rational &q) { return q.get_d(); }

/// Rounds x to the nearest multiple of 1/kRationalizeDenominator. Rounding
/// to a fixed grid is monotone, so order relations between inputs that
/// differ by more than float noise survive.
inline Rational rationalize(double x) {
    if (!std::isfinite(x)) {
        fail(ErrorKind::NumericalInstability, "non-finite value cannot be rationalized");
    }
    double scaled = std::nearbyint(x * static_cast<double>(kRationalizeDenominator));
    mpz_class num;
    mpz_set_d(num.get_mpz_t(), scaled);
    Rational q(num, mpz_class(kRationalizeDenominator));
    q.canonicalize();
    return q;
}

/// Worst-case gap between a rationalized value and its source.
inline Rational rationalize_error_bound() {
    return Rational(mpz_class(1), mpz_class(2 * kRationalizeDenominator)) +
           Rational(mpz_class(1), mpz_class(1'000'000'000'000L));
}

inline Rational min(const Rational &a, const Rational &b) { return a < b ? a : b; }
inline Rational max(const Rational &a, const Rational &b) { return a < b ? b : a; }

} // namespace toposprob
