#pragma once

// Exact rational arithmetic used for every probability mass, memo key and
// Kraft sum. Backed by GMP; only logarithms ever leave exact arithmetic.

#include <gmpxx.h>

#include <cctype>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

namespace mchuff {

using Rational = mpq_class;

inline double to_double(const Rational& r) { return r.get_d(); }

// Natural log of a positive rational. Numerator and denominator are logged
// separately so tiny masses with huge denominators keep full precision.
inline double log_of(const Rational& r) {
  const double num = r.get_num().get_d();
  const double den = r.get_den().get_d();
  if (std::isfinite(num) && std::isfinite(den)) return std::log(num) - std::log(den);
  long num_exp = 0;
  long den_exp = 0;
  const double num_m = mpz_get_d_2exp(&num_exp, r.get_num_mpz_t());
  const double den_m = mpz_get_d_2exp(&den_exp, r.get_den_mpz_t());
  return std::log(num_m) - std::log(den_m) +
         static_cast<double>(num_exp - den_exp) * std::log(2.0);
}

// -p ln p with the 0 ln 0 = 0 convention.
inline double plogp_neg(const Rational& p) {
  if (sgn(p) <= 0) return 0.0;
  return -to_double(p) * log_of(p);
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

// Parses "a/b", a plain integer, or a decimal such as "0.199" or "1.5e-3"
// into an exact rational. Returns nullopt on malformed input.
inline std::optional<Rational> parse_rational(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text.empty()) return std::nullopt;

  auto all_digits = [](std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
  };

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = trim(text.substr(0, slash));
    auto den = trim(text.substr(slash + 1));
    bool negative = false;
    if (!num.empty() && (num.front() == '-' || num.front() == '+')) {
      negative = num.front() == '-';
      num.remove_prefix(1);
    }
    if (!all_digits(num) || !all_digits(den)) return std::nullopt;
    mpz_class n(std::string(num), 10);
    mpz_class d(std::string(den), 10);
    if (d == 0) return std::nullopt;
    Rational r(n, d);
    r.canonicalize();
    if (negative) r = -r;
    return r;
  }

  bool negative = false;
  if (text.front() == '-' || text.front() == '+') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    auto exp_text = text.substr(e + 1);
    bool exp_negative = false;
    if (!exp_text.empty() && (exp_text.front() == '-' || exp_text.front() == '+')) {
      exp_negative = exp_text.front() == '-';
      exp_text.remove_prefix(1);
    }
    if (!all_digits(exp_text) || exp_text.size() > 6) return std::nullopt;
    exponent = std::stol(std::string(exp_text));
    if (exp_negative) exponent = -exponent;
    text = text.substr(0, e);
  }
  std::string digits;
  auto dot = text.find('.');
  auto int_part = text.substr(0, dot);
  std::string_view frac_part;
  if (dot != std::string_view::npos) frac_part = text.substr(dot + 1);
  if (int_part.empty() && frac_part.empty()) return std::nullopt;
  if (!int_part.empty() && !all_digits(int_part)) return std::nullopt;
  if (!frac_part.empty() && !all_digits(frac_part)) return std::nullopt;
  digits.append(int_part);
  digits.append(frac_part);
  exponent -= static_cast<long>(frac_part.size());

  mpz_class mantissa(digits, 10);
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  Rational r = exponent < 0 ? Rational(mantissa, scale) : Rational(mantissa * scale);
  r.canonicalize();
  if (negative) r = -r;
  return r;
}

}  // namespace mchuff
