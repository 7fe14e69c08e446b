#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>

namespace cgjlp {

/// Exact rational scalar. Expression templates are disabled so that `auto`
/// and generic code behave exactly like with `double`.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

enum class Arithmetic { Float, Rational };

class NumberFormatError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline Rational pow10(int e) {
  Rational r{1};
  const Rational ten{10};
  for (int i = 0; i < e; ++i) r *= ten;
  return r;
}

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

}  // namespace detail

/// Parses "12", "-0.83", "1.5e-3" or "1/3" exactly.
inline Rational parse_rational(std::string_view text) {
  std::string_view s = text;
  auto fail = [&] { throw NumberFormatError("not a number: '" + std::string(text) + "'"); };
  if (s.empty()) fail();

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    Rational num = parse_rational(s.substr(0, slash));
    std::string_view den_text = s.substr(slash + 1);
    if (!detail::all_digits(den_text)) fail();
    Rational den = parse_rational(den_text);
    if (den == 0) throw NumberFormatError("zero denominator: '" + std::string(text) + "'");
    return num / den;
  }

  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  int exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = s.substr(e + 1);
    if (!exp_text.empty() && exp_text.front() == '+') exp_text.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(exp_text.data(), exp_text.data() + exp_text.size(), exponent);
    if (ec != std::errc{} || ptr != exp_text.data() + exp_text.size()) fail();
    s = s.substr(0, e);
  }
  std::string digits;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    std::string_view ip = s.substr(0, dot), fp = s.substr(dot + 1);
    if ((ip.empty() && fp.empty()) || (!ip.empty() && !detail::all_digits(ip)) ||
        (!fp.empty() && !detail::all_digits(fp)))
      fail();
    digits = std::string(ip) + std::string(fp);
    exponent -= static_cast<int>(fp.size());
  } else {
    if (!detail::all_digits(s)) fail();
    digits = std::string(s);
  }
  if (digits.empty()) fail();
  // mpz would read a leading 0 as an octal prefix.
  digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
  if (std::abs(exponent) > 4000) fail();

  Rational value{boost::multiprecision::mpz_int(digits)};
  if (exponent > 0) value *= detail::pow10(exponent);
  if (exponent < 0) value /= detail::pow10(-exponent);
  return negative ? Rational(-value) : value;
}

/// Shortest decimal text that round-trips `v`; used to recover the decimal
/// literal behind a binary double (0.83 -> "0.83").
inline std::string shortest_decimal(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

/// Uniform interface over the two supported scalar types.
template <typename T>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static constexpr Arithmetic kind = Arithmetic::Float;
  static constexpr double default_epsilon() { return 1e-9; }
  static double from_rational(const Rational& r) { return r.convert_to<double>(); }
  static double to_double(double v) { return v; }
  static double abs(double v) { return std::fabs(v); }
  static bool finite(double v) { return std::isfinite(v); }
  static std::string exact_text(double v) { return shortest_decimal(v); }
};

template <>
struct ScalarTraits<Rational> {
  static constexpr Arithmetic kind = Arithmetic::Rational;
  static Rational default_epsilon() { return Rational{0}; }
  static Rational from_rational(const Rational& r) { return r; }
  static double to_double(const Rational& v) { return v.convert_to<double>(); }
  static Rational abs(const Rational& v) { return v < 0 ? Rational(-v) : v; }
  static bool finite(const Rational&) { return true; }
  static std::string exact_text(const Rational& v) { return v.str(); }
};

template <typename T>
concept Scalar = requires { ScalarTraits<T>::kind; };

/// Zero / sign tests against an absolute tolerance. With a rational scalar and
/// epsilon 0 these are exact.
template <Scalar T>
struct Tolerance {
  T epsilon{};

  [[nodiscard]] bool is_zero(const T& v) const { return ScalarTraits<T>::abs(v) <= epsilon; }
  [[nodiscard]] bool is_positive(const T& v) const { return v > epsilon; }
  [[nodiscard]] bool is_negative(const T& v) const { return v < -epsilon; }
  [[nodiscard]] int sign(const T& v) const { return is_positive(v) ? 1 : (is_negative(v) ? -1 : 0); }
};

template <Scalar T>
T make_epsilon(double eps) {
  if constexpr (std::is_same_v<T, double>) {
    return eps;
  } else {
    return eps == 0.0 ? T{0} : parse_rational(shortest_decimal(eps));
  }
}

/// Fixed 4-decimal rendering (the trace display format); negative zero is
/// normalised so that "-0.0000" never appears.
template <Scalar T>
std::string format_fixed(const T& v, int decimals = 4) {
  double d = ScalarTraits<T>::to_double(v);
  double half_ulp = 0.5 * std::pow(10.0, -decimals);
  if (std::fabs(d) < half_ulp) d = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, d);
  return buf;
}

/// Full-precision rendering: "p/q" for rationals, 17 significant digits for doubles.
template <Scalar T>
std::string format_full(const T& v) {
  if constexpr (std::is_same_v<T, double>) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  } else {
    return v.str();
  }
}

}  // namespace cgjlp
