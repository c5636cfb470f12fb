#pragma once

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Dense>

#include "kernelcat/errors.hpp"

namespace krn {

/// Exact arithmetic scalar. Expression templates are disabled so that Eigen
/// sees a plain value type.
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

using Index = Eigen::Index;

template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <class Scalar>
using RowVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

template <class Scalar>
inline constexpr bool is_exact_v = false;
template <>
inline constexpr bool is_exact_v<Rational> = true;

inline constexpr double kDefaultTolerance = 1e-9;

/// Float mode compares within `tolerance`; rational mode compares exactly.
struct NumericMode {
  enum class Kind { Float, Rational };

  Kind kind = Kind::Float;
  double tolerance = kDefaultTolerance;

  static NumericMode floating(double tol = kDefaultTolerance) { return {Kind::Float, tol}; }
  static NumericMode rational() { return {Kind::Rational, 0.0}; }

  bool exact() const { return kind == Kind::Rational; }
};

template <class Scalar>
Scalar abs_of(const Scalar& x) {
  if constexpr (is_exact_v<Scalar>) {
    return boost::multiprecision::abs(x);
  } else {
    return std::abs(x);
  }
}

template <class Scalar>
double to_double(const Scalar& x) {
  if constexpr (is_exact_v<Scalar>) {
    return x.template convert_to<double>();
  } else {
    return static_cast<double>(x);
  }
}

/// `num/den` as a Scalar. Exact for Rational.
template <class Scalar>
Scalar ratio(std::int64_t num, std::int64_t den = 1) {
  if constexpr (is_exact_v<Scalar>) {
    return Rational(num, den);
  } else {
    return static_cast<Scalar>(num) / static_cast<Scalar>(den);
  }
}

/// Inexact values (roots) re-enter rational mode through their double value.
template <class Scalar>
Scalar from_double(double x) {
  return Scalar(x);
}

template <class Scalar>
bool nearly_equal(const Scalar& a, const Scalar& b, double tol) {
  if constexpr (is_exact_v<Scalar>) {
    return a == b;
  } else {
    return std::abs(a - b) <= tol;
  }
}

template <class Scalar>
bool nearly_zero(const Scalar& a, double tol) {
  return nearly_equal(a, Scalar(0), tol);
}

/// a <= b up to tolerance.
template <class Scalar>
bool nearly_leq(const Scalar& a, const Scalar& b, double tol) {
  if constexpr (is_exact_v<Scalar>) {
    return a <= b;
  } else {
    return a <= b + tol;
  }
}

template <class Scalar>
Scalar root_of(const Scalar& x, unsigned n) {
  if (n == 1 || x == Scalar(0)) return x;
  if constexpr (is_exact_v<Scalar>) {
    return from_double<Scalar>(std::pow(to_double(x), 1.0 / n));
  } else {
    return n == 2 ? std::sqrt(x) : std::pow(x, Scalar(1) / Scalar(n));
  }
}

/// Rationals print as `num/den` (or `num`); doubles round-trip with 17 digits.
template <class Scalar>
std::string format_scalar(const Scalar& x) {
  if constexpr (is_exact_v<Scalar>) {
    return x.str();
  } else {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", static_cast<double>(x));
    return buf;
  }
}

namespace detail {

// Decimal or scientific literal as an exact rational: "-1.25e-3" -> -1/800.
Rational parse_decimal_exact(std::string_view text);

}  // namespace detail

/// Accepts `num/den`, integers and decimal literals in both modes.
template <class Scalar>
Scalar parse_scalar(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw Error(ErrorCode::ParseError, "empty scalar");
  Rational exact;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational num = detail::parse_decimal_exact(text.substr(0, slash));
    Rational den = detail::parse_decimal_exact(text.substr(slash + 1));
    if (den == 0) throw Error(ErrorCode::ParseError, "zero denominator in '" + std::string(text) + "'");
    exact = num / den;
  } else {
    if constexpr (!is_exact_v<Scalar>) {
      std::string owned(text);
      char* end = nullptr;
      double v = std::strtod(owned.c_str(), &end);
      if (end != owned.c_str() + owned.size()) {
        throw Error(ErrorCode::ParseError, "not a number: '" + owned + "'");
      }
      return static_cast<Scalar>(v);
    }
    exact = detail::parse_decimal_exact(text);
  }
  if constexpr (is_exact_v<Scalar>) {
    return exact;
  } else {
    return static_cast<Scalar>(exact.convert_to<double>());
  }
}

}  // namespace krn
