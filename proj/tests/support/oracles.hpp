#pragma once

// Brute-force reference implementations used by the unit and acceptance
// tests. They follow the definitions literally and share no code with the
// library beyond the data types.

#include <bit>
#include <cstdint>
#include <vector>

#include "kernelcat/kernelcat.hpp"

namespace oracle {

using krn::Index;

/// Exact integer numerators over a common denominator, so that subset sums
/// of rationals reduce to integer additions.
inline std::vector<boost::multiprecision::mpz_int> common_numerators(const std::vector<krn::Rational>& values) {
  using boost::multiprecision::mpz_int;
  mpz_int den = 1;
  for (const auto& v : values) den = boost::multiprecision::lcm(den, mpz_int(denominator(v)));
  std::vector<mpz_int> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(mpz_int(numerator(v)) * (den / mpz_int(denominator(v))));
  return out;
}

/// One (A, B) pair, as bit masks.
template <class Scalar>
bool inversion_identity_holds(const krn::Kernel<Scalar>& k, const krn::Kernel<Scalar>& kinv, std::uint64_t a,
                        std::uint64_t b, double tol) {
  Scalar lhs(0), rhs(0);
  for (Index x = 0; x < k.domain().size(); ++x) {
    if (!((a >> x) & 1u)) continue;
    for (Index y = 0; y < k.codomain().size(); ++y)
      if ((b >> y) & 1u) lhs += k.domain().weight(x) * k(x, y);
  }
  for (Index y = 0; y < k.codomain().size(); ++y) {
    if (!((b >> y) & 1u)) continue;
    for (Index x = 0; x < k.domain().size(); ++x)
      if ((a >> x) & 1u) rhs += k.codomain().weight(y) * kinv(y, x);
  }
  return krn::nearly_equal(lhs, rhs, tol);
}

/// Checks  sum_{x in A} p(x) k(B|x) = sum_{y in B} q(y) kinv(A|y)  for every
/// subset A of X and B of Y. Returns the number of failing pairs.
template <class Scalar>
std::uint64_t inversion_identity_failures(const krn::Kernel<Scalar>& k, const krn::Kernel<Scalar>& kinv, double tol) {
  const auto n = static_cast<std::size_t>(k.domain().size());
  const auto m = static_cast<std::size_t>(k.codomain().size());
  // lhs(x, y) = p(x) k(y|x),  rhs(x, y) = q(y) kinv(x|y)
  if constexpr (krn::is_exact_v<Scalar>) {
    std::vector<krn::Rational> all;
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < m; ++y) {
        all.push_back(k.domain().weight(Index(x)) * k(Index(x), Index(y)));
        all.push_back(k.codomain().weight(Index(y)) * kinv(Index(y), Index(x)));
      }
    auto ints = common_numerators(all);
    using boost::multiprecision::mpz_int;
    // column sums over A, built incrementally by lowest set bit
    std::vector<std::vector<mpz_int>> left(std::size_t{1} << n, std::vector<mpz_int>(m)),
        right(std::size_t{1} << n, std::vector<mpz_int>(m));
    for (std::size_t a = 1; a < left.size(); ++a) {
      const std::size_t low = static_cast<std::size_t>(std::countr_zero(a));
      const std::size_t rest = a & (a - 1);
      for (std::size_t y = 0; y < m; ++y) {
        left[a][y] = left[rest][y] + ints[2 * (low * m + y)];
        right[a][y] = right[rest][y] + ints[2 * (low * m + y) + 1];
      }
    }
    std::uint64_t failures = 0;
    std::vector<mpz_int> l(std::size_t{1} << m), r(std::size_t{1} << m);
    for (std::size_t a = 0; a < left.size(); ++a) {
      for (std::size_t b = 1; b < l.size(); ++b) {
        const std::size_t low = static_cast<std::size_t>(std::countr_zero(b));
        l[b] = l[b & (b - 1)] + left[a][low];
        r[b] = r[b & (b - 1)] + right[a][low];
      }
      for (std::size_t b = 0; b < l.size(); ++b) failures += l[b] != r[b];
    }
    return failures;
  } else {
    std::uint64_t failures = 0;
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << n); ++a)
      for (std::uint64_t b = 0; b < (std::uint64_t{1} << m); ++b)
        failures += !inversion_identity_holds(k, kinv, a, b, tol);
    return failures;
  }
}

/// B is almost surely invariant: e(B|x) = 1_B(x) for every supported x.
template <class Scalar>
bool is_invariant_set(const krn::Kernel<Scalar>& e, std::uint64_t b) {
  const auto& space = e.domain();
  for (Index x = 0; x < space.size(); ++x) {
    if (!space.in_support(x)) continue;
    Scalar mass(0);
    for (Index y = 0; y < space.size(); ++y)
      if ((b >> y) & 1u) mass += e(x, y);
    const Scalar expected = ((b >> x) & 1u) ? Scalar(1) : Scalar(0);
    if (!krn::nearly_equal(mass, expected, space.tolerance())) return false;
  }
  return true;
}

/// Atoms of the sigma-algebra of all invariant subsets, found by testing
/// every subset of the outcomes.
template <class Scalar>
krn::Partition invariant_partition_by_subsets(const krn::Kernel<Scalar>& e) {
  const auto n = static_cast<std::size_t>(e.domain().size());
  // together[x][y]: no invariant set separates x from y
  std::vector<std::vector<bool>> together(n, std::vector<bool>(n, true));
  for (std::uint64_t b = 0; b < (std::uint64_t{1} << n); ++b) {
    if (!is_invariant_set(e, b)) continue;
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        if (((b >> x) & 1u) != ((b >> y) & 1u)) together[x][y] = false;
  }
  std::vector<std::size_t> labels(n);
  for (std::size_t x = 0; x < n; ++x) {
    labels[x] = x;
    for (std::size_t y = 0; y < x; ++y)
      if (together[x][y]) {
        labels[x] = labels[y];
        break;
      }
  }
  return krn::Partition::from_labels(labels);
}

/// e(B|x) for a subset mask.
template <class Scalar>
Scalar set_mass(const krn::Kernel<Scalar>& k, Index x, std::uint64_t b) {
  Scalar mass(0);
  for (Index y = 0; y < k.codomain().size(); ++y)
    if ((b >> y) & 1u) mass += k(x, y);
  return mass;
}

}  // namespace oracle
