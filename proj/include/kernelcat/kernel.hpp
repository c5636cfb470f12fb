#pragma once

#include <span>
#include <string>
#include <vector>

#include "kernelcat/partition.hpp"
#include "kernelcat/prob_space.hpp"

namespace krn {

/// Markov kernel between finite spaces: rows(x, y) = k({y} | x). Rows are
/// validated as probability vectors at construction; measure preservation is
/// checked by the operations that need it.
template <class Scalar>
class Kernel {
 public:
  using scalar_type = Scalar;

  Kernel(ProbSpace<Scalar> domain, ProbSpace<Scalar> codomain, Matrix<Scalar> rows)
      : domain_(std::move(domain)), codomain_(std::move(codomain)), rows_(std::move(rows)) {
    if (rows_.rows() != domain_.size() || rows_.cols() != codomain_.size()) {
      throw Error(ErrorCode::SizeMismatch,
                  "kernel matrix is " + std::to_string(rows_.rows()) + "x" + std::to_string(rows_.cols()) +
                      ", spaces are " + std::to_string(domain_.size()) + " -> " +
                      std::to_string(codomain_.size()));
    }
    const double tol = domain_.tolerance();
    for (Index x = 0; x < rows_.rows(); ++x) {
      Scalar total(0);
      for (Index y = 0; y < rows_.cols(); ++y) {
        if (!nearly_leq(Scalar(0), rows_(x, y), tol)) {
          throw Error(ErrorCode::NotStochastic, "negative entry at (" + std::to_string(x) + "," +
                                                    std::to_string(y) + ")");
        }
        total += rows_(x, y);
      }
      if (!nearly_equal(total, Scalar(1), tol)) {
        throw Error(ErrorCode::NotStochastic,
                    "row " + std::to_string(x) + " sums to " + format_scalar(total));
      }
    }
  }

  static Kernel identity(const ProbSpace<Scalar>& space) {
    return Kernel(space, space, Matrix<Scalar>::Identity(space.size(), space.size()));
  }

  const ProbSpace<Scalar>& domain() const { return domain_; }
  const ProbSpace<Scalar>& codomain() const { return codomain_; }
  const Matrix<Scalar>& rows() const { return rows_; }
  const Scalar& operator()(Index x, Index y) const { return rows_(x, y); }

 private:
  ProbSpace<Scalar> domain_;
  ProbSpace<Scalar> codomain_;
  Matrix<Scalar> rows_;
};

/// Kernel from the one-point space picking the measure of `space`.
template <class Scalar>
Kernel<Scalar> kernel_from_measure(const ProbSpace<Scalar>& space) {
  return Kernel<Scalar>(ProbSpace<Scalar>::point(), space, space.weights().transpose());
}

/// First k, then l: rows = k.rows * l.rows.
template <class Scalar>
Kernel<Scalar> compose(const Kernel<Scalar>& k, const Kernel<Scalar>& l) {
  require_same_space(k.codomain(), l.domain(), "compose: codomain of the first kernel is not the domain of the second");
  return Kernel<Scalar>(k.domain(), l.codomain(), k.rows() * l.rows());
}

/// p^T * rows, the image measure of the domain weights.
template <class Scalar>
Vector<Scalar> pushforward(const Kernel<Scalar>& k) {
  return (k.domain().weights().transpose() * k.rows()).transpose();
}

template <class Scalar>
bool is_measure_preserving(const Kernel<Scalar>& k) {
  const Vector<Scalar> image = pushforward(k);
  const double tol = k.domain().tolerance();
  for (Index y = 0; y < image.size(); ++y)
    if (!nearly_equal(image[y], k.codomain().weight(y), tol)) return false;
  return true;
}

template <class Scalar>
void require_measure_preserving(const Kernel<Scalar>& k, const char* what) {
  if (!is_measure_preserving(k)) throw Error(ErrorCode::NotMeasurePreserving, what);
}

namespace detail {

template <class Scalar, class A, class B>
bool rows_as_equal(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b, const ProbSpace<Scalar>& domain) {
  const double tol = domain.tolerance();
  for (Index x = 0; x < a.rows(); ++x) {
    if (!domain.in_support(x)) continue;
    for (Index y = 0; y < a.cols(); ++y)
      if (!nearly_equal(Scalar(a(x, y)), Scalar(b(x, y)), tol)) return false;
  }
  return true;
}

/// Row-by-row check that (a * b) agrees with `target` on the support of
/// `domain`; stops at the first differing row.
template <class Scalar>
bool product_as_equal(const Matrix<Scalar>& a, const Matrix<Scalar>& b, const Matrix<Scalar>& target,
                      const ProbSpace<Scalar>& domain) {
  const double tol = domain.tolerance();
  // nonzero columns of each row of b; idempotent kernels are mostly zero
  std::vector<std::vector<Index>> support(static_cast<std::size_t>(b.rows()));
  for (Index m = 0; m < b.rows(); ++m)
    for (Index y = 0; y < b.cols(); ++y)
      if (b(m, y) != Scalar(0)) support[static_cast<std::size_t>(m)].push_back(y);
  RowVector<Scalar> row(b.cols());
  for (Index x = 0; x < a.rows(); ++x) {
    if (!domain.in_support(x)) continue;
    row.setZero();
    for (Index m = 0; m < a.cols(); ++m) {
      if (a(x, m) == Scalar(0)) continue;
      for (Index y : support[static_cast<std::size_t>(m)]) row[y] += a(x, m) * b(m, y);
    }
    for (Index y = 0; y < row.size(); ++y)
      if (!nearly_equal(row[y], target(x, y), tol)) return false;
  }
  return true;
}

}  // namespace detail

/// Agreement of rows at every outcome of positive probability in the domain.
template <class Scalar>
bool as_equal_kernels(const Kernel<Scalar>& k, const Kernel<Scalar>& h) {
  require_same_space(k.domain(), h.domain(), "a.s. comparison: domains differ");
  require_same_space(k.codomain(), h.codomain(), "a.s. comparison: codomains differ");
  return detail::rows_as_equal(k.rows(), h.rows(), k.domain());
}

/// Largest entrywise difference over supported rows.
template <class Scalar>
Scalar max_row_defect(const Kernel<Scalar>& k, const Kernel<Scalar>& h) {
  require_same_space(k.domain(), h.domain(), "defect: domains differ");
  require_same_space(k.codomain(), h.codomain(), "defect: codomains differ");
  Scalar worst(0);
  for (Index x = 0; x < k.rows().rows(); ++x) {
    if (!k.domain().in_support(x)) continue;
    for (Index y = 0; y < k.rows().cols(); ++y) worst = std::max(worst, Scalar(abs_of(Scalar(k(x, y) - h(x, y)))));
  }
  return worst;
}

/// Replaces rows at null domain outcomes with the codomain weights.
template <class Scalar>
Kernel<Scalar> canonicalize(const Kernel<Scalar>& k) {
  require_measure_preserving(k, "canonicalize");
  Matrix<Scalar> rows = k.rows();
  for (Index x = 0; x < rows.rows(); ++x)
    if (!k.domain().in_support(x)) rows.row(x) = k.codomain().weights().transpose();
  return Kernel<Scalar>(k.domain(), k.codomain(), std::move(rows));
}

/// The Bayesian inverse k+ : (Y, q) -> (X, p),
///   k+(x | y) = k(y | x) p(x) / q(y)   for q(y) > 0,
/// with rows at q-null outcomes set to p. The denominator is the pushforward
/// mass, which equals q(y) exactly in rational mode and keeps float rows
/// normalized.
template <class Scalar>
Kernel<Scalar> bayes_inverse(const Kernel<Scalar>& k) {
  require_measure_preserving(k, "bayes_inverse");
  const Vector<Scalar> mass = pushforward(k);
  const auto& p = k.domain().weights();
  Matrix<Scalar> inv(k.codomain().size(), k.domain().size());
  for (Index y = 0; y < inv.rows(); ++y) {
    if (k.codomain().in_support(y) && mass[y] > Scalar(0)) {
      for (Index x = 0; x < inv.cols(); ++x) inv(y, x) = k(x, y) * p[x] / mass[y];
    } else {
      inv.row(y) = p.transpose();
    }
  }
  return Kernel<Scalar>(k.codomain(), k.domain(), std::move(inv));
}

/// delta_f(B | x) = 1_B(f(x)). Requires f to push p onto q.
template <class Scalar>
Kernel<Scalar> deterministic_from_function(std::span<const Index> f, const ProbSpace<Scalar>& domain,
                                           const ProbSpace<Scalar>& codomain) {
  if (static_cast<Index>(f.size()) != domain.size()) {
    throw Error(ErrorCode::SizeMismatch, "function table size differs from domain size");
  }
  Matrix<Scalar> rows = Matrix<Scalar>::Zero(domain.size(), codomain.size());
  for (Index x = 0; x < domain.size(); ++x) {
    Index y = f[static_cast<std::size_t>(x)];
    if (y < 0 || y >= codomain.size()) throw Error(ErrorCode::SizeMismatch, "function value out of range");
    rows(x, y) = Scalar(1);
  }
  Kernel<Scalar> k(domain, codomain, std::move(rows));
  require_measure_preserving(k, "deterministic_from_function: f does not push p onto q");
  return k;
}

template <class Scalar>
Kernel<Scalar> deterministic_from_function(std::initializer_list<Index> f, const ProbSpace<Scalar>& domain,
                                           const ProbSpace<Scalar>& codomain) {
  return deterministic_from_function(std::span<const Index>(f.begin(), f.size()), domain, codomain);
}

/// Quotient of a space by a partition together with the block-collapse map
/// pi and its Bayesian inverse pi_dag (the conditional distributions).
template <class Scalar>
struct Coarsening {
  ProbSpace<Scalar> quotient;
  Kernel<Scalar> pi;
  Kernel<Scalar> pi_dag;
};

template <class Scalar>
ProbSpace<Scalar> quotient_space(const ProbSpace<Scalar>& space, const Partition& part) {
  if (part.parent_size() != static_cast<std::size_t>(space.size())) {
    throw Error(ErrorCode::SizeMismatch, "partition and space sizes differ");
  }
  Vector<Scalar> w = Vector<Scalar>::Zero(static_cast<Index>(part.num_blocks()));
  for (Index x = 0; x < space.size(); ++x) w[static_cast<Index>(part.block_of(static_cast<std::size_t>(x)))] += space.weight(x);
  return ProbSpace<Scalar>(std::move(w), space.tolerance());
}

template <class Scalar>
Coarsening<Scalar> coarsening_kernel(const ProbSpace<Scalar>& space, const Partition& part) {
  ProbSpace<Scalar> quotient = quotient_space(space, part);
  std::vector<Index> collapse(static_cast<std::size_t>(space.size()));
  for (std::size_t x = 0; x < collapse.size(); ++x) collapse[x] = static_cast<Index>(part.block_of(x));
  Kernel<Scalar> pi = deterministic_from_function(std::span<const Index>(collapse), space, quotient);
  Kernel<Scalar> pi_dag = bayes_inverse(pi);
  return {std::move(quotient), std::move(pi), std::move(pi_dag)};
}

/// Every supported row is a point mass (0/1 entries).
template <class Scalar>
bool has_deterministic_rows(const Kernel<Scalar>& k) {
  const double tol = k.domain().tolerance();
  for (Index x = 0; x < k.rows().rows(); ++x) {
    if (!k.domain().in_support(x)) continue;
    for (Index y = 0; y < k.rows().cols(); ++y)
      if (!nearly_zero(k(x, y), tol) && !nearly_equal(k(x, y), Scalar(1), tol)) return false;
  }
  return true;
}

/// k after k+ is the identity on the codomain almost surely.
template <class Scalar>
bool is_as_deterministic(const Kernel<Scalar>& k) {
  require_measure_preserving(k, "is_as_deterministic");
  Kernel<Scalar> round_trip = compose(bayes_inverse(k), k);
  return as_equal_kernels(round_trip, Kernel<Scalar>::identity(k.codomain()));
}

/// Convex mixture (1 - t) k + t h of kernels between the same spaces.
template <class Scalar>
Kernel<Scalar> mix(const Kernel<Scalar>& k, const Kernel<Scalar>& h, const Scalar& t) {
  require_same_space(k.domain(), h.domain(), "mix: domains differ");
  require_same_space(k.codomain(), h.codomain(), "mix: codomains differ");
  return Kernel<Scalar>(k.domain(), k.codomain(), (Scalar(1) - t) * k.rows() + t * h.rows());
}

/// Joint distribution on X x Y with marginals p and q.
template <class Scalar>
class Coupling {
 public:
  Coupling(Matrix<Scalar> table, double tolerance = kDefaultTolerance)
      : table_(std::move(table)),
        domain_(Vector<Scalar>(table_.rowwise().sum()), tolerance),
        codomain_(Vector<Scalar>(table_.colwise().sum().transpose()), tolerance) {
    for (Index i = 0; i < table_.rows(); ++i)
      for (Index j = 0; j < table_.cols(); ++j)
        if (table_(i, j) < Scalar(0)) throw Error(ErrorCode::NegativeWeight, "negative coupling entry");
  }

  const Matrix<Scalar>& table() const { return table_; }
  const ProbSpace<Scalar>& domain() const { return domain_; }
  const ProbSpace<Scalar>& codomain() const { return codomain_; }

 private:
  Matrix<Scalar> table_;
  ProbSpace<Scalar> domain_;
  ProbSpace<Scalar> codomain_;
};

/// c(A x B) = integral over A of k(B | x) p(dx).
template <class Scalar>
Coupling<Scalar> to_coupling(const Kernel<Scalar>& k) {
  require_measure_preserving(k, "to_coupling");
  return Coupling<Scalar>(k.domain().weights().asDiagonal() * k.rows(), k.domain().tolerance());
}

/// Conditions a coupling on its first coordinate; null rows get the second
/// marginal.
template <class Scalar>
Kernel<Scalar> from_coupling(const Coupling<Scalar>& c) {
  const auto& p = c.domain();
  Matrix<Scalar> rows(c.table().rows(), c.table().cols());
  for (Index x = 0; x < rows.rows(); ++x) {
    if (p.in_support(x)) {
      rows.row(x) = c.table().row(x) / p.weight(x);
    } else {
      rows.row(x) = c.codomain().weights().transpose();
    }
  }
  return Kernel<Scalar>(p, c.codomain(), std::move(rows));
}

}  // namespace krn
