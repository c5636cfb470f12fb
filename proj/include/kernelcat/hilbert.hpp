#pragma once

#include <cmath>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "kernelcat/random_var.hpp"
#include "kernelcat/topology.hpp"

namespace krn::hilbert {

template <class Real>
using Mat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
template <class Real>
using Vec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

inline constexpr double kRankTolerance = 1e-8;

/// Norm of a vector of R^d under the chosen value norm.
template <class Real, class Derived>
Real vector_norm(const Eigen::MatrixBase<Derived>& v, VectorNorm norm) {
  switch (norm) {
    case VectorNorm::Max: return v.size() ? v.cwiseAbs().maxCoeff() : Real(0);
    case VectorNorm::One: return v.cwiseAbs().sum();
    case VectorNorm::Euclidean:
    default: return v.norm();
  }
}

/// Operator norm induced by the value norm on both sides.
template <class Real>
Real operator_norm(const Mat<Real>& m, VectorNorm norm) {
  if (m.size() == 0) return Real(0);
  switch (norm) {
    case VectorNorm::Max: return m.cwiseAbs().rowwise().sum().maxCoeff();
    case VectorNorm::One: return m.cwiseAbs().colwise().sum().maxCoeff();
    case VectorNorm::Euclidean:
    default: return Eigen::JacobiSVD<Mat<Real>>(m).singularValues()(0);
  }
}

/// Subspace of R^d carried by an orthonormal basis (columns).
template <class Real = double>
class Subspace {
 public:
  Subspace(Mat<Real> basis, Index ambient_dim) : basis_(std::move(basis)) {
    if (basis_.cols() == 0) basis_.resize(ambient_dim, 0);
    if (basis_.rows() != ambient_dim) throw Error(ErrorCode::DimMismatch, "basis rows differ from ambient dimension");
    if (basis_.cols() == 0) return;
    const Mat<Real> gram = basis_.transpose() * basis_;
    if ((gram - Mat<Real>::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() > kRankTolerance) {
      throw Error(ErrorCode::NotOrthonormal, "basis Gram matrix is not the identity");
    }
  }

  /// Orthonormal basis of the column span: modified Gram-Schmidt with column
  /// pivoting and a second orthogonalization pass; columns whose residual
  /// norm drops below `rank_tol` are discarded.
  static Subspace span(const Mat<Real>& vectors, Real rank_tol = Real(kRankTolerance)) {
    const Index d = vectors.rows();
    Mat<Real> work = vectors;
    std::vector<bool> used(static_cast<std::size_t>(work.cols()), false);
    Mat<Real> basis(d, 0);
    while (basis.cols() < d) {
      Index best = -1;
      Real best_norm = rank_tol;
      for (Index j = 0; j < work.cols(); ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const Real nrm = work.col(j).norm();
        if (nrm > best_norm) {
          best_norm = nrm;
          best = j;
        }
      }
      if (best < 0) break;
      used[static_cast<std::size_t>(best)] = true;
      Vec<Real> q = work.col(best);
      for (int pass = 0; pass < 2; ++pass)
        for (Index c = 0; c < basis.cols(); ++c) q -= basis.col(c).dot(q) * basis.col(c);
      const Real nrm = q.norm();
      if (nrm <= rank_tol) continue;
      q /= nrm;
      basis.conservativeResize(d, basis.cols() + 1);
      basis.col(basis.cols() - 1) = q;
      for (Index j = 0; j < work.cols(); ++j)
        if (!used[static_cast<std::size_t>(j)]) work.col(j) -= q.dot(work.col(j)) * q;
    }
    return Subspace(std::move(basis), d);
  }

  static Subspace zero(Index d) { return Subspace(Mat<Real>(d, 0), d); }
  static Subspace full(Index d) { return Subspace(Mat<Real>::Identity(d, d), d); }

  /// Span of the standard basis vectors with the given indices.
  static Subspace coordinate(Index d, std::span<const Index> axes) {
    Mat<Real> b = Mat<Real>::Zero(d, static_cast<Index>(axes.size()));
    for (std::size_t c = 0; c < axes.size(); ++c) b(axes[c], static_cast<Index>(c)) = Real(1);
    return Subspace(std::move(b), d);
  }
  static Subspace coordinate(Index d, std::initializer_list<Index> axes) {
    return coordinate(d, std::span<const Index>(axes.begin(), axes.size()));
  }

  const Mat<Real>& basis() const { return basis_; }
  Index dim() const { return basis_.cols(); }
  Index ambient_dim() const { return basis_.rows(); }

  bool contains(const Vec<Real>& x, Real tol = Real(kRankTolerance)) const {
    return (x - basis_ * (basis_.transpose() * x)).norm() <= tol * std::max(Real(1), x.norm());
  }

 private:
  Mat<Real> basis_;
};

/// Self-adjoint idempotent d x d matrix.
template <class Real = double>
class Projector {
 public:
  explicit Projector(Mat<Real> m, Real tol = Real(kRankTolerance)) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw Error(ErrorCode::DimMismatch, "projector must be square");
    if ((m_ * m_ - m_).cwiseAbs().maxCoeff() > tol) throw Error(ErrorCode::NotIdempotent, "P * P != P");
    if ((m_ - m_.transpose()).cwiseAbs().maxCoeff() > tol) {
      throw Error(ErrorCode::NotIdempotent, "projector is not self-adjoint");
    }
  }

  const Mat<Real>& matrix() const { return m_; }
  Index dim() const { return m_.rows(); }
  Vec<Real> apply(const Vec<Real>& x) const { return m_ * x; }
  Subspace<Real> image() const { return Subspace<Real>::span(m_); }

 private:
  Mat<Real> m_;
};

/// P = sum_i u_i u_i^T over the orthonormal basis.
template <class Real>
Projector<Real> orthogonal_projector(const Subspace<Real>& s) {
  return Projector<Real>(s.basis() * s.basis().transpose());
}

/// P1 <= P2 iff P1 P2 = P2 P1 = P1.
template <class Real>
bool projector_leq(const Projector<Real>& p1, const Projector<Real>& p2, Real tol = Real(kRankTolerance)) {
  if (p1.dim() != p2.dim()) throw Error(ErrorCode::DimMismatch, "projectors of different dimension");
  const auto& a = p1.matrix();
  const auto& b = p2.matrix();
  return (a * b - a).cwiseAbs().maxCoeff() <= tol && (b * a - a).cwiseAbs().maxCoeff() <= tol;
}

/// Every basis vector of `inner` lies in `outer`.
template <class Real>
bool subspace_included(const Subspace<Real>& inner, const Subspace<Real>& outer, Real tol = Real(kRankTolerance)) {
  if (inner.ambient_dim() != outer.ambient_dim()) throw Error(ErrorCode::DimMismatch, "subspaces of different ambient spaces");
  for (Index c = 0; c < inner.dim(); ++c)
    if (!outer.contains(inner.basis().col(c), tol)) return false;
  return true;
}

/// How far x - P x is from being the closest-point residual: the Pythagoras
/// defect ||x||^2 - ||coeffs||^2 - ||x - P x||^2 and the leak of the residual
/// back into S.
template <class Real>
Real closest_point_defect(const Subspace<Real>& s, const Vec<Real>& x) {
  if (x.size() != s.ambient_dim()) throw Error(ErrorCode::DimMismatch, "probe dimension");
  // Pythagoras and orthogonality of the residual, both in squared form so
  // that probes inside the subspace do not lose half the digits to a sqrt.
  const Vec<Real> coeffs = s.basis().transpose() * x;
  const Vec<Real> residual = x - orthogonal_projector(s).apply(x);
  const Real pythagoras = std::abs(residual.squaredNorm() + coeffs.squaredNorm() - x.squaredNorm());
  const Real leak = s.dim() == 0 ? Real(0) : Vec<Real>(s.basis().transpose() * residual).cwiseAbs().maxCoeff();
  return std::max(pythagoras, leak);
}

enum class ChainOrder { Increasing, Decreasing };

template <class Real>
void require_chain(std::span<const Subspace<Real>> chain, ChainOrder order) {
  if (chain.empty()) throw Error(ErrorCode::NotAChain, "empty chain");
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    const bool ok = order == ChainOrder::Increasing ? subspace_included(chain[i], chain[i + 1])
                                                    : subspace_included(chain[i + 1], chain[i]);
    if (!ok) throw Error(ErrorCode::NotAChain, "subspace " + std::to_string(i) + " breaks the chain");
  }
}

/// Closed span of the union of an increasing chain.
template <class Real>
Subspace<Real> chain_sup(std::span<const Subspace<Real>> chain) {
  require_chain(chain, ChainOrder::Increasing);
  const Index d = chain.front().ambient_dim();
  Index cols = 0;
  for (const auto& s : chain) cols += s.dim();
  Mat<Real> all(d, cols);
  Index at = 0;
  for (const auto& s : chain) {
    all.middleCols(at, s.dim()) = s.basis();
    at += s.dim();
  }
  return Subspace<Real>::span(all);
}

/// Intersection of a decreasing chain: the null space of sum_i (I - P_i).
template <class Real>
Subspace<Real> chain_inf(std::span<const Subspace<Real>> chain) {
  require_chain(chain, ChainOrder::Decreasing);
  const Index d = chain.front().ambient_dim();
  Mat<Real> complement_sum = Mat<Real>::Zero(d, d);
  for (const auto& s : chain) complement_sum += Mat<Real>::Identity(d, d) - orthogonal_projector(s).matrix();
  Eigen::SelfAdjointEigenSolver<Mat<Real>> eig(complement_sum);
  std::vector<Index> kernel_cols;
  for (Index i = 0; i < d; ++i)
    if (std::abs(eig.eigenvalues()(i)) <= Real(kRankTolerance)) kernel_cols.push_back(i);
  Mat<Real> b(d, static_cast<Index>(kernel_cols.size()));
  for (std::size_t c = 0; c < kernel_cols.size(); ++c) b.col(static_cast<Index>(c)) = eig.eigenvectors().col(kernel_cols[c]);
  return Subspace<Real>::span(b);
}

/// Residuals || e_step(x) - e(x) || for every probe x along a chain, where e
/// is the projector onto the chain's supremum or infimum.
template <class Real>
struct LeviDemoReport {
  std::vector<std::vector<Real>> residuals;  // [step][probe]
  ConvergenceReport<Real> summary;           // max over probes per step
  VectorNorm norm = VectorNorm::Euclidean;
};

template <class Real>
LeviDemoReport<Real> levi_demo(std::span<const Subspace<Real>> chain, const Mat<Real>& probes, ChainOrder order,
                               double tol = kDefaultTolerance) {
  const Subspace<Real> limit = order == ChainOrder::Increasing ? chain_sup(chain) : chain_inf(chain);
  if (probes.rows() != limit.ambient_dim()) throw Error(ErrorCode::DimMismatch, "probe dimension");
  const Mat<Real> target = orthogonal_projector(limit).matrix() * probes;
  LeviDemoReport<Real> report;
  std::vector<Real> worst;
  for (const auto& s : chain) {
    const Mat<Real> diff = orthogonal_projector(s).matrix() * probes - target;
    std::vector<Real> row(static_cast<std::size_t>(probes.cols()));
    Real w(0);
    for (Index j = 0; j < probes.cols(); ++j) {
      row[static_cast<std::size_t>(j)] = diff.col(j).norm();
      w = std::max(w, row[static_cast<std::size_t>(j)]);
    }
    report.residuals.push_back(std::move(row));
    worst.push_back(w);
  }
  report.summary = make_report(std::move(worst), tol, "projector-residual");
  return report;
}

template <class Real>
LeviDemoReport<Real> levi_up_demo(std::span<const Subspace<Real>> chain, const Mat<Real>& probes,
                                  double tol = kDefaultTolerance) {
  return levi_demo(chain, probes, ChainOrder::Increasing, tol);
}

template <class Real>
LeviDemoReport<Real> levi_down_demo(std::span<const Subspace<Real>> chain, const Mat<Real>& probes,
                                    double tol = kDefaultTolerance) {
  return levi_demo(chain, probes, ChainOrder::Decreasing, tol);
}

/// Probe set: the user's probes, then the standard basis (so the probes
/// always span R^d), then `random_count` columns drawn by `draw()`.
template <class Real, class Draw>
Mat<Real> probe_set(const Mat<Real>& user, Index d, Index random_count, Draw&& draw) {
  const Index user_cols = user.size() ? user.cols() : 0;
  Mat<Real> out(d, user_cols + d + random_count);
  if (user_cols) out.leftCols(user_cols) = user;
  out.middleCols(user_cols, d) = Mat<Real>::Identity(d, d);
  for (Index j = 0; j < random_count; ++j)
    for (Index i = 0; i < d; ++i) out(i, user_cols + d + j) = draw();
  return out;
}

/// CSV columns: step,probe_id,residual_norm,norm_kind.
template <class Real>
void write_probe_csv(std::ostream& out, const LeviDemoReport<Real>& r, bool header = true) {
  if (header) out << "step,probe_id,residual_norm,norm_kind\n";
  for (std::size_t s = 0; s < r.residuals.size(); ++s)
    for (std::size_t j = 0; j < r.residuals[s].size(); ++j)
      out << s << ',' << j << ',' << format_scalar(r.residuals[s][j]) << ',' << to_string(r.norm) << '\n';
}

/// e_i on R^N: zeroes the first i coordinates.
template <class Real = double>
Mat<Real> truncation_projector(Index n, Index i) {
  Mat<Real> m = Mat<Real>::Identity(n, n);
  for (Index c = 0; c < std::min(i, n); ++c) m(c, c) = Real(0);
  return m;
}

/// Norms of e_i(f) for i = 0..N along the truncation chain, under the sup
/// norm and the Euclidean norm. Index N is the intersection {0}.
template <class Real = double>
struct BanachReport {
  Index dimension = 0;
  std::vector<Real> sup_norms;
  std::vector<Real> euclidean_norms;
  /// The sup norm stays at its initial value through i = N - 1.
  bool sup_plateau = false;
  /// The Euclidean norm is strictly decreasing to 0.
  bool euclidean_decreasing = false;
};

template <class Real = double>
BanachReport<Real> banach_counterexample(Index n, const Vec<Real>& probe) {
  if (n < 2) throw Error(ErrorCode::ConfigError, "truncation chain needs dimension >= 2");
  if (probe.size() != n) throw Error(ErrorCode::DimMismatch, "probe dimension");
  BanachReport<Real> r;
  r.dimension = n;
  for (Index i = 0; i <= n; ++i) {
    const Vec<Real> image = truncation_projector<Real>(n, i) * probe;
    r.sup_norms.push_back(vector_norm<Real>(image, VectorNorm::Max));
    r.euclidean_norms.push_back(vector_norm<Real>(image, VectorNorm::Euclidean));
  }
  r.sup_plateau = true;
  for (Index i = 1; i < n; ++i) r.sup_plateau = r.sup_plateau && r.sup_norms[static_cast<std::size_t>(i)] == r.sup_norms[0];
  r.euclidean_decreasing = r.euclidean_norms.back() == Real(0);
  for (Index i = 0; i < n; ++i) {
    r.euclidean_decreasing = r.euclidean_decreasing &&
                             r.euclidean_norms[static_cast<std::size_t>(i + 1)] < r.euclidean_norms[static_cast<std::size_t>(i)];
  }
  return r;
}

template <class Real = double>
BanachReport<Real> banach_counterexample(Index n) {
  return banach_counterexample<Real>(n, Vec<Real>::Ones(n));
}

/// CSV in the probe layout, one row per (step, norm) for the single probe.
template <class Real>
void write_banach_csv(std::ostream& out, const BanachReport<Real>& r) {
  out << "step,probe_id,residual_norm,norm_kind\n";
  for (std::size_t i = 0; i < r.sup_norms.size(); ++i) out << i << ",0," << format_scalar(r.sup_norms[i]) << ",max\n";
  for (std::size_t i = 0; i < r.euclidean_norms.size(); ++i)
    out << i << ",0," << format_scalar(r.euclidean_norms[i]) << ",euclidean\n";
}

/// lim_mu || pi_{start, mu}(a) || along a chain of 1-Lipschitz surjections,
/// where maps[i] sends A_i onto A_{i+1}. At finite length the limit is the
/// value at the last map.
template <class Real>
struct ColimitSeminorm {
  Real value = Real(0);
  std::vector<Real> trajectory;  // mu = start, start + 1, ..., maps.size()
};

template <class Real>
ColimitSeminorm<Real> colimit_seminorm(std::span<const Mat<Real>> maps, const Vec<Real>& a, std::size_t start,
                                       VectorNorm norm, Real tol = Real(kRankTolerance)) {
  if (start > maps.size()) throw Error(ErrorCode::DimMismatch, "start index beyond the chain");
  Mat<Real> composite;
  for (std::size_t i = start; i < maps.size(); ++i) {
    if (maps[i].rows() != a.size() || maps[i].cols() != a.size()) throw Error(ErrorCode::DimMismatch, "map dimension");
    if (operator_norm<Real>(maps[i], norm) > Real(1) + tol) {
      throw Error(ErrorCode::NotLipschitz, "map " + std::to_string(i) + " has operator norm above 1");
    }
    composite = composite.size() ? Mat<Real>(maps[i] * composite) : maps[i];
    Eigen::FullPivLU<Mat<Real>> lu_composite(composite), lu_map(maps[i]);
    lu_composite.setThreshold(tol);
    lu_map.setThreshold(tol);
    if (lu_composite.rank() != lu_map.rank()) {
      throw Error(ErrorCode::NotSurjective, "map " + std::to_string(i) + " is not onto its successor's image");
    }
  }
  ColimitSeminorm<Real> out;
  Vec<Real> v = a;
  out.trajectory.push_back(vector_norm<Real>(v, norm));
  for (std::size_t i = start; i < maps.size(); ++i) {
    v = maps[i] * v;
    out.trajectory.push_back(vector_norm<Real>(v, norm));
  }
  out.value = out.trajectory.back();
  return out;
}

}  // namespace krn::hilbert
