#pragma once

#include <bit>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "kernelcat/functor.hpp"
#include "kernelcat/kernel.hpp"

namespace krn {

/// Per-step distances to a limit together with the horizon-bounded verdict:
/// converged iff every distance from `stabilization_index` to the horizon is
/// within tolerance.
template <class Scalar>
struct ConvergenceReport {
  std::vector<Scalar> step_distances;
  bool converged = false;
  std::optional<std::size_t> stabilization_index;
  double tolerance = 0.0;
  std::size_t horizon = 0;
  std::string metric;
};

template <class Scalar>
ConvergenceReport<Scalar> make_report(std::vector<Scalar> distances, double tolerance, std::string metric) {
  ConvergenceReport<Scalar> report;
  report.horizon = distances.size();
  report.tolerance = tolerance;
  report.metric = std::move(metric);
  std::size_t first_tail = distances.size();
  while (first_tail > 0 && nearly_zero(distances[first_tail - 1], tolerance)) --first_tail;
  if (first_tail < distances.size()) {
    report.stabilization_index = first_tail;
    report.converged = true;
  }
  report.step_distances = std::move(distances);
  return report;
}

/// Distances never increase along the report, up to tolerance.
template <class Scalar>
bool is_nonincreasing(const ConvergenceReport<Scalar>& r) {
  for (std::size_t i = 0; i + 1 < r.step_distances.size(); ++i)
    if (!nearly_leq(r.step_distances[i + 1], r.step_distances[i], r.tolerance)) return false;
  return true;
}

/// CSV columns: step,distance,metric,tol,converged.
template <class Scalar>
void write_report_csv(std::ostream& out, const ConvergenceReport<Scalar>& r) {
  out << "step,distance,metric,tol,converged\n";
  for (std::size_t i = 0; i < r.step_distances.size(); ++i) {
    const bool tail = r.stabilization_index && i >= *r.stabilization_index;
    out << i << ',' << format_scalar(r.step_distances[i]) << ',' << r.metric << ',' << format_scalar(r.tolerance)
        << ',' << (tail ? "true" : "false") << '\n';
  }
}

enum class KernelMetric { OneSided, TwoSided };

inline std::string to_string(KernelMetric m) { return m == KernelMetric::OneSided ? "one-sided" : "two-sided"; }

/// sum_x p(x) sum_y |k(y | x) - h(y | x)|. Dominates the setwise integral
/// of |k(B | x) - h(B | x)| for every B.
template <class Scalar>
Scalar one_sided_distance(const Kernel<Scalar>& k, const Kernel<Scalar>& h) {
  require_same_space(k.domain(), h.domain(), "distance: domains differ");
  require_same_space(k.codomain(), h.codomain(), "distance: codomains differ");
  return k.domain().weights().dot((k.rows() - h.rows()).cwiseAbs().rowwise().sum());
}

/// One-sided distance of the kernels plus that of their Bayesian inverses.
template <class Scalar>
Scalar two_sided_distance(const Kernel<Scalar>& k, const Kernel<Scalar>& h) {
  const Scalar forward = one_sided_distance(k, h);
  return forward + one_sided_distance(bayes_inverse(k), bayes_inverse(h));
}

template <class Scalar>
Scalar kernel_distance(const Kernel<Scalar>& k, const Kernel<Scalar>& h, KernelMetric metric) {
  return metric == KernelMetric::OneSided ? one_sided_distance(k, h) : two_sided_distance(k, h);
}

/// integral over X of |k(B | x) - h(B | x)| p(dx) for the subset B given by
/// the bits of `mask`.
template <class Scalar>
Scalar setwise_distance(const Kernel<Scalar>& k, const Kernel<Scalar>& h, std::uint64_t mask) {
  const auto ind = indicator_of_mask(k.codomain(), mask);
  return ln_norm(apply_pullback(k, ind) - apply_pullback(h, ind), LnExponent(1));
}

template <class Scalar>
ConvergenceReport<Scalar> check_convergence(std::span<const Kernel<Scalar>> seq, const Kernel<Scalar>& limit,
                                            KernelMetric metric, double tol) {
  std::vector<Scalar> d;
  d.reserve(seq.size());
  for (const auto& k : seq) d.push_back(kernel_distance(k, limit, metric));
  return make_report(std::move(d), tol, to_string(metric));
}

inline constexpr Index kMaxIndicatorCodomain = 20;

/// max over all subsets B of the codomain of || k* 1_B - h* 1_B ||_n.
template <class Scalar>
Scalar operator_distance(const Kernel<Scalar>& k, const Kernel<Scalar>& h, LnExponent n) {
  require_same_space(k.domain(), h.domain(), "operator distance: domains differ");
  require_same_space(k.codomain(), h.codomain(), "operator distance: codomains differ");
  const Index m = k.codomain().size();
  if (m > kMaxIndicatorCodomain) throw Error(ErrorCode::TooLarge, "indicator enumeration over a large codomain");
  const Matrix<Scalar> diff = k.rows() - h.rows();
  Vector<Scalar> image = Vector<Scalar>::Zero(diff.rows());
  Scalar worst(0);
  // Gray code walk: one column enters or leaves per step.
  std::uint64_t gray = 0;
  for (std::uint64_t i = 1; i < (std::uint64_t{1} << m); ++i) {
    const std::uint64_t next = i ^ (i >> 1);
    const auto bit = static_cast<Index>(std::countr_zero(next ^ gray));
    if (next & (std::uint64_t{1} << bit)) {
      image += diff.col(bit);
    } else {
      image -= diff.col(bit);
    }
    gray = next;
    worst = std::max(worst, ln_norm(RandomVar<Scalar>(k.domain(), image), n));
  }
  return worst;
}

template <class Scalar>
struct HomeomorphismVerdict {
  ConvergenceReport<Scalar> kernel;
  ConvergenceReport<Scalar> operators;
  bool agree() const { return kernel.converged == operators.converged; }
};

/// Convergence of k_j -> k in the one-sided metric against pointwise
/// convergence of the pullbacks on every indicator in L^n.
template <class Scalar>
HomeomorphismVerdict<Scalar> homeomorphism_check(std::span<const Kernel<Scalar>> seq, const Kernel<Scalar>& limit,
                                                 LnExponent n, double tol) {
  std::vector<Scalar> ops;
  ops.reserve(seq.size());
  for (const auto& k : seq) ops.push_back(operator_distance(k, limit, n));
  return {check_convergence(seq, limit, KernelMetric::OneSided, tol),
          make_report(std::move(ops), tol, "pullback-L" + n.to_string())};
}

/// Two-sided convergence against L^2 pointwise convergence of both the
/// pullbacks and the pullbacks of the Bayesian inverses.
template <class Scalar>
HomeomorphismVerdict<Scalar> hilbert_homeomorphism_check(std::span<const Kernel<Scalar>> seq,
                                                         const Kernel<Scalar>& limit, double tol) {
  const Kernel<Scalar> limit_inv = bayes_inverse(limit);
  std::vector<Scalar> ops;
  ops.reserve(seq.size());
  for (const auto& k : seq) {
    ops.push_back(std::max(operator_distance(k, limit, LnExponent(2)),
                           operator_distance(bayes_inverse(k), limit_inv, LnExponent(2))));
  }
  return {check_convergence(seq, limit, KernelMetric::TwoSided, tol),
          make_report(std::move(ops), tol, "pullback-L2+adjoint")};
}

/// d(compose(k_H, h_H), compose(lim k, lim h)) at the last step H; the
/// composite of the limits against the limit of the composites.
template <class Scalar>
Scalar composition_continuity_probe(std::span<const Kernel<Scalar>> seq_k, const Kernel<Scalar>& lim_k,
                                    std::span<const Kernel<Scalar>> seq_h, const Kernel<Scalar>& lim_h) {
  if (seq_k.empty() || seq_k.size() != seq_h.size()) {
    throw Error(ErrorCode::SizeMismatch, "composition probe needs two nonempty sequences of equal length");
  }
  return one_sided_distance(compose(seq_k.back(), seq_h.back()), compose(lim_k, lim_h));
}

}  // namespace krn
