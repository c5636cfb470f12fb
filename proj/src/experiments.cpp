#include "kernelcat/experiments.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "kernelcat/hilbert.hpp"
#include "kernelcat/martingale.hpp"
#include "kernelcat/random.hpp"

namespace krn::cli {

namespace {

using Kind = Verdict::Kind;

const LnExponent kAuditExponents[] = {LnExponent(1), LnExponent(2), LnExponent(3), LnExponent::infinity()};

void echo_config(std::ostream& out, const ExperimentConfig& cfg) {
  out << "# experiment: " << to_string(cfg.experiment) << '\n';
  out << "# mode: " << to_string(cfg.mode) << ", seed: " << cfg.seed << ", tolerance: " << format_scalar(cfg.tolerance)
      << '\n';
}

// First step where the distances go up, if any.
template <class Scalar>
std::optional<std::size_t> first_increase(const ConvergenceReport<Scalar>& r) {
  for (std::size_t i = 1; i < r.step_distances.size(); ++i)
    if (!nearly_leq(r.step_distances[i], r.step_distances[i - 1], r.tolerance)) return i;
  return std::nullopt;
}

// Monotone (when asked) and reaching the limit within the horizon.
template <class Scalar>
Verdict report_verdict(const ConvergenceReport<Scalar>& r, bool need_monotone, Kind success) {
  if (need_monotone) {
    if (auto i = first_increase(r)) return {Kind::Violation, i, "distance increased"};
  }
  if (!r.converged) return {Kind::Violation, r.horizon - 1, "limit not reached within the horizon"};
  return {success, r.stabilization_index, "distance " + format_scalar(r.step_distances.back()) + " at the last step"};
}

template <class Scalar>
Verdict levy_up(const ExperimentConfig& cfg, std::ostream& out) {
  SplitMix64 root(cfg.seed);
  SplitMix64 rng = root.split();
  const Filtration<Scalar> filt = dyadic_filtration<Scalar>(cfg.K);
  const RandomVar<Scalar> f = random_rv(rng, filt.space());
  const ConvergenceReport<Scalar> r = levy_report(martingale_from_terminal(f, filt), cfg.exponent);
  write_levy_csv(out, r, cfg.exponent);
  out << "# result: forward martingale E[f | dyadic level n] approaching f in L^" << cfg.exponent.to_string()
      << " on " << (std::size_t{1} << cfg.K) << " atoms\n";
  return report_verdict(r, cfg.exponent == LnExponent(2), Kind::Converged);
}

template <class Scalar>
Verdict levy_down(const ExperimentConfig& cfg, std::ostream& out) {
  SplitMix64 root(cfg.seed);
  SplitMix64 rng = root.split();
  const auto n = static_cast<Index>(cfg.size);
  const ProbSpace<Scalar> space = random_space<Scalar>(rng, n, 0.1);
  std::vector<Partition> parts{Partition::discrete(cfg.size)};
  while (parts.size() < cfg.horizon) parts.push_back(random_coarsening(rng, parts.back()));
  const Filtration<Scalar> filt(space, std::move(parts), Direction::Decreasing);
  const RandomVar<Scalar> f = random_rv(rng, space);
  const ConvergenceReport<Scalar> r = levy_report(martingale_from_terminal(f, filt), cfg.exponent);
  write_levy_csv(out, r, cfg.exponent);
  out << "# result: backward martingale along a decreasing filtration reaching E[f | intersection] in L^"
      << cfg.exponent.to_string() << '\n';
  return report_verdict(r, cfg.exponent == LnExponent(2), Kind::Stabilized);
}

template <class Scalar>
Verdict levi_kernel(const ExperimentConfig& cfg, std::ostream& out) {
  SplitMix64 root(cfg.seed);
  SplitMix64 rng = root.split();
  const ProbSpace<Scalar> space = random_space<Scalar>(rng, static_cast<Index>(cfg.size), 0.1);
  std::vector<Partition> parts{random_partition(rng, cfg.size, 2)};
  while (parts.size() < cfg.horizon) parts.push_back(random_refinement(rng, parts.back()));
  if (cfg.direction == "decreasing") std::reverse(parts.begin(), parts.end());
  std::vector<IdempotentKernel<Scalar>> chain;
  for (const auto& p : parts) chain.push_back(cond_exp_kernel(space, p));
  const ConvergenceReport<Scalar> r = levi_property_check<Scalar>(chain);
  write_report_csv(out, r);
  out << "# result: " << cfg.direction << " chain of conditional expectation kernels approaching its "
      << (cfg.direction == "decreasing" ? "infimum" : "supremum") << '\n';
  return report_verdict(r, true, Kind::Stabilized);
}

Verdict levi_hilbert(const ExperimentConfig& cfg, std::ostream& out) {
  using namespace hilbert;
  SplitMix64 root(cfg.seed);
  SplitMix64 rng = root.split();
  const auto d = static_cast<Index>(cfg.d);
  auto draw = [&] { return 2 * rng.uniform() - 1; };
  Mat<double> gen(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) gen(i, j) = draw();
  const Mat<double> frame = Subspace<double>::span(gen).basis();
  std::vector<Subspace<double>> chain;
  for (Index k = 0; k <= frame.cols(); ++k) chain.emplace_back(frame.leftCols(k), d);
  const bool down = cfg.direction == "decreasing";
  if (down) std::reverse(chain.begin(), chain.end());
  const Mat<double> probes = probe_set<double>(Mat<double>(), d, static_cast<Index>(cfg.trials), draw);
  const LeviDemoReport<double> r = down ? levi_down_demo<double>(chain, probes, cfg.tolerance)
                                        : levi_up_demo<double>(chain, probes, cfg.tolerance);
  write_probe_csv(out, r);
  out << "# result: orthogonal projections onto a " << cfg.direction << " chain of subspaces of R^" << d
      << " converging pointwise on every probe\n";
  return report_verdict(r.summary, true, Kind::Converged);
}

template <class Scalar>
Verdict noncauchy(const ExperimentConfig& cfg, std::ostream& out) {
  const NonintegrableExample<Scalar> ex = nonintegrable_example<Scalar>(cfg.K);
  const auto& space = ex.martingale.filtration().space();
  out << "n,l1_norm,increment_norm,nonzero_mass\n";
  std::optional<std::size_t> bad;
  for (std::size_t n = 0; n <= cfg.K; ++n) {
    Scalar mass(0);
    for (Index x = 0; x < space.size(); ++x)
      if (ex.martingale.at(n)(x) != Scalar(0)) mass += space.weight(x);
    out << n << ',' << format_scalar(ex.l1_norms[n]) << ',';
    if (n < cfg.K) out << format_scalar(ex.increment_norms[n]);
    out << ',' << format_scalar(mass) << '\n';
    const bool unit_norm = nearly_equal(ex.l1_norms[n], Scalar(1), cfg.tolerance);
    const bool unit_step = n == cfg.K || nearly_equal(ex.increment_norms[n], Scalar(1), cfg.tolerance);
    if (!bad && !(unit_norm && unit_step)) bad = n;
  }
  out << "# result: dyadic martingale with constant L^1 norm and unit increments, not Cauchy in L^1 although "
         "it vanishes pointwise off a shrinking cell\n";
  if (bad) return {Kind::Violation, bad, "L^1 norm or increment differs from 1"};
  return {Kind::StabilizedNoncauchy, std::nullopt, "L^1 norms and increments all equal 1"};
}

Verdict banach(const ExperimentConfig& cfg, std::ostream& out) {
  using namespace hilbert;
  const auto n = static_cast<Index>(cfg.N);
  const BanachReport<double> r = banach_counterexample<double>(n);
  std::vector<Mat<double>> maps;
  for (Index i = 1; i < n; ++i) maps.push_back(truncation_projector<double>(n, i));
  const double colimit = colimit_seminorm<double>(maps, Vec<double>::Ones(n), 0, VectorNorm::Max).value;
  write_banach_csv(out, r);
  out << "0,0," << format_scalar(colimit) << ",colimit-max\n";
  out << "# result: truncation chain on R^" << n
      << " whose sup norm stays at 1 until the last step while the Euclidean norm decreases to 0; the colimit "
         "seminorm of the all-ones vector is 1, not 0\n";
  for (Index i = 0; i < n; ++i)
    if (r.sup_norms[static_cast<std::size_t>(i)] != 1.0) return {Kind::Violation, std::size_t(i), "sup norm left 1"};
  if (!r.euclidean_decreasing) return {Kind::Violation, std::nullopt, "Euclidean norms do not decrease"};
  if (colimit != 1.0) return {Kind::Violation, std::nullopt, "colimit seminorm " + format_scalar(colimit)};
  return {Kind::Pass, std::nullopt, "sup norm plateau at 1, Euclidean norms decrease to 0, colimit seminorm 1"};
}

template <class Scalar>
Verdict galois(const ExperimentConfig& cfg, std::ostream& out) {
  SplitMix64 root(cfg.seed);
  out << "trial,law,checked,failures\n";
  std::optional<std::size_t> bad;
  std::size_t partitions = 0;
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    SplitMix64 rng = root.split();
    const ProbSpace<Scalar> space = random_space<Scalar>(rng, static_cast<Index>(cfg.size), 0.25);
    const GaloisReport g = galois_roundtrips(space);
    partitions = g.partitions;
    out << t << ",adjunction," << g.pairs_checked << ',' << g.adjunction_failures << '\n';
    out << t << ",fixpoint," << g.partitions << ',' << g.fixpoint_failures << '\n';
    out << t << ",completion," << g.partitions << ',' << g.completion_failures << '\n';
    out << t << ",monotonicity," << g.pairs_checked << ',' << g.monotonicity_failures << '\n';
    if (!bad && !g.ok()) bad = t;
  }
  out << "# result: exhaustive audit of the correspondence between partitions and idempotent kernels, including "
         "null outcomes\n";
  if (bad) return {Kind::Violation, bad, "a law failed in this trial"};
  return {Kind::Pass, std::nullopt,
          std::to_string(partitions) + " partitions on each of " + std::to_string(cfg.trials) + " seeded spaces"};
}

template <class Scalar>
Verdict homeo(const ExperimentConfig& cfg, std::ostream& out) {
  SplitMix64 root(cfg.seed);
  out << "trial,sequence,n,kernel_distance,operator_distance,kernel_converged,operator_converged,agree\n";
  std::optional<std::size_t> bad;
  std::size_t converging = 0;
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    SplitMix64 rng = root.split();
    const auto s = static_cast<std::int64_t>(cfg.size);
    const ProbSpace<Scalar> p = random_space<Scalar>(rng, rng.uniform_int(1, s), 0.2);
    const Kernel<Scalar> k = random_kernel<Scalar>(rng, p, rng.uniform_int(2, s));
    const Kernel<Scalar> h = random_kernel_between<Scalar>(rng, p, k.codomain());
    // even trials: weights 1/j toward k; odd trials: every even step sits at the
    // midpoint, so the sequence ends away from k
    const bool settles = t % 2 == 0;
    std::vector<Kernel<Scalar>> seq;
    for (std::size_t j = 1; j <= cfg.horizon; ++j) {
      const bool mid = !settles && j % 2 == 0;
      seq.push_back(mix(k, h, mid ? ratio<Scalar>(1, 2) : ratio<Scalar>(1, static_cast<std::int64_t>(j))));
    }
    for (LnExponent n : kAuditExponents) {
      const HomeomorphismVerdict<Scalar> v = homeomorphism_check<Scalar>(seq, k, n, cfg.tolerance);
      out << t << ',' << (settles ? "harmonic" : "alternating") << ',' << n.to_string() << ','
          << format_scalar(v.kernel.step_distances.back()) << ',' << format_scalar(v.operators.step_distances.back())
          << ',' << (v.kernel.converged ? "true" : "false") << ',' << (v.operators.converged ? "true" : "false") << ','
          << (v.agree() ? "true" : "false") << '\n';
      if (v.kernel.converged) ++converging;
      if (!bad && !v.agree()) bad = t;
    }
  }
  out << "# result: convergence in the kernel metric against pointwise convergence of the pullback operators on "
         "L^1, L^2, L^3 and L^inf\n";
  if (bad) return {Kind::Violation, bad, "kernel and operator verdicts disagree"};
  return {Kind::Pass, std::nullopt,
          std::to_string(converging) + " of " + std::to_string(4 * cfg.trials) + " checks converged, all agree"};
}

template <class Scalar>
Verdict dispatch(const ExperimentConfig& cfg, std::ostream& out) {
  switch (cfg.experiment) {
    case Experiment::LevyUp: return levy_up<Scalar>(cfg, out);
    case Experiment::LevyDown: return levy_down<Scalar>(cfg, out);
    case Experiment::LeviKernel: return levi_kernel<Scalar>(cfg, out);
    case Experiment::LeviHilbert:
      if (is_exact_v<Scalar>) throw Error(ErrorCode::ConfigError, "levi-hilbert runs in float mode only");
      return levi_hilbert(cfg, out);
    case Experiment::NoncauchyL1: return noncauchy<Scalar>(cfg, out);
    case Experiment::BanachCounterexample:
      if (is_exact_v<Scalar>) throw Error(ErrorCode::ConfigError, "banach-counterexample runs in float mode only");
      return banach(cfg, out);
    case Experiment::GaloisAudit: return galois<Scalar>(cfg, out);
    case Experiment::HomeoAudit: return homeo<Scalar>(cfg, out);
  }
  throw Error(ErrorCode::ConfigError, "unknown experiment");
}

}  // namespace

std::string to_string(Verdict::Kind k) {
  switch (k) {
    case Kind::Converged: return "CONVERGED";
    case Kind::Stabilized: return "STABILIZED";
    case Kind::StabilizedNoncauchy: return "STABILIZED-NONCAUCHY";
    case Kind::Pass: return "PASS";
    case Kind::Violation: return "VIOLATION";
  }
  return "UNKNOWN";
}

std::string format(const Verdict& v) {
  std::string out = to_string(v.kind);
  if (v.step) out += " at step " + std::to_string(*v.step);
  if (!v.detail.empty()) out += (v.kind == Kind::Violation ? ": " : " (") + v.detail + (v.kind == Kind::Violation ? "" : ")");
  return out;
}

RunResult run_experiment(const ExperimentConfig& cfg) {
  if (cfg.horizon == 0 &&
      (cfg.experiment == Experiment::LevyDown || cfg.experiment == Experiment::LeviKernel ||
       cfg.experiment == Experiment::HomeoAudit)) {
    throw Error(ErrorCode::ConfigError, "horizon must be positive");
  }
  std::ostringstream out;
  echo_config(out, cfg);
  RunResult result;
  result.verdict = cfg.mode == Mode::Rational ? dispatch<Rational>(cfg, out) : dispatch<double>(cfg, out);
  out << "# verdict: " << format(result.verdict) << '\n';
  result.csv = out.str();
  return result;
}

void write_output(const std::filesystem::path& path, const std::string& csv) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw Error(ErrorCode::IOError, "cannot create " + path.parent_path().string() + ": " + ec.message());
  std::ofstream file(path, std::ios::binary);
  file << csv;
  file.close();
  if (!file) throw Error(ErrorCode::IOError, "cannot write " + path.string());
}

}  // namespace krn::cli
