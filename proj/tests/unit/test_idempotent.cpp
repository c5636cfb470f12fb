#include "doctest.h"

#include "kernelcat/random.hpp"
#include "oracles.hpp"

using namespace krn;
using Q = Rational;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::IOError;
}

Partition P(std::vector<Partition::Block> blocks, std::size_t n) { return Partition(std::move(blocks), n); }

ProbSpace<Q> three_point() { return make_space<Q>({Q(1, 2), Q(0), Q(1, 2)}); }

// idempotent from a partition with an arbitrary stochastic row at each null
// outcome; still a.s.-equal to the conditional expectation kernel
IdempotentKernel<Q> with_scrambled_null_rows(SplitMix64& rng, const ProbSpace<Q>& s, const Partition& part) {
  Matrix<Q> rows = cond_exp_kernel(s, part).rows();
  Matrix<Q> noise = random_stochastic<Q>(rng, s.size(), s.size());
  for (Index x = 0; x < s.size(); ++x)
    if (!s.in_support(x)) rows.row(x) = noise.row(x);
  return IdempotentKernel<Q>(Kernel<Q>(s, s, rows));
}

}  // namespace

TEST_CASE("is_idempotent examples") {
  auto u4 = ProbSpace<Q>::uniform(4);
  for (const auto& part : all_partitions(4)) CHECK(is_idempotent(cond_exp_kernel(u4, part).kernel()));
  auto u2 = ProbSpace<Q>::uniform(2);
  auto swap = deterministic_from_function({1, 0}, u2, u2);
  CHECK_FALSE(is_idempotent(swap));
  CHECK(is_idempotent(Kernel<Q>::identity(u4)));
  CHECK(code_of([&] { IdempotentKernel<Q>{swap}; }) == ErrorCode::NotIdempotent);
  auto k = Kernel<Q>(u2, make_space<Q>({Q(3, 4), Q(1, 4)}), Matrix<Q>{{Q(1), Q(0)}, {Q(1, 2), Q(1, 2)}});
  CHECK(code_of([&] { is_idempotent(k); }) == ErrorCode::SpaceMismatch);
  Kernel<Q> not_mp(u2, u2, Matrix<Q>{{Q(1), Q(0)}, {Q(1), Q(0)}});
  CHECK(code_of([&] { is_idempotent(not_mp); }) == ErrorCode::NotMeasurePreserving);
}

TEST_CASE("cond_exp_kernel examples") {
  auto u4 = ProbSpace<Q>::uniform(4);
  auto e = cond_exp_kernel(u4, P({{0, 1}, {2, 3}}, 4));
  Matrix<Q> expected(4, 4);
  expected << Q(1, 2), Q(1, 2), Q(0), Q(0), Q(1, 2), Q(1, 2), Q(0), Q(0), Q(0), Q(0), Q(1, 2), Q(1, 2), Q(0), Q(0),
      Q(1, 2), Q(1, 2);
  CHECK(e.rows() == expected);
  CHECK(cond_exp_kernel(u4, Partition::discrete(4)).rows() == Matrix<Q>::Identity(4, 4));
  auto t = cond_exp_kernel(u4, Partition::trivial(4));
  for (Index x = 0; x < 4; ++x) CHECK(t.rows().row(x) == u4.weights().transpose());
  CHECK(code_of([&] { cond_exp_kernel(u4, Partition::trivial(3)); }) == ErrorCode::SizeMismatch);

  SplitMix64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    auto s = random_space<Q>(rng, rng.uniform_int(1, 7), 0.3);
    auto part = random_partition(rng, std::size_t(s.size()), 4);
    auto ek = cond_exp_kernel(s, part);
    CHECK(is_measure_preserving(ek.kernel()));
    CHECK(is_idempotent(ek.kernel()));
  }
}

TEST_CASE("invariant partition examples") {
  auto u4 = ProbSpace<Q>::uniform(4);
  auto blocks = P({{0, 1}, {2, 3}}, 4);
  CHECK(invariant_partition(cond_exp_kernel(u4, blocks)) == blocks);
  auto s = three_point();
  CHECK(invariant_partition(cond_exp_kernel(s, P({{0, 1}, {2}}, 3))) == Partition::discrete(3));
  CHECK(invariant_partition(cond_exp_kernel(s, P({{0}, {1, 2}}, 3))) == Partition::discrete(3));
  CHECK(invariant_partition(IdempotentKernel<Q>(Kernel<Q>::identity(u4))) == Partition::discrete(4));
}

TEST_CASE("invariant partition agrees with the subset-enumeration oracle") {
  SplitMix64 rng(12);
  for (int trial = 0; trial < 150; ++trial) {
    const Index n = rng.uniform_int(1, 12);
    auto s = random_space<Q>(rng, n, 0.3);
    auto part = random_partition(rng, std::size_t(n), std::size_t(rng.uniform_int(1, 5)));
    auto e = with_scrambled_null_rows(rng, s, part);
    auto fast = invariant_partition(e);
    CHECK(fast == oracle::invariant_partition_by_subsets(e.kernel()));
    CHECK(fast == complete_partition(part, s));
  }
  SplitMix64 frng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = frng.uniform_int(1, 10);
    auto s = random_space<double>(frng, n, 0.3);
    auto part = random_partition(frng, std::size_t(n), 3);
    auto e = cond_exp_kernel(s, part);
    CHECK(invariant_partition(e) == oracle::invariant_partition_by_subsets(e.kernel()));
  }
}

TEST_CASE("split examples") {
  auto u4 = ProbSpace<Q>::uniform(4);
  auto e = cond_exp_kernel(u4, P({{0, 1}, {2, 3}}, 4));
  auto s = split(e);
  CHECK(s.quotient.weights() == Vector<Q>{{Q(1, 2), Q(1, 2)}});
  CHECK(compose(s.pi, s.pi_dag).rows() == e.rows());
  CHECK(compose(s.pi_dag, s.pi).rows() == Matrix<Q>::Identity(2, 2));

  auto id = split(IdempotentKernel<Q>(Kernel<Q>::identity(u4)));
  CHECK(id.quotient.size() == 4);
  CHECK(id.pi.rows() == Matrix<Q>::Identity(4, 4));
  CHECK(id.pi_dag.rows() == Matrix<Q>::Identity(4, 4));

  auto triv = split(cond_exp_kernel(u4, Partition::trivial(4)));
  CHECK(triv.quotient.size() == 1);
  CHECK(triv.pi_dag.rows() == u4.weights().transpose());
}

TEST_CASE_TEMPLATE("splitting identities on random idempotents", S, double, Q) {
  SplitMix64 rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = rng.uniform_int(1, 16);
    auto s = random_space<S>(rng, n, 0.2);
    auto e = cond_exp_kernel(s, random_partition(rng, std::size_t(n), std::size_t(rng.uniform_int(1, 6))));
    auto sp = split(e);
    // pi after pi_dag is the identity on the quotient; pi_dag after pi is e
    CHECK(as_equal_kernels(compose(sp.pi_dag, sp.pi), Kernel<S>::identity(sp.quotient)));
    CHECK(as_equal_kernels(compose(sp.pi, sp.pi_dag), e.kernel()));
  }
}

TEST_CASE("every idempotent is self-dual") {
  SplitMix64 rng(4);
  for (Index n = 1; n <= 4; ++n) {
    for (int sample = 0; sample < 6; ++sample) {
      auto s = random_space<Q>(rng, n, 0.35);
      for (const auto& part : all_partitions(std::size_t(n))) {
        auto e = with_scrambled_null_rows(rng, s, part);
        CHECK(as_equal_kernels(bayes_inverse(e.kernel()), e.kernel()));
      }
    }
  }
  SplitMix64 frng(5);
  for (int trial = 0; trial < 100; ++trial) {
    auto s = random_space<double>(frng, frng.uniform_int(1, 20), 0.2);
    auto e = cond_exp_kernel(s, random_partition(frng, std::size_t(s.size()), 5));
    CHECK(as_equal_kernels(bayes_inverse(e.kernel()), e.kernel()));
  }
}

TEST_CASE("idempotent order examples") {
  auto u4 = ProbSpace<Q>::uniform(4);
  auto triv = cond_exp_kernel(u4, Partition::trivial(4));
  auto mid = cond_exp_kernel(u4, P({{0, 1}, {2, 3}}, 4));
  auto other = cond_exp_kernel(u4, P({{0, 2}, {1, 3}}, 4));
  auto disc = cond_exp_kernel(u4, Partition::discrete(4));
  CHECK(idem_leq(triv, mid));
  CHECK(idem_leq(mid, disc));
  CHECK_FALSE(idem_leq(mid, triv));
  CHECK_FALSE(idem_leq(mid, other));
  CHECK_FALSE(idem_leq(other, mid));
  CHECK(idem_leq(mid, mid));
  auto u3 = ProbSpace<Q>::uniform(3);
  CHECK(code_of([&] { idem_leq(mid, cond_exp_kernel(u3, Partition::trivial(3))); }) == ErrorCode::SpaceMismatch);
}

TEST_CASE("order witnesses for trivial below blocks") {
  auto u4 = ProbSpace<Q>::uniform(4);
  auto triv = cond_exp_kernel(u4, Partition::trivial(4));
  auto mid = cond_exp_kernel(u4, P({{0, 1}, {2, 3}}, 4));
  auto w = eqcondorder_witnesses(triv, mid);
  CHECK(w.f.rows() == Matrix<Q>{{Q(1, 2), Q(1, 2)}});
  CHECK(w.g.rows() == Matrix<Q>{{Q(1)}, {Q(1)}});
  CHECK(witnesses_commute(w));
  CHECK(compose(w.f, w.g).rows() == Matrix<Q>::Identity(1, 1));
  CHECK(as_equal_kernels(w.f, bayes_inverse(w.g)));

  auto self = eqcondorder_witnesses(mid, mid);
  CHECK(self.f.rows() == Matrix<Q>::Identity(2, 2));
  CHECK(self.g.rows() == Matrix<Q>::Identity(2, 2));

  CHECK(code_of([&] { eqcondorder_witnesses(mid, triv); }) == ErrorCode::NotComparable);
}

TEST_CASE("the three order conditions agree on random pairs") {
  SplitMix64 rng(44);
  int comparable = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const Index n = rng.uniform_int(1, 7);
    auto s = random_space<Q>(rng, n, 0.25);
    auto p1 = random_partition(rng, std::size_t(n), 3);
    // half the time force comparability
    auto p2 = rng.uniform() < 0.5 ? random_refinement(rng, p1) : random_partition(rng, std::size_t(n), 4);
    auto e1 = cond_exp_kernel(s, p1);
    auto e2 = cond_exp_kernel(s, p2);
    const bool c1 = idem_leq(e1, e2);
    const bool c2 = fixes_splitting(e2, split(e1));
    auto w = candidate_witnesses(e1, e2);
    const bool c3 = witnesses_commute(w);
    CHECK(c1 == c2);
    CHECK(c1 == c3);
    if (c1) {
      ++comparable;
      CHECK(as_equal_kernels(compose(w.f, w.g), Kernel<Q>::identity(w.lower.quotient)));
      CHECK(as_equal_kernels(w.f, bayes_inverse(w.g)));
    }
  }
  CHECK(comparable >= 100);
}

TEST_CASE("order is a partial order up to a.s. equality") {
  SplitMix64 rng(45);
  for (int trial = 0; trial < 40; ++trial) {
    const Index n = rng.uniform_int(1, 5);
    auto s = random_space<Q>(rng, n, 0.3);
    auto parts = all_partitions(std::size_t(n));
    std::vector<IdempotentKernel<Q>> es;
    for (const auto& part : parts) es.push_back(cond_exp_kernel(s, part));
    for (std::size_t i = 0; i < es.size(); ++i) {
      CHECK(idem_leq(es[i], es[i]));
      for (std::size_t j = 0; j < es.size(); ++j) {
        const bool ij = idem_leq(es[i], es[j]);
        if (ij && idem_leq(es[j], es[i])) CHECK(as_equal_kernels(es[i].kernel(), es[j].kernel()));
        if (!ij) continue;
        for (std::size_t k = 0; k < es.size(); k += 2)
          if (idem_leq(es[j], es[k])) CHECK(idem_leq(es[i], es[k]));
      }
    }
  }
}

TEST_CASE("harmonic functions are the invariant-measurable ones") {
  SplitMix64 rng(46);
  for (int trial = 0; trial < 60; ++trial) {
    const Index n = rng.uniform_int(1, 7);
    auto s = random_space<Q>(rng, n, 0.3);
    auto e = cond_exp_kernel(s, random_partition(rng, std::size_t(n), 3));
    auto inv = invariant_partition(e);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      auto f = indicator_of_mask(s, mask);
      CHECK(as_equal_rv(apply_pullback(e.kernel(), f), f) == measurable_wrt(f, inv));
    }
  }
}

TEST_CASE("relative positivity on invariant sets") {
  SplitMix64 rng(47);
  for (int trial = 0; trial < 40; ++trial) {
    const Index n = rng.uniform_int(1, 6);
    auto s = random_space<Q>(rng, n, 0.3);
    auto e = cond_exp_kernel(s, random_partition(rng, std::size_t(n), 3));
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << n); ++a) {
      if (!oracle::is_invariant_set(e.kernel(), a)) continue;
      for (std::uint64_t b = 0; b < (std::uint64_t{1} << n); ++b)
        for (Index x : s.support())
          CHECK(oracle::set_mass(e.kernel(), x, a) * oracle::set_mass(e.kernel(), x, b) ==
                oracle::set_mass(e.kernel(), x, a & b));
    }
  }
}

TEST_CASE("galois audit") {
  auto r3 = galois_roundtrips(three_point());
  CHECK(r3.ok());
  CHECK(r3.partitions == 5);
  auto u4 = galois_roundtrips(ProbSpace<Q>::uniform(4));
  CHECK(u4.ok());
  CHECK(u4.partitions == 15);
  CHECK(u4.pairs_checked == 225);
  auto u5 = galois_roundtrips(make_space<Q>({Q(1, 5), Q(0), Q(2, 5), Q(0), Q(2, 5)}));
  CHECK(u5.ok());
  CHECK(u5.partitions == 52);
  CHECK(galois_roundtrips(ProbSpace<double>::uniform(4)).ok());
  CHECK(code_of([] { galois_roundtrips(ProbSpace<Q>::uniform(9)); }) == ErrorCode::TooLarge);
}

TEST_CASE("chain suprema and infima") {
  auto u8 = ProbSpace<Q>::uniform(8);
  std::vector<IdempotentKernel<Q>> dyadic;
  for (std::size_t l = 0; l <= 3; ++l) dyadic.push_back(cond_exp_kernel(u8, dyadic_partition(3, l)));
  CHECK(sup_idempotents<Q>(dyadic).rows() == Matrix<Q>::Identity(8, 8));

  auto u4 = ProbSpace<Q>::uniform(4);
  auto mid = cond_exp_kernel(u4, P({{0, 1}, {2, 3}}, 4));
  std::vector<IdempotentKernel<Q>> constant{mid, mid, mid};
  CHECK(as_equal_kernels(sup_idempotents<Q>(constant).kernel(), mid.kernel()));
  CHECK(as_equal_kernels(inf_idempotents<Q>(constant).kernel(), mid.kernel()));

  std::vector<IdempotentKernel<Q>> up{cond_exp_kernel(u4, Partition::trivial(4)), mid};
  CHECK(as_equal_kernels(sup_idempotents<Q>(up).kernel(), mid.kernel()));
  CHECK(code_of([&] { inf_idempotents<Q>(up); }) == ErrorCode::NotAChain);

  std::vector<IdempotentKernel<Q>> down{cond_exp_kernel(u4, Partition::discrete(4)), mid,
                                        cond_exp_kernel(u4, Partition::trivial(4))};
  CHECK(inf_idempotents<Q>(down).rows() == cond_exp_kernel(u4, Partition::trivial(4)).rows());
  CHECK(code_of([&] { sup_idempotents<Q>(down); }) == ErrorCode::NotAChain);
  CHECK(code_of([] { sup_idempotents<Q>(std::span<const IdempotentKernel<Q>>()); }) == ErrorCode::NotAChain);

  // the three-point pair: a.s.-equal idempotents whose plain meet is trivial
  auto s = three_point();
  auto eb = cond_exp_kernel(s, P({{0, 1}, {2}}, 3));
  auto ec = cond_exp_kernel(s, P({{0}, {1, 2}}, 3));
  CHECK(idem_leq(eb, ec));
  CHECK(idem_leq(ec, eb));
  std::vector<IdempotentKernel<Q>> pair{eb, ec};
  auto inf = inf_idempotents<Q>(pair);
  CHECK(as_equal_kernels(inf.kernel(), cond_exp_kernel(s, Partition::discrete(3)).kernel()));
  CHECK_FALSE(as_equal_kernels(inf.kernel(), cond_exp_kernel(s, Partition::trivial(3)).kernel()));
  CHECK(meet_partitions(P({{0, 1}, {2}}, 3), P({{0}, {1, 2}}, 3)) == Partition::trivial(3));
}

TEST_CASE("sup and inf are least and greatest bounds among partition idempotents") {
  SplitMix64 rng(48);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = rng.uniform_int(2, 5);
    auto s = random_space<Q>(rng, n, 0.25);
    std::vector<Partition> chain{random_partition(rng, std::size_t(n), 2)};
    for (int i = 0; i < 3; ++i) chain.push_back(random_refinement(rng, chain.back()));
    std::vector<IdempotentKernel<Q>> up;
    for (const auto& part : chain) up.push_back(cond_exp_kernel(s, part));
    std::vector<IdempotentKernel<Q>> down(up.rbegin(), up.rend());
    auto sup = sup_idempotents<Q>(up);
    auto inf = inf_idempotents<Q>(down);
    for (const auto& e : up) {
      CHECK(idem_leq(e, sup));
      CHECK(idem_leq(inf, e));
    }
    for (const auto& part : all_partitions(std::size_t(n))) {
      auto c = cond_exp_kernel(s, part);
      bool upper = true, lower = true;
      for (const auto& e : up) {
        upper = upper && idem_leq(e, c);
        lower = lower && idem_leq(c, e);
      }
      if (upper) CHECK(idem_leq(sup, c));
      if (lower) CHECK(idem_leq(c, inf));
    }
  }
}
