#include "doctest.h"

#include <set>

#include "kernelcat/random.hpp"
#include "kernelcat/random_var.hpp"

using namespace krn;
using Q = Rational;

namespace {

Partition P(std::vector<Partition::Block> blocks, std::size_t n) { return Partition(std::move(blocks), n); }

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::IOError;
}

}  // namespace

TEST_CASE("make_space validates and never renormalizes") {
  auto s = make_space<double>({0.5, 0.5});
  CHECK(s.size() == 2);
  CHECK(s.weight(0) == 0.5);

  auto three = make_space<Q>({Q(1, 2), Q(0), Q(1, 2)});
  CHECK(three.support() == std::vector<Index>{0, 2});
  CHECK(three.null_mask() == std::vector<bool>{false, true, false});
  CHECK(three.tolerance() == 0.0);

  CHECK(code_of([] { make_space<double>({0.5, 0.6}); }) == ErrorCode::SumNotOne);
  CHECK(code_of([] { make_space<double>({1.5, -0.5}); }) == ErrorCode::NegativeWeight);
  CHECK(code_of([] { make_space<Q>({Q(0)}); }) == ErrorCode::SumNotOne);
  CHECK(code_of([] { ProbSpace<double>(Vector<double>(0)); }) == ErrorCode::EmptySupport);

  // rational mode has no slack
  CHECK(code_of([] { make_space<Q>({Q(1, 3), Q(1, 3), Q(333, 1000)}); }) == ErrorCode::SumNotOne);
  CHECK_NOTHROW(make_space<double>({1.0 / 3, 1.0 / 3, 1.0 / 3}));

  try {
    make_space<double>({0.5, 0.6});
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("deviation") != std::string::npos);
  }
}

TEST_CASE("as_equal_rv ignores null outcomes") {
  auto s = make_space<Q>({Q(1, 2), Q(0), Q(1, 2)});
  RandomVar<Q> f(s, Vector<Q>{{Q(1), Q(7), Q(3)}});
  RandomVar<Q> g(s, Vector<Q>{{Q(1), Q(9), Q(3)}});
  RandomVar<Q> h(s, Vector<Q>{{Q(2), Q(7), Q(3)}});
  CHECK(as_equal_rv(f, g));
  CHECK_FALSE(as_equal_rv(f, h));
  CHECK(as_equal_rv(f, f));

  auto other = make_space<Q>({Q(1, 3), Q(1, 3), Q(1, 3)});
  RandomVar<Q> elsewhere(other, Vector<Q>{{Q(1), Q(7), Q(3)}});
  CHECK(code_of([&] { as_equal_rv(f, elsewhere); }) == ErrorCode::SpaceMismatch);
  CHECK(code_of([&] { RandomVar<Q>(s, Vector<Q>(2)); }) == ErrorCode::SizeMismatch);
}

TEST_CASE("ln_norm values") {
  auto u4 = ProbSpace<Q>::uniform(4);
  RandomVar<Q> f(u4, Vector<Q>{{Q(1), Q(2), Q(3), Q(4)}});
  CHECK(ln_norm(f, LnExponent(1)) == Q(5, 2));
  CHECK(ln_norm(f, LnExponent::infinity()) == Q(4));
  CHECK(ln_power_sum(f, 2) == Q(30, 4));

  auto p10 = make_space<Q>({Q(1), Q(0)});
  RandomVar<Q> g(p10, Vector<Q>{{Q(2), Q(5)}});
  CHECK(ln_norm(g, LnExponent::infinity()) == Q(2));

  auto zero = RandomVar<Q>::constant(u4, Q(0));
  for (unsigned n = 1; n <= 6; ++n) CHECK(ln_norm(zero, LnExponent(n)) == Q(0));
  CHECK(ln_norm(zero, LnExponent::infinity()) == Q(0));

  auto uf = ProbSpace<double>::uniform(4);
  RandomVar<double> fd(uf, Vector<double>{{1, 2, 3, 4}});
  CHECK(ln_norm(fd, LnExponent(2)) == doctest::Approx(std::sqrt(7.5)));
  CHECK(ln_norm(fd, LnExponent(3)) == doctest::Approx(std::cbrt(25.0)));
}

TEST_CASE("exponent parsing") {
  CHECK(parse_exponent("1") == LnExponent(1));
  CHECK(parse_exponent("inf").is_infinite());
  CHECK(parse_exponent("3").to_string() == "3");
  CHECK(code_of([] { parse_exponent("0"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse_exponent("two"); }) == ErrorCode::ParseError);
  CHECK(LnExponent(7) < LnExponent::infinity());
}

TEST_CASE("partition canonical form and validation") {
  auto p = P({{3, 2}, {1, 0}}, 4);
  CHECK(p.to_string() == "{{0,1},{2,3}}");
  CHECK(p.block_of(3) == 1);
  std::vector<std::size_t> labels{7, 7, 2, 9};
  CHECK(Partition::from_labels(labels).to_string() == "{{0,1},{2},{3}}");
  CHECK(code_of([] { P({{0, 1}, {1, 2}}, 3); }) == ErrorCode::InvalidPartition);
  CHECK(code_of([] { P({{0, 1}}, 3); }) == ErrorCode::InvalidPartition);
  CHECK(code_of([] { P({{0}, {}, {1}}, 2); }) == ErrorCode::InvalidPartition);
  CHECK(code_of([] { P({{0, 5}}, 2); }) == ErrorCode::InvalidPartition);
  CHECK(Partition::discrete(3).is_discrete());
  CHECK(Partition::trivial(3).is_trivial());
}

TEST_CASE("join and meet examples") {
  auto a = P({{0, 1}, {2, 3}}, 4);
  auto b = P({{0, 2}, {1, 3}}, 4);
  CHECK(join_partitions(a, b) == Partition::discrete(4));
  CHECK(join_partitions(a, a) == a);
  CHECK(join_partitions(a, Partition::trivial(4)) == a);

  auto bx = P({{0, 1}, {2}}, 3);
  auto cx = P({{0}, {1, 2}}, 3);
  CHECK(meet_partitions(bx, cx) == Partition::trivial(3));
  CHECK(meet_partitions(a, a) == a);
  CHECK(meet_partitions(a, Partition::discrete(4)) == a);
  CHECK(meet_partitions(a, b) == Partition::trivial(4));

  CHECK(code_of([&] { join_partitions(a, bx); }) == ErrorCode::SizeMismatch);
  CHECK(code_of([&] { meet_partitions(a, bx); }) == ErrorCode::SizeMismatch);
}

TEST_CASE("completion splits null outcomes") {
  auto s = make_space<Q>({Q(1, 2), Q(0), Q(1, 2)});
  CHECK(complete_partition(P({{0, 1}, {2}}, 3), s) == Partition::discrete(3));
  CHECK(complete_partition(P({{0}, {1, 2}}, 3), s) == Partition::discrete(3));
  CHECK(complete_partition(P({{0, 2}, {1}}, 3), s) == P({{0, 2}, {1}}, 3));

  auto full = ProbSpace<Q>::uniform(3);
  for (const auto& part : all_partitions(3)) CHECK(complete_partition(part, full) == part);

  auto p10 = make_space<Q>({Q(1), Q(0)});
  CHECK(complete_partition(Partition::trivial(2), p10) == Partition::discrete(2));
  CHECK(null_sets_partition(s) == P({{0, 2}, {1}}, 3));
  CHECK(code_of([&] { complete_partition(Partition::trivial(2), s); }) == ErrorCode::SizeMismatch);
}

TEST_CASE("measurability") {
  auto u4 = ProbSpace<double>::uniform(4);
  auto blocks = P({{0, 1}, {2, 3}}, 4);
  CHECK(measurable_wrt(RandomVar<double>(u4, Vector<double>{{1.5, 1.5, 3.5, 3.5}}), blocks));
  CHECK_FALSE(measurable_wrt(RandomVar<double>(u4, Vector<double>{{1, 2, 3, 4}}), blocks));
  CHECK(measurable_wrt(RandomVar<double>(u4, Vector<double>{{1, 2, 3, 4}}), Partition::discrete(4)));
  CHECK(code_of([&] { measurable_wrt(RandomVar<double>(u4, Vector<double>::Zero(4)), Partition::discrete(3)); }) ==
        ErrorCode::SizeMismatch);

  auto s = make_space<Q>({Q(1, 2), Q(0), Q(1, 2)});
  RandomVar<Q> f(s, Vector<Q>{{Q(1), Q(5), Q(2)}});
  CHECK_FALSE(measurable_wrt(f, P({{0, 1}, {2}}, 3)));
  CHECK(as_measurable_wrt(f, P({{0, 1}, {2}}, 3)));
  CHECK_FALSE(as_measurable_wrt(f, Partition::trivial(3)));
}

TEST_CASE("all_partitions counts are Bell numbers") {
  const std::size_t bell[] = {1, 1, 2, 5, 15, 52, 203, 877};
  for (std::size_t n = 1; n < 8; ++n) {
    auto parts = all_partitions(n);
    CHECK(parts.size() == bell[n]);
    std::set<std::string> distinct;
    for (const auto& part : parts) distinct.insert(part.to_string());
    CHECK(distinct.size() == parts.size());
  }
  CHECK(dyadic_partition(3, 0) == Partition::trivial(8));
  CHECK(dyadic_partition(3, 3) == Partition::discrete(8));
  CHECK(dyadic_partition(3, 1).to_string() == "{{0,1,2,3},{4,5,6,7}}");
}

TEST_CASE("partition lattice laws, exhaustive up to 5 outcomes") {
  for (std::size_t n = 1; n <= 5; ++n) {
    auto parts = all_partitions(n);
    for (const auto& a : parts) {
      for (const auto& b : parts) {
        auto j = join_partitions(a, b);
        auto m = meet_partitions(a, b);
        CHECK(j.refines(a));
        CHECK(j.refines(b));
        CHECK(a.refines(m));
        CHECK(b.refines(m));
        CHECK(j == join_partitions(b, a));
        CHECK(m == meet_partitions(b, a));
        CHECK(join_partitions(a, meet_partitions(a, b)) == a);
        CHECK(meet_partitions(a, join_partitions(a, b)) == a);
        CHECK(j == Partition::from_labels(j.labels()));
        CHECK(m == Partition::from_labels(m.labels()));
      }
    }
    // associativity on a sample of triples
    for (std::size_t i = 0; i < parts.size(); i += 3)
      for (std::size_t k = 0; k < parts.size(); k += 5)
        for (std::size_t l = 0; l < parts.size(); l += 7) {
          const auto &a = parts[i], &b = parts[k], &c = parts[l];
          CHECK(join_partitions(join_partitions(a, b), c) == join_partitions(a, join_partitions(b, c)));
          CHECK(meet_partitions(meet_partitions(a, b), c) == meet_partitions(a, meet_partitions(b, c)));
        }
  }
}

TEST_CASE("meet is the finest common coarsening, checked by brute force") {
  auto parts = all_partitions(5);
  for (std::size_t i = 0; i < parts.size(); i += 2) {
    for (std::size_t k = 1; k < parts.size(); k += 3) {
      auto m = meet_partitions(parts[i], parts[k]);
      for (const auto& c : parts)
        if (parts[i].refines(c) && parts[k].refines(c)) CHECK(m.refines(c));
      auto j = join_partitions(parts[i], parts[k]);
      for (const auto& c : parts)
        if (c.refines(parts[i]) && c.refines(parts[k])) CHECK(c.refines(j));
    }
  }
}

TEST_CASE("completion is idempotent and monotone") {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    auto s = random_space<Q>(rng, 5, 0.4);
    auto parts = all_partitions(5);
    for (std::size_t i = 0; i < parts.size(); i += 4) {
      auto c = complete_partition(parts[i], s);
      CHECK(complete_partition(c, s) == c);
      CHECK(c.refines(parts[i]));
      for (std::size_t k = 0; k < parts.size(); k += 9)
        if (parts[k].refines(parts[i])) CHECK(complete_partition(parts[k], s).refines(c));
    }
  }
}

TEST_CASE_TEMPLATE("norm monotonicity in the exponent", S, double, Q) {
  SplitMix64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    auto s = random_space<S>(rng, rng.uniform_int(1, 8), 0.25);
    auto f = random_rv<S>(rng, s);
    std::vector<LnExponent> ns{LnExponent(1), LnExponent(2), LnExponent(3), LnExponent(4), LnExponent::infinity()};
    for (std::size_t i = 0; i + 1 < ns.size(); ++i) {
      CHECK(to_double(ln_norm(f, ns[i])) <= to_double(ln_norm(f, ns[i + 1])) + 1e-12);
    }
  }
}

TEST_CASE("as_equal_rv is an equivalence matching zero distance") {
  SplitMix64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    auto s = random_space<Q>(rng, 5, 0.4);
    auto f = random_rv<Q>(rng, s, -2, 2);
    auto g = random_rv<Q>(rng, s, -2, 2);
    auto h = random_rv<Q>(rng, s, -2, 2);
    CHECK(as_equal_rv(f, f));
    CHECK(as_equal_rv(f, g) == as_equal_rv(g, f));
    if (as_equal_rv(f, g) && as_equal_rv(g, h)) CHECK(as_equal_rv(f, h));
    for (unsigned n : {1u, 2u, 3u}) CHECK((ln_norm(f - g, LnExponent(n)) == Q(0)) == as_equal_rv(f, g));
    CHECK((ln_norm(f - g, LnExponent::infinity()) == Q(0)) == as_equal_rv(f, g));
  }
}

TEST_CASE("vector random variables and bochner norms") {
  auto s = make_space<double>({0.5, 0.5});
  VecRandomVar<double> g(s, Matrix<double>{{3, 4}, {0, 0}});
  CHECK(bochner_norm(g, LnExponent(1)) == doctest::Approx(2.5));
  CHECK(bochner_norm(g, LnExponent::infinity()) == doctest::Approx(5));
  CHECK(bochner_norm(g, LnExponent(1), VectorNorm::Max) == doctest::Approx(2));
  CHECK(bochner_norm(g, LnExponent(1), VectorNorm::One) == doctest::Approx(3.5));

  VecRandomVar<double> constant(s, Matrix<double>{{1, 2}, {1, 2}});
  for (unsigned n = 1; n <= 4; ++n) CHECK(bochner_norm(constant, LnExponent(n)) == doctest::Approx(std::sqrt(5.0)));

  RandomVar<double> f(s, Vector<double>{{-3, 1}});
  for (unsigned n = 1; n <= 4; ++n)
    CHECK(bochner_norm(from_scalar(f), LnExponent(n)) == doctest::Approx(ln_norm(f, LnExponent(n))));

  CHECK(code_of([&] { g.coordinate(2); }) == ErrorCode::DimMismatch);
  CHECK(parse_vector_norm("max") == VectorNorm::Max);
  CHECK(to_string(VectorNorm::Euclidean) == "euclidean");
  CHECK(code_of([] { parse_vector_norm("l7"); }) == ErrorCode::ParseError);
}

TEST_CASE("scalar parsing") {
  CHECK(parse_scalar<Q>("3/4") == Q(3, 4));
  CHECK(parse_scalar<Q>("-1.25e-3") == Q(-1, 800));
  CHECK(parse_scalar<Q>("0.1") == Q(1, 10));
  CHECK(parse_scalar<Q>("0.25") == Q(1, 4));
  CHECK(parse_scalar<Q>("0.09") == Q(9, 100));
  CHECK(parse_scalar<Q>("010/04") == Q(5, 2));
  CHECK(parse_scalar<Q>("000") == Q(0));
  CHECK(parse_scalar<double>("0.25") == 0.25);
  CHECK(parse_scalar<double>("1/8") == 0.125);
  CHECK(code_of([] { parse_scalar<Q>("1/0"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse_scalar<double>("abc"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse_scalar<Q>(""); }) == ErrorCode::ParseError);
  CHECK(format_scalar(Q(3, 4)) == "3/4");
  CHECK(format_scalar(0.5) == "0.5");
}
