#include <gtest/gtest.h>

#include <random>
#include <set>

#include "thetablock/lattice.hpp"

using namespace thetablock;

namespace {

IntVector vec(std::initializer_list<std::int64_t> xs) {
  IntVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (auto x : xs) v(i++) = x;
  return v;
}

const MultiFourierSeries& psi_a4() {
  static const MultiFourierSeries psi = lattice_psi_q0(theta_a4_descriptor(), 1);
  return psi;
}

}  // namespace

TEST(A4Data, Consistency) {
  EXPECT_TRUE(a4_consistent());
  const A4Data& d = a4_data();
  const IntMatrix a0 = d.gram_weight5.topLeftCorner(3, 3);
  IntMatrix expect(3, 3);
  expect << 4, 3, 2, 3, 6, 4, 2, 4, 6;
  EXPECT_EQ(a0, expect);
  EXPECT_EQ(determinant(a0), 50);
  EXPECT_EQ(determinant(d.gram_weight5), 125);
  for (const auto& r : d.positive_roots) EXPECT_EQ(r.dot(d.gram_root * r), 2);
}

TEST(A4Data, IndexPolynomialOnGrid) {
  EXPECT_EQ(index_N({1, 1, 1, 1}), 25);
  EXPECT_EQ(index_N({1, 1, 1, 2}), 37);
  EXPECT_EQ(index_N({2, -1, -3, 6}), 50);
  for (std::int64_t a = -5; a <= 5; ++a)
    for (std::int64_t b = -5; b <= 5; ++b)
      for (std::int64_t c = -5; c <= 5; ++c)
        for (std::int64_t e = -5; e <= 5; ++e) ASSERT_EQ(index_N({a, b, c, e}), index_polynomial({a, b, c, e}));
}

TEST(GramLattice, RejectsBadInput) {
  IntMatrix odd(1, 1);
  odd << 3;
  EXPECT_THROW(GramLattice{odd}, DomainError);
  IntMatrix indefinite(2, 2);
  indefinite << 2, 3, 3, 2;
  EXPECT_THROW(GramLattice{indefinite}, DomainError);
  IntMatrix asym(2, 2);
  asym << 2, 1, 0, 2;
  EXPECT_THROW(GramLattice{asym}, DomainError);
}

TEST(Discriminant, A4v5ClassCounts) {
  const GramLattice L(a4_data().gram_weight5);
  const auto rep = discriminant_classes(L);
  EXPECT_EQ(rep.order_of_D, 125);
  const std::vector<ClassGroup> expect{{Rational(0), 1, 1},     {Rational(2, 5), 20, 1}, {Rational(4, 5), 30, 1},
                                       {Rational(6, 5), 30, 2}, {Rational(8, 5), 20, 3}, {Rational(2), 24, 5}};
  EXPECT_EQ(rep.classes, expect);
  std::int64_t total = 0;
  for (const auto& g : rep.classes) total += g.class_count;
  EXPECT_EQ(total, 125);
  EXPECT_TRUE(rep.norm2_holds);
}

TEST(Discriminant, ShortVectorsMatchBoxSearch) {
  const GramLattice L(a4_data().gram_weight5);
  const auto found = short_dual_vectors(L, Rational(2));
  std::set<std::vector<std::int64_t>> got;
  for (const auto& y : found) {
    got.insert({y(0), y(1), y(2), y(3)});
    for (Eigen::Index i = 0; i < 4; ++i) EXPECT_LT(std::abs(y(i)), 6);
  }
  std::set<std::vector<std::int64_t>> box;
  for (std::int64_t a = -6; a <= 6; ++a)
    for (std::int64_t b = -6; b <= 6; ++b)
      for (std::int64_t c = -6; c <= 6; ++c)
        for (std::int64_t d = -6; d <= 6; ++d) {
          const IntVector y = vec({a, b, c, d});
          if (dual_norm(L, DualVector{y, 1}) <= 2) box.insert({a, b, c, d});
        }
  EXPECT_EQ(got, box);
}

TEST(Discriminant, OneDimensional) {
  IntMatrix two(1, 1);
  two << 2;
  const auto r2 = discriminant_classes(GramLattice(two));
  EXPECT_EQ(r2.order_of_D, 2);
  EXPECT_TRUE(r2.norm2_holds);

  IntMatrix fourteen(1, 1);
  fourteen << 14;
  const auto r14 = discriminant_classes(GramLattice(fourteen), Rational(4));
  EXPECT_FALSE(r14.norm2_holds);
  // min over k + 14Z of x^2 / 14, one class per k
  std::map<Rational, std::int64_t> oracle;
  for (std::int64_t k = 0; k < 14; ++k) {
    std::int64_t best = k * k;
    for (std::int64_t x = k - 28; x <= k + 28; x += 14) best = std::min(best, x * x);
    oracle[make_rational(best, 14)] += 1;
  }
  std::map<Rational, std::int64_t> got;
  for (const auto& g : r14.classes) got[g.min_norm] += g.class_count;
  EXPECT_EQ(got, oracle);
  EXPECT_EQ(oracle.count(make_rational(36, 14)), 1u);
}

TEST(Weyl, TransitiveOnEqualNormClasses) {
  const auto rep = weyl_transitivity_report();
  EXPECT_EQ(rep.group_order, 240u);
  EXPECT_TRUE(rep.identity_fixes_all);
  EXPECT_EQ(rep.orbit_sizes.at(Rational(6, 5)), std::vector<std::size_t>{30});
  EXPECT_EQ(rep.orbit_sizes.at(Rational(2, 5)), std::vector<std::size_t>{20});
  EXPECT_TRUE(rep.transitive);
  EXPECT_TRUE(weyl_transitivity_check());
}

TEST(Specialize, MatchesBlockFromA) {
  const auto theta = theta_a4_descriptor();
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::int64_t> ad(-7, 7);
  int done = 0;
  while (done < 50) {
    std::array<std::int64_t, 4> a{ad(rng), ad(rng), ad(rng), ad(rng)};
    if (a == std::array<std::int64_t, 4>{0, 0, 0, 0}) continue;
    ++done;
    EXPECT_EQ(specialize_block(theta, IntVector::Map(a.data(), 4)), block_from_a(a));
  }
  EXPECT_TRUE(specialize_block(theta, vec({1, 0, 0, 0})).zero);
}

TEST(Specialize, A3SubbasisArguments) {
  const auto res = quasi_pullback_block(theta_a4_descriptor(), example_sub_basis("A3_5"));
  EXPECT_EQ(res.removed, 0);
  EXPECT_EQ(res.block.lattice, *named_lattice("A3_5"));
  EXPECT_EQ(res.block.weight(), 2);
  std::set<std::vector<std::int64_t>> args;
  for (const auto& [l, f] : res.block.forms) {
    EXPECT_EQ(f, 1);
    args.insert({l.coords(0), l.coords(1), l.coords(2)});
  }
  // 2z1-z2, z1+z2-z3, z1+z3, z1, 2z2-z1-z3, z2+z3-z1, z2-z1, 2z3-z2, z3-z2, z3 up to sign
  const std::set<std::vector<std::int64_t>> expect{{2, -1, 0}, {1, 1, -1}, {1, 0, 1},  {1, 0, 0}, {1, -2, 1},
                                                   {1, -1, -1}, {1, -1, 0}, {0, 1, -2}, {0, 1, -1}, {0, 0, 1}};
  EXPECT_EQ(args, expect);

  const auto two = quasi_pullback_block(res.block, example_sub_basis("2A1_5_in_A3_5"));
  EXPECT_EQ(two.removed, 0);
  EXPECT_EQ(two.block.lattice, *named_lattice("2A1_5"));
  EXPECT_EQ(two.block.theta_count(), 10);
}

TEST(QuasiPullback, T0AndB0) {
  const auto t0 = quasi_pullback_block(theta_a4_descriptor(), example_sub_basis("T0"));
  EXPECT_EQ(t0.removed, 1);
  EXPECT_EQ(t0.block.theta_count(), 9);
  EXPECT_EQ(t0.block.net_eta_power(), -3);
  EXPECT_EQ(t0.block.weight(), 3);
  EXPECT_EQ(t0.block.lattice, *named_lattice("A0"));
  EXPECT_EQ(t0.block.lattice.det(), 50);

  const auto b0 = quasi_pullback_block(t0.block, example_sub_basis("B0_in_T0"));
  EXPECT_EQ(b0.removed, 1);
  EXPECT_EQ(b0.block.theta_count(), 8);
  EXPECT_EQ(b0.block.net_eta_power(), 0);
  EXPECT_EQ(b0.block.weight(), 4);
  EXPECT_EQ(b0.block.lattice, *named_lattice("B0"));
  // theta^2(z1) theta^4(z3) theta^2(z1+z3)
  std::map<std::vector<std::int64_t>, std::int64_t> forms;
  for (const auto& [l, f] : b0.block.forms) forms[{l.coords(0), l.coords(1)}] = f;
  EXPECT_EQ(forms, (std::map<std::vector<std::int64_t>, std::int64_t>{{{0, 1}, 4}, {{1, 0}, 2}, {{1, 1}, 2}}));
}

TEST(QuasiPullback, Errors) {
  IntMatrix non_primitive = IntMatrix::Zero(1, 4);
  non_primitive(0, 0) = 2;
  EXPECT_THROW(quasi_pullback_block(theta_a4_descriptor(), non_primitive), DomainError);
  EXPECT_TRUE(is_primitive(example_sub_basis("T0")));
}

TEST(QuasiPullback, RankWeightSanity) {
  const auto theta = theta_a4_descriptor();
  const auto t0 = quasi_pullback_block(theta, example_sub_basis("T0")).block;
  const auto b0 = quasi_pullback_block(t0, example_sub_basis("B0_in_T0")).block;
  const auto a3 = quasi_pullback_block(theta, example_sub_basis("A3_5")).block;
  for (const auto* d : {&theta, &t0, &b0, &a3}) EXPECT_TRUE(rank_weight_sane(*d)) << d->to_string();
}

TEST(LatticeTheta, WeylDenominatorSlice) {
  const auto theta = lattice_theta_expand(theta_a4_descriptor(), 3);
  const MultiLaurent slice = theta.q_slice(24);
  EXPECT_EQ(slice.size(), 120u);
  for (const auto& [z, c] : slice) EXPECT_TRUE(c == 1 || c == -1);

  // brute force: prod over positive roots of (z^{r/2} - z^{-r/2})
  std::map<ZVec, Rational> brute{{ZVec(4, 0), Rational(1)}};
  for (const auto& r : a4_data().positive_roots) {
    std::map<ZVec, Rational> next;
    for (const auto& [k, c] : brute)
      for (int s : {1, -1}) {
        ZVec k2 = k;
        for (int i = 0; i < 4; ++i) k2[i] += s * r(i);
        next[k2] += s * c;
      }
    brute.clear();
    for (auto& [k, c] : next)
      if (sgn(c) != 0) brute[k] = c;
  }
  EXPECT_EQ(slice, MultiLaurent(brute.begin(), brute.end()));
}

TEST(LatticeTheta, AntiInvariantUnderSimpleReflection) {
  const MultiLaurent slice = lattice_theta_expand(theta_a4_descriptor(), 1).q_slice(24);
  MultiLaurent image;
  for (const auto& [z, c] : slice) {
    ZVec w = z;
    w[0] = z[1] - z[0];
    image[w] -= c;
  }
  EXPECT_EQ(image, slice);
}

TEST(LatticeTheta, SpecializationCommutesWithExpansion) {
  const auto multi = lattice_theta_expand(theta_a4_descriptor(), 3);
  const auto one = block_expand(block_from_a({1, 1, 1, 1}), 3);
  EXPECT_EQ(specialize(multi, {1, 1, 1, 1}), one.series);
}

TEST(LatticePsi, QZeroSliceIsRootsPlusFour) {
  const auto d = theta_a4_descriptor();
  const MultiLaurent q0 = psi_a4().q_slice(0);
  EXPECT_EQ(q0, expected_psi_q0(d));
  EXPECT_EQ(q0.size(), 21u);
  EXPECT_EQ(q0.at(ZVec(4, 0)), 4);
  for (const auto& [z, c] : q0)
    if (z != ZVec(4, 0)) {
      EXPECT_EQ(c, 1);
      EXPECT_EQ(hyperbolic_norm(d.lattice, 0, z, 2), Rational(-2, 5));
    }
}

TEST(LatticePsi, SpecializesToOneVariablePsi) {
  const auto psi1 = psi_from_block(block_from_a({1, 1, 1, 2}), 1);
  EXPECT_EQ(specialize(psi_a4(), {1, 1, 1, 2}), psi1.series);
}

TEST(LatticePsi, TwoDesignConstant) {
  const auto d = theta_a4_descriptor();
  const auto C = two_design_constant(d.lattice, psi_a4().q_slice(0), 2);
  ASSERT_TRUE(C.has_value());
  EXPECT_EQ(*C, 1);
}

TEST(LatticePsi, SingularTermsTranslateToQZero) {
  const auto d = theta_a4_descriptor();
  const GramLattice& L = d.lattice;
  const std::set<Rational> allowed{Rational(-2, 5), Rational(-4, 5), Rational(-6, 5), Rational(-8, 5), Rational(-2)};
  int singular = 0;
  for (const auto& [qu, slice] : psi_a4().slices()) {
    for (const auto& [z, c] : slice) {
      const Rational h = hyperbolic_norm(L, qu, z, 2);
      if (sgn(h) >= 0) continue;
      ++singular;
      EXPECT_TRUE(allowed.count(h)) << "hyperbolic norm " << h;
      // f(n, l) = f(n + (x,x)/2 + (l,x), l + x): look for x landing on q^0
      bool found = false;
      const IntVector zv = IntVector::Map(z.data(), 4);
      for (std::int64_t a = -2; a <= 2 && !found; ++a)
        for (std::int64_t b = -2; b <= 2 && !found; ++b)
          for (std::int64_t e = -2; e <= 2 && !found; ++e)
            for (std::int64_t g = -2; g <= 2 && !found; ++g) {
              const IntVector x = vec({a, b, e, g});
              const Rational n2 = make_rational(qu, 24) + make_rational(L.norm(x), 2) + make_rational(zv.dot(x), 2);
              if (n2 != 0) continue;
              const IntVector moved = zv + 2 * (L.gram() * x);
              const ZVec key(moved.data(), moved.data() + 4);
              found = psi_a4().coeff(0, key) == c;
            }
      EXPECT_TRUE(found) << "no translation to q^0 for a term at q^" << qu / 24;
    }
  }
  EXPECT_GT(singular, 20);
}
