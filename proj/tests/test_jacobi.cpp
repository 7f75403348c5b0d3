#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "thetablock/jacobi.hpp"
#include "thetablock/reduced_coefficients.hpp"

using namespace thetablock;
using tbtest::pentagonal_oracle;
using tbtest::slash_sum_oracle;
using tbtest::theta_sum_oracle;

namespace {

bool all_arguments_nonzero(const std::array<std::int64_t, 4>& a) {
  for (auto x : a4_arguments(a))
    if (x == 0) return false;
  return true;
}

}  // namespace

TEST(Eta, LeadingTerms) {
  const FourierSeries e = eta_expand(24 * 5);
  EXPECT_EQ(e.coeff(1, 0), 1);
  EXPECT_EQ(e.coeff(25, 0), -1);
}

TEST(Eta, MatchesPentagonalSeries) {
  const std::int64_t top = 24 * 40 + 1;
  EXPECT_EQ(eta_expand(top).slices(), pentagonal_oracle(top).slices());
}

TEST(Eta, PowersAgreeWithRepeatedProduct) {
  const FourierSeries e = eta_expand(24 * 12);
  EXPECT_EQ(eta_power(3, 24 * 10).slices(), (e * e * e).truncated(24 * 10).slices());
  EXPECT_EQ((eta_power(-6, 24 * 10) * series_pow(e, 6)).truncated(24 * 10).slices(),
            FourierSeries::monomial(Rational(1), 0, std::int64_t{0}).slices());
}

TEST(Theta, LeadingTermAndOddness) {
  const FourierSeries t = theta_expand(1, 24 * 3);
  EXPECT_EQ(t.q_slice(3), (LaurentPoly{{-1, Rational(-1)}, {1, Rational(1)}}));
  EXPECT_EQ(theta_expand(-1, 24 * 3), -t);
  EXPECT_THROW(theta_expand(0, 24), ZeroBlockError);
}

TEST(Theta, TripleProductMatchesThetaSum) {
  for (std::int64_t a = 1; a <= 6; ++a) {
    const std::int64_t top = 24 * 5 + 3;
    EXPECT_EQ(theta_expand(a, top).slices(), theta_sum_oracle(a, top).slices()) << "a = " << a;
  }
}

TEST(Descriptor, FromA) {
  const auto d37 = block_from_a({1, 1, 1, 2});
  EXPECT_EQ(d37.theta_exps, (std::map<std::int64_t, std::int64_t>{{1, 3}, {2, 3}, {3, 2}, {4, 1}, {5, 1}}));
  EXPECT_EQ(d37.index(), 37);
  EXPECT_EQ(d37.weight(), 2);
  EXPECT_EQ(d37.net_eta_power(), -6);
  EXPECT_EQ(block_from_a({1, 1, 1, 1}).theta_exps,
            (std::map<std::int64_t, std::int64_t>{{1, 4}, {2, 3}, {3, 2}, {4, 1}}));
  EXPECT_EQ(block_from_a({1, 1, 1, 1}).index(), 25);
  const auto d43 = block_from_a({-1, 5, -1, -2});
  EXPECT_EQ(d43.theta_exps, (std::map<std::int64_t, std::int64_t>{{1, 3}, {2, 2}, {3, 2}, {4, 2}, {5, 1}}));
  EXPECT_EQ(d43.index(), 43);
  EXPECT_TRUE(block_from_a({1, 0, 0, 0}).zero);
}

TEST(Descriptor, TextRoundTrip) {
  const auto d = block_from_a({1, 1, 1, 2});
  EXPECT_EQ(d.to_string(), "eta^-6 * theta_1^3 * theta_2^3 * theta_3^2 * theta_4 * theta_5");
  EXPECT_EQ(ThetaBlockDescriptor::parse(d.to_string()), d);
  EXPECT_EQ(ThetaBlockDescriptor::parse("a=[1,1,1,2]"), d);
  const auto neg = ThetaBlockDescriptor::parse("eta^-3 * theta_-2 * theta_1^2");
  EXPECT_EQ(neg.sign, -1);
  EXPECT_EQ(neg.eta_exp, 0);
  EXPECT_EQ(ThetaBlockDescriptor::parse(neg.to_string()), neg);
  EXPECT_THROW(ThetaBlockDescriptor::parse("eta^-6 * phi_2"), DomainError);
  EXPECT_THROW(ThetaBlockDescriptor::parse("a=[1,2,3]"), DomainError);
}

TEST(BlockExpand, WeightIndexOrder) {
  const auto phi = block_expand(block_from_a({1, 1, 1, 1}), 6);
  EXPECT_EQ(phi.weight, 2);
  EXPECT_EQ(phi.index, 25);
  EXPECT_EQ(*phi.q_order(), 1);
  EXPECT_TRUE(phi.has_integral_exponents());
  EXPECT_THROW(block_expand(block_from_a({1, 0, 0, 0}), 3), ZeroBlockError);
}

TEST(BlockExpand, HolomorphyVerdicts) {
  const auto r37 = form_checks(block_expand(block_from_a({1, 1, 1, 2}), 8));
  EXPECT_TRUE(r37.is_cusp);
  EXPECT_TRUE(r37.evenness);
  const auto r50 = form_checks(block_expand(block_from_a({2, -1, -3, 6}), 8));
  EXPECT_TRUE(r50.is_holomorphic);
  EXPECT_FALSE(r50.is_cusp);
}

TEST(BlockExpand, EllipticLawAndEvenness) {
  const std::int64_t lambdas[] = {1, -1, 2, -2};
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<std::int64_t> ad(-3, 3);
  int done = 0;
  while (done < 6) {
    std::array<std::int64_t, 4> a{ad(rng), ad(rng), ad(rng), ad(rng)};
    if (!all_arguments_nonzero(a)) continue;
    ++done;
    const auto d = block_from_a(a);
    const auto phi = block_expand(d, 8);
    EXPECT_FALSE(elliptic_law_violation(phi, lambdas).has_value());
    EXPECT_TRUE(form_checks(phi).evenness);
    // the index seen by the elliptic law is the descriptor index
    EXPECT_EQ(make_rational(phi.index), d.index());
  }
}

TEST(BlockExpand, SignedArgumentsFoldIntoSign) {
  const auto plus = block_expand(block_from_a({1, 1, 1, 2}), 4);
  auto d = block_from_a({1, 1, 1, 2});
  d.sign = -1;
  EXPECT_EQ(block_expand(d, 4).series, -plus.series);
}

TEST(Hecke, IdentityAndSingleDivisor) {
  const auto phi = block_expand(block_from_a({1, 1, 1, 1}), 8);
  EXPECT_EQ(hecke_Tm(phi, 1).series, phi.series);
  const auto h = hecke_Tm(phi, 2);
  EXPECT_EQ(h.index, 50);
  EXPECT_EQ(h.qmax(), 4);
  for (std::int64_t n = 1; n <= 4; n += 2)
    for (std::int64_t r = -14; r <= 14; ++r) EXPECT_EQ(h.coeff(n, r), phi.coeff(2 * n, r));
  for (std::int64_t n = 0; n <= 4; ++n)
    for (std::int64_t r = -14; r <= 14; r += 2) EXPECT_EQ(h.coeff(n, r), h.coeff(n, -r));
}

TEST(Hecke, MatchesSlashSumDefinition) {
  const auto phi = block_expand(block_from_a({1, 1, 1, 1}), 9);
  for (std::int64_t m : {2, 3}) {
    const auto h = hecke_Tm(phi, m);
    EXPECT_EQ(h.series.slices(), slash_sum_oracle(phi, m).slices()) << "m = " << m;
  }
}

TEST(Psi, Index25QZeroSlice) {
  const auto d = block_from_a({1, 1, 1, 1});
  const auto psi = psi_from_block(d, 2);
  EXPECT_EQ(psi.weight, 0);
  EXPECT_EQ(psi.qmax(), 2);
  const LaurentPoly expect{{-8, 1}, {-6, 2}, {-4, 3}, {-2, 4}, {0, 4}, {2, 4}, {4, 3}, {6, 2}, {8, 1}};
  EXPECT_EQ(psi.series.q_slice(0), expect);
  Rational total = 0;
  for (const auto& [z, c] : psi.series.q_slice(0)) total += c;
  EXPECT_EQ(total, 24);
}

TEST(Psi, Index37Coefficients) {
  const auto d = block_from_a({1, 1, 1, 2});
  const auto psi = psi_from_block(d, 6);
  EXPECT_EQ(psi.coeff(0, 0), 4);
  EXPECT_EQ(psi.coeff(0, 1), 3);
  EXPECT_EQ(psi.coeff(0, 5), 1);
  EXPECT_EQ(psi.coeff(6, 30), 1);
  const auto rep = form_checks(psi);
  EXPECT_TRUE(rep.is_weak);
  EXPECT_FALSE(rep.is_holomorphic);
}

TEST(Psi, QZeroSliceMatchesDescriptor) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::int64_t> ad(-5, 5);
  int done = 0;
  while (done < 10) {
    std::array<std::int64_t, 4> a{ad(rng), ad(rng), ad(rng), ad(rng)};
    if (!all_arguments_nonzero(a)) continue;
    ++done;
    const auto d = block_from_a(a);
    EXPECT_TRUE(q0_matches_descriptor(psi_from_block(d, 0), d));
  }
}

TEST(Psi, RoundTripAndEllipticLaw) {
  const auto d = block_from_a({-1, 5, -1, -2});
  const auto theta = block_expand(d, 10);
  const auto psi = psi_quotient(theta);
  const auto back = -(psi.series * theta.series);
  const auto h = hecke_Tm(theta, 2);
  const std::int64_t top = std::min(back.qmax(), h.series.qmax());
  EXPECT_EQ(back.truncated(top), h.series.truncated(top));
  const std::int64_t lambdas[] = {1, -1};
  EXPECT_FALSE(elliptic_law_violation(psi, lambdas).has_value());
}

TEST(Psi, SingularCoefficientsIntegral) {
  for (auto a : {std::array<std::int64_t, 4>{1, 1, 1, 1}, {1, 1, 1, 2}, {-1, 5, -1, -2}}) {
    const auto psi = psi_from_block(block_from_a(a), 4);
    for (const auto& [q, s] : psi.series.slices())
      for (const auto& [z, c] : s)
        if (4 * psi.index * (q / 24) < (z / 2) * (z / 2)) EXPECT_TRUE(is_integer(c));
  }
}

TEST(Psi, RejectsWrongOrder) {
  // eta^2 * theta_1^2 ... has q-order 1/3, not one.
  ThetaBlockDescriptor d;
  d.eta_exp = 4;
  d.theta_exps = {{1, 2}};
  EXPECT_THROW(psi_from_block(d, 1), DomainError);
}

TEST(ReducedCoefficients, FoldedRouteMatchesSeries) {
  for (auto a : {std::array<std::int64_t, 4>{1, 1, 1, 2}, {2, -1, -3, 6}}) {
    const auto d = block_from_a(a);
    const auto phi = block_expand(d, 14);
    const auto from_series = ReducedCoefficients::from_series(phi);
    const auto folded = ReducedCoefficients::from_block(d, 14);
    const std::int64_t N = phi.index;
    for (std::int64_t n = 0; n <= 14; ++n)
      for (std::int64_t r = -N + 1; r <= N; ++r) EXPECT_EQ(folded.reduced(n, r), from_series.reduced(n, r));
    // deep coefficients through the elliptic law agree with the stored window
    for (std::int64_t n = 0; n <= 14; ++n)
      for (std::int64_t r = -30; r <= 30; ++r) EXPECT_EQ(folded.coeff(n, r), phi.coeff(n, r));
    EXPECT_TRUE(folded.holomorphic());
  }
}

TEST(ReducedCoefficients, ReducedCoeffOnSeries) {
  const auto phi = block_expand(block_from_a({1, 1, 1, 2}), 12);
  for (std::int64_t n = 0; n <= 6; ++n)
    for (std::int64_t r = -20; r <= 20; ++r) EXPECT_EQ(phi.reduced_coeff(n, r), phi.coeff(n, r));
  EXPECT_THROW(phi.reduced_coeff(200, 0), WindowError);
}
