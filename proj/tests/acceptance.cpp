// End-to-end acceptance run: one PASS/FAIL line per criterion.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "generators.hpp"
#include "oracles.hpp"
#include "thetablock/cli.hpp"
#include "thetablock/lattice.hpp"
#include "thetablock/lifts.hpp"

using namespace thetablock;

namespace {

using A = std::array<std::int64_t, 4>;

const A kInstances[] = {{1, 1, 1, 1}, {1, 1, 1, 2}, {-1, 5, -1, -2}, {2, -1, -3, 6}, {1, -6, 3, 1}};

struct Outcome {
  bool pass = true;
  std::ostringstream note;
  std::string failures;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    if (!failures.empty()) failures += "; ";
    failures += what;
    pass = false;
  }
};

bool criterion_1(Outcome& o) {
  const std::pair<std::int64_t, const char*> expected[] = {
      {25, "Sing(psi_{0,25}) = z^4+2z^3+3z^2+4z+4\n"},
      {37, "Sing(psi_{0,37}) = z^5+z^4+2z^3+3z^2+3z+4+q^6 z^30\n"},
      {43, "Sing(psi_{0,43}) = z^5+2z^4+2z^3+2z^2+3z+4+q^2 z^19+q^3 z^23\n"},
      {50, "Sing(psi_{0,50}) = z^6+2z^4+2z^3+3z^2+2z+4+q^5 z^32+2q^11 z^47+2q^12 z^49\n"},
      {53, "Sing(psi_{0,53}) = z^6+z^5+z^4+2z^3+2z^2+3z+4+q z^15+q^2 z^21+q^6 z^36\n"},
  };
  int ok = 0;
  for (const auto& [N, text] : expected) {
    std::ostringstream out, err;
    const int code = run_cli({"sing", "--index", std::to_string(N)}, out, err);
    const bool match = code == 0 && out.str() == text;
    o.require(match, "index " + std::to_string(N) + " printed '" + out.str() + err.str() + "'");
    ok += match;
  }
  o.note << ok << "/5 Sing strings byte-exact";
  return o.pass;
}

bool criterion_2(Outcome& o) {
  const auto psi = psi_from_block(block_from_a({1, 1, 1, 2}), sing_required_depth(37));
  const std::pair<HumbertLabel, int> divisor[] = {
      {{0, 1, 1}, 10}, {{0, 2, 1}, 4}, {{0, 3, 1}, 2}, {{0, 4, 1}, 1}, {{0, 5, 1}, 1}, {{6, 30, 1}, 1}};
  std::ostringstream got;
  for (const auto& [T, m] : divisor) {
    const Integer v = humbert_multiplicity(psi, T);
    got << v << " ";
    o.require(v == m, "label (" + std::to_string(T.n0) + "," + std::to_string(T.r0) + ",1) gave " + v.get_str());
  }
  for (const HumbertLabel T : {HumbertLabel{1, 13, 1}, {0, 6, 1}, {1, 14, 1}}) {
    const Integer v = humbert_multiplicity(psi, T);
    got << "| " << v << " ";
    o.require(v == 0, "control (" + std::to_string(T.n0) + "," + std::to_string(T.r0) + ",1) gave " + v.get_str());
  }
  o.note << "multiplicities " << got.str();
  return o.pass;
}

bool criterion_3(Outcome& o) {
  for (const auto& a : kInstances) {
    const auto rep = verify_conjecture(a, 3, 3);
    o.require(rep.equal, "mismatch for N = " + std::to_string(rep.N));
  }
  o.note << "lift = Borch on n, m <= 3 for N = 25, 37, 43, 50, 53";
  return o.pass;
}

bool criterion_4(Outcome& o) {
  struct Rel {
    A a;
    std::int64_t alpha, beta;
  };
  for (const Rel& r : {Rel{{1, 1, 1, 2}, 6, 30}, Rel{{-1, 5, -1, -2}, 2, 19}, Rel{{-1, 5, -1, -2}, 3, 23}}) {
    const auto rep = check_relation(block_from_a(r.a), r.alpha, r.beta, 0, 15, 60);
    o.require(rep.all_zero(), "(" + std::to_string(r.alpha) + "," + std::to_string(r.beta) + ") has " +
                                  std::to_string(rep.nonzero.size()) + " nonzero sums");
    o.note << "(" << r.alpha << "," << r.beta << ") " << rep.terms << " terms to q^" << rep.depth << "; ";
  }
  const auto control = check_relation(block_from_a({1, 1, 1, 1}), 1, 11, 0, 15, 60);
  o.require(!control.all_zero(), "negative control (1,11) on index 25 is all zero");
  o.note << "control (1,11) on index 25: " << control.nonzero.size() << " nonzero";
  return o.pass;
}

bool criterion_5(Outcome& o) {
  const auto rep = discriminant_classes(*named_lattice("A4v5"));
  o.require(rep.order_of_D == 125, "|D| = " + std::to_string(rep.order_of_D));
  auto has = [&](Rational norm, std::int64_t classes, std::int64_t elements) {
    for (const auto& c : rep.classes)
      if (c.min_norm == norm && c.class_count == classes && c.elements_per_class == elements) return true;
    return false;
  };
  o.require(has(Rational(6, 5), 30, 2), "missing 30 x 2 at 6/5");
  o.require(has(Rational(8, 5), 20, 3), "missing 20 x 3 at 8/5");
  o.require(has(Rational(2), 24, 5), "missing 24 x 5 at 2");
  o.require(rep.norm2_holds, "Norm_2 fails on A4v5");
  IntMatrix g(1, 1);
  g(0, 0) = 14;
  o.require(!discriminant_classes(GramLattice(g)).norm2_holds, "Norm_2 holds on <14>");
  o.note << "|D| = 125, 30x2 @ 6/5, 20x3 @ 8/5, 24x5 @ 2, Norm_2 true; <14> false";
  return o.pass;
}

bool criterion_6(Outcome& o) {
  const auto theta = theta_a4_descriptor();
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<std::int64_t> ad(-9, 9);
  int done = 0;
  while (done < 50) {
    A a{ad(rng), ad(rng), ad(rng), ad(rng)};
    if (a == A{0, 0, 0, 0}) continue;
    ++done;
    o.require(specialize_block(theta, IntVector::Map(a.data(), 4)) == block_from_a(a), "specialization differs");
  }
  int grid = 0;
  for (std::int64_t a1 = -5; a1 <= 5; ++a1)
    for (std::int64_t a2 = -5; a2 <= 5; ++a2)
      for (std::int64_t a3 = -5; a3 <= 5; ++a3)
        for (std::int64_t a4 = -5; a4 <= 5; ++a4) {
          const A a{a1, a2, a3, a4};
          const auto d = block_from_a(a);
          const bool ok = index_N(a) == index_polynomial(a) && (d.zero || d.index() == index_N(a));
          o.require(ok, "index mismatch");
          ++grid;
        }
  o.note << "50 random specializations, " << grid << " grid points";
  return o.pass;
}

bool criterion_7(Outcome& o) {
  const auto t0 = quasi_pullback_block(theta_a4_descriptor(), example_sub_basis("T0"));
  o.require(t0.block.theta_count() == 9 && t0.block.net_eta_power() == -3, "T0 is not 9 thetas over eta^3");
  o.require(t0.block.weight() == 3, "T0 weight " + t0.block.weight().get_str());
  o.require(t0.block.lattice.det() == 50 && t0.block.lattice == *named_lattice("A0"), "T0 lattice is not A0");
  const auto b0 = quasi_pullback_block(t0.block, example_sub_basis("B0_in_T0"));
  o.require(b0.block.theta_count() == 8 && b0.block.net_eta_power() == 0, "B0 is not a pure 8-theta product");
  o.require(b0.block.weight() == 4, "B0 weight " + b0.block.weight().get_str());
  o.require(b0.block.lattice == *named_lattice("B0"), "B0 lattice differs");
  o.note << t0.block.to_string() << " (weight 3, det 50); " << b0.block.to_string() << " (weight 4)";
  return o.pass;
}

bool criterion_8(Outcome& o) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 500; ++t) {
    const FourierSeries a = tbtest::random_series(rng, 40, -24, 96, 10);
    const FourierSeries b = tbtest::random_series(rng, 40, -24, 96, 10);
    if (tbtest::flatten(a * b) != tbtest::naive_product(a, b)) {
      o.require(false, "product trial " + std::to_string(t));
      break;
    }
  }
  const auto phi = block_expand(block_from_a({1, 1, 1, 1}), 9);
  for (std::int64_t m : {2, 3}) {
    const auto h = hecke_Tm(phi, m);
    o.require(h.qmax() >= 3, "Hecke window below q^3");
    o.require(h.series.truncated(3 * kQDen).same_terms(tbtest::slash_sum_oracle(phi, m).truncated(3 * kQDen)),
              "Hecke T(" + std::to_string(m) + ") differs from the slash sum");
  }
  for (std::int64_t a = 1; a <= 6; ++a)
    o.require(theta_expand(a, 5 * kQDen).same_terms(tbtest::theta_sum_oracle(a, 5 * kQDen)),
              "theta_" + std::to_string(a) + " differs from the theta sum");
  o.note << "500 products, Hecke m = 2, 3 to q^3, theta_1..6 to q^5";
  return o.pass;
}

bool criterion_9(Outcome& o) {
  for (const auto& a : kInstances) {
    const auto rep = verify_conjecture(a, 3, 3);
    const auto d = block_from_a(a);
    const std::string tag = "N = " + std::to_string(rep.N) + ": ";
    o.require(rep.fj_row1_is_theta, tag + "row 1 differs from Theta");
    o.require(rep.fj_row2_is_minus_theta_psi, tag + "row 2 differs from -Theta Psi");
    o.require(rep.leading.A == 1, tag + "A = " + rep.leading.A.get_str());
    o.require(rep.leading.B == make_rational(d.weighted_argument_sum(), 2), tag + "B = " + rep.leading.B.get_str());
    o.require(rep.leading.C == rep.N, tag + "C = " + rep.leading.C.get_str());
    o.note << "B=" << rep.leading.B << " ";
  }
  o.note << "(A = 1, C = N on all five)";
  return o.pass;
}

bool criterion_10(Outcome& o) {
  const auto d = theta_a4_descriptor();
  const MultiLaurent slice = lattice_theta_expand(d, 1).q_slice(kQDen);
  bool units = slice.size() == 120;
  for (const auto& [z, c] : slice) units = units && (c == 1 || c == -1);
  o.require(units, "q^1 slice has " + std::to_string(slice.size()) + " terms");
  const auto psi = lattice_psi_q0(d, 1);
  const MultiLaurent q0 = psi.q_slice(0);
  o.require(q0 == expected_psi_q0(d) && q0.size() == 21 && q0.at(ZVec(4, 0)) == 4, "Psi_A4 q^0 slice differs");
  o.require(specialize(psi, {1, 1, 1, 2}) == psi_from_block(block_from_a({1, 1, 1, 2}), 1).series,
            "specialization at (1,1,1,2) differs");
  o.require(weyl_transitivity_check(), "Weyl group not transitive");
  o.note << "120 monomials, q^0 = 20 roots + 4, specialization to q^1, W(A4) x {+-1} transitive";
  return o.pass;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<bool(Outcome&)>> criteria[] = {
      {"Sing regression", criterion_1},        {"Divisor of Borch(psi_37)", criterion_2},
      {"Conjecture verification", criterion_3}, {"Linear relations", criterion_4},
      {"Lattice report", criterion_5},          {"Specialization chain", criterion_6},
      {"Quasi pull-back bookkeeping", criterion_7}, {"Oracle equivalence", criterion_8},
      {"Borcherds structure", criterion_9},     {"Multivariate stretch", criterion_10},
  };
  int failed = 0, i = 0;
  for (const auto& [name, run] : criteria) {
    ++i;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      run(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %2d %s  %s: %s (%.2f s)\n", i, o.pass ? "PASS" : "FAIL", name,
                o.pass ? o.note.str().c_str() : o.failures.c_str(), s);
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d/10 criteria passed\n", 10 - failed);
  return failed == 0 ? 0 : 1;
}
