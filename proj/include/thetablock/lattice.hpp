#pragma once

// Even positive definite lattices by Gram matrix, discriminant classes,
// the A4 / A4^v(5) data, Weyl transitivity, and lattice theta blocks with
// their specializations, quasi pull-backs and multivariate expansions.
//
// Dual vectors are stored in the dual basis e*_i of the stored lattice basis,
// scaled by an integer denominator.  For A4^v(5) with basis w_i the dual
// basis is e*_i = alpha_i / 5.

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "thetablock/fourier_series.hpp"
#include "thetablock/jacobi.hpp"

namespace thetablock {

using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
using IntVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

/// Exact determinant by fraction-free elimination.
Integer determinant(const IntMatrix& m);

class GramLattice {
 public:
  GramLattice() = default;
  /// Checks symmetry, even diagonal and positive definiteness.
  explicit GramLattice(IntMatrix gram);

  std::size_t rank() const { return static_cast<std::size_t>(gram_.rows()); }
  const IntMatrix& gram() const { return gram_; }
  std::int64_t det() const { return det_; }
  /// det * G^{-1}.
  const IntMatrix& adjugate() const { return adj_; }

  /// (x, x) for a lattice vector in basis coordinates.
  std::int64_t norm(const IntVector& x) const;

  bool operator==(const GramLattice& o) const { return gram_ == o.gram_; }

 private:
  IntMatrix gram_;
  IntMatrix adj_;
  std::int64_t det_ = 1;
};

/// sum_i (coords_i / den) e*_i.
struct DualVector {
  IntVector coords;
  std::int64_t den = 1;

  bool operator==(const DualVector& o) const;
  bool operator<(const DualVector& o) const;
  bool is_zero() const;
};

DualVector dual(std::initializer_list<std::int64_t> coords, std::int64_t den = 1);

/// (l, l) = y^T adj(G) y / (det den^2).
Rational dual_norm(const GramLattice& L, const DualVector& l);
/// (l, x) for a lattice vector x in basis coordinates.
Rational pairing(const DualVector& l, const IntVector& x);

struct ClassGroup {
  Rational min_norm;
  std::int64_t class_count = 0;
  std::int64_t elements_per_class = 0;  // representatives of minimal norm

  bool operator==(const ClassGroup&) const = default;
};

struct DualClassReport {
  std::int64_t order_of_D = 0;
  std::int64_t classes_reached = 0;  // classes with a representative of norm <= bound
  Rational norm_bound;
  std::vector<ClassGroup> classes;    // sorted by (min_norm, elements_per_class)
  bool norm2_holds = false;
};

/// One discriminant class with its minimal-norm representatives.
struct DualClass {
  IntVector key;  // canonical residue of the class
  Rational min_norm;
  std::vector<IntVector> representatives;
};

/// Canonical residue of an integral dual vector modulo the lattice.
IntVector class_key(const GramLattice& L, const IntVector& y);

/// All dual vectors (den 1) with norm <= bound, by exact Fincke-Pohst search.
std::vector<IntVector> short_dual_vectors(const GramLattice& L, const Rational& bound,
                                          std::size_t cap = 2'000'000);

std::vector<DualClass> enumerate_classes(const GramLattice& L, const Rational& norm_bound,
                                         std::size_t cap = 2'000'000);

/// Norm_2 is decided with bound max(norm_bound, 2).
DualClassReport discriminant_classes(const GramLattice& L, const Rational& norm_bound = Rational(2),
                                     std::size_t cap = 2'000'000);

struct A4Data {
  IntMatrix gram_root;                 // Cartan matrix
  IntMatrix gram_weight5;              // 5 (w_i, w_j)
  std::vector<IntVector> positive_roots;  // alpha-coordinates
  std::vector<IntVector> fundamental_weights_5;  // 5 w_i in the ambient Z^5
  std::vector<IntVector> simple_roots_ambient;   // alpha_i in the ambient Z^5
};

const A4Data& a4_data();

/// (alpha_i, w_j) = delta_ij, root norms 2, gram_weight5 = 5 (w_i, w_j).
bool a4_consistent();

/// 1/2 a^T G a with G = 5 (w_i, w_j).
std::int64_t index_N(const std::array<std::int64_t, 4>& a);

/// The explicit quadratic polynomial in a1..a4.
std::int64_t index_polynomial(const std::array<std::int64_t, 4>& a);

struct WeylReport {
  std::size_t group_order = 0;
  std::map<Rational, std::vector<std::size_t>> orbit_sizes;  // min norm -> orbit sizes
  bool identity_fixes_all = false;
  bool transitive = false;
};

/// The 240 matrices of W(A4) x {+-1} acting on alpha-coordinates.
std::vector<IntMatrix> weyl_group_a4();

WeylReport weyl_transitivity_report();
bool weyl_transitivity_check();

struct LatticeBlockDescriptor {
  GramLattice lattice;
  std::int64_t eta_exp = 0;  // f(0)
  std::vector<std::pair<DualVector, std::int64_t>> forms;  // l -> f(l), sorted, sign-normalized
  int sign = 1;
  bool zero = false;

  Rational weight() const { return make_rational(eta_exp, 2); }
  std::int64_t theta_count() const;
  std::int64_t net_eta_power() const { return eta_exp - theta_count(); }
  std::string to_string() const;
};

/// Sign-normalizes forms (first nonzero coordinate positive), merges duplicates.
LatticeBlockDescriptor normalized(LatticeBlockDescriptor d);

/// eta^-6 prod_{alpha > 0} theta((alpha/5, z)) on A4^v(5).
LatticeBlockDescriptor theta_a4_descriptor();

/// z = t v with v in the lattice basis: each form becomes the integer (l, v).
ThetaBlockDescriptor specialize_block(const LatticeBlockDescriptor& d, const IntVector& v);

/// gcd of the maximal minors of the rows equals one.
bool is_primitive(const IntMatrix& rows);

struct PullbackResult {
  LatticeBlockDescriptor block;
  std::int64_t removed = 0;  // vanishing theta factors, with multiplicity
};

/// Restriction to the sublattice spanned by the rows of `sub_basis` (lattice
/// basis coordinates).  Each vanishing theta becomes eta^3.
PullbackResult quasi_pullback_block(const LatticeBlockDescriptor& d, const IntMatrix& sub_basis);

/// Named registry: A4, A4v5, A3_5, 2A1_5, A0, B0.
std::optional<GramLattice> named_lattice(const std::string& name);
std::vector<std::string> lattice_names();

/// Sub-basis rows for the worked examples: "T0", "B0_in_T0", "A3_5", "2A1_5_in_A3_5".
IntMatrix example_sub_basis(const std::string& name);

/// Elliptic exponents are integer vectors in units e*_i / (2 den), den the
/// lcm of the form denominators; for A4^v(5) this is alpha_i / 10.
MultiFourierSeries lattice_theta_expand(const LatticeBlockDescriptor& d, std::int64_t qmax);

/// Lattice T_-(2): f(2n, l) + 2^{k-1} f(n/2, l/2), the second term when
/// l/2 lies in the dual lattice.
MultiFourierSeries lattice_hecke2(const MultiFourierSeries& f, std::int64_t weight);

/// -(Theta | T_-(2)) / Theta to q^qmax.
MultiFourierSeries lattice_psi_q0(const LatticeBlockDescriptor& d, std::int64_t qmax = 1);

/// The expected q^0 slice sum_l f(l) (z^l + z^-l) + 2k.
MultiLaurent expected_psi_q0(const LatticeBlockDescriptor& d);

/// sum f(0,l) (l,x)(l,y) = 2C (x,y) on basis pairs; returns C if it exists.
std::optional<Rational> two_design_constant(const GramLattice& L, const MultiLaurent& q0, std::int64_t zden);

/// 2n - (l, l) for a stored exponent (q units of 1/24, z units of e*/zden).
Rational hyperbolic_norm(const GramLattice& L, std::int64_t q_units, const ZVec& zvec, std::int64_t zden);

/// rank <= 8 and rank/2 <= k <= 12 - rank.
bool rank_weight_sane(const LatticeBlockDescriptor& d);

}  // namespace thetablock
