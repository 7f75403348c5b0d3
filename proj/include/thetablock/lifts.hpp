#pragma once

// Additive lifts and Borcherds products as coefficient tables c(n, r, m) of
// q^n z^r xi^{Nm}, singular parts, Humbert multiplicities, linear relations
// among Fourier coefficients, and the end-to-end comparison lift = Borch.

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "thetablock/jacobi.hpp"
#include "thetablock/reduced_coefficients.hpp"

namespace thetablock {

struct LeadingExponents {
  Rational A, B, C;
  Integer D0;

  bool operator==(const LeadingExponents&) const = default;
};

/// Prefactor data q^A z^B xi^C read from the q^0 slice of a weight-0 form.
LeadingExponents leading_exponents(const JacobiFormSeries& psi);

struct LiftTable {
  std::int64_t index_N = 0;
  Rational weight;
  std::int64_t n_max = 0, m_max = 0;
  /// rows[m] holds the xi^{Nm} Fourier-Jacobi coefficient up to q^{n_max}.
  std::vector<FourierSeries> rows;
  std::optional<LeadingExponents> leading;

  /// Coefficient of q^n z^r xi^{Nm}.
  Rational coeff(std::int64_t n, std::int64_t r, std::int64_t m) const;
  /// All nonzero cells, keyed (n, r, m).
  std::map<std::tuple<std::int64_t, std::int64_t, std::int64_t>, Rational> cells() const;
  /// c(n, r, m) = c(m, r, n) and c(n, -r, m) = c(n, r, m) on the window.
  bool symmetric() const;
  bool even() const;
};

/// Rows m = 1..m_max of sum_m (phi | T_-(m)) xi^{Nm}; needs phi to q^{n_max m_max}.
LiftTable grit_table(const JacobiFormSeries& phi, std::int64_t n_max, std::int64_t m_max);

/// q^A z^B xi^C prod (1 - q^n z^r xi^{Nm})^{c(nm, r)} expanded to q^{n_max}, xi^{N m_max}.
LiftTable borch_table(const JacobiFormSeries& psi, std::int64_t n_max, std::int64_t m_max);

/// Depth of Psi needed by borch_table at this window.
std::int64_t borch_required_depth(std::int64_t n_max, std::int64_t m_max);

struct SingularOrbit {
  std::int64_t n = 0;
  std::int64_t r = 0;
  Rational coeff;
  std::int64_t disc = 0;  // r^2 - 4Nn

  bool operator==(const SingularOrbit&) const = default;
};

struct SingularPart {
  std::int64_t index_N = 0;
  std::vector<SingularOrbit> orbits;  // sorted by (n, r)
  bool complete = false;              // window reaches floor(N/4)
  std::int64_t window_qmax = 0;

  /// "z^5+z^4+2z^3+3z^2+3z+4+q^6 z^30".
  std::string to_string() const;

  bool operator==(const SingularPart&) const = default;
};

/// Orbits of coefficients with r^2 - 4Nn > 0, reduced to r in [0, N] with
/// minimal n, together with the constant term c(0, 0).
SingularPart singular_part(const JacobiFormSeries& psi);

/// q-depth of Psi that makes singular_part complete.
std::int64_t sing_required_depth(std::int64_t N);

struct HumbertLabel {
  std::int64_t n0 = 0, r0 = 0, m0 = 0;

  bool operator==(const HumbertLabel&) const = default;
  auto operator<=>(const HumbertLabel&) const = default;
};

/// sum_{d >= 1} c(d^2 n0 m0, d r0) through the elliptic law.
Integer humbert_multiplicity(const JacobiFormSeries& psi, const HumbertLabel& T);

struct DivisorEntry {
  HumbertLabel label;
  Integer multiplicity;

  bool operator==(const DivisorEntry&) const = default;
};

/// Labels (n, r, 1) over the singular orbits with r > 0, nonzero multiplicity only.
std::vector<DivisorEntry> divisor_list(const JacobiFormSeries& psi, const SingularPart& sing);

/// Whether every divisor has n = 0 (the theta-block Humbert surfaces).
bool theta_block_divisors_only(const std::vector<DivisorEntry>& divisors);

struct RelationReport {
  std::int64_t alpha = 0, beta = 0;
  std::int64_t n_lo = 0, n_hi = 0, r_bound = 0;
  std::int64_t depth = 0;   // q-depth of the coefficient table used
  std::int64_t terms = 0;   // coefficients summed
  std::vector<std::tuple<std::int64_t, std::int64_t, Rational>> nonzero;  // (n, r, sum)

  bool all_zero() const { return nonzero.empty(); }
};

/// Closed integer interval of a with 4N(alpha a^2 + n a) - (beta a + r)^2 >= 0.
/// Throws DomainError when 4N alpha - beta^2 >= 0 (the set is unbounded).
std::pair<std::int64_t, std::int64_t> relation_interval(std::int64_t N, std::int64_t alpha, std::int64_t beta,
                                                        std::int64_t n, std::int64_t r);

/// Largest reduced q-exponent touched by check_relation on this range.
std::int64_t relation_required_depth(std::int64_t N, std::int64_t alpha, std::int64_t beta, std::int64_t n_lo,
                                     std::int64_t n_hi, std::int64_t r_bound);

/// sum_a c(alpha a^2 + n a, beta a + r; phi) for n in [n_lo, n_hi], |r| <= r_bound.
/// The table must be holomorphic and deep enough.
RelationReport check_relation(const ReducedCoefficients& phi, std::int64_t alpha, std::int64_t beta,
                              std::int64_t n_lo, std::int64_t n_hi, std::int64_t r_bound);

/// Expands the block as deep as the range needs and runs check_relation.
RelationReport check_relation(const ThetaBlockDescriptor& d, std::int64_t alpha, std::int64_t beta,
                              std::int64_t n_lo, std::int64_t n_hi, std::int64_t r_bound);

struct Mismatch {
  std::int64_t n = 0, r = 0, m = 0;
  Rational grit, borch;

  bool operator==(const Mismatch&) const = default;
};

struct VerifyReport {
  std::array<std::int64_t, 4> a{};
  std::string descriptor;
  int sign = 1;  // the lift of phi is compared with sign * Borch(Psi)
  std::int64_t N = 0;
  Rational weight;
  std::int64_t n_max = 0, m_max = 0;
  std::int64_t phi_qmax = 0, psi_qmax = 0;
  bool equal = false;
  std::optional<Mismatch> first_mismatch;
  bool fj_row1_is_theta = false;
  bool fj_row2_is_minus_theta_psi = false;
  SingularPart sing;
  std::vector<DivisorEntry> divisors;  // empty unless sing.complete
  LeadingExponents leading;
  std::map<std::string, double> timings_ms;

  bool operator==(const VerifyReport&) const = default;
};

using BlockExpander = std::function<JacobiFormSeries(const ThetaBlockDescriptor&, std::int64_t)>;

struct VerifyOptions {
  std::int64_t n_max = 3, m_max = 3;
  /// Psi depth; defaults to max(n_max m_max, floor(N/4)).  Smaller values raise WindowError.
  std::optional<std::int64_t> psi_qmax;
  /// Replaces block_expand, e.g. by a cached version.
  BlockExpander expand;
};

/// The additive lift of phi_{2,a} against sign * Borch(Psi) on n, m <= window, all r, where
/// sign is the leading coefficient of phi_{2,a}.
VerifyReport verify_conjecture(const std::array<std::int64_t, 4>& a, const VerifyOptions& opt);
VerifyReport verify_conjecture(const std::array<std::int64_t, 4>& a, std::int64_t n_max = 3, std::int64_t m_max = 3);

}  // namespace thetablock
