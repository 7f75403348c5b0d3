#pragma once

// Theta blocks, Dedekind eta, odd Jacobi theta series, the index-raising
// Hecke operators T_-(m) and the weight-0 quotient
// Psi = -(Theta | T_-(2)) / Theta, all as one-variable truncated series.
//
// Conventions: series exponents are stored in units q^(1/24) and z^(1/2).
// Functions taking `qmax` as a plain integer count whole powers of q.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "thetablock/fourier_series.hpp"

namespace thetablock {

/// sign * eta^{f(0)} * prod_{a>0} (theta_a / eta)^{f(a)}.
struct ThetaBlockDescriptor {
  std::int64_t eta_exp = 0;                          // f(0)
  std::map<std::int64_t, std::int64_t> theta_exps;   // a > 0 -> f(a) != 0
  int sign = 1;
  bool zero = false;  // some argument vanished: the block is identically zero

  Rational weight() const;
  Rational index() const;
  std::int64_t theta_count() const;
  /// f(0) - sum f(a): the exponent of eta once the thetas are written bare.
  std::int64_t net_eta_power() const;
  bool is_pure() const;
  /// sum_{a>0} a f(a).
  std::int64_t weighted_argument_sum() const;

  /// "eta^-6 * theta_1^3 * theta_2^3 * ...", with a leading "-" for sign -1.
  std::string to_string() const;
  /// Accepts the product text format or the shorthand "a=[a1,a2,a3,a4]".
  static ThetaBlockDescriptor parse(const std::string& text);

  bool operator==(const ThetaBlockDescriptor&) const = default;
};

/// Tallies theta_{x} for each linear argument x, folding theta_{-x} = -theta_x
/// into the sign.  A zero argument sets the zero flag.
ThetaBlockDescriptor block_from_arguments(std::int64_t eta_exp, std::span<const std::int64_t> args);

/// The ten arguments a1, a2, a3, a4, a1+a2, ..., a1+a2+a3+a4.
std::array<std::int64_t, 10> a4_arguments(const std::array<std::int64_t, 4>& a);

/// phi_{2,a} = eta^{-6} * prod of the ten thetas.
ThetaBlockDescriptor block_from_a(const std::array<std::int64_t, 4>& a);

struct JacobiFormSeries {
  FourierSeries series;
  Rational weight;
  std::int64_t index = 0;

  /// q-order in whole powers of q (may be fractional), empty for the zero form.
  std::optional<Rational> q_order() const;
  /// Largest whole power n of q with every q^n coefficient known.
  std::int64_t qmax() const;
  /// c(n, r) for integral exponents.
  Rational coeff(std::int64_t n, std::int64_t r) const;
  /// c(n, r) through the elliptic law c(n, r) = c(n + l^2 N + l r, r + 2 l N):
  /// reduces r into [-N, N) and reads the stored window.  Coefficients whose
  /// reduced q-exponent is negative are zero for weak forms.
  Rational reduced_coeff(std::int64_t n, std::int64_t r) const;
  /// True when every stored exponent is integral (q^n z^r with n, r in Z).
  bool has_integral_exponents() const;
};

/// eta(tau) = q^(1/24) prod (1 - q^n), truncated at qmax_units / 24.
FourierSeries eta_expand(std::int64_t qmax_units);

/// theta(tau, a z) via the Jacobi triple product, truncated at qmax_units / 24.
FourierSeries theta_expand(std::int64_t a, std::int64_t qmax_units);

/// eta^e via the power of prod (1 - q^n) (no truncation loss for negative e).
FourierSeries eta_power(std::int64_t e, std::int64_t qmax_units);

JacobiFormSeries block_expand(const ThetaBlockDescriptor& d, std::int64_t qmax);

/// Coefficient formula sum_{d | (n, r, m)} d^{k-1} c(nm/d^2, r/d).
JacobiFormSeries hecke_Tm(const JacobiFormSeries& phi, std::int64_t m);

/// Psi = -(Theta | T_-(2)) / Theta for a form of q-order exactly one.
/// The result is known to q^(floor(Theta.qmax / 2) - 1).
JacobiFormSeries psi_quotient(const JacobiFormSeries& theta);

/// Expands the block far enough that Psi is known to q^qmax.
JacobiFormSeries psi_from_block(const ThetaBlockDescriptor& d, std::int64_t qmax);

/// True when c(0,0) = 2k and c(0, +-a) = f(a) on the q^0 slice of psi.
bool q0_matches_descriptor(const JacobiFormSeries& psi, const ThetaBlockDescriptor& d);

/// Window-relative support verdicts; all claims hold "up to qmax".
struct FormReport {
  std::optional<Rational> q_order;
  bool is_weak = false;         // no negative powers of q
  bool is_holomorphic = false;  // 4Nn - r^2 >= 0 on the support
  bool is_cusp = false;         // 4Nn - r^2 > 0 on the support
  bool evenness = false;        // c(n, -r) = c(n, r)
  std::int64_t window_qmax = 0;
};

FormReport form_checks(const JacobiFormSeries& phi);

/// First (n, r) where c(n, r) != c(n + l^2 N + l r, r + 2 l N) with both
/// indices inside the window, for l in `lambdas`.
std::optional<std::pair<std::int64_t, std::int64_t>> elliptic_law_violation(
    const JacobiFormSeries& phi, std::span<const std::int64_t> lambdas);

}  // namespace thetablock
