#pragma once

// Table of reduced Fourier coefficients c(n, r0), r0 in (-N, N], of an
// integral-exponent Jacobi form of index N.  Any c(n, r) is read through the
// elliptic law, so deep coefficients cost one table lookup.

#include <cstdint>
#include <vector>

#include "thetablock/jacobi.hpp"

namespace thetablock {

class ReducedCoefficients {
 public:
  /// Copies the reduced window of an expanded form.
  static ReducedCoefficients from_series(const JacobiFormSeries& phi);

  /// Expands a pure theta block of integral q-order directly into reduced
  /// coefficients up to q^depth.  The product of thetas is taken with the
  /// elliptic exponent folded modulo 2N, which keeps the cost linear in N.
  static ReducedCoefficients from_block(const ThetaBlockDescriptor& d, std::int64_t depth);

  std::int64_t index() const { return index_; }
  std::int64_t depth() const { return depth_; }

  /// c(n0, r0) for r0 in (-N, N] and 0 <= n0 <= depth.
  const Rational& reduced(std::int64_t n0, std::int64_t r0) const;

  /// c(n, r) for arbitrary integers; zero when the reduced q-exponent is
  /// negative, WindowError when it exceeds the depth.
  Rational coeff(std::int64_t n, std::int64_t r) const;

  /// The reduced q-exponent of (n, r), possibly negative.
  std::int64_t reduced_n(std::int64_t n, std::int64_t r) const;

  /// True when no stored coefficient has 4N n0 - r0^2 < 0.
  bool holomorphic() const;

 private:
  ReducedCoefficients(std::int64_t N, std::int64_t depth);
  Rational& slot(std::int64_t n0, std::int64_t r0);

  std::int64_t index_ = 1;
  std::int64_t depth_ = -1;
  std::vector<Rational> table_;  // (depth + 1) rows of 2N entries
};

}  // namespace thetablock
