#include "thetablock/reduced_coefficients.hpp"

#include <stdexcept>

namespace thetablock {

namespace {

using i128 = __int128;

void checked_add(i128& acc, i128 v) {
  if (__builtin_add_overflow(acc, v, &acc)) throw std::overflow_error("folded theta product overflows 128 bits");
}

/// Dense q-rows of a ring Z[x]/(x^M - 1), M = 4N, x = z^(1/2).
struct Folded {
  std::int64_t rows = 0;
  std::int64_t mod = 0;
  std::vector<i128> v;

  Folded(std::int64_t r, std::int64_t m) : rows(r), mod(m), v(static_cast<std::size_t>(r * m), 0) {}
  i128& at(std::int64_t n, std::int64_t u) { return v[static_cast<std::size_t>(n * mod + u)]; }
  i128 at(std::int64_t n, std::int64_t u) const { return v[static_cast<std::size_t>(n * mod + u)]; }
};

/// Sparse theta(tau, a z) / q^(1/8): sum over m >= 0 of
/// (-1)^m q^(m(m+1)/2) (x^(a(2m+1)) - x^(-a(2m+1))).
struct ThetaTerm {
  std::int64_t q;
  std::int64_t u;
  int sign;
};

std::vector<ThetaTerm> theta_terms(std::int64_t a, std::int64_t depth, std::int64_t mod) {
  std::vector<ThetaTerm> out;
  for (std::int64_t m = 0; m * (m + 1) / 2 < depth; ++m) {
    const int s = (m % 2 == 0) ? 1 : -1;
    const std::int64_t e = floor_mod(a * (2 * m + 1), mod);
    out.push_back({m * (m + 1) / 2, e, s});
    out.push_back({m * (m + 1) / 2, floor_mod(-e, mod), -s});
  }
  return out;
}

Folded multiply(const Folded& g, const std::vector<ThetaTerm>& t) {
  Folded out(g.rows, g.mod);
  for (const ThetaTerm& term : t) {
    for (std::int64_t n = 0; n + term.q < g.rows; ++n) {
      const i128* src = &g.v[static_cast<std::size_t>(n * g.mod)];
      i128* dst = &out.v[static_cast<std::size_t>((n + term.q) * g.mod)];
      for (std::int64_t u = 0; u < g.mod; ++u) {
        if (src[u] == 0) continue;
        std::int64_t w = u + term.u;
        if (w >= g.mod) w -= g.mod;
        checked_add(dst[w], term.sign > 0 ? src[u] : -src[u]);
      }
    }
  }
  return out;
}

/// Generalized pentagonal exponents k(3k-1)/2 with signs (-1)^k, k != 0.
std::vector<std::pair<std::int64_t, int>> pentagonal(std::int64_t limit) {
  std::vector<std::pair<std::int64_t, int>> out;
  for (std::int64_t k = 1;; ++k) {
    const std::int64_t p1 = k * (3 * k - 1) / 2, p2 = k * (3 * k + 1) / 2;
    if (p1 >= limit) break;
    const int s = (k % 2 == 0) ? 1 : -1;
    out.emplace_back(p1, s);
    if (p2 < limit) out.emplace_back(p2, s);
  }
  return out;
}

/// g /= prod (1 - q^n), in place.
void divide_euler(Folded& g, const std::vector<std::pair<std::int64_t, int>>& pent) {
  for (std::int64_t n = 0; n < g.rows; ++n) {
    i128* row = &g.v[static_cast<std::size_t>(n * g.mod)];
    for (const auto& [p, s] : pent) {
      if (p > n) break;
      const i128* prev = &g.v[static_cast<std::size_t>((n - p) * g.mod)];
      for (std::int64_t u = 0; u < g.mod; ++u)
        if (prev[u] != 0) checked_add(row[u], s > 0 ? -prev[u] : prev[u]);
    }
  }
}

/// g *= prod (1 - q^n), in place.
void multiply_euler(Folded& g, const std::vector<std::pair<std::int64_t, int>>& pent) {
  for (std::int64_t n = g.rows - 1; n >= 0; --n) {
    i128* row = &g.v[static_cast<std::size_t>(n * g.mod)];
    for (const auto& [p, s] : pent) {
      if (p > n) break;
      const i128* prev = &g.v[static_cast<std::size_t>((n - p) * g.mod)];
      for (std::int64_t u = 0; u < g.mod; ++u)
        if (prev[u] != 0) checked_add(row[u], s > 0 ? prev[u] : -prev[u]);
    }
  }
}

}  // namespace

ReducedCoefficients::ReducedCoefficients(std::int64_t N, std::int64_t depth)
    : index_(N), depth_(depth), table_(static_cast<std::size_t>((depth + 1) * 2 * N)) {
  if (N <= 0) throw DomainError("index must be positive");
}

Rational& ReducedCoefficients::slot(std::int64_t n0, std::int64_t r0) {
  return table_[static_cast<std::size_t>(n0 * 2 * index_ + (r0 + index_ - 1))];
}

const Rational& ReducedCoefficients::reduced(std::int64_t n0, std::int64_t r0) const {
  if (n0 < 0 || n0 > depth_) throw WindowError("reduced coefficient outside the table");
  if (r0 <= -index_ || r0 > index_) throw DomainError("r0 must lie in (-N, N]");
  return table_[static_cast<std::size_t>(n0 * 2 * index_ + (r0 + index_ - 1))];
}

std::int64_t ReducedCoefficients::reduced_n(std::int64_t n, std::int64_t r) const {
  const std::int64_t N = index_;
  const std::int64_t r0 = N - floor_mod(N - r, 2 * N);  // in (-N, N]
  const i128 num = static_cast<i128>(r0) * r0 - static_cast<i128>(r) * r + static_cast<i128>(4 * N) * n;
  const i128 n0 = num / (4 * N);
  if (n0 < INT64_MIN / 2) return INT64_MIN / 2;
  if (n0 > INT64_MAX / 2) return INT64_MAX / 2;
  return static_cast<std::int64_t>(n0);
}

Rational ReducedCoefficients::coeff(std::int64_t n, std::int64_t r) const {
  const std::int64_t N = index_;
  const std::int64_t r0 = N - floor_mod(N - r, 2 * N);
  const std::int64_t n0 = reduced_n(n, r);
  if (n0 < 0) return Rational(0);
  if (n0 > depth_) throw WindowError("coefficient needs q^" + std::to_string(n0) + " but the table stops at q^" +
                                     std::to_string(depth_));
  return reduced(n0, r0);
}

bool ReducedCoefficients::holomorphic() const {
  const std::int64_t N = index_;
  for (std::int64_t n = 0; n <= depth_; ++n)
    for (std::int64_t r = -N + 1; r <= N; ++r)
      if (4 * N * n < r * r && sgn(reduced(n, r)) != 0) return false;
  return true;
}

ReducedCoefficients ReducedCoefficients::from_series(const JacobiFormSeries& phi) {
  if (!phi.has_integral_exponents()) throw DomainError("reduced table needs integral exponents");
  const std::int64_t depth = phi.qmax();
  if (depth >= kExact) throw DomainError("reduced table needs a truncated series");
  ReducedCoefficients t(phi.index, std::max<std::int64_t>(depth, -1));
  for (std::int64_t n = 0; n <= depth; ++n)
    for (std::int64_t r = -phi.index + 1; r <= phi.index; ++r) t.slot(n, r) = phi.coeff(n, r);
  return t;
}

ReducedCoefficients ReducedCoefficients::from_block(const ThetaBlockDescriptor& d, std::int64_t depth) {
  if (d.zero) throw ZeroBlockError("theta block is identically zero");
  if (!d.is_pure()) throw DomainError("only pure theta blocks are expanded");
  const Rational Nq = d.index();
  if (!is_integer(Nq) || sgn(Nq) <= 0) throw DomainError("theta block index must be a positive integer");
  const std::int64_t N = to_int64(Nq.get_num());
  const std::int64_t E = d.net_eta_power();
  const std::int64_t s24 = 3 * d.theta_count() + E;
  if (s24 % 24 != 0) throw DomainError("folded expansion needs an integral q-order");
  const std::int64_t s = s24 / 24;
  if (d.weighted_argument_sum() % 2 != 0) throw DomainError("folded expansion needs integral z-exponents");

  ReducedCoefficients t(N, depth);
  const std::int64_t rows = depth - s + 1;
  if (rows <= 0) return t;

  const std::int64_t mod = 4 * N;
  Folded g(rows, mod);
  g.at(0, 0) = 1;
  for (const auto& [a, f] : d.theta_exps) {
    const auto terms = theta_terms(a, rows, mod);
    for (std::int64_t i = 0; i < f; ++i) g = multiply(g, terms);
  }
  const auto pent = pentagonal(rows);
  for (std::int64_t i = 0; i < (E < 0 ? -E : E); ++i) {
    if (E < 0) divide_euler(g, pent);
    else multiply_euler(g, pent);
  }

  // F_mu[n] = sum_{r = mu mod 2N} c(n, r); peel off the translated terms.
  for (std::int64_t r0 = -N + 1; r0 <= N; ++r0) {
    const std::int64_t u = floor_mod(2 * r0, mod);
    for (std::int64_t n = 0; n <= depth; ++n) {
      const std::int64_t i = n - s;
      i128 F = (i >= 0) ? g.at(i, u) : 0;
      if (d.sign < 0) F = -F;
      Rational acc(from_int128(F));
      for (std::int64_t j = 1;; ++j) {
        bool any = false;
        for (std::int64_t jj : {j, -j}) {
          const std::int64_t n2 = n - N * j * j - jj * r0;
          if (n2 < 0) continue;
          any = true;
          if (r0 == N && jj == -1 && j == 1) continue;  // the partner of r0 = N lies in the same row
          acc -= t.slot(n2, r0);
        }
        if (!any) break;
      }
      if (r0 == N) acc /= 2;
      t.slot(n, r0) = acc;
    }
  }
  return t;
}

}  // namespace thetablock
