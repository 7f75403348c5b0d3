#pragma once

// Exact truncated Laurent-Puiseux series in q with one or several elliptic
// variables. Exponents are stored as integers in units of 1/qden (for q) and
// 1/zden (for the elliptic exponents); coefficients are GMP rationals.
//
// A series is known exactly for every q-exponent <= qmax (inclusive).  The
// constant kExact marks series that are known to all orders (polynomials).

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "thetablock/errors.hpp"
#include "thetablock/rational.hpp"

namespace thetablock {

inline constexpr std::int64_t kQDen = 24;
inline constexpr std::int64_t kZDen = 2;

/// Integer exponent vector of a multivariate elliptic monomial.
using ZVec = std::vector<std::int64_t>;

template <typename Key>
using SliceT = std::map<Key, Rational>;

/// Laurent polynomial in one elliptic variable.
using LaurentPoly = SliceT<std::int64_t>;
/// Laurent polynomial in several elliptic variables (lexicographic key order).
using MultiLaurent = SliceT<ZVec>;

namespace detail {

inline std::int64_t key_add(std::int64_t a, std::int64_t b) { return a + b; }
inline std::int64_t key_sub(std::int64_t a, std::int64_t b) { return a - b; }
inline std::size_t key_rank(std::int64_t) { return 1; }

inline ZVec key_add(const ZVec& a, const ZVec& b) {
  ZVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}
inline ZVec key_sub(const ZVec& a, const ZVec& b) {
  ZVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}
inline std::size_t key_rank(const ZVec& v) { return v.size(); }

inline std::int64_t coord(std::int64_t k, std::size_t) { return k; }
inline std::int64_t coord(const ZVec& k, std::size_t i) { return k[i]; }

template <typename Key>
void purge(SliceT<Key>& s) {
  for (auto it = s.begin(); it != s.end();) {
    if (sgn(it->second) == 0) {
      it = s.erase(it);
    } else {
      ++it;
    }
  }
}

/// acc += scale * a * b, zeros left in place.
template <typename Key>
void add_product(SliceT<Key>& acc, const SliceT<Key>& a, const SliceT<Key>& b, const Rational* scale = nullptr) {
  Rational tmp;
  for (const auto& [ka, ca] : a) {
    for (const auto& [kb, cb] : b) {
      mpq_mul(tmp.get_mpq_t(), ca.get_mpq_t(), cb.get_mpq_t());
      if (scale) mpq_mul(tmp.get_mpq_t(), tmp.get_mpq_t(), scale->get_mpq_t());
      Rational& slot = acc[key_add(ka, kb)];
      mpq_add(slot.get_mpq_t(), slot.get_mpq_t(), tmp.get_mpq_t());
    }
  }
}

}  // namespace detail

template <typename Key>
SliceT<Key> slice_mul(const SliceT<Key>& a, const SliceT<Key>& b) {
  SliceT<Key> out;
  detail::add_product(out, a, b);
  detail::purge(out);
  return out;
}

/// Exact division of Laurent polynomials.  The pivot is the smallest
/// exponent (lexicographically smallest vector) of the divisor.
template <typename Key>
SliceT<Key> slice_div_exact(const SliceT<Key>& num, const SliceT<Key>& den) {
  if (den.empty()) throw NotDivisible("division by the zero Laurent polynomial");
  SliceT<Key> quotient;
  if (num.empty()) return quotient;

  const std::size_t rank = detail::key_rank(num.begin()->first);
  // Every quotient exponent lies in the box [min(num) - max(den), max(num) - min(den)].
  std::vector<std::int64_t> lo(rank), hi(rank);
  for (std::size_t i = 0; i < rank; ++i) {
    std::int64_t nmin = detail::coord(num.begin()->first, i), nmax = nmin;
    for (const auto& [k, c] : num) {
      nmin = std::min(nmin, detail::coord(k, i));
      nmax = std::max(nmax, detail::coord(k, i));
    }
    std::int64_t dmin = detail::coord(den.begin()->first, i), dmax = dmin;
    for (const auto& [k, c] : den) {
      dmin = std::min(dmin, detail::coord(k, i));
      dmax = std::max(dmax, detail::coord(k, i));
    }
    lo[i] = nmin - dmax;
    hi[i] = nmax - dmin;
  }

  const auto& [pivot_key, pivot_coeff] = *den.begin();
  SliceT<Key> rem = num;
  Rational factor, tmp;
  while (!rem.empty()) {
    const auto lead = rem.begin();
    Key qk = detail::key_sub(lead->first, pivot_key);
    for (std::size_t i = 0; i < rank; ++i) {
      const std::int64_t c = detail::coord(qk, i);
      if (c < lo[i] || c > hi[i]) throw NotDivisible("Laurent polynomial division leaves a remainder");
    }
    factor = lead->second / pivot_coeff;
    for (const auto& [k, c] : den) {
      Key target = detail::key_add(k, qk);
      mpq_mul(tmp.get_mpq_t(), c.get_mpq_t(), factor.get_mpq_t());
      auto it = rem.find(target);
      if (it == rem.end()) {
        rem.emplace(std::move(target), -tmp);
      } else {
        it->second -= tmp;
        if (sgn(it->second) == 0) rem.erase(it);
      }
    }
    quotient.emplace(std::move(qk), factor);
  }
  return quotient;
}

/// Truncated series in q^(1/qden) with elliptic exponents keyed by `Key`.
template <typename Key>
class BasicSeries {
 public:
  using Slice = SliceT<Key>;
  using SliceMap = std::map<std::int64_t, Slice>;

  /// The zero series, known exactly.
  BasicSeries() = default;

  explicit BasicSeries(std::int64_t qmax, std::size_t rank = 1, std::int64_t zden = kZDen,
                       std::int64_t qden = kQDen)
      : qden_(qden), zden_(zden), rank_(rank), qmax_(qmax) {
    if (qden <= 0 || zden <= 0) throw DomainError("exponent denominators must be positive");
    if (rank == 0) throw DomainError("series rank must be positive");
  }

  static BasicSeries monomial(const Rational& c, std::int64_t qexp, const Key& zexp, std::int64_t qmax = kExact,
                              std::int64_t zden = kZDen, std::int64_t qden = kQDen) {
    BasicSeries s(qmax, detail::key_rank(zexp), zden, qden);
    s.add_term(qexp, zexp, c);
    return s;
  }

  std::int64_t qden() const { return qden_; }
  std::int64_t zden() const { return zden_; }
  std::size_t rank() const { return rank_; }
  std::int64_t qmax() const { return qmax_; }
  bool is_exact() const { return qmax_ >= kExact; }
  const SliceMap& slices() const { return slices_; }
  bool empty() const { return slices_.empty(); }

  std::size_t term_count() const {
    std::size_t n = 0;
    for (const auto& [q, s] : slices_) n += s.size();
    return n;
  }

  /// Smallest q-exponent carrying a nonzero coefficient.
  std::optional<std::int64_t> q_order() const {
    if (slices_.empty()) return std::nullopt;
    return slices_.begin()->first;
  }

  /// A lower bound for the q-order of the untruncated series.
  std::int64_t order_bound() const {
    if (!slices_.empty()) return slices_.begin()->first;
    return saturating_add(qmax_, 1);
  }

  Rational coeff(std::int64_t qexp, const Key& zexp) const {
    if (qexp > qmax_) throw WindowError("coefficient requested beyond the truncation bound");
    const auto it = slices_.find(qexp);
    if (it == slices_.end()) return Rational(0);
    const auto jt = it->second.find(zexp);
    return jt == it->second.end() ? Rational(0) : jt->second;
  }

  /// The exact elliptic slice at q^(qexp/qden).
  Slice q_slice(std::int64_t qexp) const {
    if (qexp > qmax_) throw WindowError("q-slice requested beyond the truncation bound");
    const auto it = slices_.find(qexp);
    return it == slices_.end() ? Slice{} : it->second;
  }

  /// Adds c q^qexp z^zexp; terms above qmax are dropped.
  void add_term(std::int64_t qexp, const Key& zexp, const Rational& c) {
    if (qexp > qmax_ || sgn(c) == 0) return;
    check_key(zexp);
    Slice& s = slices_[qexp];
    auto it = s.find(zexp);
    if (it == s.end()) {
      s.emplace(zexp, c);
    } else {
      it->second += c;
      if (sgn(it->second) == 0) s.erase(it);
    }
    if (s.empty()) slices_.erase(qexp);
  }

  /// Replaces a whole slice; zero coefficients are purged.
  void set_slice(std::int64_t qexp, Slice s) {
    if (qexp > qmax_) return;
    detail::purge(s);
    if (s.empty()) {
      slices_.erase(qexp);
    } else {
      check_key(s.begin()->first);
      slices_[qexp] = std::move(s);
    }
  }

  BasicSeries truncated(std::int64_t qmax) const {
    BasicSeries r = *this;
    r.qmax_ = std::min(qmax, qmax_);
    r.slices_.erase(r.slices_.upper_bound(r.qmax_), r.slices_.end());
    return r;
  }

  BasicSeries scaled(const Rational& c) const {
    BasicSeries r(qmax_, rank_, zden_, qden_);
    if (sgn(c) == 0) return r;
    r.slices_ = slices_;
    for (auto& [q, s] : r.slices_)
      for (auto& [k, v] : s) v *= c;
    return r;
  }

  BasicSeries operator-() const { return scaled(Rational(-1)); }

  bool operator==(const BasicSeries& o) const {
    return qden_ == o.qden_ && zden_ == o.zden_ && rank_ == o.rank_ && qmax_ == o.qmax_ && slices_ == o.slices_;
  }

  /// Equality of coefficients, ignoring the truncation bound.
  bool same_terms(const BasicSeries& o) const { return slices_ == o.slices_; }

  void check_compatible(const BasicSeries& o) const {
    if (qden_ != o.qden_ || zden_ != o.zden_)
      throw DenominatorMismatch("series exponent denominators differ");
    if (rank_ != o.rank_) throw DenominatorMismatch("series elliptic ranks differ");
  }

  /// Copy of the metadata with no terms and the given bound.
  BasicSeries empty_like(std::int64_t qmax) const { return BasicSeries(qmax, rank_, zden_, qden_); }

 private:
  void check_key(const Key& k) const {
    if (detail::key_rank(k) != rank_) throw DenominatorMismatch("elliptic exponent has the wrong rank");
  }

  std::int64_t qden_ = kQDen;
  std::int64_t zden_ = kZDen;
  std::size_t rank_ = 1;
  std::int64_t qmax_ = kExact;
  SliceMap slices_;
};

using FourierSeries = BasicSeries<std::int64_t>;
using MultiFourierSeries = BasicSeries<ZVec>;

enum class CombineOp { add, sub };

template <typename Key>
BasicSeries<Key> ring_combine(const BasicSeries<Key>& a, const BasicSeries<Key>& b, CombineOp op) {
  a.check_compatible(b);
  const std::int64_t qmax = std::min(a.qmax(), b.qmax());
  BasicSeries<Key> out = a.truncated(qmax);
  const Rational sign = op == CombineOp::add ? Rational(1) : Rational(-1);
  for (const auto& [q, s] : b.slices()) {
    if (q > qmax) break;
    for (const auto& [k, c] : s) out.add_term(q, k, sign * c);
  }
  return out;
}

template <typename Key>
BasicSeries<Key> operator+(const BasicSeries<Key>& a, const BasicSeries<Key>& b) {
  return ring_combine(a, b, CombineOp::add);
}

template <typename Key>
BasicSeries<Key> operator-(const BasicSeries<Key>& a, const BasicSeries<Key>& b) {
  return ring_combine(a, b, CombineOp::sub);
}

/// Cauchy product.  The result is known up to
/// min(a.qmax + order(b), b.qmax + order(a)).
template <typename Key>
BasicSeries<Key> series_mul(const BasicSeries<Key>& a, const BasicSeries<Key>& b) {
  a.check_compatible(b);
  const std::int64_t qmax =
      std::min(saturating_add(a.qmax(), b.order_bound()), saturating_add(b.qmax(), a.order_bound()));
  BasicSeries<Key> out = a.empty_like(qmax);
  std::map<std::int64_t, SliceT<Key>> acc;
  for (const auto& [qa, sa] : a.slices()) {
    for (const auto& [qb, sb] : b.slices()) {
      if (qa + qb > qmax) break;
      detail::add_product(acc[qa + qb], sa, sb);
    }
  }
  for (auto& [q, s] : acc) out.set_slice(q, std::move(s));
  return out;
}

template <typename Key>
BasicSeries<Key> operator*(const BasicSeries<Key>& a, const BasicSeries<Key>& b) {
  return series_mul(a, b);
}

/// The constant 1 with the metadata of `like`.
template <typename Key>
BasicSeries<Key> series_one(const BasicSeries<Key>& like) {
  BasicSeries<Key> one = like.empty_like(kExact);
  Key zero{};
  if constexpr (!std::is_same_v<Key, std::int64_t>) zero.assign(like.rank(), 0);
  one.add_term(0, zero, Rational(1));
  return one;
}

/// Exact quotient num/den solved order by order in q.  Each step divides by
/// the lowest q-slice of den, which must leave no remainder.
///
/// Truncation: with o = order(den), the result is known up to
/// num.qmax - o, and additionally up to den.qmax - 2o + order(num) when den
/// itself is truncated.  If both inputs are exact the quotient must be a
/// polynomial in q, otherwise NotDivisible is raised.
template <typename Key>
BasicSeries<Key> div_exact(const BasicSeries<Key>& num, const BasicSeries<Key>& den) {
  num.check_compatible(den);
  if (den.empty()) throw NotDivisible("division by the zero series");
  const std::int64_t o = *den.q_order();
  const auto& theta0 = den.slices().begin()->second;

  std::int64_t qmax = num.is_exact() ? kExact : num.qmax() - o;
  if (!den.is_exact()) qmax = std::min(qmax, den.qmax() - 2 * o + num.order_bound());
  BasicSeries<Key> out = num.empty_like(qmax);
  if (num.empty()) return out;

  const std::int64_t e0 = *num.q_order() - o;
  const bool polynomial = qmax >= kExact;
  const std::int64_t e_last = polynomial ? num.slices().rbegin()->first - o : qmax;

  std::map<std::int64_t, SliceT<Key>> quotient;
  const Rational minus_one(-1);
  for (std::int64_t e = e0; e <= e_last; ++e) {
    SliceT<Key> rem;
    if (auto it = num.slices().find(e + o); it != num.slices().end()) rem = it->second;
    for (auto jt = std::next(den.slices().begin()); jt != den.slices().end(); ++jt) {
      const std::int64_t j = jt->first;
      if (e + o - j < e0) break;
      auto qt = quotient.find(e + o - j);
      if (qt != quotient.end()) detail::add_product(rem, jt->second, qt->second, &minus_one);
    }
    detail::purge(rem);
    if (rem.empty()) continue;
    quotient.emplace(e, slice_div_exact(rem, theta0));
  }
  for (auto& [e, s] : quotient) out.set_slice(e, std::move(s));

  if (polynomial) {
    // The long division must reproduce the numerator exactly.
    if (!(series_mul(out, den) - num).empty()) throw NotDivisible("polynomial division leaves a remainder");
  }
  return out;
}

/// Multiplicative inverse; the lowest q-slice must be a single monomial.
template <typename Key>
BasicSeries<Key> series_inverse(const BasicSeries<Key>& a) {
  if (a.empty()) throw NotInvertible("the zero series has no inverse");
  if (a.slices().begin()->second.size() != 1)
    throw NotInvertible("leading q-slice is not a monomial");
  return div_exact(series_one(a), a);
}

/// Integer power by repeated squaring; negative exponents go through the inverse.
template <typename Key>
BasicSeries<Key> series_pow(const BasicSeries<Key>& a, std::int64_t e) {
  if (e < 0) return series_pow(series_inverse(a), -e);
  BasicSeries<Key> result = series_one(a);
  BasicSeries<Key> base = a;
  while (e > 0) {
    if (e & 1) result = series_mul(result, base);
    e >>= 1;
    if (e > 0) base = series_mul(base, base);
  }
  return result;
}

/// Multiplies by the monomial q^dq z^dz (both in storage units).
template <typename Key>
BasicSeries<Key> shift(const BasicSeries<Key>& a, std::int64_t dq, const Key& dz) {
  BasicSeries<Key> out = a.empty_like(saturating_add(a.qmax(), dq));
  for (const auto& [q, s] : a.slices()) {
    SliceT<Key> moved;
    for (const auto& [k, c] : s) moved.emplace(detail::key_add(k, dz), c);
    out.set_slice(q + dq, std::move(moved));
  }
  return out;
}

template <typename Key>
SliceT<Key> q_slice(const BasicSeries<Key>& a, std::int64_t qexp) {
  return a.q_slice(qexp);
}

/// Pull-back along z = t v: a multivariate exponent c maps to sum_i c_i v_i.
/// The result uses the same zden as the input.
FourierSeries specialize(const MultiFourierSeries& a, const ZVec& v);

/// Debug rendering, e.g. "q^(1/8)*(z^(1/2) - z^(-1/2)) + O(q^...)".
std::string to_debug_string(const FourierSeries& s);

}  // namespace thetablock
