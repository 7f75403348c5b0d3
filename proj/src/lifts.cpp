#include "thetablock/lifts.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

namespace thetablock {

namespace {

using i128 = __int128;

std::int64_t whole(const Rational& x, const char* what) {
  if (!is_integer(x)) throw DomainError(std::string(what) + " is not an integer: " + x.get_str());
  return to_int64(x.get_num());
}

/// Reduced q-exponent of (n, r) with r0 in (-N, N].
i128 reduced_q(std::int64_t N, i128 n, i128 r) {
  const i128 m = 2 * static_cast<i128>(N);
  i128 t = (static_cast<i128>(N) - r) % m;
  if (t < 0) t += m;
  const i128 r0 = N - t;
  return (r0 * r0 - r * r + 4 * static_cast<i128>(N) * n) / (4 * static_cast<i128>(N));
}

/// (1 + x)^c coefficients binom(c, k) for k = 0..kmax.
std::vector<Rational> binomials(const Rational& c, std::int64_t kmax) {
  std::vector<Rational> b{Rational(1)};
  for (std::int64_t k = 1; k <= kmax; ++k) b.push_back(b.back() * (c - (k - 1)) / k);
  return b;
}

class XiSeries {
 public:
  XiSeries(std::int64_t rows, std::int64_t qmax_units) : rows_(static_cast<std::size_t>(rows + 1), FourierSeries(qmax_units)) {
    rows_[0].add_term(0, 0, Rational(1));
  }

  /// *= (1 - q^n z^r xi^m)^c, in integer exponents.
  void multiply_factor(std::int64_t n, std::int64_t r, std::int64_t m, const Rational& c) {
    const std::int64_t qmax = rows_[0].qmax();
    const std::int64_t top = static_cast<std::int64_t>(rows_.size()) - 1;
    std::int64_t kmax = kExact;
    if (m > 0) kmax = std::min(kmax, top / m);
    if (n > 0) kmax = std::min(kmax, qmax / (kQDen * n));
    if (kmax >= kExact) {
      if (!is_integer(c) || sgn(c) < 0) throw DomainError("factor (1 - z^r) needs a nonnegative integer exponent");
      kmax = to_int64(c.get_num());
    }
    auto b = binomials(c, kmax);
    for (std::int64_t k = 1; k <= kmax; ++k)
      if (k % 2 == 1) b[static_cast<std::size_t>(k)] = -b[static_cast<std::size_t>(k)];

    if (m == 0) {
      for (auto& row : rows_) {
        FourierSeries acc = row;
        for (std::int64_t k = 1; k <= kmax; ++k) {
          if (sgn(b[static_cast<std::size_t>(k)]) == 0) continue;
          acc = acc + shift(row, kQDen * n * k, kZDen * r * k).scaled(b[static_cast<std::size_t>(k)]).truncated(qmax);
        }
        row = std::move(acc);
      }
      return;
    }
    for (std::int64_t j = top; j >= 0; --j) {
      for (std::int64_t k = 1; k <= kmax && j - k * m >= 0; ++k) {
        const FourierSeries& src = rows_[static_cast<std::size_t>(j - k * m)];
        if (src.empty() || sgn(b[static_cast<std::size_t>(k)]) == 0) continue;
        rows_[static_cast<std::size_t>(j)] =
            rows_[static_cast<std::size_t>(j)] +
            shift(src, kQDen * n * k, kZDen * r * k).scaled(b[static_cast<std::size_t>(k)]).truncated(qmax);
      }
    }
  }

  const std::vector<FourierSeries>& rows() const { return rows_; }

 private:
  std::vector<FourierSeries> rows_;
};

std::string monomial(const Rational& c, std::int64_t n, std::int64_t r, bool first) {
  std::string out;
  Rational a = c;
  if (sgn(a) < 0) {
    out += "-";
    a = -a;
  } else if (!first) {
    out += "+";
  }
  std::string body;
  if (n != 0) body += (n == 1) ? "q" : "q^" + std::to_string(n);
  if (r != 0) {
    if (!body.empty()) body += " ";
    body += (r == 1) ? "z" : "z^" + std::to_string(r);
  }
  if (body.empty()) return out + a.get_str();
  if (a != 1) out += a.get_str();
  return out + body;
}

}  // namespace

LeadingExponents leading_exponents(const JacobiFormSeries& psi) {
  LeadingExponents L;
  L.A = L.B = L.C = 0;
  L.D0 = 0;
  const std::int64_t qd = psi.series.qden(), zd = psi.series.zden();
  for (const auto& [z, c] : psi.series.q_slice(0)) {
    const Rational r = make_rational(z, zd);
    L.A += c;
    if (sgn(r) > 0) L.B += r * c;
    L.C += r * r * c;
  }
  L.A /= 24;
  L.B /= 2;
  L.C /= 4;
  for (const auto& [q, s] : psi.series.slices()) {
    if (q >= 0) break;
    if (q % qd != 0) continue;
    const std::int64_t n = -q / qd;
    std::int64_t divisors = 0;
    for (std::int64_t d = 1; d <= n; ++d)
      if (n % d == 0) ++divisors;
    const auto it = s.find(0);
    if (it != s.end()) {
      if (!is_integer(it->second)) throw DomainError("singular coefficient c(n, 0) is not integral");
      L.D0 += divisors * it->second.get_num();
    }
  }
  return L;
}

Rational LiftTable::coeff(std::int64_t n, std::int64_t r, std::int64_t m) const {
  if (m < 0 || n > n_max || m > m_max) throw WindowError("lift coefficient outside the table window");
  return rows[static_cast<std::size_t>(m)].coeff(n * kQDen, r * kZDen);
}

std::map<std::tuple<std::int64_t, std::int64_t, std::int64_t>, Rational> LiftTable::cells() const {
  std::map<std::tuple<std::int64_t, std::int64_t, std::int64_t>, Rational> out;
  for (std::size_t m = 0; m < rows.size(); ++m)
    for (const auto& [q, s] : rows[m].slices())
      for (const auto& [z, c] : s) out[{q / kQDen, z / kZDen, static_cast<std::int64_t>(m)}] = c;
  return out;
}

bool LiftTable::symmetric() const {
  for (const auto& [k, c] : cells()) {
    const auto [n, r, m] = k;
    if (m > n_max || n > m_max) continue;
    if (coeff(m, r, n) != c) return false;
  }
  return true;
}

bool LiftTable::even() const {
  for (const auto& [k, c] : cells()) {
    const auto [n, r, m] = k;
    if (coeff(n, -r, m) != c) return false;
  }
  return true;
}

LiftTable grit_table(const JacobiFormSeries& phi, std::int64_t n_max, std::int64_t m_max) {
  if (n_max < 0 || m_max < 0) throw DomainError("window sizes must be nonnegative");
  if (phi.qmax() < n_max * m_max)
    throw WindowError("lift table needs phi to q^" + std::to_string(n_max * m_max));
  if (sgn(phi.coeff(0, 0)) != 0) throw DomainError("c(0,0; phi) != 0: the Eisenstein term is not supported");
  LiftTable t;
  t.index_N = phi.index;
  t.weight = phi.weight;
  t.n_max = n_max;
  t.m_max = m_max;
  t.rows.emplace_back(n_max * kQDen);
  for (std::int64_t m = 1; m <= m_max; ++m) t.rows.push_back(hecke_Tm(phi, m).series.truncated(n_max * kQDen));
  return t;
}

std::int64_t borch_required_depth(std::int64_t n_max, std::int64_t m_max) { return n_max * m_max; }

LiftTable borch_table(const JacobiFormSeries& psi, std::int64_t n_max, std::int64_t m_max) {
  if (sgn(psi.weight) != 0) throw DomainError("Borcherds products need a weight-0 form");
  if (!psi.has_integral_exponents()) throw DomainError("Borcherds products need integral exponents");
  if (psi.q_order() && sgn(*psi.q_order()) < 0) throw DomainError("only weak forms (no negative q-powers) are supported");
  const std::int64_t N = psi.index;
  for (const auto& [q, s] : psi.series.slices())
    for (const auto& [z, c] : s)
      if (4 * N * (q / kQDen) < (z / kZDen) * (z / kZDen) && !is_integer(c))
        throw DomainError("singular coefficient is not integral");

  const LeadingExponents L = leading_exponents(psi);
  const std::int64_t A = whole(L.A, "A (character obstruction)");
  const std::int64_t B = whole(L.B, "B (character obstruction)");
  const std::int64_t CN = whole(L.C / N, "C / N");

  LiftTable t;
  t.index_N = N;
  t.weight = psi.coeff(0, 0) / 2;
  t.n_max = n_max;
  t.m_max = m_max;
  t.leading = L;
  const std::int64_t qb = n_max - A, mb = m_max - CN;
  t.rows.assign(static_cast<std::size_t>(m_max + 1), FourierSeries(n_max * kQDen));
  if (qb < 0 || mb < 0) return t;
  if (psi.qmax() < qb * mb) throw WindowError("Borcherds table needs Psi to q^" + std::to_string(qb * mb));

  XiSeries prod(mb, qb * kQDen);
  const LaurentPoly q0 = psi.series.q_slice(0);
  for (const auto& [z, c] : q0)
    if (z < 0) prod.multiply_factor(0, z / kZDen, 0, c);
  for (std::int64_t n = 1; n <= qb; ++n)
    for (const auto& [z, c] : q0) prod.multiply_factor(n, z / kZDen, 0, c);
  for (std::int64_t m = 1; m <= mb; ++m)
    for (std::int64_t n = 0; n <= qb; ++n)
      for (const auto& [z, c] : psi.series.q_slice(n * m * kQDen)) prod.multiply_factor(n, z / kZDen, m, c);

  for (std::int64_t m = 0; m <= mb; ++m)
    t.rows[static_cast<std::size_t>(m + CN)] =
        shift(prod.rows()[static_cast<std::size_t>(m)], A * kQDen, B * kZDen).truncated(n_max * kQDen);
  return t;
}

std::int64_t sing_required_depth(std::int64_t N) { return N / 4; }

std::string SingularPart::to_string() const {
  std::vector<const SingularOrbit*> order;
  for (auto it = orbits.rbegin(); it != orbits.rend(); ++it)
    if (it->n == 0) order.push_back(&*it);
  for (const auto& o : orbits)
    if (o.n != 0) order.push_back(&o);
  std::string out;
  for (const auto* o : order) out += monomial(o->coeff, o->n, o->r, out.empty());
  return out.empty() ? "0" : out;
}

SingularPart singular_part(const JacobiFormSeries& psi) {
  if (!psi.has_integral_exponents()) throw DomainError("singular part needs integral exponents");
  const std::int64_t N = psi.index;
  SingularPart sp;
  sp.index_N = N;
  sp.window_qmax = psi.qmax();
  sp.complete = sp.window_qmax >= sing_required_depth(N);
  std::map<std::pair<std::int64_t, std::int64_t>, SingularOrbit> found;
  for (const auto& [qu, s] : psi.series.slices()) {
    const std::int64_t n = qu / kQDen;
    for (const auto& [zu, c] : s) {
      const std::int64_t r = zu / kZDen;
      const std::int64_t disc = r * r - 4 * N * n;
      if (disc < 0) continue;
      std::int64_t r0 = floor_mod(r, 2 * N);
      if (r0 > N) r0 = 2 * N - r0;
      const std::int64_t n0 = (r0 * r0 - disc) / (4 * N);
      if (disc == 0 && n0 != 0) continue;
      auto [it, fresh] = found.try_emplace({n0, r0}, SingularOrbit{n0, r0, c, disc});
      if (!fresh && it->second.coeff != c)
        throw DomainError("coefficients in one orbit differ: the elliptic law fails on the window");
    }
  }
  for (auto& [k, o] : found) {
    if (!is_integer(o.coeff)) throw DomainError("singular coefficient is not integral");
    sp.orbits.push_back(o);
  }
  return sp;
}

Integer humbert_multiplicity(const JacobiFormSeries& psi, const HumbertLabel& T) {
  const std::int64_t N = psi.index;
  if (T.m0 < 0) throw DomainError("Humbert label needs m0 >= 0");
  if (std::gcd(std::gcd(std::abs(T.n0), std::abs(T.r0)), std::abs(T.m0)) != 1)
    throw DomainError("Humbert label is not primitive");
  const std::int64_t D = T.r0 * T.r0 - 4 * N * T.n0 * T.m0;
  if (D <= 0) throw DomainError("Humbert label needs r0^2 - 4 N n0 m0 > 0");
  Rational total = 0;
  for (std::int64_t d = 1; d * d * D <= N * N; ++d) total += psi.reduced_coeff(d * d * T.n0 * T.m0, d * T.r0);
  if (!is_integer(total)) throw DomainError("Humbert multiplicity is not integral");
  return total.get_num();
}

std::vector<DivisorEntry> divisor_list(const JacobiFormSeries& psi, const SingularPart& sing) {
  std::vector<DivisorEntry> out;
  for (const auto& o : sing.orbits) {
    if (o.r <= 0 || o.disc <= 0) continue;
    const HumbertLabel T{o.n, o.r, 1};
    const Integer m = humbert_multiplicity(psi, T);
    if (m != 0) out.push_back({T, m});
  }
  return out;
}

bool theta_block_divisors_only(const std::vector<DivisorEntry>& divisors) {
  for (const auto& d : divisors)
    if (d.label.n0 != 0) return false;
  return true;
}

std::pair<std::int64_t, std::int64_t> relation_interval(std::int64_t N, std::int64_t alpha, std::int64_t beta,
                                                        std::int64_t n, std::int64_t r) {
  const i128 a2 = 4 * static_cast<i128>(N) * alpha - static_cast<i128>(beta) * beta;
  const i128 a1 = 4 * static_cast<i128>(N) * n - 2 * static_cast<i128>(beta) * r;
  const i128 a0 = -static_cast<i128>(r) * r;
  if (a2 >= 0) throw DomainError("relation sum is unbounded: 4N alpha - beta^2 >= 0");
  auto Q = [&](i128 a) { return a2 * a * a + a1 * a + a0; };
  const long double disc = static_cast<long double>(a1) * a1 - 4.0L * a2 * a0;
  if (disc < 0) return {1, 0};
  const long double s = std::sqrt(disc);
  const long double x1 = (-static_cast<long double>(a1) + s) / (2.0L * a2);
  const long double x2 = (-static_cast<long double>(a1) - s) / (2.0L * a2);
  std::int64_t lo = static_cast<std::int64_t>(std::ceil(std::min(x1, x2)));
  std::int64_t hi = static_cast<std::int64_t>(std::floor(std::max(x1, x2)));
  while (Q(lo - 1) >= 0) --lo;
  while (lo <= hi && Q(lo) < 0) ++lo;
  while (Q(hi + 1) >= 0) ++hi;
  while (hi >= lo && Q(hi) < 0) --hi;
  return {lo, hi};
}

std::int64_t relation_required_depth(std::int64_t N, std::int64_t alpha, std::int64_t beta, std::int64_t n_lo,
                                     std::int64_t n_hi, std::int64_t r_bound) {
  i128 depth = 0;
  for (std::int64_t n = n_lo; n <= n_hi; ++n)
    for (std::int64_t r = -r_bound; r <= r_bound; ++r) {
      const auto [lo, hi] = relation_interval(N, alpha, beta, n, r);
      for (std::int64_t a = lo; a <= hi; ++a) {
        const i128 nn = static_cast<i128>(alpha) * a * a + static_cast<i128>(n) * a;
        depth = std::max(depth, reduced_q(N, nn, static_cast<i128>(beta) * a + r));
      }
    }
  return static_cast<std::int64_t>(depth);
}

RelationReport check_relation(const ReducedCoefficients& phi, std::int64_t alpha, std::int64_t beta,
                              std::int64_t n_lo, std::int64_t n_hi, std::int64_t r_bound) {
  if (!phi.holomorphic()) throw DomainError("relation sums need a holomorphic Jacobi form");
  RelationReport rep;
  rep.alpha = alpha;
  rep.beta = beta;
  rep.n_lo = n_lo;
  rep.n_hi = n_hi;
  rep.r_bound = r_bound;
  rep.depth = phi.depth();
  const std::int64_t N = phi.index();
  for (std::int64_t n = n_lo; n <= n_hi; ++n)
    for (std::int64_t r = -r_bound; r <= r_bound; ++r) {
      const auto [lo, hi] = relation_interval(N, alpha, beta, n, r);
      Rational sum = 0;
      for (std::int64_t a = lo; a <= hi; ++a) {
        sum += phi.coeff(alpha * a * a + n * a, beta * a + r);
        ++rep.terms;
      }
      if (sgn(sum) != 0) rep.nonzero.emplace_back(n, r, sum);
    }
  return rep;
}

RelationReport check_relation(const ThetaBlockDescriptor& d, std::int64_t alpha, std::int64_t beta,
                              std::int64_t n_lo, std::int64_t n_hi, std::int64_t r_bound) {
  const Rational N = d.index();
  if (!is_integer(N)) throw DomainError("theta block index must be an integer");
  const std::int64_t depth = relation_required_depth(to_int64(N.get_num()), alpha, beta, n_lo, n_hi, r_bound);
  return check_relation(ReducedCoefficients::from_block(d, depth), alpha, beta, n_lo, n_hi, r_bound);
}

VerifyReport verify_conjecture(const std::array<std::int64_t, 4>& a, std::int64_t n_max, std::int64_t m_max) {
  VerifyOptions opt;
  opt.n_max = n_max;
  opt.m_max = m_max;
  return verify_conjecture(a, opt);
}

VerifyReport verify_conjecture(const std::array<std::int64_t, 4>& a, const VerifyOptions& opt) {
  const std::int64_t n_max = opt.n_max, m_max = opt.m_max;
  using clock = std::chrono::steady_clock;
  auto ms = [](clock::time_point t0) { return std::chrono::duration<double, std::milli>(clock::now() - t0).count(); };
  if (n_max < 1 || m_max < 1) throw DomainError("window sizes must be positive");

  VerifyReport rep;
  rep.a = a;
  const ThetaBlockDescriptor d = block_from_a(a);
  if (d.zero) throw ZeroBlockError("phi_{2,a} is identically zero (an argument vanishes)");
  rep.descriptor = d.to_string();
  rep.sign = d.sign;
  rep.N = to_int64(d.index().get_num());
  rep.weight = d.weight();
  rep.n_max = n_max;
  rep.m_max = m_max;
  rep.phi_qmax = n_max * m_max;
  rep.psi_qmax = opt.psi_qmax.value_or(std::max(borch_required_depth(n_max, m_max), sing_required_depth(rep.N)));
  if (rep.psi_qmax < borch_required_depth(n_max, m_max))
    throw WindowError("Psi must reach q^" + std::to_string(borch_required_depth(n_max, m_max)) + " for this window");

  auto t0 = clock::now();
  const std::int64_t theta_qmax = std::max(rep.phi_qmax, 2 * rep.psi_qmax + 2);
  const JacobiFormSeries theta = opt.expand ? opt.expand(d, theta_qmax) : block_expand(d, theta_qmax);
  rep.timings_ms["theta"] = ms(t0);
  t0 = clock::now();
  const JacobiFormSeries psi = psi_quotient(theta);
  rep.timings_ms["psi"] = ms(t0);

  t0 = clock::now();
  const LiftTable grit = grit_table(theta, n_max, m_max);
  rep.timings_ms["grit"] = ms(t0);
  t0 = clock::now();
  const LiftTable borch = borch_table(psi, n_max, m_max);
  rep.timings_ms["borch"] = ms(t0);

  // The product has leading coefficient 1; phi carries the sign of its descriptor.
  const Rational eps(rep.sign);
  auto signed_row = [&](std::int64_t m) { return borch.rows[static_cast<std::size_t>(m)].scaled(eps); };
  rep.equal = true;
  for (std::int64_t m = 0; m <= m_max && rep.equal; ++m) {
    const FourierSeries diff = grit.rows[static_cast<std::size_t>(m)] - signed_row(m);
    if (diff.empty()) continue;
    rep.equal = false;
    const auto& [q, s] = *diff.slices().begin();
    const std::int64_t n = q / kQDen, r = s.begin()->first / kZDen;
    rep.first_mismatch = Mismatch{n, r, m, grit.coeff(n, r, m), eps * borch.coeff(n, r, m)};
  }

  const FourierSeries top = theta.series.truncated(n_max * kQDen);
  rep.fj_row1_is_theta = signed_row(1).same_terms(top);
  if (m_max >= 2) {
    const FourierSeries minus = (-(theta.series * psi.series)).truncated(n_max * kQDen);
    rep.fj_row2_is_minus_theta_psi = signed_row(2).same_terms(minus);
  }

  t0 = clock::now();
  rep.sing = singular_part(psi);
  if (rep.sing.complete) rep.divisors = divisor_list(psi, rep.sing);
  rep.leading = *borch.leading;
  rep.timings_ms["sing"] = ms(t0);
  return rep;
}

}  // namespace thetablock
