#include "thetablock/jacobi.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <regex>
#include <sstream>

namespace thetablock {

Rational ThetaBlockDescriptor::weight() const { return make_rational(eta_exp, 2); }

Rational ThetaBlockDescriptor::index() const {
  Rational s = 0;
  for (const auto& [a, f] : theta_exps) s += make_rational(a * a * f);
  return s / 2;
}

std::int64_t ThetaBlockDescriptor::theta_count() const {
  std::int64_t s = 0;
  for (const auto& [a, f] : theta_exps) s += f;
  return s;
}

std::int64_t ThetaBlockDescriptor::net_eta_power() const { return eta_exp - theta_count(); }

bool ThetaBlockDescriptor::is_pure() const {
  return std::all_of(theta_exps.begin(), theta_exps.end(), [](const auto& kv) { return kv.second > 0; });
}

std::int64_t ThetaBlockDescriptor::weighted_argument_sum() const {
  std::int64_t s = 0;
  for (const auto& [a, f] : theta_exps) s += a * f;
  return s;
}

std::string ThetaBlockDescriptor::to_string() const {
  if (zero) return "0";
  std::vector<std::string> parts;
  const std::int64_t e = net_eta_power();
  if (e == 1) parts.push_back("eta");
  else if (e != 0) parts.push_back("eta^" + std::to_string(e));
  for (const auto& [a, f] : theta_exps) {
    std::string t = "theta_" + std::to_string(a);
    if (f != 1) t += "^" + std::to_string(f);
    parts.push_back(t);
  }
  std::string out = sign < 0 ? "-" : "";
  if (parts.empty()) return out + "1";
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? " * " : "") + parts[i];
  return out;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\n");
  return s.substr(b, e - b + 1);
}

std::int64_t parse_int(const std::string& s) {
  std::size_t used = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    throw DomainError("malformed integer '" + s + "'");
  }
  if (used != s.size()) throw DomainError("malformed integer '" + s + "'");
  return v;
}

}  // namespace

ThetaBlockDescriptor ThetaBlockDescriptor::parse(const std::string& text) {
  std::string s = trim(text);
  static const std::regex shorthand(R"(a\s*=\s*\[([^\]]*)\])");
  std::smatch m;
  if (std::regex_match(s, m, shorthand)) {
    std::array<std::int64_t, 4> a{};
    std::stringstream ss(m[1].str());
    std::string item;
    std::size_t i = 0;
    while (std::getline(ss, item, ',')) {
      if (i >= 4) throw DomainError("a-vector must have exactly four entries");
      a[i++] = parse_int(trim(item));
    }
    if (i != 4) throw DomainError("a-vector must have exactly four entries");
    return block_from_a(a);
  }

  ThetaBlockDescriptor d;
  if (!s.empty() && s[0] == '-') {
    d.sign = -1;
    s = trim(s.substr(1));
  }
  if (s == "0") {
    d.zero = true;
    return d;
  }
  std::int64_t net = 0;
  std::stringstream ss(s);
  std::string factor;
  static const std::regex eta_re(R"(eta(\^\s*(-?\d+))?)");
  static const std::regex theta_re(R"(theta(_\s*(-?\d+))?(\^\s*(-?\d+))?)");
  while (std::getline(ss, factor, '*')) {
    factor = trim(factor);
    if (factor == "1") continue;
    if (std::regex_match(factor, m, eta_re)) {
      net += m[2].matched ? parse_int(m[2].str()) : 1;
    } else if (std::regex_match(factor, m, theta_re)) {
      std::int64_t a = m[2].matched ? parse_int(m[2].str()) : 1;
      const std::int64_t f = m[4].matched ? parse_int(m[4].str()) : 1;
      if (a == 0) {
        if (f > 0) d.zero = true;
        else throw DomainError("negative power of theta(tau, 0)");
        continue;
      }
      if (a < 0) {
        a = -a;
        if (f % 2 != 0) d.sign = -d.sign;
      }
      d.theta_exps[a] += f;
      if (d.theta_exps[a] == 0) d.theta_exps.erase(a);
    } else {
      throw DomainError("cannot parse factor '" + factor + "'");
    }
  }
  d.eta_exp = net + d.theta_count();
  return d;
}

ThetaBlockDescriptor block_from_arguments(std::int64_t eta_exp, std::span<const std::int64_t> args) {
  ThetaBlockDescriptor d;
  d.eta_exp = eta_exp;
  for (std::int64_t x : args) {
    if (x == 0) {
      d.zero = true;
      continue;
    }
    if (x < 0) d.sign = -d.sign;
    d.theta_exps[x < 0 ? -x : x] += 1;
  }
  return d;
}

std::array<std::int64_t, 10> a4_arguments(const std::array<std::int64_t, 4>& a) {
  return {a[0],        a[1],        a[2],        a[3],        a[0] + a[1], a[1] + a[2], a[2] + a[3],
          a[0] + a[1] + a[2], a[1] + a[2] + a[3], a[0] + a[1] + a[2] + a[3]};
}

ThetaBlockDescriptor block_from_a(const std::array<std::int64_t, 4>& a) {
  const auto args = a4_arguments(a);
  return block_from_arguments(4, args);
}

std::optional<Rational> JacobiFormSeries::q_order() const {
  const auto o = series.q_order();
  if (!o) return std::nullopt;
  return make_rational(*o, series.qden());
}

std::int64_t JacobiFormSeries::qmax() const {
  if (series.is_exact()) return kExact;
  return floor_div(series.qmax(), series.qden());
}

Rational JacobiFormSeries::coeff(std::int64_t n, std::int64_t r) const {
  return series.coeff(n * series.qden(), r * series.zden());
}

Rational JacobiFormSeries::reduced_coeff(std::int64_t n, std::int64_t r) const {
  const std::int64_t N = index;
  if (N <= 0) return coeff(n, r);
  const std::int64_t r0 = floor_mod(r + N, 2 * N) - N;
  const __int128 disc = static_cast<__int128>(r) * r - static_cast<__int128>(4 * N) * n;
  const __int128 num = static_cast<__int128>(r0) * r0 - disc;
  const __int128 n0 = num / (4 * N);
  if (n0 < 0) return Rational(0);
  if (n0 > qmax()) throw WindowError("reduced coefficient lies beyond the computed window");
  return coeff(static_cast<std::int64_t>(n0), r0);
}

bool JacobiFormSeries::has_integral_exponents() const {
  for (const auto& [q, s] : series.slices()) {
    if (q % series.qden() != 0) return false;
    for (const auto& [z, c] : s)
      if (z % series.zden() != 0) return false;
  }
  return true;
}

namespace {

/// a *= (1 - q^dq z^dz), in storage units.
void mul_one_minus(FourierSeries& a, std::int64_t dq, std::int64_t dz) {
  a = a - shift(a, dq, dz).truncated(a.qmax());
}

/// prod_{n >= 1} (1 - q^n) truncated at qmax_units, without the q^(1/24).
FourierSeries euler_product(std::int64_t qmax_units) {
  FourierSeries p(qmax_units);
  p.add_term(0, 0, Rational(1));
  for (std::int64_t n = 1; n * kQDen <= qmax_units; ++n) mul_one_minus(p, n * kQDen, 0);
  return p;
}

}  // namespace

FourierSeries eta_expand(std::int64_t qmax_units) {
  return shift(euler_product(qmax_units - 1), 1, std::int64_t{0});
}

FourierSeries theta_expand(std::int64_t a, std::int64_t qmax_units) {
  if (a == 0) throw ZeroBlockError("theta(tau, 0) vanishes identically");
  if (a < 0) return -theta_expand(-a, qmax_units);
  // q^(1/8) (z^(a/2) - z^(-a/2)) prod (1 - q^n z^a)(1 - q^n z^-a)(1 - q^n)
  const std::int64_t rel = qmax_units - 3;
  FourierSeries p(rel);
  p.add_term(0, a, Rational(1));
  p.add_term(0, -a, Rational(-1));
  for (std::int64_t n = 1; n * kQDen <= rel; ++n) {
    mul_one_minus(p, n * kQDen, 2 * a);
    mul_one_minus(p, n * kQDen, -2 * a);
    mul_one_minus(p, n * kQDen, 0);
  }
  return shift(p, 3, std::int64_t{0});
}

FourierSeries eta_power(std::int64_t e, std::int64_t qmax_units) {
  FourierSeries p = series_pow(euler_product(qmax_units - e), e);
  return shift(p.truncated(qmax_units - e), e, std::int64_t{0});
}

JacobiFormSeries block_expand(const ThetaBlockDescriptor& d, std::int64_t qmax) {
  if (d.zero) throw ZeroBlockError("theta block is identically zero");
  if (!d.is_pure()) throw DomainError("only pure theta blocks (all f(a) >= 0) are expanded");
  const Rational N = d.index();
  if (!is_integer(N) || sgn(N) <= 0) throw DomainError("theta block index must be a positive integer");

  const std::int64_t target = qmax * kQDen;
  const std::int64_t E = d.net_eta_power();
  const std::int64_t order = 3 * d.theta_count() + E;

  FourierSeries acc = eta_power(E, target - (order - E));
  for (const auto& [a, f] : d.theta_exps) {
    const FourierSeries t = theta_expand(a, target - (order - 3));
    for (std::int64_t i = 0; i < f; ++i) acc = series_mul(acc, t);
  }
  acc = acc.truncated(target);
  if (d.sign < 0) acc = -acc;
  return {acc, d.weight(), to_int64(N.get_num())};
}

JacobiFormSeries hecke_Tm(const JacobiFormSeries& phi, std::int64_t m) {
  if (m < 1) throw DomainError("Hecke index must be positive");
  if (!is_integer(phi.weight)) throw DomainError("Hecke operator needs integral weight");
  if (!phi.has_integral_exponents()) throw DomainError("Hecke operator needs integral exponents");
  const std::int64_t k = to_int64(phi.weight.get_num());
  const std::int64_t qd = phi.series.qden(), zd = phi.series.zden();
  const std::int64_t src_max = phi.qmax();
  const std::int64_t out_max = phi.series.is_exact() ? kExact : floor_div(src_max, m);

  FourierSeries out = phi.series.empty_like(out_max >= kExact ? kExact : out_max * qd);
  for (std::int64_t d = 1; d <= m; ++d) {
    if (m % d != 0) continue;
    Rational w = 1;
    const Rational dq = make_rational(d);
    for (std::int64_t i = 0; i < std::abs(k - 1); ++i) w *= dq;
    if (k - 1 < 0) w = 1 / w;
    for (const auto& [qu, slice] : phi.series.slices()) {
      const std::int64_t np = qu / qd;  // n' = nm/d^2
      if ((np * d * d) % m != 0) continue;
      const std::int64_t n = np * d * d / m;
      if (n % d != 0 || n > out_max) continue;
      for (const auto& [zu, c] : slice) out.add_term(n * qd, zu * d, w * c);
    }
  }
  (void)zd;
  return {out, phi.weight, phi.index * m};
}

JacobiFormSeries psi_quotient(const JacobiFormSeries& theta) {
  const auto o = theta.q_order();
  if (!o || *o != 1) throw DomainError("Psi needs a theta block of q-order exactly one");
  const JacobiFormSeries h = hecke_Tm(theta, 2);
  FourierSeries psi = -div_exact(h.series, theta.series);
  return {psi, Rational(0), theta.index};
}

JacobiFormSeries psi_from_block(const ThetaBlockDescriptor& d, std::int64_t qmax) {
  return psi_quotient(block_expand(d, 2 * qmax + 2));
}

bool q0_matches_descriptor(const JacobiFormSeries& psi, const ThetaBlockDescriptor& d) {
  LaurentPoly expect;
  expect[0] = make_rational(d.eta_exp);
  for (const auto& [a, f] : d.theta_exps) {
    expect[2 * a] += make_rational(f);
    expect[-2 * a] += make_rational(f);
  }
  detail::purge(expect);
  return psi.series.q_slice(0) == expect;
}

FormReport form_checks(const JacobiFormSeries& phi) {
  FormReport rep;
  rep.q_order = phi.q_order();
  rep.window_qmax = phi.qmax();
  rep.is_weak = !rep.q_order || sgn(*rep.q_order) >= 0;
  rep.is_holomorphic = rep.is_weak;
  rep.is_cusp = rep.is_weak;
  rep.evenness = true;
  const std::int64_t qd = phi.series.qden(), zd = phi.series.zden();
  const std::int64_t N = phi.index;
  for (const auto& [qu, slice] : phi.series.slices()) {
    for (const auto& [zu, c] : slice) {
      // 4N n - r^2 scaled by qd * zd^2.
      const __int128 h = static_cast<__int128>(4 * N) * qu * zd * zd - static_cast<__int128>(zu) * zu * qd;
      if (h < 0) rep.is_holomorphic = false;
      if (h <= 0) rep.is_cusp = false;
      const auto it = slice.find(-zu);
      if (it == slice.end() || it->second != c) rep.evenness = false;
    }
  }
  rep.is_cusp = rep.is_cusp && rep.is_holomorphic;
  return rep;
}

std::optional<std::pair<std::int64_t, std::int64_t>> elliptic_law_violation(
    const JacobiFormSeries& phi, std::span<const std::int64_t> lambdas) {
  if (!phi.has_integral_exponents()) throw DomainError("elliptic law check needs integral exponents");
  const std::int64_t N = phi.index, top = phi.qmax();
  const std::int64_t qd = phi.series.qden(), zd = phi.series.zden();
  for (const auto& [qu, slice] : phi.series.slices()) {
    const std::int64_t n = qu / qd;
    for (const auto& [zu, c] : slice) {
      const std::int64_t r = zu / zd;
      for (std::int64_t l : lambdas) {
        const std::int64_t n2 = n + l * l * N + l * r;
        if (n2 > top) continue;
        if (phi.coeff(n2, r + 2 * l * N) != c) return std::make_pair(n, r);
      }
    }
  }
  return std::nullopt;
}

}  // namespace thetablock
