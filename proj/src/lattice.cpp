#include "thetablock/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace thetablock {

namespace {

std::vector<std::int64_t> as_vec(const IntMatrix& m) {
  return std::vector<std::int64_t>(m.data(), m.data() + m.size());
}

std::vector<std::int64_t> as_vec(const IntVector& v) { return std::vector<std::int64_t>(v.data(), v.data() + v.size()); }

bool lex_less(const IntVector& a, const IntVector& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

IntMatrix minor_matrix(const IntMatrix& m, Eigen::Index skip_row, Eigen::Index skip_col) {
  const Eigen::Index n = m.rows();
  IntMatrix out(n - 1, n - 1);
  for (Eigen::Index i = 0, oi = 0; i < n; ++i) {
    if (i == skip_row) continue;
    for (Eigen::Index j = 0, oj = 0; j < n; ++j) {
      if (j == skip_col) continue;
      out(oi, oj++) = m(i, j);
    }
    ++oi;
  }
  return out;
}

}  // namespace

Integer determinant(const IntMatrix& m) {
  if (m.rows() != m.cols()) throw DomainError("determinant of a non-square matrix");
  const Eigen::Index n = m.rows();
  if (n == 0) return 1;
  std::vector<std::vector<Integer>> a(n, std::vector<Integer>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a[i][j] = Integer(std::to_string(m(i, j)));
  Integer prev = 1;
  int sign = 1;
  for (Eigen::Index k = 0; k < n - 1; ++k) {
    if (a[k][k] == 0) {
      Eigen::Index p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(a[k], a[p]);
      sign = -sign;
    }
    for (Eigen::Index i = k + 1; i < n; ++i)
      for (Eigen::Index j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

GramLattice::GramLattice(IntMatrix gram) : gram_(std::move(gram)) {
  const Eigen::Index n = gram_.rows();
  if (n == 0 || gram_.cols() != n) throw DomainError("Gram matrix must be square and nonempty");
  if (gram_ != gram_.transpose()) throw DomainError("Gram matrix must be symmetric");
  for (Eigen::Index i = 0; i < n; ++i)
    if (gram_(i, i) % 2 != 0) throw DomainError("lattice is not even");
  for (Eigen::Index k = 1; k <= n; ++k)
    if (sgn(determinant(gram_.topLeftCorner(k, k))) <= 0) throw DomainError("Gram matrix is not positive definite");
  det_ = to_int64(determinant(gram_));
  adj_.resize(n, n);
  if (n == 1) {
    adj_(0, 0) = 1;
  } else {
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        const std::int64_t c = to_int64(determinant(minor_matrix(gram_, j, i)));
        adj_(i, j) = ((i + j) % 2 == 0) ? c : -c;
      }
  }
}

std::int64_t GramLattice::norm(const IntVector& x) const { return x.dot(gram_ * x); }

bool DualVector::operator==(const DualVector& o) const {
  return den == o.den && coords.size() == o.coords.size() && coords == o.coords;
}

bool DualVector::operator<(const DualVector& o) const {
  if (den != o.den) return den < o.den;
  return lex_less(coords, o.coords);
}

bool DualVector::is_zero() const { return coords.isZero(); }

DualVector dual(std::initializer_list<std::int64_t> coords, std::int64_t den) {
  DualVector v;
  v.coords = IntVector::Map(std::data(coords), static_cast<Eigen::Index>(coords.size()));
  v.den = den;
  return v;
}

Rational dual_norm(const GramLattice& L, const DualVector& l) {
  return make_rational(l.coords.dot(L.adjugate() * l.coords), L.det() * l.den * l.den);
}

Rational pairing(const DualVector& l, const IntVector& x) { return make_rational(l.coords.dot(x), l.den); }

namespace {

/// Lower-triangular column Hermite form of the column lattice of m.
IntMatrix column_hnf(IntMatrix h) {
  const Eigen::Index n = h.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      while (h(i, j) != 0) {
        const std::int64_t q = floor_div(h(i, i), h(i, j));
        h.col(i) -= q * h.col(j);
        h.col(i).swap(h.col(j));
      }
    }
    if (h(i, i) < 0) h.col(i) = -h.col(i);
    if (h(i, i) == 0) throw DomainError("singular Gram matrix");
  }
  return h;
}

}  // namespace

IntVector class_key(const GramLattice& L, const IntVector& y) {
  const IntMatrix h = column_hnf(L.gram());
  IntVector r = y;
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    const std::int64_t q = floor_div(r(i), h(i, i));
    r -= q * h.col(i);
  }
  return r;
}

std::vector<IntVector> short_dual_vectors(const GramLattice& L, const Rational& bound, std::size_t cap) {
  const Eigen::Index n = static_cast<Eigen::Index>(L.rank());
  // Q(y) = y^T M y with M = G^{-1}; M = U^T D U with U unit upper triangular,
  // so Q(y) = sum_i d_i (y_i + sum_{j>i} u_ij y_j)^2.
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m[i][j] = make_rational(L.adjugate()(i, j), L.det());
  std::vector<Rational> d(n);
  std::vector<std::vector<Rational>> u(n, std::vector<Rational>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    d[i] = m[i][i];
    for (Eigen::Index k = 0; k < i; ++k) d[i] -= u[k][i] * u[k][i] * d[k];
    u[i][i] = 1;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      Rational s = m[i][j];
      for (Eigen::Index k = 0; k < i; ++k) s -= u[k][i] * u[k][j] * d[k];
      u[i][j] = s / d[i];
    }
  }

  std::vector<IntVector> out;
  IntVector y = IntVector::Zero(n);
  std::size_t visited = 0;
  // Recursive search from the last coordinate down.
  auto search = [&](auto&& self, Eigen::Index i, const Rational& remaining) -> void {
    Rational center = 0;
    for (Eigen::Index j = i + 1; j < n; ++j) center += u[i][j] * make_rational(y(j));
    const double s = std::sqrt(std::max(0.0, Rational(remaining / d[i]).get_d()));
    const double c = center.get_d();
    const auto lo = static_cast<std::int64_t>(std::floor(-c - s)) - 1;
    const auto hi = static_cast<std::int64_t>(std::ceil(-c + s)) + 1;
    for (std::int64_t t = lo; t <= hi; ++t) {
      const Rational shift = make_rational(t) + center;
      const Rational used = d[i] * shift * shift;
      if (used > remaining) continue;
      if (++visited > cap) throw EnumerationLimit("short-vector enumeration exceeded its candidate cap");
      y(i) = t;
      if (i == 0) out.push_back(y);
      else self(self, i - 1, remaining - used);
    }
    y(i) = 0;
  };
  search(search, n - 1, bound);
  std::sort(out.begin(), out.end(), lex_less);
  return out;
}

std::vector<DualClass> enumerate_classes(const GramLattice& L, const Rational& norm_bound, std::size_t cap) {
  const auto vectors = short_dual_vectors(L, norm_bound, cap);
  std::map<std::vector<std::int64_t>, DualClass> classes;
  for (const IntVector& y : vectors) {
    const IntVector key = class_key(L, y);
    const Rational nrm = make_rational(y.dot(L.adjugate() * y), L.det());
    auto [it, fresh] = classes.try_emplace(as_vec(key));
    DualClass& c = it->second;
    if (fresh || nrm < c.min_norm) {
      c.key = key;
      c.min_norm = nrm;
      c.representatives.clear();
    }
    if (nrm == c.min_norm) c.representatives.push_back(y);
  }
  std::vector<DualClass> out;
  for (auto& [k, c] : classes) out.push_back(std::move(c));
  return out;
}

DualClassReport discriminant_classes(const GramLattice& L, const Rational& norm_bound, std::size_t cap) {
  DualClassReport rep;
  rep.order_of_D = L.det();
  rep.norm_bound = std::max(norm_bound, Rational(2));
  const auto classes = enumerate_classes(L, rep.norm_bound, cap);
  std::map<std::pair<Rational, std::int64_t>, std::int64_t> groups;
  std::int64_t reached_two = 0;
  for (const auto& c : classes) {
    if (c.min_norm <= norm_bound) {
      ++rep.classes_reached;
      groups[{c.min_norm, static_cast<std::int64_t>(c.representatives.size())}] += 1;
    }
    if (c.min_norm <= 2) ++reached_two;
  }
  for (const auto& [k, count] : groups) rep.classes.push_back({k.first, count, k.second});
  rep.norm2_holds = reached_two == rep.order_of_D;
  return rep;
}

const A4Data& a4_data() {
  static const A4Data data = [] {
    A4Data d;
    d.gram_root = IntMatrix::Zero(4, 4);
    for (int i = 0; i < 4; ++i) {
      d.gram_root(i, i) = 2;
      if (i + 1 < 4) d.gram_root(i, i + 1) = d.gram_root(i + 1, i) = -1;
    }
    d.gram_weight5 = IntMatrix(4, 4);
    for (int i = 1; i <= 4; ++i)
      for (int j = 1; j <= 4; ++j) d.gram_weight5(i - 1, j - 1) = std::min(i, j) * (5 - std::max(i, j));
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) {
        IntVector r = IntVector::Zero(4);
        for (int k = i; k <= j; ++k) r(k) = 1;
        d.positive_roots.push_back(r);
      }
    for (int i = 1; i <= 4; ++i) {
      IntVector w(5);
      for (int k = 0; k < 5; ++k) w(k) = (k < i ? 5 : 0) - i;
      d.fundamental_weights_5.push_back(w);
      IntVector a = IntVector::Zero(5);
      a(i - 1) = 1;
      a(i) = -1;
      d.simple_roots_ambient.push_back(a);
    }
    return d;
  }();
  return data;
}

bool a4_consistent() {
  const A4Data& d = a4_data();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (d.simple_roots_ambient[i].dot(d.fundamental_weights_5[j]) != (i == j ? 5 : 0)) return false;
      if (d.simple_roots_ambient[i].dot(d.simple_roots_ambient[j]) != d.gram_root(i, j)) return false;
      if (d.fundamental_weights_5[i].dot(d.fundamental_weights_5[j]) != 5 * d.gram_weight5(i, j)) return false;
    }
  for (const IntVector& r : d.positive_roots)
    if (r.dot(d.gram_root * r) != 2) return false;
  return d.positive_roots.size() == 10;
}

std::int64_t index_N(const std::array<std::int64_t, 4>& a) {
  const IntVector v = IntVector::Map(a.data(), 4);
  return v.dot(a4_data().gram_weight5 * v) / 2;
}

std::int64_t index_polynomial(const std::array<std::int64_t, 4>& a) {
  const auto [a1, a2, a3, a4] = a;
  return 2 * a1 * a1 + 3 * a1 * a2 + 2 * a1 * a3 + a1 * a4 + 3 * a2 * a2 + 4 * a2 * a3 + 2 * a2 * a4 + 3 * a3 * a3 +
         3 * a3 * a4 + 2 * a4 * a4;
}

std::vector<IntMatrix> weyl_group_a4() {
  const IntMatrix& A = a4_data().gram_root;
  std::vector<IntMatrix> gens;
  for (int i = 0; i < 4; ++i) {
    IntMatrix s = IntMatrix::Identity(4, 4);
    s.row(i) -= A.row(i);
    gens.push_back(s);
  }
  std::set<std::vector<std::int64_t>> seen;
  std::vector<IntMatrix> group{IntMatrix::Identity(4, 4)};
  seen.insert(as_vec(group[0]));
  for (std::size_t k = 0; k < group.size(); ++k)
    for (const IntMatrix& s : gens) {
      IntMatrix g = s * group[k];
      if (seen.insert(as_vec(g)).second) group.push_back(g);
    }
  const std::size_t w = group.size();
  for (std::size_t k = 0; k < w; ++k) group.push_back(-group[k]);
  return group;
}

WeylReport weyl_transitivity_report() {
  WeylReport rep;
  const GramLattice L(a4_data().gram_weight5);
  const auto group = weyl_group_a4();
  rep.group_order = group.size();
  const auto classes = enumerate_classes(L, Rational(2));
  std::map<std::vector<std::int64_t>, Rational> norm_of;
  for (const auto& c : classes) norm_of[as_vec(c.key)] = c.min_norm;

  rep.identity_fixes_all = true;
  for (const auto& c : classes)
    if (class_key(L, group[0] * c.representatives[0]) != c.key) rep.identity_fixes_all = false;

  std::set<std::vector<std::int64_t>> done;
  bool norms_preserved = true;
  for (const auto& c : classes) {
    if (done.count(as_vec(c.key))) continue;
    std::set<std::vector<std::int64_t>> orbit;
    for (const IntMatrix& g : group) {
      const auto k = as_vec(class_key(L, g * c.representatives[0]));
      orbit.insert(k);
      auto it = norm_of.find(k);
      if (it == norm_of.end() || it->second != c.min_norm) norms_preserved = false;
    }
    done.insert(orbit.begin(), orbit.end());
    rep.orbit_sizes[c.min_norm].push_back(orbit.size());
  }
  rep.transitive = norms_preserved && rep.group_order == 240 && rep.identity_fixes_all &&
                   static_cast<std::int64_t>(classes.size()) == L.det();
  for (const auto& [n, sizes] : rep.orbit_sizes)
    if (sizes.size() != 1) rep.transitive = false;
  return rep;
}

bool weyl_transitivity_check() { return weyl_transitivity_report().transitive; }

std::int64_t LatticeBlockDescriptor::theta_count() const {
  std::int64_t s = 0;
  for (const auto& [l, f] : forms) s += f;
  return s;
}

std::string LatticeBlockDescriptor::to_string() const {
  if (zero) return "0";
  std::ostringstream os;
  if (sign < 0) os << "-";
  bool first = true;
  const std::int64_t e = net_eta_power();
  if (e != 0) {
    os << "eta^" << e;
    first = false;
  }
  for (const auto& [l, f] : forms) {
    if (!first) os << " * ";
    first = false;
    os << "theta(";
    for (Eigen::Index i = 0; i < l.coords.size(); ++i) os << (i ? "," : "") << l.coords(i);
    os << ")";
    if (l.den != 1) os << "/" << l.den;
    if (f != 1) os << "^" << f;
  }
  if (first) os << "1";
  return os.str();
}

LatticeBlockDescriptor normalized(LatticeBlockDescriptor d) {
  std::map<DualVector, std::int64_t> merged;
  for (auto [l, f] : d.forms) {
    if (f == 0) continue;
    if (l.is_zero()) {
      d.zero = true;
      continue;
    }
    std::int64_t g = l.den;
    for (Eigen::Index i = 0; i < l.coords.size(); ++i) g = std::gcd(g, l.coords(i));
    l.coords /= g;
    l.den /= g;
    Eigen::Index i = 0;
    while (l.coords(i) == 0) ++i;
    if (l.coords(i) < 0) {
      l.coords = -l.coords;
      if (f % 2 != 0) d.sign = -d.sign;
    }
    merged[l] += f;
  }
  d.forms.clear();
  for (const auto& [l, f] : merged)
    if (f != 0) d.forms.emplace_back(l, f);
  return d;
}

LatticeBlockDescriptor theta_a4_descriptor() {
  LatticeBlockDescriptor d;
  d.lattice = GramLattice(a4_data().gram_weight5);
  d.eta_exp = 4;
  for (const IntVector& r : a4_data().positive_roots) d.forms.emplace_back(DualVector{r, 1}, 1);
  return normalized(d);
}

ThetaBlockDescriptor specialize_block(const LatticeBlockDescriptor& d, const IntVector& v) {
  if (static_cast<std::size_t>(v.size()) != d.lattice.rank()) throw DomainError("specialization vector has wrong rank");
  ThetaBlockDescriptor out;
  out.eta_exp = d.eta_exp;
  out.sign = d.sign;
  out.zero = d.zero;
  for (const auto& [l, f] : d.forms) {
    const Rational p = pairing(l, v);
    if (!is_integer(p)) throw DomainError("form does not pair integrally with the specialization vector");
    std::int64_t x = to_int64(p.get_num());
    if (x == 0) {
      out.zero = true;
      continue;
    }
    if (x < 0) {
      x = -x;
      if (f % 2 != 0) out.sign = -out.sign;
    }
    out.theta_exps[x] += f;
    if (out.theta_exps[x] == 0) out.theta_exps.erase(x);
  }
  return out;
}

bool is_primitive(const IntMatrix& rows) {
  const Eigen::Index k = rows.rows(), n = rows.cols();
  if (k == 0 || k > n) return false;
  std::vector<bool> pick(static_cast<std::size_t>(n), false);
  std::fill(pick.begin(), pick.begin() + k, true);
  Integer g = 0;
  do {
    IntMatrix sub(k, k);
    for (Eigen::Index j = 0, c = 0; j < n; ++j)
      if (pick[static_cast<std::size_t>(j)]) sub.col(c++) = rows.col(j);
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), Integer(abs(determinant(sub))).get_mpz_t());
  } while (std::prev_permutation(pick.begin(), pick.end()));
  return g == 1;
}

PullbackResult quasi_pullback_block(const LatticeBlockDescriptor& d, const IntMatrix& sub_basis) {
  if (static_cast<std::size_t>(sub_basis.cols()) != d.lattice.rank())
    throw DomainError("sub-basis vectors have the wrong length");
  if (!is_primitive(sub_basis)) throw DomainError("sub-basis does not span a primitive sublattice");
  PullbackResult res;
  LatticeBlockDescriptor& out = res.block;
  out.lattice = GramLattice(sub_basis * d.lattice.gram() * sub_basis.transpose());
  out.eta_exp = d.eta_exp;
  out.sign = d.sign;
  out.zero = d.zero;
  for (const auto& [l, f] : d.forms) {
    DualVector r{sub_basis * l.coords, l.den};
    if (r.is_zero()) {
      // theta(tau, 0)' = 2 pi i eta^3: the factor theta / eta becomes eta^2
      res.removed += f;
      out.eta_exp += 2 * f;
      continue;
    }
    out.forms.emplace_back(r, f);
  }
  if (out.forms.empty()) throw DomainError("every theta factor vanishes on the sublattice");
  out = normalized(out);
  return res;
}

std::optional<GramLattice> named_lattice(const std::string& name) {
  auto from = [](std::initializer_list<std::initializer_list<std::int64_t>> rows) {
    IntMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
    Eigen::Index i = 0;
    for (const auto& r : rows) {
      Eigen::Index j = 0;
      for (std::int64_t x : r) m(i, j++) = x;
      ++i;
    }
    return GramLattice(m);
  };
  if (name == "A4") return GramLattice(a4_data().gram_root);
  if (name == "A4v5") return GramLattice(a4_data().gram_weight5);
  if (name == "A3_5") return from({{10, -5, 0}, {-5, 10, -5}, {0, -5, 10}});
  if (name == "2A1_5") return from({{10, 0}, {0, 10}});
  if (name == "A0") return from({{4, 3, 2}, {3, 6, 4}, {2, 4, 6}});
  if (name == "B0") return from({{4, 2}, {2, 6}});
  return std::nullopt;
}

std::vector<std::string> lattice_names() { return {"A4", "A4v5", "A3_5", "2A1_5", "A0", "B0"}; }

IntMatrix example_sub_basis(const std::string& name) {
  IntMatrix m;
  if (name == "T0") {
    m = IntMatrix::Zero(3, 4);
    m(0, 0) = m(1, 1) = m(2, 2) = 1;
  } else if (name == "B0_in_T0") {
    m = IntMatrix::Zero(2, 3);
    m(0, 0) = m(1, 2) = 1;
  } else if (name == "A3_5") {
    m = a4_data().gram_root.topRows(3);
  } else if (name == "2A1_5_in_A3_5") {
    m = IntMatrix::Zero(2, 3);
    m(0, 0) = m(1, 2) = 1;
  } else {
    throw DomainError("unknown example sub-basis '" + name + "'");
  }
  return m;
}

namespace {

std::int64_t form_lcm(const LatticeBlockDescriptor& d) {
  std::int64_t l = 1;
  for (const auto& [v, f] : d.forms) l = std::lcm(l, v.den);
  return l;
}

MultiFourierSeries theta_sum_multi(const DualVector& l, std::int64_t scale, std::int64_t qmax_units,
                                   std::int64_t zden) {
  MultiFourierSeries s(qmax_units, static_cast<std::size_t>(l.coords.size()), zden);
  for (std::int64_t m = 0;; ++m) {
    const std::int64_t q = 3 * (2 * m + 1) * (2 * m + 1);
    if (q > qmax_units) break;
    const Rational c(m % 2 == 0 ? 1 : -1);
    ZVec plus(static_cast<std::size_t>(l.coords.size())), minus(plus.size());
    for (std::size_t i = 0; i < plus.size(); ++i) {
      plus[i] = (2 * m + 1) * l.coords(static_cast<Eigen::Index>(i)) * scale;
      minus[i] = -plus[i];
    }
    s.add_term(q, plus, c);
    s.add_term(q, minus, -c);
  }
  return s;
}

}  // namespace

MultiFourierSeries lattice_theta_expand(const LatticeBlockDescriptor& d, std::int64_t qmax) {
  if (d.zero) throw ZeroBlockError("lattice theta block is identically zero");
  for (const auto& [l, f] : d.forms)
    if (f < 0) throw DomainError("only pure lattice theta blocks are expanded");
  const std::size_t rank = d.lattice.rank();
  const std::int64_t lcm = form_lcm(d);
  const std::int64_t zden = 2 * lcm;
  const std::int64_t E = d.net_eta_power();
  const std::int64_t order = 3 * d.theta_count() + E;
  if (qmax * kQDen < order) throw WindowError("truncation below the q-order of the block");
  const std::int64_t target = qmax * kQDen;

  const FourierSeries eta = eta_power(E, target - (order - E));
  MultiFourierSeries acc(eta.qmax(), rank, zden);
  const ZVec origin(rank, 0);
  for (const auto& [q, s] : eta.slices())
    for (const auto& [z, c] : s) acc.add_term(q, origin, c);
  for (const auto& [l, f] : d.forms) {
    const MultiFourierSeries t = theta_sum_multi(l, lcm / l.den, target - (order - 3), zden);
    for (std::int64_t i = 0; i < f; ++i) acc = series_mul(acc, t);
  }
  acc = acc.truncated(target);
  if (d.sign < 0) acc = -acc;
  return acc;
}

MultiFourierSeries lattice_hecke2(const MultiFourierSeries& f, std::int64_t weight) {
  const std::int64_t src_max = f.is_exact() ? kExact : floor_div(f.qmax(), kQDen);
  const std::int64_t out_max = f.is_exact() ? kExact : floor_div(src_max, 2);
  MultiFourierSeries out = f.empty_like(out_max >= kExact ? kExact : out_max * kQDen);
  const Rational w = weight >= 1 ? Rational(Integer(1) << static_cast<unsigned>(weight - 1))
                                 : Rational(1, Integer(1) << static_cast<unsigned>(1 - weight));
  for (const auto& [qu, slice] : f.slices()) {
    if (qu % kQDen != 0) throw DomainError("lattice Hecke operator needs integral q-exponents");
    const std::int64_t n = qu / kQDen;
    for (const auto& [z, c] : slice) {
      if (n % 2 == 0 && n / 2 <= out_max) out.add_term(n / 2 * kQDen, z, c);
      if (2 * n <= out_max) {
        ZVec doubled = z;
        for (auto& x : doubled) x *= 2;
        out.add_term(2 * n * kQDen, doubled, w * c);
      }
    }
  }
  return out;
}

MultiFourierSeries lattice_psi_q0(const LatticeBlockDescriptor& d, std::int64_t qmax) {
  if (!is_integer(d.weight())) throw DomainError("lattice Psi needs integral weight");
  const MultiFourierSeries theta = lattice_theta_expand(d, 2 * qmax + 2);
  if (theta.q_order() != kQDen) throw DomainError("Psi needs a theta block of q-order exactly one");
  const MultiFourierSeries h = lattice_hecke2(theta, to_int64(d.weight().get_num()));
  return (-div_exact(h, theta)).truncated(qmax * kQDen);
}

MultiLaurent expected_psi_q0(const LatticeBlockDescriptor& d) {
  const std::int64_t lcm = form_lcm(d);
  const std::size_t rank = d.lattice.rank();
  MultiLaurent out;
  out[ZVec(rank, 0)] += make_rational(d.eta_exp);
  for (const auto& [l, f] : d.forms) {
    ZVec plus(rank), minus(rank);
    for (std::size_t i = 0; i < rank; ++i) {
      plus[i] = 2 * l.coords(static_cast<Eigen::Index>(i)) * (lcm / l.den);
      minus[i] = -plus[i];
    }
    out[plus] += make_rational(f);
    out[minus] += make_rational(f);
  }
  detail::purge(out);
  return out;
}

std::optional<Rational> two_design_constant(const GramLattice& L, const MultiLaurent& q0, std::int64_t zden) {
  const std::size_t n = L.rank();
  std::vector<std::vector<Rational>> s(n, std::vector<Rational>(n));
  for (const auto& [z, c] : q0)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) s[i][j] += c * make_rational(z[i] * z[j], zden * zden);
  const Rational C = s[0][0] / (2 * make_rational(L.gram()(0, 0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (s[i][j] != 2 * C * make_rational(L.gram()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))))
        return std::nullopt;
  return C;
}

Rational hyperbolic_norm(const GramLattice& L, std::int64_t q_units, const ZVec& zvec, std::int64_t zden) {
  const IntVector z = IntVector::Map(zvec.data(), static_cast<Eigen::Index>(zvec.size()));
  return make_rational(2 * q_units, kQDen) - make_rational(z.dot(L.adjugate() * z), L.det() * zden * zden);
}

bool rank_weight_sane(const LatticeBlockDescriptor& d) {
  const Rational rank = make_rational(static_cast<std::int64_t>(d.lattice.rank()));
  const Rational k = d.weight();
  return rank <= 8 && rank / 2 <= k && k <= 12 - rank;
}

}  // namespace thetablock
