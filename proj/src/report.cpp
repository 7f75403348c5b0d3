#include "thetablock/report.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace thetablock {

Json integer_to_json(const Integer& x) {
  if (x.fits_slong_p()) return static_cast<std::int64_t>(x.get_si());
  return x.get_str();
}

Integer integer_from_json(const Json& j) {
  if (j.is_number_integer()) return Integer(std::to_string(j.get<std::int64_t>()));
  return Integer(j.get<std::string>());
}

Json rational_to_json(const Rational& x) {
  if (is_integer(x)) return integer_to_json(x.get_num());
  return x.get_str();
}

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return make_rational(j.get<std::int64_t>());
  Rational r(j.get<std::string>());
  r.canonicalize();
  return r;
}

Json series_to_json(const FourierSeries& s) {
  Json terms = Json::array();
  for (const auto& [q, slice] : s.slices())
    for (const auto& [z, c] : slice)
      terms.push_back(Json::array({q, z, integer_to_json(c.get_num()), integer_to_json(c.get_den())}));
  return Json{{"qden", s.qden()}, {"zden", s.zden()}, {"qmax", s.qmax()}, {"terms", terms}};
}

FourierSeries series_from_json(const Json& j) {
  FourierSeries s(j.at("qmax").get<std::int64_t>(), 1, j.at("zden").get<std::int64_t>(), j.at("qden").get<std::int64_t>());
  for (const auto& t : j.at("terms")) {
    Rational c(integer_from_json(t.at(2)), integer_from_json(t.at(3)));
    c.canonicalize();
    s.add_term(t.at(0).get<std::int64_t>(), t.at(1).get<std::int64_t>(), c);
  }
  return s;
}

Json form_to_json(const JacobiFormSeries& f) {
  return Json{{"weight", rational_to_json(f.weight)}, {"index", f.index}, {"series", series_to_json(f.series)}};
}

JacobiFormSeries form_from_json(const Json& j) {
  return JacobiFormSeries{series_from_json(j.at("series")), rational_from_json(j.at("weight")),
                          j.at("index").get<std::int64_t>()};
}

Json sing_to_json(const SingularPart& sp) {
  Json out = Json::array();
  for (const auto& o : sp.orbits) out.push_back(Json::array({o.n, o.r, rational_to_json(o.coeff)}));
  return out;
}

Json divisors_to_json(const std::vector<DivisorEntry>& divisors) {
  Json out = Json::array();
  for (const auto& d : divisors)
    out.push_back(Json::array({d.label.n0, d.label.r0, d.label.m0, integer_to_json(d.multiplicity)}));
  return out;
}

Json to_json(const VerifyReport& rep, bool with_timings) {
  Json j;
  j["a"] = rep.a;
  j["N"] = rep.N;
  j["weight"] = rational_to_json(rep.weight);
  j["window"] = Json{{"n_max", rep.n_max}, {"m_max", rep.m_max}, {"phi_qmax", rep.phi_qmax}, {"psi_qmax", rep.psi_qmax}};
  j["equal"] = rep.equal;
  if (rep.first_mismatch) {
    const auto& m = *rep.first_mismatch;
    j["first_mismatch"] = Json{{"n", m.n}, {"r", m.r}, {"m", m.m}, {"grit", rational_to_json(m.grit)},
                               {"borch", rational_to_json(m.borch)}};
  }
  j["sing"] = sing_to_json(rep.sing);
  j["divisors"] = divisors_to_json(rep.divisors);
  j["leading"] = Json{{"A", rational_to_json(rep.leading.A)}, {"B", rational_to_json(rep.leading.B)},
                      {"C", rational_to_json(rep.leading.C)}, {"D0", integer_to_json(rep.leading.D0)}};
  j["descriptor"] = rep.descriptor;
  j["sign"] = rep.sign;
  j["sing_text"] = rep.sing.to_string();
  j["sing_complete"] = rep.sing.complete;
  j["sing_window_qmax"] = rep.sing.window_qmax;
  j["fj"] = Json{{"row1_is_theta", rep.fj_row1_is_theta}, {"row2_is_minus_theta_psi", rep.fj_row2_is_minus_theta_psi}};
  if (with_timings) j["timings"] = rep.timings_ms;
  return j;
}

VerifyReport verify_report_from_json(const Json& j) {
  VerifyReport rep;
  rep.a = j.at("a").get<std::array<std::int64_t, 4>>();
  rep.N = j.at("N").get<std::int64_t>();
  rep.weight = rational_from_json(j.at("weight"));
  const auto& w = j.at("window");
  rep.n_max = w.at("n_max").get<std::int64_t>();
  rep.m_max = w.at("m_max").get<std::int64_t>();
  rep.phi_qmax = w.at("phi_qmax").get<std::int64_t>();
  rep.psi_qmax = w.at("psi_qmax").get<std::int64_t>();
  rep.equal = j.at("equal").get<bool>();
  if (j.contains("first_mismatch")) {
    const auto& m = j.at("first_mismatch");
    rep.first_mismatch = Mismatch{m.at("n").get<std::int64_t>(), m.at("r").get<std::int64_t>(),
                                  m.at("m").get<std::int64_t>(), rational_from_json(m.at("grit")),
                                  rational_from_json(m.at("borch"))};
  }
  rep.sing.index_N = rep.N;
  rep.sing.complete = j.at("sing_complete").get<bool>();
  rep.sing.window_qmax = j.at("sing_window_qmax").get<std::int64_t>();
  for (const auto& o : j.at("sing")) {
    const auto n = o.at(0).get<std::int64_t>(), r = o.at(1).get<std::int64_t>();
    rep.sing.orbits.push_back({n, r, rational_from_json(o.at(2)), r * r - 4 * rep.N * n});
  }
  for (const auto& d : j.at("divisors"))
    rep.divisors.push_back({{d.at(0).get<std::int64_t>(), d.at(1).get<std::int64_t>(), d.at(2).get<std::int64_t>()},
                            integer_from_json(d.at(3))});
  const auto& L = j.at("leading");
  rep.leading = {rational_from_json(L.at("A")), rational_from_json(L.at("B")), rational_from_json(L.at("C")),
                 integer_from_json(L.at("D0"))};
  rep.descriptor = j.at("descriptor").get<std::string>();
  rep.sign = j.at("sign").get<int>();
  rep.fj_row1_is_theta = j.at("fj").at("row1_is_theta").get<bool>();
  rep.fj_row2_is_minus_theta_psi = j.at("fj").at("row2_is_minus_theta_psi").get<bool>();
  if (j.contains("timings")) rep.timings_ms = j.at("timings").get<std::map<std::string, double>>();
  return rep;
}

std::string sing_text(const SingularPart& sp) {
  std::string out = "Sing(psi_{0," + std::to_string(sp.index_N) + "}) = " + sp.to_string() + "\n";
  if (!sp.complete)
    out += "(incomplete: Psi known to q^" + std::to_string(sp.window_qmax) + ", needs q^" +
           std::to_string(sing_required_depth(sp.index_N)) + ")\n";
  return out;
}

std::string divisor_text(const std::vector<DivisorEntry>& divisors) {
  std::ostringstream out;
  out << "divisors (n0, r0, m0): multiplicity\n";
  for (const auto& d : divisors)
    out << "  (" << d.label.n0 << ", " << d.label.r0 << ", " << d.label.m0 << "): " << d.multiplicity << "\n";
  if (theta_block_divisors_only(divisors)) out << "(theta-block divisors only)\n";
  return out.str();
}

std::string to_text(const VerifyReport& rep, bool with_timings) {
  std::ostringstream out;
  out << "a = (" << rep.a[0] << ", " << rep.a[1] << ", " << rep.a[2] << ", " << rep.a[3] << ")  N = " << rep.N
      << "  weight = " << rep.weight << "\n";
  out << "phi = " << rep.descriptor << "\n";
  out << "window: n <= " << rep.n_max << ", m <= " << rep.m_max << " (phi to q^" << rep.phi_qmax << ", Psi to q^"
      << rep.psi_qmax << ")\n";
  out << (rep.sign < 0 ? "lift = -Borch: " : "lift = Borch: ") << (rep.equal ? "true" : "false") << "\n";
  if (rep.first_mismatch) {
    const auto& m = *rep.first_mismatch;
    out << "first mismatch at (n, r, m) = (" << m.n << ", " << m.r << ", " << m.m << "): grit " << m.grit
        << ", borch " << m.borch << "\n";
  }
  const char* eps = rep.sign < 0 ? "-" : "";
  out << "FJ row 1 = " << eps << "Theta: " << (rep.fj_row1_is_theta ? "true" : "false") << "\n";
  out << "FJ row 2 = " << (rep.sign < 0 ? "" : "-") << "Theta Psi: " << (rep.fj_row2_is_minus_theta_psi ? "true" : "false") << "\n";
  out << "A = " << rep.leading.A << ", B = " << rep.leading.B << ", C = " << rep.leading.C
      << ", D0 = " << rep.leading.D0 << "\n";
  out << sing_text(rep.sing);
  if (rep.sing.complete)
    out << divisor_text(rep.divisors);
  else
    out << "divisors: not computed (Sing incomplete)\n";
  if (with_timings)
    for (const auto& [k, v] : rep.timings_ms) out << "time " << k << ": " << std::fixed << std::setprecision(1) << v << " ms\n";
  return out.str();
}

Json to_json(const RelationReport& rep) {
  Json nz = Json::array();
  for (const auto& [n, r, s] : rep.nonzero) nz.push_back(Json::array({n, r, rational_to_json(s)}));
  return Json{{"alpha", rep.alpha}, {"beta", rep.beta},         {"n_range", {rep.n_lo, rep.n_hi}},
              {"r_bound", rep.r_bound}, {"depth", rep.depth}, {"terms", rep.terms},
              {"all_zero", rep.all_zero()}, {"nonzero", nz}};
}

std::string to_text(const RelationReport& rep) {
  std::ostringstream out;
  out << "sum_a c(" << rep.alpha << "a^2+na, " << rep.beta << "a+r) for n in [" << rep.n_lo << ", " << rep.n_hi
      << "], |r| <= " << rep.r_bound << ": ";
  if (rep.all_zero())
    out << "all zero";
  else
    out << rep.nonzero.size() << " nonzero";
  out << " (" << rep.terms << " coefficients, depth q^" << rep.depth << ")\n";
  std::size_t shown = 0;
  for (const auto& [n, r, s] : rep.nonzero) {
    if (++shown > 10) {
      out << "  ...\n";
      break;
    }
    out << "  n = " << n << ", r = " << r << ": " << s << "\n";
  }
  return out.str();
}

Json to_json(const DualClassReport& rep) {
  Json classes = Json::array();
  for (const auto& c : rep.classes)
    classes.push_back(Json{{"min_norm", rational_to_json(c.min_norm)}, {"classes", c.class_count},
                           {"elements", c.elements_per_class}});
  return Json{{"order_of_D", rep.order_of_D},          {"classes_reached", rep.classes_reached},
              {"norm_bound", rational_to_json(rep.norm_bound)}, {"classes", classes},
              {"norm2_holds", rep.norm2_holds}};
}

std::string to_text(const DualClassReport& rep) {
  std::ostringstream out;
  out << "|D| = " << rep.order_of_D << ", classes with norm <= " << rep.norm_bound << ": " << rep.classes_reached
      << "\n";
  for (const auto& c : rep.classes)
    out << "  norm " << c.min_norm << ": " << c.class_count << " classes x " << c.elements_per_class
        << " elements\n";
  out << "Norm_2: " << (rep.norm2_holds ? "true" : "false") << "\n";
  return out.str();
}

Json to_json(const WeylReport& rep) {
  Json orbits = Json::object();
  for (const auto& [norm, sizes] : rep.orbit_sizes) orbits[norm.get_str()] = sizes;
  return Json{{"group_order", rep.group_order}, {"orbit_sizes", orbits}, {"transitive", rep.transitive}};
}

Json gram_to_json(const IntMatrix& g) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < g.cols(); ++k) row.push_back(g(i, k));
    rows.push_back(row);
  }
  return rows;
}

Json to_json(const LatticeBlockDescriptor& d) {
  Json forms = Json::array();
  for (const auto& [l, f] : d.forms) {
    Json coords = Json::array();
    for (Eigen::Index i = 0; i < l.coords.size(); ++i) coords.push_back(l.coords(i));
    forms.push_back(Json{{"l", coords}, {"den", l.den}, {"f", f}});
  }
  return Json{{"gram", gram_to_json(d.lattice.gram())},
              {"det", d.lattice.det()},
              {"eta_exp", d.eta_exp},
              {"thetas", d.theta_count()},
              {"net_eta", d.net_eta_power()},
              {"weight", rational_to_json(d.weight())},
              {"forms", forms},
              {"descriptor", d.to_string()}};
}

SeriesCache::SeriesCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::string SeriesCache::key(const ThetaBlockDescriptor& d, std::int64_t qmax) {
  return d.to_string() + " @ q^" + std::to_string(qmax);
}

std::filesystem::path SeriesCache::path_for(const std::string& key) const {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : key) h = (h ^ c) * 1099511628211ULL;
  std::ostringstream name;
  name << std::hex << std::setw(16) << std::setfill('0') << h << ".json";
  return dir_ / name.str();
}

std::optional<JacobiFormSeries> SeriesCache::load(const ThetaBlockDescriptor& d, std::int64_t qmax) const {
  const std::string k = key(d, qmax);
  std::ifstream in(path_for(k));
  if (!in) return std::nullopt;
  const Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.contains("key") || j.at("key") != k) return std::nullopt;
  return form_from_json(j.at("form"));
}

void SeriesCache::store(const ThetaBlockDescriptor& d, std::int64_t qmax, const JacobiFormSeries& f) const {
  std::filesystem::create_directories(dir_);
  const std::string k = key(d, qmax);
  const auto target = path_for(k);
  const auto tmp = std::filesystem::path(target.string() + ".tmp");
  {
    std::ofstream out(tmp);
    out << Json{{"key", k}, {"form", form_to_json(f)}}.dump();
  }
  std::filesystem::rename(tmp, target);
}

JacobiFormSeries SeriesCache::expand(const ThetaBlockDescriptor& d, std::int64_t qmax) const {
  if (auto hit = load(d, qmax)) return *hit;
  JacobiFormSeries f = block_expand(d, qmax);
  store(d, qmax, f);
  return f;
}

BlockExpander SeriesCache::expander() const {
  return [self = *this](const ThetaBlockDescriptor& d, std::int64_t qmax) { return self.expand(d, qmax); };
}

std::optional<std::filesystem::path> resolve_cache_dir(const std::optional<std::string>& flag) {
  if (const char* env = std::getenv("THETABLOCK_CACHE"); env && *env) return std::filesystem::path(env);
  if (flag && !flag->empty()) return std::filesystem::path(*flag);
  return std::nullopt;
}

}  // namespace thetablock
