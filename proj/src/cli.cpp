#include "thetablock/cli.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "thetablock/report.hpp"

namespace thetablock {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const std::map<std::int64_t, std::array<std::int64_t, 4>>& index_registry() {
  static const std::map<std::int64_t, std::array<std::int64_t, 4>> r{
      {25, {1, 1, 1, 1}}, {37, {1, 1, 1, 2}}, {43, {-1, 5, -1, -2}}, {50, {2, -1, -3, 6}}, {53, {1, -6, 3, 1}}};
  return r;
}

std::vector<std::int64_t> parse_ints(const std::string& text, const std::string& what) {
  std::vector<std::int64_t> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    try {
      v.push_back(std::stoll(item, &used));
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw UsageError("malformed " + what + ": '" + text + "'");
  }
  return v;
}

template <std::size_t K>
std::array<std::int64_t, K> parse_tuple(const std::string& text, const std::string& what) {
  const auto v = parse_ints(text, what);
  if (v.size() != K) throw UsageError(what + " needs exactly " + std::to_string(K) + " entries: '" + text + "'");
  std::array<std::int64_t, K> a{};
  std::copy(v.begin(), v.end(), a.begin());
  return a;
}

struct Common {
  std::string a;
  std::optional<std::int64_t> index;
  std::string format = "text";
  std::string out;
  std::optional<std::string> cache_dir;
  bool timings = false;

  std::array<std::int64_t, 4> resolve_a() const {
    if (!a.empty()) {
      const auto v = parse_tuple<4>(a, "--a");
      if (index && index_N(v) != *index)
        throw UsageError("--a has index " + std::to_string(index_N(v)) + ", not " + std::to_string(*index));
      return v;
    }
    if (index) {
      const auto it = index_registry().find(*index);
      if (it == index_registry().end()) throw UsageError("no registered a for index " + std::to_string(*index));
      return it->second;
    }
    throw UsageError("one of --a or --index is required");
  }

  BlockExpander expander() const {
    if (auto dir = resolve_cache_dir(cache_dir)) return SeriesCache(*dir).expander();
    return [](const ThetaBlockDescriptor& d, std::int64_t q) { return block_expand(d, q); };
  }

  bool json() const { return format == "json"; }
};

void add_common(CLI::App* sub, Common& c, bool needs_a) {
  if (needs_a) {
    sub->add_option("--a", c.a, "a1,a2,a3,a4");
    sub->add_option("--index", c.index, "registered index: 25, 37, 43, 50, 53");
  }
  sub->add_option("--format", c.format)->check(CLI::IsMember({"json", "text"}));
  sub->add_option("--out", c.out, "write the report to a file");
  sub->add_option("--cache-dir", c.cache_dir, "expanded series cache (THETABLOCK_CACHE overrides)");
}

GramLattice load_gram(const std::string& spec) {
  if (auto named = named_lattice(spec)) return *named;
  std::ifstream in(spec);
  if (!in) throw UsageError("unknown lattice '" + spec + "' (names: A4, A4v5, A3_5, 2A1_5, A0, B0, or a file)");
  std::vector<std::int64_t> v;
  std::int64_t x;
  while (in >> x) v.push_back(x);
  if (!in.eof()) throw UsageError("malformed Gram file '" + spec + "'");
  std::int64_t n = 0;
  while (n * n < static_cast<std::int64_t>(v.size())) ++n;
  if (n == 0 || n * n != static_cast<std::int64_t>(v.size())) throw UsageError("Gram file is not a square matrix");
  IntMatrix g(n, n);
  for (std::int64_t i = 0; i < n; ++i)
    for (std::int64_t k = 0; k < n; ++k) g(i, k) = v[static_cast<std::size_t>(i * n + k)];
  return GramLattice(g);
}

JacobiFormSeries psi_for(const Common& c, const ThetaBlockDescriptor& d, std::int64_t psi_qmax) {
  if (d.zero) throw ZeroBlockError("theta block is identically zero (an argument vanishes)");
  return psi_quotient(c.expander()(d, 2 * psi_qmax + 2));
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Theta blocks, additive lifts and Borcherds products", "thetablock"};
  app.require_subcommand(1);

  Common c;
  std::int64_t n_max = 3, m_max = 3;
  std::optional<std::int64_t> qmax;
  std::vector<std::string> labels, relations;
  std::string nrange = "0,15", gram = "A4v5", bound = "2", sub_chain = "T0";
  std::int64_t rbound = 60;

  auto* verify = app.add_subcommand("verify", "compare the additive lift of phi with Borch(Psi) on a window");
  add_common(verify, c, true);
  verify->add_option("--nmax", n_max)->check(CLI::PositiveNumber);
  verify->add_option("--mmax", m_max)->check(CLI::PositiveNumber);
  verify->add_option("--qmax", qmax, "q-depth of Psi")->check(CLI::NonNegativeNumber);
  verify->add_flag("--timings", c.timings);

  auto* sing = app.add_subcommand("sing", "singular part of Psi");
  add_common(sing, c, true);
  sing->add_option("--qmax", qmax, "q-depth of Psi")->check(CLI::NonNegativeNumber);

  auto* humbert = app.add_subcommand("humbert", "Humbert surface multiplicities of Borch(Psi)");
  add_common(humbert, c, true);
  humbert->add_option("--label", labels, "n0,r0,m0 (repeatable); default: the divisor list");

  auto* rel = app.add_subcommand("relations", "sum_a c(alpha a^2 + n a, beta a + r; phi)");
  add_common(rel, c, true);
  rel->add_option("--relation", relations, "alpha,beta (repeatable)")->required();
  rel->add_option("--nrange", nrange, "lo,hi");
  rel->add_option("--rbound", rbound)->check(CLI::NonNegativeNumber);

  auto* norm2 = app.add_subcommand("norm2", "decide the Norm_2 condition");
  add_common(norm2, c, false);
  norm2->add_option("--gram", gram, "lattice name or Gram file");
  norm2->add_option("--bound", bound, "norm bound for the class table");

  auto* lattice = app.add_subcommand("lattice-report", "discriminant classes and A4 data");
  add_common(lattice, c, false);
  lattice->add_option("--gram", gram, "lattice name or Gram file");

  auto* pull = app.add_subcommand("pullback", "quasi pull-backs of the A4 theta block");
  add_common(pull, c, false);
  pull->add_option("--sub", sub_chain, "comma-separated sub-bases: T0, B0_in_T0, A3_5, 2A1_5_in_A3_5");

  std::vector<std::string> argv_store{"thetablock"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_store) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitTrue : kExitError;
  }

  std::string text;
  int code = kExitTrue;
  try {
    if (verify->parsed()) {
      VerifyOptions opt;
      opt.n_max = n_max;
      opt.m_max = m_max;
      opt.psi_qmax = qmax;
      opt.expand = c.expander();
      const auto rep = verify_conjecture(c.resolve_a(), opt);
      text = c.json() ? dump(to_json(rep, c.timings)) : to_text(rep, c.timings);
      code = rep.equal ? kExitTrue : kExitFalse;
    } else if (sing->parsed()) {
      const auto a = c.resolve_a();
      const auto d = block_from_a(a);
      const std::int64_t N = index_N(a);
      const auto sp = singular_part(psi_for(c, d, qmax.value_or(sing_required_depth(N))));
      text = c.json() ? dump(Json{{"a", a},
                                  {"N", N},
                                  {"window_qmax", sp.window_qmax},
                                  {"complete", sp.complete},
                                  {"sing", sing_to_json(sp)},
                                  {"text", sp.to_string()}})
                      : sing_text(sp);
    } else if (humbert->parsed()) {
      const auto a = c.resolve_a();
      const auto d = block_from_a(a);
      const std::int64_t N = index_N(a);
      const auto psi = psi_for(c, d, sing_required_depth(N));
      std::vector<DivisorEntry> entries;
      if (labels.empty()) {
        entries = divisor_list(psi, singular_part(psi));
      } else {
        for (const auto& l : labels) {
          const auto t = parse_tuple<3>(l, "--label");
          const HumbertLabel T{t[0], t[1], t[2]};
          entries.push_back({T, humbert_multiplicity(psi, T)});
        }
      }
      if (c.json()) {
        text = dump(Json{{"a", a}, {"N", N}, {"divisors", divisors_to_json(entries)}});
      } else if (labels.empty()) {
        text = divisor_text(entries);
      } else {
        std::ostringstream o;
        for (const auto& e : entries)
          o << "(" << e.label.n0 << ", " << e.label.r0 << ", " << e.label.m0 << "): " << e.multiplicity << "\n";
        text = o.str();
      }
    } else if (rel->parsed()) {
      const auto a = c.resolve_a();
      const auto d = block_from_a(a);
      if (d.zero) throw ZeroBlockError("theta block is identically zero (an argument vanishes)");
      const auto range = parse_tuple<2>(nrange, "--nrange");
      if (range[0] > range[1]) throw UsageError("--nrange needs lo <= hi");
      Json reports = Json::array();
      for (const auto& r : relations) {
        const auto ab = parse_tuple<2>(r, "--relation");
        const auto rep = check_relation(d, ab[0], ab[1], range[0], range[1], rbound);
        if (!rep.all_zero()) code = kExitFalse;
        reports.push_back(to_json(rep));
        text += to_text(rep);
      }
      if (c.json()) text = dump(Json{{"a", a}, {"N", index_N(a)}, {"relations", reports}});
    } else if (norm2->parsed()) {
      const auto L = load_gram(gram);
      Rational b;
      if (b.set_str(bound, 10) != 0 || sgn(b) <= 0) throw UsageError("malformed --bound '" + bound + "'");
      b.canonicalize();
      const auto rep = discriminant_classes(L, b);
      text = c.json() ? dump(Json{{"gram", gram_to_json(L.gram())}, {"det", L.det()}, {"report", to_json(rep)}})
                      : to_text(rep);
      code = rep.norm2_holds ? kExitTrue : kExitFalse;
    } else if (lattice->parsed()) {
      const auto L = load_gram(gram);
      const auto rep = discriminant_classes(L);
      Json j{{"gram", gram_to_json(L.gram())}, {"det", L.det()}, {"rank", L.rank()}, {"classes", to_json(rep)}};
      std::ostringstream o;
      o << "rank " << L.rank() << ", det " << L.det() << "\n" << to_text(rep);
      if (gram == "A4" || gram == "A4v5") {
        const bool consistent = a4_consistent();
        const auto weyl = weyl_transitivity_report();
        j["a4_consistent"] = consistent;
        j["weyl"] = to_json(weyl);
        o << "A4 data consistent: " << (consistent ? "true" : "false") << "\n";
        o << "W(A4) x {+-1}: order " << weyl.group_order << ", transitive on minimal classes: "
          << (weyl.transitive ? "true" : "false") << "\n";
        if (!consistent || !weyl.transitive) code = kExitFalse;
      }
      text = c.json() ? dump(j) : o.str();
    } else if (pull->parsed()) {
      LatticeBlockDescriptor block = theta_a4_descriptor();
      Json steps = Json::array();
      std::ostringstream o;
      o << "start: " << block.to_string() << " (weight " << block.weight() << ")\n";
      std::stringstream ss(sub_chain);
      std::string name;
      while (std::getline(ss, name, ',')) {
        const auto res = quasi_pullback_block(block, example_sub_basis(name));
        block = res.block;
        steps.push_back(Json{{"sub", name}, {"removed", res.removed}, {"block", to_json(block)}});
        o << name << ": removed " << res.removed << ", " << block.theta_count() << " thetas, weight "
          << block.weight() << ", det " << block.lattice.det() << "\n  " << block.to_string() << "\n";
      }
      text = c.json() ? dump(Json{{"start", to_json(theta_a4_descriptor())}, {"steps", steps}}) : o.str();
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }

  if (c.out.empty()) {
    out << text;
  } else {
    std::ofstream f(c.out);
    if (!f) {
      err << "error: cannot write '" << c.out << "'\n";
      return kExitError;
    }
    f << text;
  }
  return code;
}

}  // namespace thetablock
