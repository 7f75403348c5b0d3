#pragma once

// JSON and text rendering of reports, series serialization and the optional
// on-disk cache of expanded theta blocks.

#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"
#include "thetablock/lattice.hpp"
#include "thetablock/lifts.hpp"

namespace thetablock {

using Json = nlohmann::ordered_json;

/// Integers as JSON numbers when they fit in int64, otherwise strings;
/// non-integral rationals as "p/q".
Json integer_to_json(const Integer& x);
Integer integer_from_json(const Json& j);
Json rational_to_json(const Rational& x);
Rational rational_from_json(const Json& j);

/// {qden, zden, qmax, terms: [[qnum, znum, num, den], ...]}
Json series_to_json(const FourierSeries& s);
FourierSeries series_from_json(const Json& j);

Json form_to_json(const JacobiFormSeries& f);
JacobiFormSeries form_from_json(const Json& j);

Json sing_to_json(const SingularPart& sp);
Json divisors_to_json(const std::vector<DivisorEntry>& divisors);

/// {a, N, weight, window, equal, first_mismatch?, sing, divisors, leading, ...};
/// timings only on request so that reports stay byte-identical across runs.
Json to_json(const VerifyReport& rep, bool with_timings = false);
VerifyReport verify_report_from_json(const Json& j);

std::string sing_text(const SingularPart& sp);
/// Table of (n0, r0, m0) multiplicities, then the non-theta-block part or
/// "(theta-block divisors only)".
std::string divisor_text(const std::vector<DivisorEntry>& divisors);
std::string to_text(const VerifyReport& rep, bool with_timings = false);

Json to_json(const RelationReport& rep);
std::string to_text(const RelationReport& rep);

Json to_json(const DualClassReport& rep);
std::string to_text(const DualClassReport& rep);

Json to_json(const WeylReport& rep);
Json to_json(const LatticeBlockDescriptor& d);
Json gram_to_json(const IntMatrix& g);

class SeriesCache {
 public:
  explicit SeriesCache(std::filesystem::path dir);

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path path_for(const std::string& key) const;

  std::optional<JacobiFormSeries> load(const ThetaBlockDescriptor& d, std::int64_t qmax) const;
  void store(const ThetaBlockDescriptor& d, std::int64_t qmax, const JacobiFormSeries& f) const;
  /// load, or block_expand and store.
  JacobiFormSeries expand(const ThetaBlockDescriptor& d, std::int64_t qmax) const;
  BlockExpander expander() const;

  static std::string key(const ThetaBlockDescriptor& d, std::int64_t qmax);

 private:
  std::filesystem::path dir_;
};

/// THETABLOCK_CACHE if set, else the flag value; nullopt means no cache.
std::optional<std::filesystem::path> resolve_cache_dir(const std::optional<std::string>& flag);

}  // namespace thetablock
