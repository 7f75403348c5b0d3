#include "thetablock/fourier_series.hpp"

#include <sstream>

namespace thetablock {

FourierSeries specialize(const MultiFourierSeries& a, const ZVec& v) {
  if (v.size() != a.rank()) throw DenominatorMismatch("specialization vector has the wrong rank");
  FourierSeries out(a.qmax(), 1, a.zden(), a.qden());
  for (const auto& [q, slice] : a.slices()) {
    LaurentPoly image;
    for (const auto& [key, c] : slice) {
      std::int64_t z = 0;
      for (std::size_t i = 0; i < v.size(); ++i) z += key[i] * v[i];
      image[z] += c;
    }
    out.set_slice(q, std::move(image));
  }
  return out;
}

namespace {

std::string exponent(std::int64_t num, std::int64_t den) {
  const Rational e = make_rational(num, den);
  return is_integer(e) ? e.get_str() : "(" + e.get_str() + ")";
}

}  // namespace

std::string to_debug_string(const FourierSeries& s) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [q, slice] : s.slices()) {
    for (const auto& [z, c] : slice) {
      if (!first) os << (sgn(c) < 0 ? " - " : " + ");
      else if (sgn(c) < 0) os << "-";
      first = false;
      os << Rational(abs(c)).get_str();
      if (q != 0) os << "*q^" << exponent(q, s.qden());
      if (z != 0) os << "*z^" << exponent(z, s.zden());
    }
  }
  if (first) os << "0";
  if (!s.is_exact()) os << " + O(q^" << exponent(s.qmax() + 1, s.qden()) << ")";
  return os.str();
}

}  // namespace thetablock
