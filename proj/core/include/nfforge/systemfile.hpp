#ifndef NFFORGE_SYSTEMFILE_HPP
#define NFFORGE_SYSTEMFILE_HPP

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "nfforge/integrability.hpp"

namespace nfforge {

// Numeric-verification knobs carried by a system file. Exact data never
// travels as floats; these are the only floating-point fields.
struct NumericSection {
  std::vector<double> radii{0.1, 0.05, 0.025, 0.0125};
  double rtol = 1e-10;
  double atol = 1e-12;
  std::uint64_t seed = 0;
  int samples = 16;
  double flatness_exponent = 4.0;
  double ball = 1.5;
  double conservation_radius = 1e-3;
  double period_noise_floor = 1e-9;
  double conjugacy_noise_floor = 5e-17;
};

// On-disk description of a system: dimension, truncation order, exact
// linear part, higher-order terms per coordinate, first integrals, and the
// optional numeric section. Rationals are "p/q" strings, lowest terms on
// output.
struct SystemFile {
  int dimension = 0;
  int order = 0;
  RatMat linear_part;
  std::vector<TruncatedSeries> components;  // higher-order terms (degree >= 2)
  std::vector<TruncatedSeries> first_integrals;
  NumericSection numeric;

  // Full jet (linear part + higher-order terms), optionally re-housed at a
  // different truncation order.
  IntegrableSystem to_system(int order_override = -1) const;

  nlohmann::ordered_json to_json() const;
  static SystemFile from_json(const nlohmann::json& j);
  static SystemFile load(const std::string& path);
  void save(const std::string& path) const;
};

// Term-list serialization shared by files and reports.
nlohmann::ordered_json series_to_json(const TruncatedSeries& s);
TruncatedSeries series_from_json(const nlohmann::json& j, int nvars, int order);

}  // namespace nfforge

#endif
