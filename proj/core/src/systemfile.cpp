#include "nfforge/systemfile.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

namespace nfforge {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

Rat rational_field(const json& j, const char* what) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rat(j.get<long long>());
  throw error(errc::parse, std::string("expected a rational string for ") + what);
}

}  // namespace

ordered_json series_to_json(const TruncatedSeries& s) {
  ordered_json terms = ordered_json::array();
  for (const auto& [alpha, c] : s.terms()) {
    ordered_json t;
    t["exponents"] = std::vector<int>(alpha.entries().begin(), alpha.entries().end());
    t["coeff_re"] = to_string(c.re);
    if (!c.im.is_zero()) t["coeff_im"] = to_string(c.im);
    terms.push_back(std::move(t));
  }
  ordered_json out;
  out["terms"] = std::move(terms);
  return out;
}

TruncatedSeries series_from_json(const json& j, int nvars, int order) {
  if (!j.is_object() || !j.contains("terms") || !j["terms"].is_array())
    throw error(errc::parse, "series needs a \"terms\" array");
  TruncatedSeries s(nvars, order);
  for (const auto& t : j["terms"]) {
    if (!t.contains("exponents") || !t["exponents"].is_array())
      throw error(errc::parse, "term needs an \"exponents\" array");
    if (static_cast<int>(t["exponents"].size()) != nvars)
      throw error(errc::parse, "exponent width does not match the dimension");
    Exponent::Storage e;
    for (const auto& v : t["exponents"]) {
      if (!v.is_number_integer() || v.get<long long>() < 0)
        throw error(errc::parse, "exponents must be nonnegative integers");
      e.push_back(static_cast<std::int32_t>(v.get<long long>()));
    }
    Exponent alpha{std::move(e)};
    if (alpha.degree() > order)
      throw error(errc::parse, "term degree exceeds the truncation order");
    Rat re = t.contains("coeff_re") ? rational_field(t["coeff_re"], "coeff_re") : Rat(0);
    Rat im = t.contains("coeff_im") ? rational_field(t["coeff_im"], "coeff_im") : Rat(0);
    s.add_term(alpha, Scalar(std::move(re), std::move(im)));
  }
  return s;
}

IntegrableSystem SystemFile::to_system(int order_override) const {
  int ord = order_override > 0 ? order_override : order;
  int n = dimension;
  std::vector<TruncatedSeries> comps;
  comps.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    TruncatedSeries c = components[static_cast<std::size_t>(i)].with_order(ord);
    for (int j = 0; j < n; ++j) c.add_term(Exponent::unit(n, j), Scalar(linear_part(i, j)));
    comps.push_back(std::move(c));
  }
  IntegrableSystem sys;
  sys.x = VectorFieldJet(std::move(comps));
  for (const auto& f : first_integrals) sys.first_integrals.push_back(f.with_order(ord));
  sys.order = ord;
  return sys;
}

ordered_json SystemFile::to_json() const {
  ordered_json j;
  j["dimension"] = dimension;
  j["order"] = order;
  ordered_json lin = ordered_json::array();
  for (int r = 0; r < dimension; ++r) {
    ordered_json row = ordered_json::array();
    for (int c = 0; c < dimension; ++c) row.push_back(to_string(linear_part(r, c)));
    lin.push_back(std::move(row));
  }
  j["linear_part"] = std::move(lin);
  ordered_json comps = ordered_json::array();
  for (const auto& c : components) comps.push_back(series_to_json(c));
  j["components"] = std::move(comps);
  ordered_json fis = ordered_json::array();
  for (const auto& f : first_integrals) fis.push_back(series_to_json(f));
  j["first_integrals"] = std::move(fis);

  ordered_json num;
  num["radii"] = numeric.radii;
  num["rtol"] = numeric.rtol;
  num["atol"] = numeric.atol;
  num["seed"] = numeric.seed;
  num["samples"] = numeric.samples;
  num["flatness_exponent"] = numeric.flatness_exponent;
  num["ball"] = numeric.ball;
  num["conservation_radius"] = numeric.conservation_radius;
  num["period_noise_floor"] = numeric.period_noise_floor;
  num["conjugacy_noise_floor"] = numeric.conjugacy_noise_floor;
  j["numeric"] = std::move(num);
  return j;
}

SystemFile SystemFile::from_json(const json& j) {
  SystemFile sf;
  if (!j.is_object()) throw error(errc::parse, "system file must be a JSON object");
  if (!j.contains("dimension") || !j["dimension"].is_number_integer())
    throw error(errc::parse, "missing integer \"dimension\"");
  sf.dimension = j["dimension"].get<int>();
  if (sf.dimension < 1 || sf.dimension > 8)
    throw error(errc::parse, "dimension must be between 1 and 8");
  if (!j.contains("order") || !j["order"].is_number_integer())
    throw error(errc::parse, "missing integer \"order\"");
  sf.order = j["order"].get<int>();
  if (sf.order < 1 || sf.order > 16) throw error(errc::parse, "order must be between 1 and 16");

  if (!j.contains("linear_part") || !j["linear_part"].is_array() ||
      static_cast<int>(j["linear_part"].size()) != sf.dimension)
    throw error(errc::parse, "linear_part must be an n x n array of rational strings");
  sf.linear_part = RatMat(sf.dimension, sf.dimension);
  for (int r = 0; r < sf.dimension; ++r) {
    const auto& row = j["linear_part"][static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<int>(row.size()) != sf.dimension)
      throw error(errc::parse, "linear_part must be an n x n array of rational strings");
    for (int c = 0; c < sf.dimension; ++c)
      sf.linear_part(r, c) = rational_field(row[static_cast<std::size_t>(c)], "linear_part");
  }

  if (!j.contains("components") || !j["components"].is_array() ||
      static_cast<int>(j["components"].size()) != sf.dimension)
    throw error(errc::parse, "components must list one term set per coordinate");
  for (const auto& c : j["components"]) {
    TruncatedSeries s = series_from_json(c, sf.dimension, sf.order);
    if (auto v = s.valuation(); v && *v < 2)
      throw error(errc::parse, "components carry higher-order terms only (degree >= 2)");
    sf.components.push_back(std::move(s));
  }

  if (j.contains("first_integrals")) {
    if (!j["first_integrals"].is_array())
      throw error(errc::parse, "first_integrals must be an array");
    for (const auto& f : j["first_integrals"])
      sf.first_integrals.push_back(series_from_json(f, sf.dimension, sf.order));
  }

  if (j.contains("numeric")) {
    const auto& num = j["numeric"];
    if (!num.is_object()) throw error(errc::parse, "numeric section must be an object");
    auto get_double = [&](const char* key, double& into) {
      if (num.contains(key)) {
        if (!num[key].is_number()) throw error(errc::parse, std::string("numeric.") + key);
        into = num[key].get<double>();
      }
    };
    if (num.contains("radii")) {
      if (!num["radii"].is_array()) throw error(errc::parse, "numeric.radii");
      sf.numeric.radii.clear();
      for (const auto& r : num["radii"]) sf.numeric.radii.push_back(r.get<double>());
    }
    get_double("rtol", sf.numeric.rtol);
    get_double("atol", sf.numeric.atol);
    if (num.contains("seed")) sf.numeric.seed = num["seed"].get<std::uint64_t>();
    if (num.contains("samples")) sf.numeric.samples = num["samples"].get<int>();
    get_double("flatness_exponent", sf.numeric.flatness_exponent);
    get_double("ball", sf.numeric.ball);
    get_double("conservation_radius", sf.numeric.conservation_radius);
    get_double("period_noise_floor", sf.numeric.period_noise_floor);
    get_double("conjugacy_noise_floor", sf.numeric.conjugacy_noise_floor);
  }
  return sf;
}

SystemFile SystemFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error(errc::parse, "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw error(errc::parse, std::string("JSON parse error: ") + e.what());
  }
  return from_json(j);
}

void SystemFile::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw error(errc::parse, "cannot write " + path);
  out << to_json().dump(2) << "\n";
}

}  // namespace nfforge
