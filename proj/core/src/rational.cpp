#include "nfforge/rational.hpp"

#include <gmp.h>

#include <cctype>

namespace nfforge {

namespace {

Int parse_integer(std::string_view text) {
  if (text.empty()) throw error(errc::parse, "empty integer literal");
  std::size_t start = (text[0] == '+' || text[0] == '-') ? 1 : 0;
  if (start == text.size()) throw error(errc::parse, "sign without digits");
  for (std::size_t i = start; i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i])))
      throw error(errc::parse, "bad integer literal: " + std::string(text));
  }
  return Int(std::string(text));
}

}  // namespace

Rat parse_rational(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rat(parse_integer(text));
  Int num = parse_integer(text.substr(0, slash));
  Int den = parse_integer(text.substr(slash + 1));
  if (den.is_zero()) throw error(errc::parse, "zero denominator in rational: " + std::string(text));
  return Rat(num, den);  // pair constructor canonicalizes
}

std::string to_string(const Rat& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

double to_double(const Rat& r) { return r.convert_to<double>(); }

std::optional<Rat> rational_kth_root(const Rat& r, int k) {
  if (k < 1) return std::nullopt;
  if (k == 1) return r;
  if (r.is_zero()) return Rat(0);
  if (r < 0 && k % 2 == 0) return std::nullopt;

  auto int_root = [k](const Int& v) -> std::optional<Int> {
    Int a = abs(v);
    Int root;
    mpz_root(root.backend().data(), a.backend().data(), static_cast<unsigned long>(k));
    if (pow(root, k) != a) return std::nullopt;
    return v < 0 ? -root : root;
  };

  auto num = int_root(numerator(r));
  if (!num) return std::nullopt;
  auto den = int_root(denominator(r));
  if (!den) return std::nullopt;
  return Rat(*num, *den);
}

std::string to_string(const Scalar& s) {
  if (s.im.is_zero()) return to_string(s.re);
  if (s.re.is_zero()) return to_string(s.im) + "*i";
  std::string imp = to_string(s.im);
  if (!imp.empty() && imp[0] == '-') return to_string(s.re) + imp + "*i";
  return to_string(s.re) + "+" + imp + "*i";
}

}  // namespace nfforge
