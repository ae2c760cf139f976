#ifndef NFFORGE_EXPONENT_HPP
#define NFFORGE_EXPONENT_HPP

#include <boost/container/small_vector.hpp>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>

#include "nfforge/errors.hpp"

namespace nfforge {

// Multidegree of a monomial: a vector of nonnegative integers. Ordered by
// total degree, then lexicographically, which fixes the canonical iteration
// order used everywhere for deterministic output.
class Exponent {
 public:
  using Storage = boost::container::small_vector<std::int32_t, 8>;

  Exponent() = default;
  explicit Exponent(int nvars) : e_(static_cast<std::size_t>(nvars), 0) {}
  Exponent(std::initializer_list<std::int32_t> init) : e_(init) { validate(); }
  explicit Exponent(Storage s) : e_(std::move(s)) { validate(); }

  static Exponent unit(int nvars, int axis) {
    Exponent a(nvars);
    a.e_[static_cast<std::size_t>(axis)] = 1;
    return a;
  }

  int nvars() const { return static_cast<int>(e_.size()); }
  std::int32_t operator[](int i) const { return e_[static_cast<std::size_t>(i)]; }
  std::int32_t& operator[](int i) { return e_[static_cast<std::size_t>(i)]; }

  int degree() const { return std::accumulate(e_.begin(), e_.end(), 0); }
  bool is_zero() const {
    for (auto v : e_)
      if (v != 0) return false;
    return true;
  }

  Exponent operator+(const Exponent& o) const {
    Exponent r = *this;
    for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] += o.e_[i];
    return r;
  }

  // Componentwise difference; valid only when o divides *this.
  Exponent operator-(const Exponent& o) const {
    Exponent r = *this;
    for (std::size_t i = 0; i < e_.size(); ++i) {
      r.e_[i] -= o.e_[i];
      if (r.e_[i] < 0) throw error(errc::internal, "negative exponent in difference");
    }
    return r;
  }

  bool divides(const Exponent& o) const {
    for (std::size_t i = 0; i < e_.size(); ++i)
      if (e_[i] > o.e_[i]) return false;
    return true;
  }

  friend bool operator==(const Exponent& a, const Exponent& b) { return a.e_ == b.e_; }
  friend bool operator!=(const Exponent& a, const Exponent& b) { return a.e_ != b.e_; }

  // Graded lexicographic order.
  friend bool operator<(const Exponent& a, const Exponent& b) {
    int da = a.degree(), db = b.degree();
    if (da != db) return da < db;
    return a.e_ < b.e_;
  }

  std::span<const std::int32_t> entries() const { return {e_.data(), e_.size()}; }

  std::string str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < e_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(e_[i]);
    }
    return s + ")";
  }

 private:
  void validate() const {
    for (auto v : e_)
      if (v < 0) throw error(errc::internal, "negative exponent entry");
  }

  Storage e_;
};

// Calls fn(alpha) for every exponent over nvars with total degree exactly d,
// in lexicographic order consistent with the grlex term order.
template <class Fn>
void for_each_exponent_of_degree(int nvars, int d, Fn&& fn) {
  Exponent current(nvars);
  auto rec = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == nvars - 1) {
      current[pos] = remaining;
      fn(const_cast<const Exponent&>(current));
      current[pos] = 0;
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      current[pos] = v;
      self(self, pos + 1, remaining - v);
    }
    current[pos] = 0;
  };
  if (nvars == 0) {
    if (d == 0) fn(const_cast<const Exponent&>(current));
    return;
  }
  rec(rec, 0, d);
}

// All exponents with total degree <= max_degree, in grlex order.
template <class Fn>
void for_each_exponent_up_to(int nvars, int max_degree, Fn&& fn) {
  for (int d = 0; d <= max_degree; ++d) for_each_exponent_of_degree(nvars, d, fn);
}

}  // namespace nfforge

#endif
