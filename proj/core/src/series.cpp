#include "nfforge/series.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <mutex>

namespace nfforge {

namespace {

// Grlex-ordered monomial table per (nvars, order), with unit-shift indices.
// Multiplication and composition accumulate into dense scratch indexed by it.
struct ExponentTable {
  std::vector<Exponent> list;
  std::map<Exponent, int> index;
  std::vector<std::array<int, 8>> plus;  // plus[i][j] = index of list[i]+e_j, -1 past order

  int shift(int idx, const Exponent& beta) const {
    for (int j = 0; j < beta.nvars(); ++j)
      for (std::int32_t t = 0; t < beta[j]; ++t) {
        idx = plus[static_cast<std::size_t>(idx)][static_cast<std::size_t>(j)];
        if (idx < 0) return -1;
      }
    return idx;
  }
};

const ExponentTable& exponent_table(int nvars, int order) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<ExponentTable>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto key = std::make_pair(nvars, order);
  auto it = cache.find(key);
  if (it != cache.end()) return *it->second;

  auto table = std::make_unique<ExponentTable>();
  for_each_exponent_up_to(nvars, order, [&](const Exponent& a) {
    table->index.emplace(a, static_cast<int>(table->list.size()));
    table->list.push_back(a);
  });
  table->plus.resize(table->list.size());
  for (std::size_t i = 0; i < table->list.size(); ++i) {
    for (int j = 0; j < nvars; ++j) {
      Exponent up = table->list[i] + Exponent::unit(nvars, j);
      auto found = table->index.find(up);
      table->plus[i][static_cast<std::size_t>(j)] = found == table->index.end() ? -1 : found->second;
    }
  }
  const ExponentTable& ref = *table;
  cache.emplace(key, std::move(table));
  return ref;
}

// Dense accumulation scratch; thread-local so mpq limb allocations stay warm.
struct Scratch {
  std::vector<Scalar> acc;
  std::vector<char> used;

  void prepare(std::size_t size) {
    if (acc.size() < size) {
      acc.resize(size);
      used.resize(size);
    }
    std::fill(used.begin(), used.begin() + static_cast<std::ptrdiff_t>(size), 0);
  }
  void add(int idx, const Scalar& v) {
    auto i = static_cast<std::size_t>(idx);
    if (used[i])
      acc[i] += v;
    else {
      acc[i] = v;
      used[i] = 1;
    }
  }
};

Scratch& scratch() {
  thread_local Scratch s;
  return s;
}

}  // namespace

TruncatedSeries::TruncatedSeries(int nvars, int order) : nvars_(nvars), order_(order) {
  if (nvars < 0 || order < 0) throw error(errc::internal, "bad series shape");
}

TruncatedSeries TruncatedSeries::constant(int nvars, int order, Scalar value) {
  TruncatedSeries s(nvars, order);
  if (!value.is_zero()) s.terms_.emplace(Exponent(nvars), std::move(value));
  return s;
}

TruncatedSeries TruncatedSeries::variable(int nvars, int order, int axis) {
  return monomial(nvars, order, Exponent::unit(nvars, axis), Scalar(1));
}

TruncatedSeries TruncatedSeries::monomial(int nvars, int order, const Exponent& alpha,
                                          Scalar coeff) {
  if (alpha.nvars() != nvars) throw error(errc::dimension_mismatch, "monomial exponent width");
  TruncatedSeries s(nvars, order);
  if (!coeff.is_zero() && alpha.degree() <= order) s.terms_.emplace(alpha, std::move(coeff));
  return s;
}

Scalar TruncatedSeries::coeff(const Exponent& alpha) const {
  auto it = terms_.find(alpha);
  return it == terms_.end() ? Scalar() : it->second;
}

void TruncatedSeries::set_coeff(const Exponent& alpha, Scalar value) {
  if (alpha.nvars() != nvars_) throw error(errc::dimension_mismatch, "set_coeff exponent width");
  if (alpha.degree() > order_) return;
  if (value.is_zero())
    terms_.erase(alpha);
  else
    terms_[alpha] = std::move(value);
}

void TruncatedSeries::add_term(const Exponent& alpha, const Scalar& value) {
  if (alpha.nvars() != nvars_) throw error(errc::dimension_mismatch, "add_term exponent width");
  if (value.is_zero() || alpha.degree() > order_) return;
  auto [it, inserted] = terms_.emplace(alpha, value);
  if (!inserted) {
    it->second += value;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

std::optional<int> TruncatedSeries::valuation() const {
  if (terms_.empty()) return std::nullopt;
  return terms_.begin()->first.degree();
}

int TruncatedSeries::top_degree() const {
  if (terms_.empty()) return 0;
  return terms_.rbegin()->first.degree();
}

TruncatedSeries TruncatedSeries::homogeneous_part(int degree) const {
  TruncatedSeries out(nvars_, order_);
  for (const auto& [alpha, c] : terms_)
    if (alpha.degree() == degree) out.terms_.emplace(alpha, c);
  return out;
}

TruncatedSeries TruncatedSeries::truncated_above(int degree) const {
  TruncatedSeries out(nvars_, order_);
  for (const auto& [alpha, c] : terms_)
    if (alpha.degree() <= degree) out.terms_.emplace(alpha, c);
  return out;
}

TruncatedSeries TruncatedSeries::drop_below(int degree) const {
  TruncatedSeries out(nvars_, order_);
  for (const auto& [alpha, c] : terms_)
    if (alpha.degree() >= degree) out.terms_.emplace(alpha, c);
  return out;
}

TruncatedSeries TruncatedSeries::with_order(int order) const {
  TruncatedSeries out(nvars_, order);
  for (const auto& [alpha, c] : terms_)
    if (alpha.degree() <= order) out.terms_.emplace(alpha, c);
  return out;
}

void TruncatedSeries::check_compatible(const TruncatedSeries& o) const {
  if (nvars_ != o.nvars_ || order_ != o.order_)
    throw error(errc::dimension_mismatch, "series over different nvars or order never combine");
}

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& o) {
  check_compatible(o);
  for (const auto& [alpha, c] : o.terms_) add_term(alpha, c);
  return *this;
}

TruncatedSeries& TruncatedSeries::operator-=(const TruncatedSeries& o) {
  check_compatible(o);
  for (const auto& [alpha, c] : o.terms_) add_term(alpha, -c);
  return *this;
}

TruncatedSeries operator-(const TruncatedSeries& a) {
  TruncatedSeries out(a.nvars_, a.order_);
  for (const auto& [alpha, c] : a.terms_) out.terms_.emplace(alpha, -c);
  return out;
}

TruncatedSeries operator*(const Scalar& s, const TruncatedSeries& a) {
  TruncatedSeries out(a.nvars_, a.order_);
  if (s.is_zero()) return out;
  for (const auto& [alpha, c] : a.terms_) {
    Scalar prod = s * c;
    if (!prod.is_zero()) out.terms_.emplace(alpha, std::move(prod));
  }
  return out;
}

TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
  a.check_compatible(b);
  TruncatedSeries out(a.nvars_, a.order_);
  if (a.terms_.empty() || b.terms_.empty()) return out;
  const ExponentTable& table = exponent_table(a.nvars_, a.order_);
  Scratch& s = scratch();
  s.prepare(table.list.size());

  // Iterate the smaller factor outside.
  const TruncatedSeries& small = a.terms_.size() <= b.terms_.size() ? a : b;
  const TruncatedSeries& big = a.terms_.size() <= b.terms_.size() ? b : a;
  for (const auto& [alpha, ca] : small.terms_) {
    int budget = out.order_ - alpha.degree();
    if (budget < 0) continue;
    int base = table.index.at(alpha);
    for (const auto& [beta, cb] : big.terms_) {
      if (beta.degree() > budget) break;  // grlex order: all later terms are bigger
      int idx = table.shift(base, beta);
      if (idx >= 0) s.add(idx, ca * cb);
    }
  }
  auto hint = out.terms_.end();
  for (std::size_t i = 0; i < table.list.size(); ++i) {
    if (!s.used[i] || s.acc[i].is_zero()) continue;
    hint = out.terms_.emplace_hint(hint, table.list[i], std::move(s.acc[i]));
    // Leave the moved-from slot reusable.
    s.acc[i] = Scalar();
  }
  return out;
}

TruncatedSeries mul_truncated(const TruncatedSeries& a, const TruncatedSeries& b) { return a * b; }

TruncatedSeries TruncatedSeries::pow(int k) const {
  if (k < 0) throw error(errc::internal, "negative power");
  TruncatedSeries result = constant(nvars_, order_, Scalar(1));
  TruncatedSeries base = *this;
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return result;
}

TruncatedSeries TruncatedSeries::derivative(int axis) const {
  TruncatedSeries out(nvars_, order_);
  for (const auto& [alpha, c] : terms_) {
    std::int32_t e = alpha[axis];
    if (e == 0) continue;
    Exponent beta = alpha;
    beta[axis] = e - 1;
    out.terms_.emplace(std::move(beta), Scalar(Rat(e)) * c);
  }
  return out;
}

TruncatedSeries TruncatedSeries::compose(std::span<const TruncatedSeries> args) const {
  return compose_many({this, 1}, args).front();
}

std::vector<TruncatedSeries> TruncatedSeries::compose_many(std::span<const TruncatedSeries> fs,
                                                           std::span<const TruncatedSeries> args) {
  if (fs.empty()) return {};
  int m = fs[0].nvars_;
  int f_order = fs[0].order_;
  for (const auto& f : fs)
    if (f.nvars_ != m || f.order_ != f_order)
      throw error(errc::dimension_mismatch, "compose_many: inconsistent f shapes");
  if (static_cast<int>(args.size()) != m)
    throw error(errc::dimension_mismatch, "compose: argument count != nvars");
  if (m == 0) return {fs.begin(), fs.end()};
  int target_n = args[0].nvars();
  int target_order = args[0].order();
  for (const auto& g : args) {
    if (g.nvars() != target_n || g.order() != target_order)
      throw error(errc::dimension_mismatch, "compose: inconsistent argument shapes");
    if (!g.coeff(Exponent(target_n)).is_zero())
      throw error(errc::dimension_mismatch, "compose: argument has nonzero constant term");
  }

  // Monomial powers args^alpha built incrementally in grlex order: each
  // needed power of degree d comes from a degree-(d-1) predecessor times one
  // argument. Since each argument has zero constant term, args^alpha has
  // valuation >= |alpha|, so only |alpha| <= target_order can contribute.
  std::map<Exponent, TruncatedSeries> powers;
  powers.emplace(Exponent(m), constant(target_n, target_order, Scalar(1)));

  // Monomials used by any f, plus predecessors along first-variable chains.
  std::map<Exponent, bool> needed;  // value: directly used
  for (const auto& f : fs) {
    for (const auto& [alpha, c] : f.terms_) {
      if (alpha.degree() > target_order) continue;
      needed[alpha] = true;
      Exponent walk = alpha;
      while (!walk.is_zero()) {
        int j = 0;
        while (walk[j] == 0) ++j;
        walk[j] -= 1;
        needed.emplace(walk, false);
      }
    }
  }

  for (auto& [alpha, direct] : needed) {
    if (alpha.is_zero()) continue;
    int j = 0;
    while (alpha[j] == 0) ++j;
    Exponent pred = alpha;
    pred[j] -= 1;
    auto it = powers.find(pred);
    if (it == powers.end()) throw error(errc::internal, "compose: missing predecessor power");
    powers.emplace(alpha, it->second * args[static_cast<std::size_t>(j)]);
  }

  const ExponentTable& table = exponent_table(target_n, target_order);
  std::vector<TruncatedSeries> out;
  out.reserve(fs.size());
  for (const auto& f : fs) {
    TruncatedSeries result(target_n, target_order);
    Scratch& s = scratch();
    s.prepare(table.list.size());
    for (const auto& [alpha, c] : f.terms_) {
      if (alpha.degree() > target_order) continue;
      for (const auto& [beta, pc] : powers.at(alpha).terms_) s.add(table.index.at(beta), c * pc);
    }
    auto hint = result.terms_.end();
    for (std::size_t i = 0; i < table.list.size(); ++i) {
      if (!s.used[i] || s.acc[i].is_zero()) continue;
      hint = result.terms_.emplace_hint(hint, table.list[i], std::move(s.acc[i]));
      s.acc[i] = Scalar();
    }
    out.push_back(std::move(result));
  }
  return out;
}

TruncatedSeries TruncatedSeries::reciprocal() const {
  Scalar c0 = coeff(Exponent(nvars_));
  if (c0.is_zero()) throw error(errc::internal, "reciprocal of series with zero constant term");
  // 1/(c0 (1 + u)) = (1/c0) sum (-u)^k with u = f/c0 - 1 of valuation >= 1.
  Scalar inv0 = Scalar(1) / c0;
  TruncatedSeries u = inv0 * *this;
  u.add_term(Exponent(nvars_), Scalar(-1));
  TruncatedSeries acc = constant(nvars_, order_, Scalar(1));
  TruncatedSeries upow = constant(nvars_, order_, Scalar(1));
  for (int k = 1; k <= order_; ++k) {
    upow = upow * u;
    if (upow.is_zero()) break;
    acc += (k % 2 ? Scalar(-1) : Scalar(1)) * upow;
  }
  return inv0 * acc;
}

std::complex<double> TruncatedSeries::evaluate(std::span<const std::complex<double>> point) const {
  if (static_cast<int>(point.size()) != nvars_)
    throw error(errc::dimension_mismatch, "evaluate point width");
  std::complex<double> acc = 0.0;
  for (const auto& [alpha, c] : terms_) {
    std::complex<double> term = c.to_complex();
    for (int j = 0; j < nvars_; ++j) {
      std::complex<double> base = point[static_cast<std::size_t>(j)];
      for (std::int32_t k = 0; k < alpha[j]; ++k) term *= base;
    }
    acc += term;
  }
  return acc;
}

double TruncatedSeries::evaluate_real(std::span<const double> point) const {
  if (static_cast<int>(point.size()) != nvars_)
    throw error(errc::dimension_mismatch, "evaluate point width");
  // Neumaier summation over terms in canonical (grlex) order.
  double sum = 0.0, comp = 0.0;
  for (const auto& [alpha, c] : terms_) {
    if (!c.im.is_zero()) throw error(errc::internal, "evaluate_real on complex series");
    double term = to_double(c.re);
    for (int j = 0; j < nvars_; ++j) {
      double base = point[static_cast<std::size_t>(j)];
      for (std::int32_t k = 0; k < alpha[j]; ++k) term *= base;
    }
    double t = sum + term;
    if (std::abs(sum) >= std::abs(term))
      comp += (sum - t) + term;
    else
      comp += (term - t) + sum;
    sum = t;
  }
  return sum + comp;
}

bool TruncatedSeries::has_real_coefficients() const {
  for (const auto& [alpha, c] : terms_)
    if (!c.im.is_zero()) return false;
  return true;
}

bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
  return a.nvars_ == b.nvars_ && a.order_ == b.order_ && a.terms_ == b.terms_;
}

std::string TruncatedSeries::str(std::span<const std::string> names) const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [alpha, c] : terms_) {
    if (!out.empty()) out += " + ";
    out += "(" + to_string(c) + ")";
    for (int j = 0; j < nvars_; ++j) {
      if (alpha[j] == 0) continue;
      std::string name = j < static_cast<int>(names.size()) ? names[static_cast<std::size_t>(j)]
                                                            : "x" + std::to_string(j + 1);
      out += "*" + name;
      if (alpha[j] > 1) out += "^" + std::to_string(alpha[j]);
    }
  }
  return out;
}

}  // namespace nfforge
