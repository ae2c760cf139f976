#include "nfforge/vector_field.hpp"

#include <algorithm>

namespace nfforge {

namespace {

void check_square(const std::vector<TruncatedSeries>& comps, const char* what) {
  if (comps.empty()) return;
  int n = static_cast<int>(comps.size());
  for (const auto& c : comps) {
    if (c.nvars() != n || c.order() != comps[0].order())
      throw error(errc::dimension_mismatch, std::string(what) + ": inconsistent components");
  }
}

}  // namespace

PolyMap::PolyMap(std::vector<TruncatedSeries> components) : comps_(std::move(components)) {
  check_square(comps_, "PolyMap");
  for (const auto& c : comps_)
    if (!c.coeff(Exponent(nvars())).is_zero())
      throw error(errc::dimension_mismatch, "PolyMap component has nonzero constant term");
}

PolyMap PolyMap::identity(int nvars, int order) {
  std::vector<TruncatedSeries> comps;
  comps.reserve(static_cast<std::size_t>(nvars));
  for (int i = 0; i < nvars; ++i) comps.push_back(TruncatedSeries::variable(nvars, order, i));
  return PolyMap(std::move(comps));
}

PolyMap PolyMap::linear(const ScalarMat& matrix, int order) {
  int n = matrix.rows();
  if (matrix.cols() != n) throw error(errc::dimension_mismatch, "PolyMap::linear square matrix");
  std::vector<TruncatedSeries> comps;
  comps.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    TruncatedSeries c(n, order);
    for (int j = 0; j < n; ++j) c.add_term(Exponent::unit(n, j), matrix(i, j));
    comps.push_back(std::move(c));
  }
  return PolyMap(std::move(comps));
}

ScalarMat PolyMap::linear_matrix() const {
  int n = nvars();
  ScalarMat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = comps_[static_cast<std::size_t>(i)].coeff(Exponent::unit(n, j));
  return m;
}

PolyMap PolyMap::compose(const PolyMap& other) const {
  if (nvars() != other.nvars() || order() != other.order())
    throw error(errc::dimension_mismatch, "PolyMap compose shape");
  return PolyMap(TruncatedSeries::compose_many(comps_, other.components()));
}

PolyMap PolyMap::inverse() const {
  int n = nvars();
  int ord = order();
  ScalarMat lin = linear_matrix();
  auto lin_inv = lin.inverse();
  if (!lin_inv) throw error(errc::singular_linear_part, "invert_map: singular linear part");

  PolyMap linv = PolyMap::linear(*lin_inv, ord);
  // Higher-order tail h with phi = L(id) + h.
  std::vector<TruncatedSeries> tail;
  tail.reserve(comps_.size());
  int tail_val = ord + 1;
  for (const auto& c : comps_) {
    tail.push_back(c.drop_below(2));
    auto v = tail.back().valuation();
    if (v) tail_val = std::min(tail_val, *v);
  }
  if (tail_val > ord) return linv;  // linear map

  // psi = L^{-1}(id - h(psi)); each pass extends agreement by tail_val - 1
  // degrees, so the pass count is known in advance.
  int passes = (ord - 1 + tail_val - 2) / (tail_val - 1);
  PolyMap psi = linv;
  PolyMap id = PolyMap::identity(n, ord);
  for (int pass = 0; pass < passes; ++pass) {
    std::vector<TruncatedSeries> hs = TruncatedSeries::compose_many(tail, psi.components());
    std::vector<TruncatedSeries> next;
    next.reserve(comps_.size());
    for (int i = 0; i < n; ++i) next.push_back(id.component(i) - hs[static_cast<std::size_t>(i)]);
    psi = linv.compose(PolyMap(std::move(next)));
  }
  return psi;
}

VectorFieldJet::VectorFieldJet(std::vector<TruncatedSeries> components)
    : comps_(std::move(components)) {
  check_square(comps_, "VectorFieldJet");
  for (const auto& c : comps_)
    if (!c.coeff(Exponent(nvars())).is_zero())
      throw error(errc::dimension_mismatch, "VectorFieldJet does not vanish at the origin");
  refresh_linear();
}

VectorFieldJet VectorFieldJet::zero(int nvars, int order) {
  std::vector<TruncatedSeries> comps(static_cast<std::size_t>(nvars),
                                     TruncatedSeries(nvars, order));
  return VectorFieldJet(std::move(comps));
}

VectorFieldJet VectorFieldJet::from_linear(const ScalarMat& matrix, int order) {
  return VectorFieldJet(PolyMap::linear(matrix, order).components());
}

void VectorFieldJet::refresh_linear() {
  int n = nvars();
  linear_ = ScalarMat(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      linear_(i, j) = comps_[static_cast<std::size_t>(i)].coeff(Exponent::unit(n, j));
}

bool VectorFieldJet::is_zero() const {
  return std::all_of(comps_.begin(), comps_.end(),
                     [](const TruncatedSeries& c) { return c.is_zero(); });
}

bool VectorFieldJet::has_real_coefficients() const {
  return std::all_of(comps_.begin(), comps_.end(),
                     [](const TruncatedSeries& c) { return c.has_real_coefficients(); });
}

VectorFieldJet VectorFieldJet::homogeneous_part(int degree) const {
  std::vector<TruncatedSeries> comps;
  comps.reserve(comps_.size());
  for (const auto& c : comps_) comps.push_back(c.homogeneous_part(degree));
  return VectorFieldJet(std::move(comps));
}

VectorFieldJet VectorFieldJet::drop_below(int degree) const {
  std::vector<TruncatedSeries> comps;
  comps.reserve(comps_.size());
  for (const auto& c : comps_) comps.push_back(c.drop_below(degree));
  return VectorFieldJet(std::move(comps));
}

VectorFieldJet VectorFieldJet::with_order(int order) const {
  std::vector<TruncatedSeries> comps;
  comps.reserve(comps_.size());
  for (const auto& c : comps_) comps.push_back(c.with_order(order));
  return VectorFieldJet(std::move(comps));
}

VectorFieldJet& VectorFieldJet::operator+=(const VectorFieldJet& o) {
  if (nvars() != o.nvars()) throw error(errc::dimension_mismatch, "field sum shape");
  for (std::size_t i = 0; i < comps_.size(); ++i) comps_[i] += o.comps_[i];
  refresh_linear();
  return *this;
}

VectorFieldJet& VectorFieldJet::operator-=(const VectorFieldJet& o) {
  if (nvars() != o.nvars()) throw error(errc::dimension_mismatch, "field difference shape");
  for (std::size_t i = 0; i < comps_.size(); ++i) comps_[i] -= o.comps_[i];
  refresh_linear();
  return *this;
}

VectorFieldJet operator*(const Scalar& s, const VectorFieldJet& x) {
  std::vector<TruncatedSeries> comps;
  comps.reserve(x.comps_.size());
  for (const auto& c : x.comps_) comps.push_back(s * c);
  return VectorFieldJet(std::move(comps));
}

VectorFieldJet operator*(const TruncatedSeries& f, const VectorFieldJet& x) {
  std::vector<TruncatedSeries> comps;
  comps.reserve(x.comps_.size());
  for (const auto& c : x.comps_) comps.push_back(f * c);
  return VectorFieldJet(std::move(comps));
}

TruncatedSeries lie_derivative(const VectorFieldJet& x, const TruncatedSeries& f) {
  if (x.nvars() != f.nvars() || x.order() != f.order())
    throw error(errc::dimension_mismatch, "lie_derivative shape");
  TruncatedSeries out(f.nvars(), f.order());
  for (int j = 0; j < x.nvars(); ++j) out += x.component(j) * f.derivative(j);
  return out;
}

VectorFieldJet pushforward(const VectorFieldJet& x, const PolyMap& phi) {
  if (x.nvars() != phi.nvars() || x.order() != phi.order())
    throw error(errc::dimension_mismatch, "pushforward shape");
  PolyMap psi = phi.inverse();
  int n = x.nvars();
  std::vector<TruncatedSeries> pushed;
  pushed.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    TruncatedSeries acc(n, x.order());
    for (int j = 0; j < n; ++j) acc += phi.component(i).derivative(j) * x.component(j);
    pushed.push_back(std::move(acc));
  }
  return VectorFieldJet(TruncatedSeries::compose_many(pushed, psi.components()));
}

namespace {

TruncatedSeries series_det(const std::vector<const TruncatedSeries*>& entries, int k) {
  // Cofactor expansion along the first row; k <= 8 at desk scale.
  if (k == 1) return *entries[0];
  const TruncatedSeries& probe = *entries[0];
  TruncatedSeries result(probe.nvars(), probe.order());
  std::vector<const TruncatedSeries*> sub(static_cast<std::size_t>((k - 1) * (k - 1)));
  for (int c = 0; c < k; ++c) {
    const TruncatedSeries& top = *entries[static_cast<std::size_t>(c)];
    if (top.is_zero()) continue;
    for (int r = 1; r < k; ++r) {
      int sc = 0;
      for (int cc = 0; cc < k; ++cc) {
        if (cc == c) continue;
        sub[static_cast<std::size_t>((r - 1) * (k - 1) + sc)] =
            entries[static_cast<std::size_t>(r * k + cc)];
        ++sc;
      }
    }
    TruncatedSeries minor = series_det(sub, k - 1);
    if (c % 2 == 0)
      result += top * minor;
    else
      result -= top * minor;
  }
  return result;
}

void subsets_of_size(int n, int k, std::vector<std::vector<int>>& out) {
  std::vector<int> cur;
  auto rec = [&](auto&& self, int start) -> void {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i <= n - (k - static_cast<int>(cur.size())); ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
}

}  // namespace

RankWitness jacobian_rank_series(std::span<const TruncatedSeries> fs) {
  RankWitness w;
  if (fs.empty()) return w;
  int m = static_cast<int>(fs.size());
  int n = fs[0].nvars();
  int ord = fs[0].order();
  for (const auto& f : fs)
    if (f.nvars() != n || f.order() != ord)
      throw error(errc::dimension_mismatch, "jacobian_rank_series shape");

  std::vector<TruncatedSeries> jac;
  jac.reserve(static_cast<std::size_t>(m * n));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) jac.push_back(fs[static_cast<std::size_t>(i)].derivative(j));

  w.minor = TruncatedSeries(n, ord);
  for (int k = std::min(m, n); k >= 1; --k) {
    std::vector<std::vector<int>> row_sets, col_sets;
    subsets_of_size(m, k, row_sets);
    subsets_of_size(n, k, col_sets);
    for (const auto& rows : row_sets) {
      for (const auto& cols : col_sets) {
        std::vector<const TruncatedSeries*> entries;
        entries.reserve(static_cast<std::size_t>(k * k));
        for (int r : rows)
          for (int c : cols) entries.push_back(&jac[static_cast<std::size_t>(r * n + c)]);
        TruncatedSeries det = series_det(entries, k);
        if (!det.is_zero()) {
          w.rank = k;
          w.rows = rows;
          w.cols = cols;
          w.minor = std::move(det);
          return w;
        }
      }
    }
  }
  return w;
}

}  // namespace nfforge
