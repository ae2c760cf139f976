#ifndef NFFORGE_VECTOR_FIELD_HPP
#define NFFORGE_VECTOR_FIELD_HPP

#include <span>
#include <vector>

#include "nfforge/linalg.hpp"
#include "nfforge/series.hpp"

namespace nfforge {

// Polynomial-jet coordinate change: n series over n variables with zero
// constant term. Invertibility of the linear part is required only by the
// operations that state it (inverse, pushforward).
class PolyMap {
 public:
  PolyMap() = default;
  explicit PolyMap(std::vector<TruncatedSeries> components);

  static PolyMap identity(int nvars, int order);
  static PolyMap linear(const ScalarMat& matrix, int order);

  int nvars() const { return static_cast<int>(comps_.size()); }
  int order() const { return comps_.empty() ? 0 : comps_[0].order(); }
  const TruncatedSeries& component(int i) const { return comps_[static_cast<std::size_t>(i)]; }
  const std::vector<TruncatedSeries>& components() const { return comps_; }

  ScalarMat linear_matrix() const;

  // this .. other (apply other first).
  PolyMap compose(const PolyMap& other) const;

  // Jet inverse: compose(*this, inverse()) = identity + O(order+1), exactly.
  PolyMap inverse() const;

  friend bool operator==(const PolyMap& a, const PolyMap& b) { return a.comps_ == b.comps_; }
  friend bool operator!=(const PolyMap& a, const PolyMap& b) { return !(a == b); }

 private:
  std::vector<TruncatedSeries> comps_;
};

// Jet of a vector field vanishing at the origin. The linear part is kept as
// a matrix and stays consistent with the degree-1 coefficients.
class VectorFieldJet {
 public:
  VectorFieldJet() = default;
  explicit VectorFieldJet(std::vector<TruncatedSeries> components);

  static VectorFieldJet zero(int nvars, int order);
  static VectorFieldJet from_linear(const ScalarMat& matrix, int order);

  int nvars() const { return static_cast<int>(comps_.size()); }
  int order() const { return comps_.empty() ? 0 : comps_[0].order(); }
  const TruncatedSeries& component(int i) const { return comps_[static_cast<std::size_t>(i)]; }
  const std::vector<TruncatedSeries>& components() const { return comps_; }
  const ScalarMat& linear_part() const { return linear_; }

  bool is_zero() const;
  bool has_real_coefficients() const;
  VectorFieldJet homogeneous_part(int degree) const;
  VectorFieldJet drop_below(int degree) const;
  VectorFieldJet with_order(int order) const;

  VectorFieldJet& operator+=(const VectorFieldJet& o);
  VectorFieldJet& operator-=(const VectorFieldJet& o);
  friend VectorFieldJet operator+(VectorFieldJet a, const VectorFieldJet& b) { return a += b; }
  friend VectorFieldJet operator-(VectorFieldJet a, const VectorFieldJet& b) { return a -= b; }
  friend VectorFieldJet operator*(const Scalar& s, const VectorFieldJet& x);
  // Scalar-series multiple F*X (used for the geometric normal form F*X1).
  friend VectorFieldJet operator*(const TruncatedSeries& f, const VectorFieldJet& x);

  friend bool operator==(const VectorFieldJet& a, const VectorFieldJet& b) {
    return a.comps_ == b.comps_;
  }
  friend bool operator!=(const VectorFieldJet& a, const VectorFieldJet& b) { return !(a == b); }

 private:
  void refresh_linear();

  std::vector<TruncatedSeries> comps_;
  ScalarMat linear_;
};

// Sum_j X_j * df/dx_j truncated at the series order. For fields vanishing at
// the origin the result is exact through the full order: the degree-d output
// coefficient only needs f through degree d.
TruncatedSeries lie_derivative(const VectorFieldJet& x, const TruncatedSeries& f);

// (DPhi . X) o Phi^{-1}: the field X expressed in the coordinates y = Phi(x).
VectorFieldJet pushforward(const VectorFieldJet& x, const PolyMap& phi);

struct RankWitness {
  int rank = 0;
  std::vector<int> rows;  // indices into the input list
  std::vector<int> cols;  // variable indices
  TruncatedSeries minor;  // nonzero series certifying the rank
};

// Generic rank of the Jacobian of the given series, certified by the first
// (in lexicographic subset order) nonzero maximal minor.
RankWitness jacobian_rank_series(std::span<const TruncatedSeries> fs);

}  // namespace nfforge

#endif
