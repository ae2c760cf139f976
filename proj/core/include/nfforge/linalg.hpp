#ifndef NFFORGE_LINALG_HPP
#define NFFORGE_LINALG_HPP

#include <optional>
#include <vector>

#include "nfforge/errors.hpp"
#include "nfforge/rational.hpp"

namespace nfforge {

// Dense matrix over an exact field (Rat or Scalar). Elimination always picks
// the first nonzero pivot, so every result is deterministic.
template <class F>
class Mat {
 public:
  Mat() : rows_(0), cols_(0) {}
  Mat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows * cols)) {}

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = F(1);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  F& operator()(int r, int c) { return a_[static_cast<std::size_t>(r) * cols_ + c]; }
  const F& operator()(int r, int c) const { return a_[static_cast<std::size_t>(r) * cols_ + c]; }

  friend bool operator==(const Mat& x, const Mat& y) {
    return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.a_ == y.a_;
  }

  Mat transpose() const {
    Mat t(cols_, rows_);
    for (int r = 0; r < rows_; ++r)
      for (int c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  friend Mat operator*(const Mat& x, const Mat& y) {
    if (x.cols_ != y.rows_) throw error(errc::dimension_mismatch, "matrix product shape");
    Mat z(x.rows_, y.cols_);
    for (int i = 0; i < x.rows_; ++i)
      for (int k = 0; k < x.cols_; ++k) {
        if (is_zero(x(i, k))) continue;
        for (int j = 0; j < y.cols_; ++j) z(i, j) += x(i, k) * y(k, j);
      }
    return z;
  }

  friend Mat operator+(const Mat& x, const Mat& y) {
    if (x.rows_ != y.rows_ || x.cols_ != y.cols_)
      throw error(errc::dimension_mismatch, "matrix sum shape");
    Mat z = x;
    for (std::size_t i = 0; i < z.a_.size(); ++i) z.a_[i] += y.a_[i];
    return z;
  }

  friend Mat operator-(const Mat& x, const Mat& y) {
    if (x.rows_ != y.rows_ || x.cols_ != y.cols_)
      throw error(errc::dimension_mismatch, "matrix difference shape");
    Mat z = x;
    for (std::size_t i = 0; i < z.a_.size(); ++i) z.a_[i] -= y.a_[i];
    return z;
  }

  friend Mat operator*(const F& s, const Mat& x) {
    Mat z = x;
    for (auto& v : z.a_) v = s * v;
    return z;
  }

  std::vector<F> apply(const std::vector<F>& v) const {
    if (static_cast<int>(v.size()) != cols_) throw error(errc::dimension_mismatch, "matrix apply");
    std::vector<F> out(static_cast<std::size_t>(rows_));
    for (int i = 0; i < rows_; ++i) {
      F acc{};
      for (int j = 0; j < cols_; ++j) acc += (*this)(i, j) * v[static_cast<std::size_t>(j)];
      out[static_cast<std::size_t>(i)] = acc;
    }
    return out;
  }

  bool is_zero_matrix() const {
    for (const auto& v : a_)
      if (!is_zero(v)) return false;
    return true;
  }

  // In-place reduced row echelon form; returns the pivot columns.
  std::vector<int> rref() {
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < cols_ && row < rows_; ++col) {
      int pivot = -1;
      for (int r = row; r < rows_; ++r)
        if (!is_zero((*this)(r, col))) {
          pivot = r;
          break;
        }
      if (pivot < 0) continue;
      if (pivot != row)
        for (int c = 0; c < cols_; ++c) std::swap((*this)(pivot, c), (*this)(row, c));
      F inv = F(1) / (*this)(row, col);
      for (int c = col; c < cols_; ++c) (*this)(row, c) = inv * (*this)(row, c);
      for (int r = 0; r < rows_; ++r) {
        if (r == row || is_zero((*this)(r, col))) continue;
        F factor = (*this)(r, col);
        for (int c = col; c < cols_; ++c) (*this)(r, c) -= factor * (*this)(row, c);
      }
      pivots.push_back(col);
      ++row;
    }
    return pivots;
  }

  int rank() const {
    Mat copy = *this;
    return static_cast<int>(copy.rref().size());
  }

  F det() const {
    if (rows_ != cols_) throw error(errc::dimension_mismatch, "det of non-square matrix");
    Mat m = *this;
    F result(1);
    for (int col = 0; col < cols_; ++col) {
      int pivot = -1;
      for (int r = col; r < rows_; ++r)
        if (!is_zero(m(r, col))) {
          pivot = r;
          break;
        }
      if (pivot < 0) return F{};
      if (pivot != col) {
        for (int c = 0; c < cols_; ++c) std::swap(m(pivot, c), m(col, c));
        result = -result;
      }
      result = result * m(col, col);
      F inv = F(1) / m(col, col);
      for (int r = col + 1; r < rows_; ++r) {
        if (is_zero(m(r, col))) continue;
        F factor = inv * m(r, col);
        for (int c = col; c < cols_; ++c) m(r, c) -= factor * m(col, c);
      }
    }
    return result;
  }

  std::optional<Mat> inverse() const {
    if (rows_ != cols_) throw error(errc::dimension_mismatch, "inverse of non-square matrix");
    Mat aug(rows_, 2 * cols_);
    for (int r = 0; r < rows_; ++r) {
      for (int c = 0; c < cols_; ++c) aug(r, c) = (*this)(r, c);
      aug(r, cols_ + r) = F(1);
    }
    auto pivots = aug.rref();
    if (static_cast<int>(pivots.size()) != rows_) return std::nullopt;
    Mat inv(rows_, cols_);
    for (int r = 0; r < rows_; ++r)
      for (int c = 0; c < cols_; ++c) inv(r, c) = aug(r, cols_ + c);
    return inv;
  }

  // First solution of A x = b in reduced echelon terms: free variables are 0.
  // Empty optional when the system is inconsistent.
  std::optional<std::vector<F>> solve(const std::vector<F>& b) const {
    if (static_cast<int>(b.size()) != rows_) throw error(errc::dimension_mismatch, "solve rhs");
    Mat aug(rows_, cols_ + 1);
    for (int r = 0; r < rows_; ++r) {
      for (int c = 0; c < cols_; ++c) aug(r, c) = (*this)(r, c);
      aug(r, cols_) = b[static_cast<std::size_t>(r)];
    }
    auto pivots = aug.rref();
    if (!pivots.empty() && pivots.back() == cols_) return std::nullopt;
    std::vector<F> x(static_cast<std::size_t>(cols_));
    for (std::size_t i = 0; i < pivots.size(); ++i)
      x[static_cast<std::size_t>(pivots[i])] = aug(static_cast<int>(i), cols_);
    return x;
  }

  // Canonical basis of the right nullspace (one vector per free column).
  std::vector<std::vector<F>> nullspace() const {
    Mat m = *this;
    auto pivots = m.rref();
    std::vector<bool> is_pivot(static_cast<std::size_t>(cols_), false);
    for (int p : pivots) is_pivot[static_cast<std::size_t>(p)] = true;
    std::vector<std::vector<F>> basis;
    for (int free = 0; free < cols_; ++free) {
      if (is_pivot[static_cast<std::size_t>(free)]) continue;
      std::vector<F> v(static_cast<std::size_t>(cols_));
      v[static_cast<std::size_t>(free)] = F(1);
      for (std::size_t i = 0; i < pivots.size(); ++i)
        v[static_cast<std::size_t>(pivots[i])] = -m(static_cast<int>(i), free);
      basis.push_back(std::move(v));
    }
    return basis;
  }

 private:
  int rows_, cols_;
  std::vector<F> a_;
};

using RatMat = Mat<Rat>;
using ScalarMat = Mat<Scalar>;

inline ScalarMat to_scalar_matrix(const RatMat& m) {
  ScalarMat s(m.rows(), m.cols());
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) s(r, c) = Scalar(m(r, c));
  return s;
}

// Exact real part extraction; throws if any entry has a nonzero imaginary part.
inline RatMat to_rat_matrix(const ScalarMat& m) {
  RatMat r(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      if (!m(i, j).im.is_zero())
        throw error(errc::internal, "matrix has nonzero imaginary entries");
      r(i, j) = m(i, j).re;
    }
  return r;
}

}  // namespace nfforge

#endif
