#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "invforge/dual.hpp"
#include "invforge/jetspace.hpp"

namespace invforge {

class SingularMatrix : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline double magnitude(Scalar s) { return std::abs(s); }
inline double magnitude(const Dual& d) { return std::abs(d.val); }

/// Small dense row-major matrix over Scalar or Dual.
template <class T>
class Mat {
 public:
  Mat() = default;
  Mat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows * cols)) {}

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = T(1.0);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  T& operator()(int i, int j) { return a_[static_cast<std::size_t>(i * cols_ + j)]; }
  const T& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i * cols_ + j)]; }

  Mat transpose() const {
    Mat t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Mat& operator+=(const Mat& o) {
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
  }
  Mat& operator-=(const Mat& o) {
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    return *this;
  }
  template <class S>
  Mat& scale(const S& s) {
    for (auto& x : a_) x = x * s;
    return *this;
  }

 private:
  int rows_{0};
  int cols_{0};
  std::vector<T> a_;
};

template <class T>
using Vec = std::vector<T>;

template <class T>
Mat<T> operator*(const Mat<T>& a, const Mat<T>& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product: shape mismatch");
  Mat<T> c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      const T& aik = a(i, k);
      for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

template <class T>
Mat<T> operator+(Mat<T> a, const Mat<T>& b) {
  return a += b;
}
template <class T>
Mat<T> operator-(Mat<T> a, const Mat<T>& b) {
  return a -= b;
}

template <class T>
Vec<T> operator*(const Mat<T>& a, const Vec<T>& v) {
  Vec<T> r(static_cast<std::size_t>(a.rows()));
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r[i] += a(i, j) * v[j];
  return r;
}

template <class T>
T trace(const Mat<T>& m) {
  T s{};
  for (int i = 0; i < std::min(m.rows(), m.cols()); ++i) s += m(i, i);
  return s;
}

/// G * M: scales row i by the metric weight.
template <class T>
Mat<T> lower(const Metric& g, Mat<T> m) {
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) m(i, j) = m(i, j) * g.weight(i);
  return m;
}

template <class T>
Mat<T> metric_matrix(const Metric& g) {
  Mat<T> m(g.dim(), g.dim());
  for (int i = 0; i < g.dim(); ++i) m(i, i) = T(g.weight(i));
  return m;
}

template <class T>
Mat<T> power(const Mat<T>& m, int k) {
  Mat<T> r = Mat<T>::identity(m.rows());
  for (int i = 0; i < k; ++i) r = r * m;
  return r;
}

template <class T>
T dot(const Metric& g, const Vec<T>& a, const Vec<T>& b) {
  return g.contract<T>(std::span<const T>(a), std::span<const T>(b));
}

inline void check_trace_order(const Metric& g, int k, int lo) {
  if (k < lo || k > g.dim() + 1) throw std::invalid_argument("trace order out of range");
}

/// tr((G M)^k).
template <class T>
T trace_power(const Mat<T>& m, const Metric& g, int k) {
  check_trace_order(g, k, 1);
  return trace(power(lower(g, m), k));
}

/// tr((G U)^j (G V)^(k-j)).
template <class T>
T mixed_trace(const Mat<T>& u, const Mat<T>& v, const Metric& g, int j, int k) {
  check_trace_order(g, k, 1);
  if (j < 0 || j > k) throw std::invalid_argument("mixed trace: need 0 <= j <= k");
  return trace(power(lower(g, u), j) * power(lower(g, v), k - j));
}

/// Gaussian elimination with partial pivoting; throws SingularMatrix.
template <class T>
Vec<T> solve(Mat<T> a, Vec<T> b) {
  const int n = a.rows();
  if (a.cols() != n || static_cast<int>(b.size()) != n) throw std::invalid_argument("solve: shape mismatch");
  double scale = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) scale = std::max(scale, magnitude(a(i, j)));
  for (int c = 0; c < n; ++c) {
    int p = c;
    for (int r = c + 1; r < n; ++r)
      if (magnitude(a(r, c)) > magnitude(a(p, c))) p = r;
    if (!(magnitude(a(p, c)) > 1e-13 * scale)) throw SingularMatrix("degenerate Hessian");
    if (p != c) {
      for (int j = 0; j < n; ++j) std::swap(a(p, j), a(c, j));
      std::swap(b[p], b[c]);
    }
    for (int r = c + 1; r < n; ++r) {
      const T f = a(r, c) / a(c, c);
      for (int j = c; j < n; ++j) a(r, j) -= f * a(c, j);
      b[r] -= f * b[c];
    }
  }
  Vec<T> x(static_cast<std::size_t>(n));
  for (int i = n - 1; i >= 0; --i) {
    T s = b[i];
    for (int j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
    x[i] = s / a(i, i);
  }
  return x;
}

template <class T>
Mat<T> inverse(const Mat<T>& a) {
  const int n = a.rows();
  Mat<T> inv(n, n);
  for (int c = 0; c < n; ++c) {
    Vec<T> e(static_cast<std::size_t>(n));
    e[c] = T(1.0);
    const Vec<T> col = solve(a, e);
    for (int r = 0; r < n; ++r) inv(r, c) = col[r];
  }
  return inv;
}

template <class T>
T determinant(Mat<T> a) {
  const int n = a.rows();
  T det(1.0);
  for (int c = 0; c < n; ++c) {
    int p = c;
    for (int r = c + 1; r < n; ++r)
      if (magnitude(a(r, c)) > magnitude(a(p, c))) p = r;
    if (magnitude(a(p, c)) == 0.0) return T(0.0);
    if (p != c) {
      for (int j = 0; j < n; ++j) std::swap(a(p, j), a(c, j));
      det = -det;
    }
    det = det * a(c, c);
    for (int r = c + 1; r < n; ++r) {
      const T f = a(r, c) / a(c, c);
      for (int j = c; j < n; ++j) a(r, j) -= f * a(c, j);
    }
  }
  return det;
}

/// vᵀ G (M G)^(k-1) v. The order k = 0 is read as vᵀ M⁻¹ v, which is the
/// natural continuation of the power series and is used by sums that start
/// at l = 0.
template <class T>
T quadratic_power(const Vec<T>& v, const Mat<T>& m, const Metric& g, int k) {
  if (k < 0 || k > g.dim() + 1) throw std::invalid_argument("trace order out of range");
  Vec<T> y = v;
  if (k == 0) {
    y = solve(m, v);
  } else {
    for (int step = 0; step < k - 1; ++step) {
      Vec<T> gy = y;
      for (int i = 0; i < g.dim(); ++i) gy[i] = gy[i] * g.weight(i);
      y = m * gy;
    }
  }
  if (k == 0) {
    T s{};
    for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * y[i];
    return s;
  }
  return dot(g, v, y);
}

struct RankInfo {
  int rank{0};
  std::vector<double> pivots;
};

/// Numerical rank by scaled full-pivot elimination. Rows are normalised by
/// their largest entry; a pivot counts if it exceeds rel_tol times the
/// largest initial entry.
RankInfo numerical_rank(std::vector<std::vector<Scalar>> rows, double rel_tol = 1e-8);

}  // namespace invforge
