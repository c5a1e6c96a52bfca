#pragma once

#include <cstddef>
#include <vector>

#include "invforge/dual.hpp"

namespace invforge {

/// Second-order multivariate Taylor jet: value, gradient and Hessian with
/// respect to a fixed set of K variables. Vector-field coefficients are
/// evaluated with this type so that the prolongation formulas get exact first
/// and second partials.
class Taylor2 {
 public:
  Taylor2() = default;
  Taylor2(std::size_t k, Scalar v) : v_(v), g_(k), h_(k * k) {}

  static Taylor2 constant(std::size_t k, Scalar v) { return {k, v}; }
  static Taylor2 variable(std::size_t k, std::size_t index, Scalar v) {
    Taylor2 t(k, v);
    t.g_[index] = 1.0;
    return t;
  }

  std::size_t size() const { return g_.size(); }
  Scalar value() const { return v_; }
  Scalar d(std::size_t i) const { return g_[i]; }
  Scalar dd(std::size_t i, std::size_t j) const { return h_[i * size() + j]; }

  Taylor2& operator+=(const Taylor2& o);
  Taylor2& operator-=(const Taylor2& o);
  Taylor2& operator*=(const Taylor2& o);
  Taylor2& operator+=(Scalar c) {
    v_ += c;
    return *this;
  }
  Taylor2& operator*=(Scalar c);

  /// f(this) given f, f', f'' at the current value.
  Taylor2 compose(Scalar f, Scalar f1, Scalar f2) const;

 private:
  Scalar v_{};
  std::vector<Scalar> g_;
  std::vector<Scalar> h_;
};

inline Taylor2& Taylor2::operator+=(const Taylor2& o) {
  v_ += o.v_;
  for (std::size_t i = 0; i < g_.size(); ++i) g_[i] += o.g_[i];
  for (std::size_t i = 0; i < h_.size(); ++i) h_[i] += o.h_[i];
  return *this;
}

inline Taylor2& Taylor2::operator-=(const Taylor2& o) {
  v_ -= o.v_;
  for (std::size_t i = 0; i < g_.size(); ++i) g_[i] -= o.g_[i];
  for (std::size_t i = 0; i < h_.size(); ++i) h_[i] -= o.h_[i];
  return *this;
}

inline Taylor2& Taylor2::operator*=(Scalar c) {
  v_ *= c;
  for (auto& x : g_) x *= c;
  for (auto& x : h_) x *= c;
  return *this;
}

inline Taylor2& Taylor2::operator*=(const Taylor2& o) {
  const std::size_t k = size();
  std::vector<Scalar> h(k * k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      h[i * k + j] = v_ * o.h_[i * k + j] + o.v_ * h_[i * k + j] +
                     g_[i] * o.g_[j] + o.g_[i] * g_[j];
  for (std::size_t i = 0; i < k; ++i) g_[i] = v_ * o.g_[i] + o.v_ * g_[i];
  v_ *= o.v_;
  h_ = std::move(h);
  return *this;
}

inline Taylor2 Taylor2::compose(Scalar f, Scalar f1, Scalar f2) const {
  const std::size_t k = size();
  Taylor2 r(k, f);
  for (std::size_t i = 0; i < k; ++i) r.g_[i] = f1 * g_[i];
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      r.h_[i * k + j] = f1 * h_[i * k + j] + f2 * g_[i] * g_[j];
  return r;
}

inline Taylor2 operator+(Taylor2 a, const Taylor2& b) { return a += b; }
inline Taylor2 operator-(Taylor2 a, const Taylor2& b) { return a -= b; }
inline Taylor2 operator*(Taylor2 a, const Taylor2& b) { return a *= b; }
inline Taylor2 operator*(Taylor2 a, Scalar c) { return a *= c; }
inline Taylor2 operator*(Scalar c, Taylor2 a) { return a *= c; }
inline Taylor2 operator*(Taylor2 a, double c) { return a *= Scalar{c}; }
inline Taylor2 operator*(double c, Taylor2 a) { return a *= Scalar{c}; }
inline Taylor2 operator+(Taylor2 a, Scalar c) { return a += c; }
inline Taylor2 operator+(Taylor2 a, double c) { return a += Scalar{c}; }
inline Taylor2 operator-(Taylor2 a) { return a *= Scalar{-1.0}; }
inline Taylor2 operator-(Taylor2 a, double c) { return a += Scalar{-c}; }

inline Taylor2 reciprocal(const Taylor2& a) {
  const Scalar v = a.value();
  return a.compose(1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v));
}
inline Taylor2 operator/(const Taylor2& a, const Taylor2& b) { return a * reciprocal(b); }
inline Taylor2 operator/(Taylor2 a, double c) { return a *= Scalar{1.0 / c}; }

inline Taylor2 exp(const Taylor2& a) {
  const Scalar e = std::exp(a.value());
  return a.compose(e, e, e);
}

inline Taylor2 log(const Taylor2& a) {
  const Scalar v = a.value();
  return a.compose(std::log(v), 1.0 / v, -1.0 / (v * v));
}

inline Taylor2 sqrt(const Taylor2& a) {
  const Scalar s = std::sqrt(a.value());
  return a.compose(s, 0.5 / s, -0.25 / (s * a.value()));
}

inline Taylor2 pow(const Taylor2& a, double e) {
  const Scalar v = a.value();
  const double r = std::round(e);
  if (r == e && r >= 0 && r < 64) {
    const int n = static_cast<int>(r);
    if (n == 0) return Taylor2::constant(a.size(), 1.0);
    Taylor2 p = a;
    for (int i = 1; i < n; ++i) p *= a;
    return p;
  }
  const Scalar p = std::pow(v, e);
  return a.compose(p, e * p / v, e * (e - 1.0) * p / (v * v));
}

inline Taylor2 pow(const Taylor2& a, const Taylor2& b) {
  return exp(b * log(a));
}

}  // namespace invforge
