#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

namespace invforge {

/// All jet values are complex; real jets simply carry zero imaginary parts.
using Scalar = std::complex<double>;

inline constexpr Scalar kI{0.0, 1.0};

/// Forward-mode dual number: a value and its derivative along one tangent
/// direction of jet space. Every operation is holomorphic, so the derivative
/// rules hold for complex arguments as well.
struct Dual {
  Scalar val{};
  Scalar der{};

  Dual() = default;
  Dual(Scalar v) : val(v) {}  // NOLINT(google-explicit-constructor)
  Dual(double v) : val(v) {}  // NOLINT(google-explicit-constructor)
  Dual(Scalar v, Scalar d) : val(v), der(d) {}

  static Dual variable(Scalar v) { return {v, Scalar{1.0}}; }

  Dual& operator+=(const Dual& o) {
    val += o.val;
    der += o.der;
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    val -= o.val;
    der -= o.der;
    return *this;
  }
  Dual& operator*=(const Dual& o) {
    der = der * o.val + val * o.der;
    val *= o.val;
    return *this;
  }
  Dual& operator/=(const Dual& o) {
    const Scalar inv = Scalar{1.0} / o.val;
    der = (der - val * inv * o.der) * inv;
    val *= inv;
    return *this;
  }
};

inline Dual operator+(Dual a, const Dual& b) { return a += b; }
inline Dual operator-(Dual a, const Dual& b) { return a -= b; }
inline Dual operator*(Dual a, const Dual& b) { return a *= b; }
inline Dual operator/(Dual a, const Dual& b) { return a /= b; }
inline Dual operator-(const Dual& a) { return {-a.val, -a.der}; }

inline Dual operator+(Dual a, double b) { return a += Dual(b); }
inline Dual operator+(double a, Dual b) { return b += Dual(a); }
inline Dual operator-(Dual a, double b) { return a -= Dual(b); }
inline Dual operator-(double a, const Dual& b) { return Dual(a) - b; }
inline Dual operator*(const Dual& a, double b) { return {a.val * b, a.der * b}; }
inline Dual operator*(double a, const Dual& b) { return {b.val * a, b.der * a}; }
inline Dual operator*(const Dual& a, Scalar b) { return {a.val * b, a.der * b}; }
inline Dual operator*(Scalar a, const Dual& b) { return {b.val * a, b.der * a}; }
inline Dual operator/(const Dual& a, double b) { return {a.val / b, a.der / b}; }
inline Dual operator/(double a, const Dual& b) { return Dual(a) / b; }

inline Dual exp(const Dual& a) {
  const Scalar e = std::exp(a.val);
  return {e, e * a.der};
}

inline Dual log(const Dual& a) { return {std::log(a.val), a.der / a.val}; }

inline Dual sqrt(const Dual& a) {
  const Scalar s = std::sqrt(a.val);
  return {s, a.der / (2.0 * s)};
}

/// Integer power; negative exponents divide.
inline Dual pow(const Dual& a, int n) {
  if (n == 0) return Dual(1.0);
  if (n < 0) return Dual(1.0) / pow(a, -n);
  Scalar p{1.0};
  for (int i = 0; i < n - 1; ++i) p *= a.val;
  return {p * a.val, static_cast<double>(n) * p * a.der};
}

/// Real power on the principal branch.
inline Dual pow(const Dual& a, double e) {
  const double r = std::round(e);
  if (r == e && std::abs(e) < 64) return pow(a, static_cast<int>(r));
  const Scalar p = std::pow(a.val, e);
  return {p, e * p / a.val * a.der};
}

inline Dual pow(const Dual& a, const Dual& b) {
  if (b.der == Scalar{} && b.val.imag() == 0.0) return pow(a, b.val.real());
  return exp(b * log(a));
}

inline bool is_finite(Scalar s) {
  return std::isfinite(s.real()) && std::isfinite(s.imag());
}
inline bool is_finite(const Dual& d) { return is_finite(d.val) && is_finite(d.der); }

}  // namespace invforge
