#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "invforge/dual.hpp"

namespace invforge {

class JetError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

enum class MetricKind { euclidean, minkowski };

/// Diagonal metric. Minkowski uses diag(1, -1, ..., -1) with index 0 timelike;
/// upper and lower indices are not distinguished, contraction applies the
/// weights directly.
class Metric {
 public:
  Metric(MetricKind kind, int dim);

  static Metric euclidean(int dim) { return {MetricKind::euclidean, dim}; }
  static Metric minkowski(int dim) { return {MetricKind::minkowski, dim}; }

  MetricKind kind() const { return kind_; }
  int dim() const { return dim_; }
  double weight(int i) const {
    return (kind_ == MetricKind::minkowski && i > 0) ? -1.0 : 1.0;
  }

  template <class T>
  T contract(std::span<const T> a, std::span<const T> b) const {
    if (a.size() != b.size() || static_cast<int>(a.size()) != dim_)
      throw std::invalid_argument("contract: dimension mismatch");
    T s{};
    for (int i = 0; i < dim_; ++i) s += weight(i) * (a[i] * b[i]);
    return s;
  }

  bool operator==(const Metric&) const = default;

 private:
  MetricKind kind_;
  int dim_;
};

/// Convenience overload for plain vectors.
Scalar contract(const Metric& metric, std::span<const Scalar> a, std::span<const Scalar> b);

enum class FieldKind { real, complex };

/// Identifies one coordinate of the second-order jet. Field indices are
/// storage slots; for complex points slot r + m holds the conjugate of slot r.
struct JetCoordinateId {
  enum class Tag { base, field, d1, d2 };
  Tag tag{Tag::base};
  int r{0};
  int i{0};
  int j{0};

  static JetCoordinateId base(int i) { return {Tag::base, 0, i, 0}; }
  static JetCoordinateId field(int r) { return {Tag::field, r, 0, 0}; }
  static JetCoordinateId d1(int r, int i) { return {Tag::d1, r, i, 0}; }
  static JetCoordinateId d2(int r, int i, int j) { return {Tag::d2, r, i, j}; }

  bool operator==(const JetCoordinateId&) const = default;
};

std::string to_string(const JetCoordinateId& id);

/// Shape of a jet: N base coordinates and m scalar fields. Complex layouts
/// double the field slots to hold (phi, phi*) as independent coordinates.
class JetLayout {
 public:
  JetLayout() = default;
  JetLayout(int n_base, int n_fields, FieldKind kind = FieldKind::real);

  int n_base() const { return n_base_; }
  int n_fields() const { return n_fields_; }
  FieldKind kind() const { return kind_; }
  int slots() const { return kind_ == FieldKind::complex ? 2 * n_fields_ : n_fields_; }
  int pairs() const { return n_base_ * (n_base_ + 1) / 2; }

  /// N + S + S*N + S*N(N+1)/2 with S = slots().
  std::size_t size() const;

  /// Flat position of a coordinate; d2(r,i,j) with i > j maps to the (j,i) slot.
  std::size_t index(const JetCoordinateId& id) const;
  /// Canonical id at a flat position (d2 always has i <= j).
  JetCoordinateId id(std::size_t index) const;
  std::vector<JetCoordinateId> enumerate() const;

  /// Conjugate partner of a field slot (identity for real layouts).
  int conj_slot(int r) const;
  /// Same coordinate on the conjugate slot.
  JetCoordinateId conj(const JetCoordinateId& id) const;

  bool is_offdiagonal(std::size_t index) const;

  bool operator==(const JetLayout&) const = default;

 private:
  void check_base(int i) const;
  void check_slot(int r) const;
  std::size_t pair_index(int i, int j) const;

  int n_base_{0};
  int n_fields_{0};
  FieldKind kind_{FieldKind::real};
};

/// Values of every jet coordinate at one point; T is Scalar for plain points
/// and Dual when a tangent direction is being propagated.
template <class T>
class BasicJet {
 public:
  BasicJet() = default;
  explicit BasicJet(JetLayout layout) : layout_(layout), values_(layout.size()) {}
  BasicJet(JetLayout layout, std::vector<T> values)
      : layout_(layout), values_(std::move(values)) {
    if (values_.size() != layout_.size()) throw JetError("jet value count does not match layout");
  }

  const JetLayout& layout() const { return layout_; }
  int n_base() const { return layout_.n_base(); }
  int slots() const { return layout_.slots(); }

  const T& operator[](std::size_t k) const { return values_[k]; }
  T& operator[](std::size_t k) { return values_[k]; }
  std::span<const T> values() const { return values_; }
  std::size_t size() const { return values_.size(); }

  const T& at(const JetCoordinateId& id) const { return values_[layout_.index(id)]; }
  void set(const JetCoordinateId& id, T v) { values_[layout_.index(id)] = std::move(v); }

  const T& x(int i) const { return at(JetCoordinateId::base(i)); }
  const T& u(int r) const { return at(JetCoordinateId::field(r)); }
  const T& du(int r, int i) const { return at(JetCoordinateId::d1(r, i)); }
  const T& ddu(int r, int i, int j) const { return at(JetCoordinateId::d2(r, i, j)); }

 private:
  JetLayout layout_;
  std::vector<T> values_;
};

using JetPoint = BasicJet<Scalar>;
using DualJet = BasicJet<Dual>;

/// Lift a point to dual numbers with the given tangent (zero if empty).
DualJet make_dual(const JetPoint& p, std::span<const Scalar> tangent = {});

/// Deterministic generic point: every component has magnitude in [0.5, 2]
/// with random sign (both parts for complex layouts, conjugate slots mirror
/// their partners). With positive_fields the field values are positive.
JetPoint sample_generic(int n_base, int n_fields, FieldKind kind, std::uint64_t seed,
                        bool positive_fields = false);

/// Copy a point into conjugate-consistent form (slot r+m = conj of slot r).
void restore_conjugates(JetPoint& p);

/// Where generic points are drawn from.
struct Domain {
  JetLayout layout;
  bool positive_fields{false};

  JetPoint sample(std::uint64_t seed) const {
    return sample_generic(layout.n_base(), layout.n_fields(), layout.kind(), seed, positive_fields);
  }
};

}  // namespace invforge
