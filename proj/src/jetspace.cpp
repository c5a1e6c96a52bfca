#include "invforge/jetspace.hpp"

#include <random>
#include <sstream>

namespace invforge {

Metric::Metric(MetricKind kind, int dim) : kind_(kind), dim_(dim) {
  if (dim < 1) throw std::invalid_argument("metric dimension must be positive");
}

Scalar contract(const Metric& metric, std::span<const Scalar> a, std::span<const Scalar> b) {
  return metric.contract<Scalar>(a, b);
}

std::string to_string(const JetCoordinateId& id) {
  std::ostringstream os;
  switch (id.tag) {
    case JetCoordinateId::Tag::base: os << "x" << id.i; break;
    case JetCoordinateId::Tag::field: os << "u" << id.r; break;
    case JetCoordinateId::Tag::d1: os << "u" << id.r << "_" << id.i; break;
    case JetCoordinateId::Tag::d2: os << "u" << id.r << "_" << id.i << id.j; break;
  }
  return os.str();
}

JetLayout::JetLayout(int n_base, int n_fields, FieldKind kind)
    : n_base_(n_base), n_fields_(n_fields), kind_(kind) {
  if (n_base < 1 || n_fields < 1) throw std::invalid_argument("jet layout needs N >= 1 and m >= 1");
}

std::size_t JetLayout::size() const {
  const std::size_t n = n_base_;
  const std::size_t s = slots();
  return n + s + s * n + s * n * (n + 1) / 2;
}

void JetLayout::check_base(int i) const {
  if (i < 0 || i >= n_base_) throw JetError("base index out of range: " + std::to_string(i));
}

void JetLayout::check_slot(int r) const {
  if (r < 0 || r >= slots()) throw JetError("field index out of range: " + std::to_string(r));
}

std::size_t JetLayout::pair_index(int i, int j) const {
  if (i > j) std::swap(i, j);
  // row-major upper triangle
  return static_cast<std::size_t>(i * n_base_ - i * (i - 1) / 2 + (j - i));
}

std::size_t JetLayout::index(const JetCoordinateId& id) const {
  const std::size_t n = n_base_;
  const std::size_t s = slots();
  switch (id.tag) {
    case JetCoordinateId::Tag::base:
      check_base(id.i);
      return id.i;
    case JetCoordinateId::Tag::field:
      check_slot(id.r);
      return n + id.r;
    case JetCoordinateId::Tag::d1:
      check_slot(id.r);
      check_base(id.i);
      return n + s + id.r * n + id.i;
    case JetCoordinateId::Tag::d2:
      check_slot(id.r);
      check_base(id.i);
      check_base(id.j);
      return n + s + s * n + id.r * static_cast<std::size_t>(pairs()) + pair_index(id.i, id.j);
  }
  throw JetError("bad coordinate tag");
}

JetCoordinateId JetLayout::id(std::size_t k) const {
  const std::size_t n = n_base_;
  const std::size_t s = slots();
  if (k < n) return JetCoordinateId::base(static_cast<int>(k));
  k -= n;
  if (k < s) return JetCoordinateId::field(static_cast<int>(k));
  k -= s;
  if (k < s * n) return JetCoordinateId::d1(static_cast<int>(k / n), static_cast<int>(k % n));
  k -= s * n;
  const std::size_t p = pairs();
  if (k >= s * p) throw JetError("flat jet index out of range");
  const int r = static_cast<int>(k / p);
  std::size_t q = k % p;
  int i = 0;
  while (q >= n - i) {
    q -= n - i;
    ++i;
  }
  return JetCoordinateId::d2(r, i, i + static_cast<int>(q));
}

std::vector<JetCoordinateId> JetLayout::enumerate() const {
  std::vector<JetCoordinateId> ids;
  ids.reserve(size());
  for (std::size_t k = 0; k < size(); ++k) ids.push_back(id(k));
  return ids;
}

int JetLayout::conj_slot(int r) const {
  check_slot(r);
  if (kind_ == FieldKind::real) return r;
  return r < n_fields_ ? r + n_fields_ : r - n_fields_;
}

JetCoordinateId JetLayout::conj(const JetCoordinateId& id) const {
  if (id.tag == JetCoordinateId::Tag::base) return id;
  JetCoordinateId c = id;
  c.r = conj_slot(id.r);
  return c;
}

bool JetLayout::is_offdiagonal(std::size_t k) const {
  const auto c = id(k);
  return c.tag == JetCoordinateId::Tag::d2 && c.i != c.j;
}

DualJet make_dual(const JetPoint& p, std::span<const Scalar> tangent) {
  std::vector<Dual> v(p.size());
  for (std::size_t k = 0; k < p.size(); ++k)
    v[k] = Dual(p[k], tangent.empty() ? Scalar{} : tangent[k]);
  return DualJet(p.layout(), std::move(v));
}

namespace {

// Platform-independent uniform in [0,1) from the raw engine output.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double signed_component(std::mt19937_64& rng, bool positive) {
  const double mag = 0.5 + 1.5 * unit(rng);
  if (positive) return mag;
  return (rng() & 1U) ? mag : -mag;
}

}  // namespace

void restore_conjugates(JetPoint& p) {
  const JetLayout& L = p.layout();
  if (L.kind() != FieldKind::complex) return;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const auto id = L.id(k);
    if (id.tag == JetCoordinateId::Tag::base || id.r >= L.n_fields()) continue;
    p.set(L.conj(id), std::conj(p[k]));
  }
}

JetPoint sample_generic(int n_base, int n_fields, FieldKind kind, std::uint64_t seed,
                        bool positive_fields) {
  const JetLayout layout(n_base, n_fields, kind);
  JetPoint p(layout);
  std::mt19937_64 rng(seed);
  for (std::size_t k = 0; k < p.size(); ++k) {
    const auto id = layout.id(k);
    const bool is_field = id.tag == JetCoordinateId::Tag::field;
    const bool is_base = id.tag == JetCoordinateId::Tag::base;
    if (kind == FieldKind::complex && !is_base && id.r >= n_fields) continue;
    const double re = signed_component(rng, is_field && positive_fields);
    const double im = (kind == FieldKind::complex && !is_base) ? signed_component(rng, false) : 0.0;
    p[k] = Scalar{re, im};
  }
  restore_conjugates(p);
  return p;
}

}  // namespace invforge
