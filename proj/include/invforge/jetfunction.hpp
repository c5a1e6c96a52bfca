#pragma once

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "invforge/dual.hpp"
#include "invforge/jetspace.hpp"

namespace invforge {

class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A differentiable map from jet points to scalars. The evaluator is written
/// once over dual numbers; values, gradients and directional derivatives all
/// come from it.
class ScalarJetFunction {
 public:
  using Fn = std::function<Dual(const DualJet&)>;

  ScalarJetFunction() = default;
  ScalarJetFunction(std::string label, Fn fn) : label_(std::move(label)), fn_(std::move(fn)) {}

  const std::string& label() const { return label_; }
  void set_label(std::string label) { label_ = std::move(label); }
  explicit operator bool() const { return static_cast<bool>(fn_); }

  Dual operator()(const DualJet& p) const { return fn_(p); }
  Scalar eval(const JetPoint& p) const { return fn_(make_dual(p)).val; }

  /// Derivative along a tangent vector given in stored coordinates.
  Scalar directional(const JetPoint& p, std::span<const Scalar> tangent) const {
    return fn_(make_dual(p, tangent)).der;
  }

  /// Partial derivatives with respect to every stored coordinate (an
  /// off-diagonal second derivative is one coordinate).
  std::vector<Scalar> grad(const JetPoint& p) const;
  /// Partials for a subset of flat coordinates, in the given order.
  std::vector<Scalar> grad(const JetPoint& p, std::span<const std::size_t> coords) const;

 private:
  std::string label_;
  Fn fn_;
};

/// Holomorphic conjugate of a function on a complex layout: evaluates f on
/// the slot-swapped, conjugated point and conjugates the result. At
/// conjugate-consistent points this is the complex conjugate of f.
ScalarJetFunction conjugate(const ScalarJetFunction& f);

}  // namespace invforge
