#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "invforge/jetfunction.hpp"
#include "invforge/liealg.hpp"
#include "invforge/matrix.hpp"

namespace invforge {

// Trace invariants. All use the metric weights for every contracted index.

/// S_k(M) = tr((G M)^k).
template <class T>
T S(const Mat<T>& m, const Metric& g, int k) {
  return trace_power(m, g, k);
}

/// R_k(v, M) = vᵀ G (M G)^(k-1) v; R_0 is vᵀ M⁻¹ v.
template <class T>
T R(const Vec<T>& v, const Mat<T>& m, const Metric& g, int k) {
  return quadratic_power(v, m, g, k);
}

/// S_jk(U, V) = tr((G U)^j (G V)^(k-j)).
template <class T>
T Sjk(const Mat<T>& u, const Mat<T>& v, const Metric& g, int j, int k) {
  return mixed_trace(u, v, g, j, k);
}

// Jet accessors. `lo` is the first base index of the contracted block
// (0 for Euclid/Minkowski, 1 for the spatial block of Galilei jets).

Mat<Dual> hessian(const DualJet& p, int r, int lo, int dim);
Vec<Dual> gradient(const DualJet& p, int r, int lo, int dim);
Vec<Dual> positions(const DualJet& p, int lo, int dim);
/// Mixed derivatives u_{a0} (a in the block, 0 the time index).
Vec<Dual> time_gradient(const DualJet& p, int r, int lo, int dim);

/// A vector or symmetric matrix built from jet values.
struct TensorValue {
  Vec<Dual> vec;
  Mat<Dual> mat;
  bool is_matrix{false};
};

class TensorBuilder {
 public:
  using Fn = std::function<TensorValue(const DualJet&)>;

  TensorBuilder() = default;
  TensorBuilder(std::string label, Metric metric, bool is_matrix, Fn fn)
      : label_(std::move(label)), metric_(metric), is_matrix_(is_matrix), fn_(std::move(fn)) {}

  const std::string& label() const { return label_; }
  const Metric& metric() const { return metric_; }
  bool is_matrix() const { return is_matrix_; }
  int dim() const { return metric_.dim(); }

  TensorValue operator()(const DualJet& p) const { return fn_(p); }
  /// Components flattened row-major (vectors as is).
  std::vector<Scalar> values(const JetPoint& p) const;
  /// Derivatives of the flattened components along a stored-coordinate tangent.
  std::vector<Scalar> directional(const JetPoint& p, std::span<const Scalar> tangent) const;

 private:
  std::string label_;
  Metric metric_{MetricKind::euclidean, 1};
  bool is_matrix_{false};
  Fn fn_;
};

/// Names accepted by tensor(): grad, hess, x, theta (order-2 conformal
/// tensor), theta1 (u^r_a/u^r - u^1_a/u^1), w, eik, gal-theta,
/// gal-theta2, h, hhat, h0, hhat0, implicit-theta, cgal-theta.
/// `r` selects the field (0-based).
TensorBuilder tensor(const std::string& name, const AlgebraSpec& spec, int r = 0);
std::vector<std::string> tensor_names();

/// Solves phi_ab theta_b = phi_at for the Galilei block; throws
/// SingularMatrix("degenerate Hessian").
Vec<Dual> implicit_theta(const DualJet& p, int r, int n);

/// A printed functional basis and what it needs to be checked.
struct BasisFamily {
  std::string key;
  std::string label;
  std::string anchor;
  AlgebraSpec spec;
  std::vector<VectorField> generators;
  std::vector<ScalarJetFunction> members;
  int expected_count{0};
  Domain domain;
  /// Flat jet coordinates the members may depend on.
  std::vector<std::size_t> dependencies;
};

/// Families by algebra. `variant` picks alternatives where more than one
/// printed form exists: "no-translations" (AE1, AC), "note3" (AG_I, AG1_I
/// with mu = 0), "printed" / "k-l" (AG2_I), "corrected" (AC, AC1n).
/// Throws std::invalid_argument when nothing is printed for the parameters.
BasisFamily basis(const AlgebraSpec& spec, const std::string& variant = "");

struct FamilyInfo {
  std::string algebra;
  std::string variant;
  std::string description;
  std::string anchor;
};
std::vector<FamilyInfo> list_bases();

/// An example equation with the algebra it is claimed to be invariant under.
struct EquationCase {
  std::string name;
  std::string label;
  std::string anchor;
  AlgebraSpec spec;
  std::vector<VectorField> generators;
  ScalarJetFunction residual;
  Domain domain;
  std::optional<JetCoordinateId> solve_for;
};

struct EquationInfo {
  std::string name;
  std::string description;
  std::string anchor;
};
std::vector<EquationInfo> list_equations();

/// Residual (left minus right) of a named equation together with its
/// generators. `k` is the trace order for eik-sk; `f_value` is the constant
/// used for the arbitrary function in conformal-w, eq418 and eq419.
EquationCase equation(const std::string& name, const AlgebraSpec& params, int k = 1, double f_value = 0.5);

/// Chain rule from u-jets to phi = log u jets (real or complex layouts).
JetPoint to_log_jet(const JetPoint& p);

}  // namespace invforge
