#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "invforge/jetfunction.hpp"
#include "invforge/jetspace.hpp"
#include "invforge/matrix.hpp"
#include "invforge/taylor.hpp"

namespace invforge {

/// Coefficient of a vector field as a function of (x_0..x_{N-1}, u^0..u^{S-1}).
using CoeffFn = std::function<Taylor2(std::span<const Taylor2> xu)>;

/// X = xi^i(x,u) d/dx_i + eta^r(x,u) d/du^r. Empty coefficient functions are zero.
struct VectorField {
  std::string label;
  int n_base{0};
  int slots{0};
  std::vector<CoeffFn> xi;
  std::vector<CoeffFn> eta;

  VectorField() = default;
  VectorField(std::string label, int n_base, int slots)
      : label(std::move(label)), n_base(n_base), slots(slots), xi(n_base), eta(slots) {}
};

/// a X + b Y.
VectorField linear_combination(Scalar a, const VectorField& x, Scalar b, const VectorField& y);

/// Rewrites a field in logarithmic dependent variables u = exp(phi): the new
/// coefficients are xi(x, e^phi) and eta(x, e^phi) e^-phi.
VectorField log_substitution(const VectorField& v);

/// Second prolongation of a vector field on a given jet layout.
///
/// Coefficients are reported per stored coordinate: xi^i on base(i), eta^r on
/// field(r), eta_i^r on d1(r,i), eta_ii^r on d2(r,i,i) and eta_ij^r + eta_ji^r
/// on d2(r,i,j) for i != j. The off-diagonal coefficient therefore multiplies
/// the symmetric derivative, which is half the partial with respect to the
/// stored coordinate.
class ProlongedOperator {
 public:
  ProlongedOperator(VectorField field, JetLayout layout);

  const std::string& label() const { return field_.label; }
  const JetLayout& layout() const { return layout_; }
  const VectorField& field() const { return field_; }

  std::vector<Scalar> coefficients(const JetPoint& p) const;
  Scalar coeff(const JetCoordinateId& id, const JetPoint& p) const;
  /// Tangent vector in stored coordinates (off-diagonal entries halved).
  std::vector<Scalar> tangent(const JetPoint& p) const;

 private:
  VectorField field_;
  JetLayout layout_;
};

ProlongedOperator prolong2(const VectorField& v, const JetLayout& layout);
std::vector<ProlongedOperator> prolong2(const std::vector<VectorField>& fields, const JetLayout& layout);

/// Action of the prolonged operator on a jet function at p. Throws
/// EvaluationError naming the coordinate if anything is non-finite.
Scalar apply(const ProlongedOperator& op, const ScalarJetFunction& f, const JetPoint& p);

/// Maximum numerical rank over sampled points of the coefficient matrix
/// (one row per operator). When coords is non-empty only those columns are
/// used.
RankInfo generic_rank(const std::vector<ProlongedOperator>& ops, const Domain& domain, int trials,
                      std::uint64_t seed, std::span<const std::size_t> coords = {});

enum class AlgebraName {
  AO,
  AE,
  AE1,
  AC,
  AP,
  APtilde,
  AC1n,
  AG_I,
  AG1_I,
  AG2_I,
  AG_II,
  AG1_II,
  AG2_II,
  AP_inf,
  AP_BornInfeld,
};

std::string to_string(AlgebraName name);
/// Accepts the canonical names (case-insensitive).
AlgebraName parse_algebra(const std::string& text);
std::vector<AlgebraName> all_algebras();

enum class Geometry { euclidean, minkowski, galilei };

using UnivariateFn = std::function<Taylor2(const Taylor2&)>;

/// Coefficient functions of one eikonal-algebra generator:
/// X = (b^{mu nu}(u) g_nn x_nu + a^mu(u)) d_mu + eta(u) d_u (+ d(u) x_mu d_mu).
struct ApInfFunctions {
  std::vector<std::vector<UnivariateFn>> b;  // b[mu][nu], only mu < nu used
  std::vector<UnivariateFn> a;
  UnivariateFn eta;
  UnivariateFn d;
};

/// Random quadratic polynomials in u with coefficients of magnitude 0.5..2.
ApInfFunctions sample_ap_inf(int dim, std::uint64_t seed);

struct AlgebraSpec {
  AlgebraName name{AlgebraName::AE};
  int n{3};
  int m{1};
  std::optional<double> lambda;
  double mu{1.0};
  double mass{1.0};
  /// Express the generators in u = exp(phi) variables.
  bool log_variables{false};
  /// Include d(u) x_mu d_mu in the eikonal generators.
  bool ap_inf_dilation{false};
  /// User-supplied eikonal functions; sampled when absent.
  std::optional<ApInfFunctions> ap_inf;
  int ap_inf_instances{3};
  std::uint64_t ap_inf_seed{1};

  Geometry geometry() const;
  int n_base() const;
  FieldKind field_kind() const;
  /// Metric of the indices contracted by invariants (spatial for Galilei).
  Metric metric() const;
  JetLayout layout() const;
  bool has_lambda_parameter() const;
  double lambda_value() const;
  /// Throws std::invalid_argument for inconsistent parameters.
  void validate() const;
};

/// Full basis of generators for the named algebra.
std::vector<VectorField> catalog(const AlgebraSpec& spec);

}  // namespace invforge
