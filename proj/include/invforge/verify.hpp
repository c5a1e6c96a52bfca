#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "invforge/invcat.hpp"
#include "invforge/liealg.hpp"

namespace invforge {

/// Result for one (operator, function) pair.
struct PairResult {
  std::string op;
  std::string function;
  double residual_max{0.0};
  /// Largest sum of |coefficient * partial| over the samples; the natural
  /// cancellation scale of the residual.
  double scale{0.0};
  bool pass{true};
};

struct InvarianceReport {
  std::vector<PairResult> pairs;
  int samples{0};
  std::uint64_t seed{0};
  double tol{0.0};

  bool pass() const;
  double residual_max() const;
  /// Verdict per function over all operators, in family order.
  std::vector<PairResult> per_function() const;
};

/// Deterministic sample sequence: attempt k uses seed mixed with k.
JetPoint sample_point(const Domain& domain, std::uint64_t seed, int attempt);

/// X F at every sample for every operator and family member. Points where
/// evaluation fails are resampled (bounded); persistent failure throws
/// EvaluationError.
InvarianceReport check_absolute(const std::vector<ProlongedOperator>& ops, std::span<const ScalarJetFunction> family,
                                const Domain& domain, int n_samples, double tol, std::uint64_t seed);

/// Projects each sample onto E = 0 by Newton iteration in one coordinate,
/// then tests X E. Without solve_for the first-or-second derivative
/// coordinate with the largest |dE/dc| is used.
InvarianceReport check_on_manifold(const std::vector<ProlongedOperator>& ops, const ScalarJetFunction& residual,
                                   const Domain& domain, std::optional<JetCoordinateId> solve_for, int n_samples,
                                   double tol, std::uint64_t seed);

/// Moves p onto E = 0 along coordinate c; returns false if Newton fails.
bool project_to_manifold(const ScalarJetFunction& residual, JetPoint& p, std::size_t c);

struct RankReport {
  int rows{0};
  int cols{0};
  std::vector<double> pivots;
  int rank{0};
  int expected{0};
  bool pass() const { return rank == expected; }
};

/// Generic rank of the Jacobian of a family over the given coordinates
/// (all coordinates when empty).
RankReport independence_rank(std::span<const ScalarJetFunction> family, const Domain& domain, int n_samples,
                             std::uint64_t seed, std::span<const std::size_t> coords = {});

/// Jacobian rank at one point.
RankReport rank_at(std::span<const ScalarJetFunction> family, const JetPoint& p,
                   std::span<const std::size_t> coords = {});

struct CompletenessReport {
  int n_jet_vars{0};
  int algebra_rank{0};
  /// n_jet_vars - algebra_rank.
  int expected{0};
  /// Count stated with the family.
  int claimed{0};
  int family_size{0};
  int independence{0};
  bool invariant{false};
  double residual_max{0.0};
  bool pass() const { return family_size == expected && independence == family_size && invariant; }
};

CompletenessReport completeness(const BasisFamily& family, int n_samples, double tol, std::uint64_t seed);

struct CovarianceResult {
  std::string op;
  double residual_max{0.0};
  double scale{0.0};
  /// Fitted scalar weight at the first sample.
  Scalar weight{};
  bool pass{true};
};

struct CovarianceReport {
  std::string tensor;
  std::vector<CovarianceResult> ops;
  bool pass() const;
};

/// Fits X theta to the infinitesimal rotation-plus-scaling action
/// (Omega G theta + s theta for vectors, Omega G Theta - Theta G Omega +
/// s Theta for matrices, Omega antisymmetric) at each sample.
CovarianceReport check_covariance(const TensorBuilder& tensor, const std::vector<ProlongedOperator>& ops,
                                  const Domain& domain, int n_samples, double tol, std::uint64_t seed);

}  // namespace invforge
