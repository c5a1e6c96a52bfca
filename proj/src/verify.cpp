#include "invforge/verify.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>

namespace invforge {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

bool finite(Scalar s) { return std::isfinite(s.real()) && std::isfinite(s.imag()); }

bool all_finite(std::span<const Scalar> v) {
  return std::all_of(v.begin(), v.end(), [](Scalar s) { return finite(s); });
}

constexpr int kRetryFactor = 20;

// Sum of t_c g_c and of |t_c g_c|.
std::pair<double, double> contract_tangent(std::span<const Scalar> t, std::span<const Scalar> g) {
  Scalar s{};
  double scale = 0.0;
  for (std::size_t c = 0; c < t.size(); ++c) {
    const Scalar term = t[c] * g[c];
    s += term;
    scale += std::abs(term);
  }
  return {std::abs(s), scale};
}

void record(PairResult& r, double residual, double scale) {
  r.residual_max = std::max(r.residual_max, residual);
  r.scale = std::max(r.scale, scale);
}

void finish(InvarianceReport& rep) {
  for (auto& p : rep.pairs) p.pass = p.residual_max <= rep.tol * (1.0 + p.scale);
}

}  // namespace

bool InvarianceReport::pass() const {
  return std::all_of(pairs.begin(), pairs.end(), [](const PairResult& p) { return p.pass; });
}

double InvarianceReport::residual_max() const {
  double r = 0.0;
  for (const auto& p : pairs) r = std::max(r, p.residual_max);
  return r;
}

std::vector<PairResult> InvarianceReport::per_function() const {
  std::vector<PairResult> out;
  std::map<std::string, std::size_t> where;
  for (const auto& p : pairs) {
    auto [it, fresh] = where.try_emplace(p.function, out.size());
    if (fresh) {
      out.push_back({"*", p.function, p.residual_max, p.scale, p.pass});
      continue;
    }
    auto& o = out[it->second];
    o.residual_max = std::max(o.residual_max, p.residual_max);
    o.scale = std::max(o.scale, p.scale);
    o.pass = o.pass && p.pass;
  }
  return out;
}

JetPoint sample_point(const Domain& domain, std::uint64_t seed, int attempt) {
  return domain.sample(splitmix(seed) + static_cast<std::uint64_t>(attempt));
}

InvarianceReport check_absolute(const std::vector<ProlongedOperator>& ops, std::span<const ScalarJetFunction> family,
                                const Domain& domain, int n_samples, double tol, std::uint64_t seed) {
  InvarianceReport rep;
  rep.seed = seed;
  rep.tol = tol;
  for (const auto& f : family)
    for (const auto& op : ops) rep.pairs.push_back({op.label(), f.label(), 0.0, 0.0, true});

  std::string last_error;
  int attempt = 0;
  const int max_attempts = kRetryFactor * std::max(n_samples, 1);
  while (rep.samples < n_samples) {
    if (attempt >= max_attempts)
      throw EvaluationError("no evaluable sample points after " + std::to_string(attempt) +
                            " attempts: " + last_error);
    const JetPoint p = sample_point(domain, seed, attempt++);
    std::vector<std::vector<Scalar>> grads;
    try {
      for (const auto& f : family) {
        if (!finite(f.eval(p))) throw EvaluationError(f.label() + " is not finite");
        auto g = f.grad(p);
        if (!all_finite(g)) throw EvaluationError("gradient of " + f.label() + " is not finite");
        grads.push_back(std::move(g));
      }
    } catch (const EvaluationError& e) {
      last_error = e.what();
      continue;
    } catch (const SingularMatrix& e) {
      last_error = e.what();
      continue;
    }
    std::vector<std::vector<Scalar>> tangents;
    for (const auto& op : ops) {
      auto t = op.tangent(p);
      if (!all_finite(t)) throw EvaluationError("coefficients of " + op.label() + " are not finite");
      tangents.push_back(std::move(t));
    }
    std::size_t k = 0;
    for (const auto& g : grads)
      for (const auto& t : tangents) {
        const auto [res, scale] = contract_tangent(t, g);
        record(rep.pairs[k++], res, scale);
      }
    ++rep.samples;
  }
  finish(rep);
  return rep;
}

bool project_to_manifold(const ScalarJetFunction& residual, JetPoint& p, std::size_t c) {
  const auto g0 = residual.grad(p);
  double escale = 0.0;
  for (std::size_t k = 0; k < g0.size(); ++k) escale += std::abs(g0[k] * p[k]);
  const bool complex = p.layout().kind() == FieldKind::complex;
  const std::size_t one[] = {c};
  for (int it = 0; it < 50; ++it) {
    const Scalar e = residual.eval(p);
    if (!finite(e)) return false;
    if (std::abs(e) <= 1e-12 * (1.0 + escale)) {
      if (complex) restore_conjugates(p);
      return finite(residual.eval(p));
    }
    const Scalar d = residual.grad(p, one)[0];
    if (!finite(d) || std::abs(d) == 0.0) return false;
    p[c] -= e / d;
    if (complex) restore_conjugates(p);
  }
  return false;
}

InvarianceReport check_on_manifold(const std::vector<ProlongedOperator>& ops, const ScalarJetFunction& residual,
                                   const Domain& domain, std::optional<JetCoordinateId> solve_for, int n_samples,
                                   double tol, std::uint64_t seed) {
  InvarianceReport rep;
  rep.seed = seed;
  rep.tol = tol;
  for (const auto& op : ops) rep.pairs.push_back({op.label(), residual.label(), 0.0, 0.0, true});

  const JetLayout& L = domain.layout;
  std::string last_error = "Newton projection did not converge";
  int attempt = 0;
  const int max_attempts = kRetryFactor * std::max(n_samples, 1);
  while (rep.samples < n_samples) {
    if (attempt >= max_attempts)
      throw EvaluationError("no usable points on the equation manifold after " + std::to_string(attempt) +
                            " attempts: " + last_error);
    JetPoint p = sample_point(domain, seed, attempt++);
    std::vector<Scalar> g;
    try {
      std::size_t c = 0;
      if (solve_for) {
        c = L.index(*solve_for);
      } else {
        const auto g0 = residual.grad(p);
        double best = -1.0;
        for (std::size_t k = 0; k < g0.size(); ++k) {
          const auto id = L.id(k);
          if (id.tag != JetCoordinateId::Tag::d1 && id.tag != JetCoordinateId::Tag::d2) continue;
          if (id.r >= L.n_fields()) continue;  // conjugate slots follow their partners
          if (std::abs(g0[k]) > best) {
            best = std::abs(g0[k]);
            c = k;
          }
        }
      }
      if (!project_to_manifold(residual, p, c)) continue;
      g = residual.grad(p);
      if (!all_finite(g)) continue;
    } catch (const EvaluationError& e) {
      last_error = e.what();
      continue;
    } catch (const SingularMatrix& e) {
      last_error = e.what();
      continue;
    }
    for (std::size_t k = 0; k < ops.size(); ++k) {
      const auto t = ops[k].tangent(p);
      if (!all_finite(t)) throw EvaluationError("coefficients of " + ops[k].label() + " are not finite");
      const auto [res, scale] = contract_tangent(t, g);
      record(rep.pairs[k], res, scale);
    }
    ++rep.samples;
  }
  finish(rep);
  return rep;
}

RankReport rank_at(std::span<const ScalarJetFunction> family, const JetPoint& p, std::span<const std::size_t> coords) {
  std::vector<std::vector<Scalar>> rows;
  for (const auto& f : family) rows.push_back(coords.empty() ? f.grad(p) : f.grad(p, coords));
  RankReport rep;
  rep.rows = static_cast<int>(family.size());
  rep.cols = static_cast<int>(coords.empty() ? p.size() : coords.size());
  rep.expected = rep.rows;
  for (const auto& r : rows)
    if (!all_finite(r)) throw EvaluationError("non-finite Jacobian entry");
  auto info = numerical_rank(std::move(rows));
  rep.rank = info.rank;
  rep.pivots = std::move(info.pivots);
  return rep;
}

RankReport independence_rank(std::span<const ScalarJetFunction> family, const Domain& domain, int n_samples,
                             std::uint64_t seed, std::span<const std::size_t> coords) {
  RankReport best;
  bool any = false;
  std::string last_error;
  int used = 0;
  for (int attempt = 0; used < std::max(n_samples, 1); ++attempt) {
    if (attempt >= kRetryFactor * std::max(n_samples, 1))
      throw EvaluationError("rank: no evaluable sample points: " + last_error);
    try {
      auto r = rank_at(family, sample_point(domain, seed, attempt), coords);
      ++used;
      if (!any || r.rank > best.rank) best = std::move(r);
      any = true;
    } catch (const EvaluationError& e) {
      last_error = e.what();
    } catch (const SingularMatrix& e) {
      last_error = e.what();
    }
  }
  return best;
}

CompletenessReport completeness(const BasisFamily& family, int n_samples, double tol, std::uint64_t seed) {
  const auto ops = prolong2(family.generators, family.domain.layout);
  CompletenessReport rep;
  rep.n_jet_vars = static_cast<int>(family.dependencies.size());
  rep.algebra_rank = generic_rank(ops, family.domain, 5, splitmix(seed), family.dependencies).rank;
  rep.expected = rep.n_jet_vars - rep.algebra_rank;
  rep.claimed = family.expected_count;
  rep.family_size = static_cast<int>(family.members.size());
  rep.independence = independence_rank(family.members, family.domain, 5, seed, family.dependencies).rank;
  const auto inv = check_absolute(ops, family.members, family.domain, n_samples, tol, seed);
  rep.invariant = inv.pass();
  rep.residual_max = inv.residual_max();
  return rep;
}

bool CovarianceReport::pass() const {
  return std::all_of(ops.begin(), ops.end(), [](const CovarianceResult& r) { return r.pass; });
}

namespace {

// Columns of the linear model, one per unknown: the antisymmetric entries
// omega_ij (i < j) and the scalar weight last.
Eigen::MatrixXcd covariance_model(const std::vector<Scalar>& theta, const Metric& g, bool is_matrix) {
  const int d = g.dim();
  const int unknowns = d * (d - 1) / 2 + 1;
  const auto rows = static_cast<Eigen::Index>(theta.size());
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(rows, unknowns);
  int col = 0;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j, ++col) {
      // Omega = E_ij - E_ji, then Omega G acting on the tensor.
      if (!is_matrix) {
        a(i, col) += g.weight(j) * theta[j];
        a(j, col) -= g.weight(i) * theta[i];
        continue;
      }
      auto th = [&](int r, int c) { return theta[static_cast<std::size_t>(r * d + c)]; };
      for (int c = 0; c < d; ++c) {
        // (Omega G Theta)_{ic} += g_j Theta_jc, (..)_{jc} -= g_i Theta_ic
        a(i * d + c, col) += g.weight(j) * th(j, c);
        a(j * d + c, col) -= g.weight(i) * th(i, c);
        // -(Theta G Omega)_{ci}: (Theta G Omega)_{cj} += Theta_ci g_i, (..)_{ci} -= Theta_cj g_j
        a(c * d + j, col) -= th(c, i) * g.weight(i);
        a(c * d + i, col) += th(c, j) * g.weight(j);
      }
    }
  for (Eigen::Index k = 0; k < rows; ++k) a(k, col) = theta[static_cast<std::size_t>(k)];
  return a;
}

}  // namespace

CovarianceReport check_covariance(const TensorBuilder& tensor, const std::vector<ProlongedOperator>& ops,
                                  const Domain& domain, int n_samples, double tol, std::uint64_t seed) {
  CovarianceReport rep;
  rep.tensor = tensor.label();
  for (const auto& op : ops) rep.ops.push_back({op.label(), 0.0, 0.0, {}, true});
  int used = 0;
  std::string last_error;
  for (int attempt = 0; used < n_samples; ++attempt) {
    if (attempt >= kRetryFactor * std::max(n_samples, 1))
      throw EvaluationError("covariance: no evaluable sample points: " + last_error);
    const JetPoint p = sample_point(domain, seed, attempt);
    std::vector<Scalar> theta;
    try {
      theta = tensor.values(p);
      if (!all_finite(theta)) continue;
    } catch (const EvaluationError& e) {
      last_error = e.what();
      continue;
    } catch (const SingularMatrix& e) {
      last_error = e.what();
      continue;
    }
    const Eigen::MatrixXcd a = covariance_model(theta, tensor.metric(), tensor.is_matrix());
    for (std::size_t k = 0; k < ops.size(); ++k) {
      const auto t = ops[k].tangent(p);
      const auto d = tensor.directional(p, t);
      Eigen::VectorXcd b(static_cast<Eigen::Index>(d.size()));
      for (std::size_t i = 0; i < d.size(); ++i) b(static_cast<Eigen::Index>(i)) = d[i];
      const Eigen::VectorXcd x = a.completeOrthogonalDecomposition().solve(b);
      const double res = (a * x - b).norm();
      auto& r = rep.ops[k];
      if (used == 0) r.weight = x(x.size() - 1);
      r.residual_max = std::max(r.residual_max, res);
      r.scale = std::max(r.scale, b.norm());
    }
    ++used;
  }
  for (auto& r : rep.ops) r.pass = r.residual_max <= tol * (1.0 + r.scale);
  return rep;
}

}  // namespace invforge
