#include "invforge/liealg.hpp"

#include <algorithm>

namespace invforge {

namespace {

Taylor2 eval_coeff(const CoeffFn& f, std::span<const Taylor2> xu) {
  if (!f) return Taylor2::constant(xu.size(), 0.0);
  return f(xu);
}

CoeffFn combine_fn(Scalar a, const CoeffFn& f, Scalar b, const CoeffFn& g) {
  if (!f && !g) return {};
  return [a, f, b, g](std::span<const Taylor2> xu) {
    return eval_coeff(f, xu) * a + eval_coeff(g, xu) * b;
  };
}

}  // namespace

VectorField linear_combination(Scalar a, const VectorField& x, Scalar b, const VectorField& y) {
  if (x.n_base != y.n_base || x.slots != y.slots)
    throw std::invalid_argument("linear_combination: fields act on different spaces");
  VectorField r("lin(" + x.label + "," + y.label + ")", x.n_base, x.slots);
  for (int i = 0; i < x.n_base; ++i) r.xi[i] = combine_fn(a, x.xi[i], b, y.xi[i]);
  for (int s = 0; s < x.slots; ++s) r.eta[s] = combine_fn(a, x.eta[s], b, y.eta[s]);
  return r;
}

VectorField log_substitution(const VectorField& v) {
  VectorField r(v.label, v.n_base, v.slots);
  const int n = v.n_base;
  auto substitute = [n](std::span<const Taylor2> xu) {
    std::vector<Taylor2> y(xu.begin(), xu.end());
    for (std::size_t k = n; k < y.size(); ++k) y[k] = exp(y[k]);
    return y;
  };
  for (int i = 0; i < n; ++i) {
    if (!v.xi[i]) continue;
    r.xi[i] = [f = v.xi[i], substitute](std::span<const Taylor2> xu) {
      const auto y = substitute(xu);
      return f(y);
    };
  }
  for (int s = 0; s < v.slots; ++s) {
    if (!v.eta[s]) continue;
    r.eta[s] = [f = v.eta[s], substitute, k = n + s](std::span<const Taylor2> xu) {
      const auto y = substitute(xu);
      return f(y) * exp(-xu[k]);
    };
  }
  return r;
}

ProlongedOperator::ProlongedOperator(VectorField field, JetLayout layout)
    : field_(std::move(field)), layout_(layout) {
  if (field_.n_base != layout_.n_base() || field_.slots != layout_.slots())
    throw std::invalid_argument("prolong2: vector field does not match jet layout");
}

std::vector<Scalar> ProlongedOperator::coefficients(const JetPoint& p) const {
  const int n = layout_.n_base();
  const int s_count = layout_.slots();
  const std::size_t k_vars = static_cast<std::size_t>(n + s_count);

  std::vector<Taylor2> xu;
  xu.reserve(k_vars);
  for (int i = 0; i < n; ++i) xu.push_back(Taylor2::variable(k_vars, i, p.x(i)));
  for (int r = 0; r < s_count; ++r) xu.push_back(Taylor2::variable(k_vars, n + r, p.u(r)));

  std::vector<Taylor2> xi, eta;
  for (int i = 0; i < n; ++i) xi.push_back(eval_coeff(field_.xi[i], xu));
  for (int r = 0; r < s_count; ++r) eta.push_back(eval_coeff(field_.eta[r], xu));

  // First- and second-order total derivatives of a coefficient c(x,u).
  auto total1 = [&](const Taylor2& c, int i) {
    Scalar v = c.d(i);
    for (int s = 0; s < s_count; ++s) v += p.du(s, i) * c.d(n + s);
    return v;
  };
  auto total2 = [&](const Taylor2& c, int i, int j) {
    Scalar v = c.dd(i, j);
    for (int s = 0; s < s_count; ++s) {
      v += p.du(s, j) * c.dd(i, n + s) + p.du(s, i) * c.dd(n + s, j);
      v += p.ddu(s, i, j) * c.d(n + s);
      for (int t = 0; t < s_count; ++t) v += p.du(s, i) * p.du(t, j) * c.dd(n + s, n + t);
    }
    return v;
  };

  std::vector<Scalar> dxi(static_cast<std::size_t>(n * n));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i) dxi[k * n + i] = total1(xi[k], i);

  std::vector<Scalar> out(layout_.size());
  for (int i = 0; i < n; ++i) out[layout_.index(JetCoordinateId::base(i))] = xi[i].value();
  for (int r = 0; r < s_count; ++r) {
    out[layout_.index(JetCoordinateId::field(r))] = eta[r].value();
    for (int i = 0; i < n; ++i) {
      Scalar e = total1(eta[r], i);
      for (int k = 0; k < n; ++k) e -= p.du(r, k) * dxi[k * n + i];
      out[layout_.index(JetCoordinateId::d1(r, i))] = e;
    }
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        Scalar e = total2(eta[r], i, j);
        for (int k = 0; k < n; ++k) {
          e -= p.ddu(r, k, j) * dxi[k * n + i];
          e -= p.du(r, k) * total2(xi[k], i, j);
          e -= p.ddu(r, i, k) * dxi[k * n + j];
        }
        out[layout_.index(JetCoordinateId::d2(r, i, j))] = (i == j) ? e : 2.0 * e;
      }
  }
  return out;
}

Scalar ProlongedOperator::coeff(const JetCoordinateId& id, const JetPoint& p) const {
  return coefficients(p)[layout_.index(id)];
}

std::vector<Scalar> ProlongedOperator::tangent(const JetPoint& p) const {
  auto t = coefficients(p);
  for (std::size_t k = 0; k < t.size(); ++k)
    if (layout_.is_offdiagonal(k)) t[k] *= 0.5;
  return t;
}

ProlongedOperator prolong2(const VectorField& v, const JetLayout& layout) { return {v, layout}; }

std::vector<ProlongedOperator> prolong2(const std::vector<VectorField>& fields, const JetLayout& layout) {
  std::vector<ProlongedOperator> ops;
  ops.reserve(fields.size());
  for (const auto& f : fields) ops.emplace_back(f, layout);
  return ops;
}

Scalar apply(const ProlongedOperator& op, const ScalarJetFunction& f, const JetPoint& p) {
  const auto t = op.tangent(p);
  for (std::size_t k = 0; k < t.size(); ++k)
    if (!is_finite(t[k]))
      throw EvaluationError(op.label() + ": non-finite coefficient at " + to_string(p.layout().id(k)));
  const Scalar r = f.directional(p, t);
  if (!is_finite(r)) {
    const auto g = f.grad(p);
    for (std::size_t k = 0; k < g.size(); ++k)
      if (!is_finite(g[k]))
        throw EvaluationError(f.label() + ": non-finite derivative at " + to_string(p.layout().id(k)));
    throw EvaluationError(f.label() + ": non-finite value");
  }
  return r;
}

RankInfo generic_rank(const std::vector<ProlongedOperator>& ops, const Domain& domain, int trials,
                      std::uint64_t seed, std::span<const std::size_t> coords) {
  RankInfo best;
  for (int t = 0; t < std::max(trials, 1); ++t) {
    const JetPoint p = domain.sample(seed + static_cast<std::uint64_t>(t));
    std::vector<std::vector<Scalar>> rows;
    for (const auto& op : ops) {
      const auto c = op.coefficients(p);
      if (coords.empty()) {
        rows.push_back(c);
      } else {
        std::vector<Scalar> row;
        for (const auto k : coords) row.push_back(c[k]);
        rows.push_back(std::move(row));
      }
    }
    auto info = numerical_rank(std::move(rows));
    if (info.rank > best.rank || best.pivots.empty()) best = std::move(info);
  }
  return best;
}

}  // namespace invforge
