#include <stdexcept>

#include "invforge/invcat.hpp"

namespace invforge {

namespace {

Dual minkowski_square(const DualJet& p, int dim) {
  const Metric g = Metric::minkowski(dim);
  const auto v = gradient(p, 0, 0, dim);
  return dot(g, v, v);
}

Dual box(const DualJet& p, int dim) { return S(hessian(p, 0, 0, dim), Metric::minkowski(dim), 1); }

// u_a u_ab u_b with the Minkowski weights.
Dual hess_quadratic(const DualJet& p, int dim) {
  return R(gradient(p, 0, 0, dim), hessian(p, 0, 0, dim), Metric::minkowski(dim), 2);
}

Dual laplacian(const DualJet& p, int r, int n) {
  Dual s;
  for (int a = 1; a <= n; ++a) s += p.ddu(r, a, a);
  return s;
}

EquationCase make(std::string name, std::string label, std::string anchor, AlgebraSpec spec,
                  ScalarJetFunction::Fn fn, bool positive, std::optional<JetCoordinateId> solve_for) {
  EquationCase e;
  e.name = name;
  e.label = std::move(label);
  e.anchor = std::move(anchor);
  e.spec = spec;
  e.generators = catalog(spec);
  e.residual = ScalarJetFunction(std::move(name), std::move(fn));
  e.domain = Domain{spec.layout(), positive};
  e.solve_for = solve_for;
  return e;
}

// Shared body of the real and complex N2-type equations: c2 phi_tt + c1 (...) + quadratic terms.
Dual galilei_n2(const DualJet& p, int n, Scalar c_tt, Scalar c_mix, double square_weight) {
  const Metric g = Metric::euclidean(n);
  const auto v = gradient(p, 0, 1, n);
  const auto vt = time_gradient(p, 0, 1, n);
  const auto h = hessian(p, 0, 1, n);
  const Dual tr = laplacian(p, 0, n);
  return c_tt * p.ddu(0, 0, 0) + c_mix * (p.du(0, 0) * tr / n + dot(g, v, vt)) + R(v, h, g, 2) +
         dot(g, v, v) * tr / n + square_weight * tr * tr;
}

}  // namespace

std::vector<EquationInfo> list_equations() {
  return {
      {"heat", "2 mu u_t + u_aa = 0 under AG2_I", "(4.1)"},
      {"schrodinger", "2 i m psi_t + psi_aa = 0 under AG2_II", "(4.3)"},
      {"born-infeld", "(1 - u_a u_a) u_mm + u_a u_m u_am = 0 under J_AB", "section 2"},
      {"born-infeld-printed", "(1 - u_a u_a) u_mm - u_a u_m u_am = 0 under J_AB", "section 2"},
      {"eikonal", "u_a u_a = 0 under AP_inf", "(3.1)"},
      {"eq35", "u_m u_mn u_n - u_m u_m u_aa = 0 under AP_inf with d(u) x_m d_m", "(3.5), Theorem 8"},
      {"eik-sk", "S_k(theta_mn) = 0 for the eikonal tensor under AP_inf", "(3.4), Theorem 7"},
      {"conformal-w", "u_a u_a u_nn/(1-n) - u_m u_n u_mn = (u_n u_n)^2 F(u) under AC1n, lambda = 0", "section 2"},
      {"eq418", "real Galilei N2-type equation under AG2_I (phi variables)", "(4.18)"},
      {"eq419", "complex Galilei N2-type equation under AG2_II (phi variables)", "(4.19)"},
      {"eq418-corrected", "eq418 with phi_aa^2/(2n) in N2", "(4.18)"},
      {"eq419-corrected", "eq419 with phi_aa^2/(2n) in N2", "(4.19)"},
  };
}

EquationCase equation(const std::string& name, const AlgebraSpec& params, int k, double f_value) {
  AlgebraSpec s;
  s.n = params.n;
  s.m = 1;
  s.mu = params.mu;
  s.mass = params.mass;
  const int n = s.n;
  const int dim = n + 1;

  if (name == "heat") {
    s.name = AlgebraName::AG2_I;
    if (s.mu == 0.0) throw std::invalid_argument("heat equation needs mu != 0");
    const double mu = s.mu;
    return make(name, "heat equation", "(4.1)", s,
                [=](const DualJet& p) { return 2.0 * mu * p.du(0, 0) + laplacian(p, 0, n); }, false,
                JetCoordinateId::d1(0, 0));
  }
  if (name == "schrodinger") {
    s.name = AlgebraName::AG2_II;
    if (s.mass == 0.0) throw std::invalid_argument("Schroedinger equation needs m != 0");
    const Scalar c = 2.0 * kI * s.mass;
    return make(name, "Schroedinger equation", "(4.3)", s,
                [=](const DualJet& p) { return c * p.du(0, 0) + laplacian(p, 0, n); }, false,
                JetCoordinateId::d1(0, 0));
  }
  if (name == "born-infeld" || name == "born-infeld-printed") {
    s.name = AlgebraName::AP_BornInfeld;
    const double sign = name == "born-infeld" ? 1.0 : -1.0;
    return make(name, "Born-Infeld equation", "section 2", s,
                [=](const DualJet& p) {
                  return (1.0 - minkowski_square(p, dim)) * box(p, dim) + sign * hess_quadratic(p, dim);
                },
                false, JetCoordinateId::d2(0, 0, 0));
  }
  if (name == "eikonal" || name == "eq35" || name == "eik-sk") {
    s.name = AlgebraName::AP_inf;
    s.ap_inf_instances = params.ap_inf_instances;
    s.ap_inf_seed = params.ap_inf_seed;
    s.ap_inf = params.ap_inf;
    if (name == "eikonal")
      return make(name, "eikonal equation", "(3.1)", s, [=](const DualJet& p) { return minkowski_square(p, dim); },
                  false, JetCoordinateId::d1(0, 0));
    if (name == "eq35") {
      s.ap_inf_dilation = true;
      return make(name, "quasilinear eikonal-type equation", "(3.5), Theorem 8", s,
                  [=](const DualJet& p) { return hess_quadratic(p, dim) - minkowski_square(p, dim) * box(p, dim); },
                  false, std::nullopt);
    }
    // Higher traces are functions of S_1..S_dim.
    if (k < 1 || k > dim) throw std::invalid_argument("eik-sk: trace order must be 1.." + std::to_string(dim));
    const auto theta = tensor("eik", s, 0);
    const Metric g = s.metric();
    return make(name + "(" + std::to_string(k) + ")", "S_k of the eikonal tensor", "(3.4), Theorem 7", s,
                [=](const DualJet& p) { return S(theta(p).mat, g, k); }, false, std::nullopt);
  }
  if (name == "conformal-w") {
    if (n == 1) throw std::invalid_argument("conformal-w needs n != 1");
    s.name = AlgebraName::AC1n;
    s.lambda = 0.0;
    return make(name, "conformally invariant w-equation", "section 2", s,
                [=](const DualJet& p) {
                  const Dual uu = minkowski_square(p, dim);
                  const Dual u = p.u(0);
                  return uu / (1.0 - n) * box(p, dim) - hess_quadratic(p, dim) -
                         uu * uu * (f_value * (1.0 + u * u));
                },
                false, std::nullopt);
  }
  const double square_weight = name.ends_with("-corrected") ? 0.5 / n : 1.0 / n;
  if (name == "eq418" || name == "eq418-corrected") {
    s.name = AlgebraName::AG2_I;
    s.log_variables = true;
    if (s.mu == 0.0) throw std::invalid_argument("eq418 needs mu != 0");
    const double mu = s.mu;
    const Metric g = Metric::euclidean(n);
    return make(name, "real Galilei invariant equation", "(4.18)", s,
                [=](const DualJet& p) {
                  const auto v = gradient(p, 0, 1, n);
                  const Dual n1 = 2.0 * mu * p.du(0, 0) + dot(g, v, v) + laplacian(p, 0, n);
                  return galilei_n2(p, n, mu * mu, 2.0 * mu, square_weight) / (mu * mu) - n1 * n1 * f_value;
                },
                false, JetCoordinateId::d2(0, 0, 0));
  }
  if (name == "eq419" || name == "eq419-corrected") {
    s.name = AlgebraName::AG2_II;
    s.log_variables = true;
    if (s.mass == 0.0) throw std::invalid_argument("eq419 needs m != 0");
    const double m = s.mass;
    const Metric g = Metric::euclidean(n);
    return make(name, "complex Galilei invariant equation", "(4.19)", s,
                [=](const DualJet& p) {
                  const auto v = gradient(p, 0, 1, n);
                  const Dual n1 = 2.0 * kI * m * p.du(0, 0) + dot(g, v, v) + laplacian(p, 0, n);
                  return galilei_n2(p, n, -m * m, 2.0 * kI * m, square_weight) - n1 * n1 * f_value;
                },
                false, JetCoordinateId::d2(0, 0, 0));
  }
  throw std::invalid_argument("unknown equation '" + name + "'");
}

JetPoint to_log_jet(const JetPoint& p) {
  const JetLayout& L = p.layout();
  JetPoint q(L);
  for (int i = 0; i < L.n_base(); ++i) q.set(JetCoordinateId::base(i), p.x(i));
  for (int r = 0; r < L.slots(); ++r) {
    const Scalar u = p.u(r);
    if (u == 0.0) throw EvaluationError("log substitution needs nonzero field values");
    q.set(JetCoordinateId::field(r), std::log(u));
    for (int i = 0; i < L.n_base(); ++i) {
      q.set(JetCoordinateId::d1(r, i), p.du(r, i) / u);
      for (int j = i; j < L.n_base(); ++j)
        q.set(JetCoordinateId::d2(r, i, j), p.ddu(r, i, j) / u - p.du(r, i) * p.du(r, j) / (u * u));
    }
  }
  return q;
}

}  // namespace invforge
