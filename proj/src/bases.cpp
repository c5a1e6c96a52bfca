#include <cmath>
#include <stdexcept>

#include "invforge/invcat.hpp"

namespace invforge {

namespace {

using JetFn = std::function<Dual(const DualJet&)>;
using MatFn = std::function<Mat<Dual>(const DualJet&, int)>;
using VecFn = std::function<Vec<Dual>(const DualJet&, int)>;

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

std::string fld(int r) { return std::to_string(r + 1); }

struct Builder {
  BasisFamily fam;

  void add(std::string label, JetFn fn) { fam.members.emplace_back(std::move(label), std::move(fn)); }
};

std::vector<std::size_t> coordinates(const JetLayout& L, bool with_base) {
  std::vector<std::size_t> c;
  for (std::size_t k = 0; k < L.size(); ++k)
    if (with_base || L.id(k).tag != JetCoordinateId::Tag::base) c.push_back(k);
  return c;
}

Builder start(const AlgebraSpec& spec, std::string key, std::string label, std::string anchor, bool x_dependent,
              std::vector<VectorField> generators) {
  Builder b;
  b.fam.key = std::move(key);
  b.fam.label = std::move(label);
  b.fam.anchor = std::move(anchor);
  b.fam.spec = spec;
  b.fam.generators = std::move(generators);
  const bool galilei = spec.geometry() == Geometry::galilei;
  b.fam.domain = Domain{spec.layout(), !galilei};
  b.fam.dependencies = coordinates(spec.layout(), x_dependent);
  return b;
}

std::vector<VectorField> without_translations(std::vector<VectorField> v) {
  std::erase_if(v, [](const VectorField& f) { return f.label.rfind("P_", 0) == 0; });
  return v;
}

// ---------------------------------------------------------------------------
// Euclid / Minkowski families. N is the number of contracted indices.

struct Flat {
  int N;
  int m;
  Metric g;
  double lambda;
};

Flat flat(const AlgebraSpec& s) { return {s.n_base(), s.m, s.metric(), s.lambda_value()}; }

MatFn hess_of(const Flat& c) {
  return [N = c.N](const DualJet& p, int r) { return hessian(p, r, 0, N); };
}
VecFn grad_of(const Flat& c) {
  return [N = c.N](const DualJet& p, int r) { return gradient(p, r, 0, N); };
}
MatFn tensor_of(const AlgebraSpec& s, const std::string& name) {
  std::vector<TensorBuilder> t;
  for (int r = 0; r < s.m; ++r) t.push_back(tensor(name, s, r));
  return [t](const DualJet& p, int r) { return t[r](p).mat; };
}
VecFn vtensor_of(const AlgebraSpec& s, const std::string& name) {
  std::vector<TensorBuilder> t;
  for (int r = 0; r < s.m; ++r) t.push_back(tensor(name, s, r));
  return [t](const DualJet& p, int r) { return t[r](p).vec; };
}

using Weight = std::function<Dual(const DualJet&, int k)>;

Weight unit_weight() {
  return [](const DualJet&, int) { return Dual(1.0); };
}

struct TraceOptions {
  Weight s_weight = unit_weight();    // multiplies S_k(U^1) and S_jk
  int skip_first_k = 0;               // omit S_k(U^1) for this k (0: none)
  bool cross = true;                  // include S_jk(U^1, U^r), r >= 2
};

// S_k(U^1), k = 1..N, and tr((U^1)^j (U^r)^(k-j)), j = 0..k-1, for r >= 2.
void traces(Builder& b, const Flat& c, const MatFn& U, const std::string& name, const TraceOptions& o) {
  for (int k = 1; k <= c.N; ++k) {
    if (k == o.skip_first_k) continue;
    b.add("S_" + std::to_string(k) + "(" + name + ")", [=, g = c.g](const DualJet& p) {
      return S(U(p, 0), g, k) * o.s_weight(p, k);
    });
  }
  if (!o.cross) return;
  for (int r = 1; r < c.m; ++r)
    for (int k = 1; k <= c.N; ++k)
      for (int j = 0; j < k; ++j)
        b.add("S_" + std::to_string(j) + std::to_string(k) + "(" + name + "^1," + name + "^" + fld(r) + ")",
              [=, g = c.g](const DualJet& p) { return Sjk(U(p, 0), U(p, r), g, j, k) * o.s_weight(p, k); });
}

// R_k(v^r, U^1) for the given fields and orders.
void quadratics(Builder& b, const Flat& c, const VecFn& V, const MatFn& U, const std::string& vname,
                const std::string& mname, int r_from, int k_from, int k_to, const Weight& w) {
  for (int r = r_from; r < c.m; ++r)
    for (int k = k_from; k <= k_to; ++k)
      b.add("R_" + std::to_string(k) + "(" + vname + "^" + fld(r) + "," + mname + "^1)",
            [=, g = c.g](const DualJet& p) { return R(V(p, r), U(p, 0), g, k) * w(p, k); });
}

void field_values(Builder& b, const Flat& c, bool ratios) {
  for (int r = ratios ? 1 : 0; r < c.m; ++r) {
    if (ratios)
      b.add("u^" + fld(r) + "/u^1", [r](const DualJet& p) { return p.u(r) / p.u(0); });
    else
      b.add("u^" + fld(r), [r](const DualJet& p) { return p.u(r); });
  }
}

int tri(int N) { return N * (N + 1) / 2; }

// Absolute invariants of the rotations (with translations when present).
BasisFamily rotation_family(const AlgebraSpec& s, bool with_x, std::string key, std::string label,
                            std::string anchor, std::vector<VectorField> gens) {
  const Flat c = flat(s);
  auto b = start(s, std::move(key), std::move(label), std::move(anchor), with_x, std::move(gens));
  field_values(b, c, false);
  traces(b, c, hess_of(c), "u", {});
  quadratics(b, c, grad_of(c), hess_of(c), "du", "u", 0, 1, c.N, unit_weight());
  int expected = 2 * c.m * c.N + c.m + (c.m - 1) * c.N * (c.N - 1) / 2;
  if (with_x) {
    auto x = [N = c.N](const DualJet& p, int) { return positions(p, 0, N); };
    Flat one = c;
    one.m = 1;
    quadratics(b, one, x, hess_of(c), "x", "u", 0, 1, c.N, unit_weight());
    expected += c.N;
  }
  b.fam.expected_count = expected;
  return b.fam;
}

// Dilation-invariant combinations (lambda != 0 uses powers of u^1, lambda = 0
// uses the trace of u^1_ab).
BasisFamily dilation_family(const AlgebraSpec& s, bool with_x, std::string key, std::string label,
                            std::string anchor, std::vector<VectorField> gens) {
  const Flat c = flat(s);
  auto b = start(s, std::move(key), std::move(label), std::move(anchor), with_x, std::move(gens));
  const auto U = hess_of(c);
  const auto V = grad_of(c);
  const double L = c.lambda;
  auto x = [N = c.N](const DualJet& p, int) { return positions(p, 0, N); };
  Flat one = c;
  one.m = 1;
  int expected = 0;
  if (L != 0.0) {
    field_values(b, c, true);
    TraceOptions o;
    o.s_weight = [L](const DualJet& p, int k) { return pow(p.u(0), -k * (1.0 - 2.0 / L)); };
    traces(b, c, U, "u", o);
    quadratics(b, c, V, U, "du", "u", 0, 1, c.N,
               [L](const DualJet& p, int k) { return pow(p.u(0), -(k * (1.0 - 2.0 / L) + 1.0)); });
    expected = (c.m - 1) + c.N + (c.m - 1) * tri(c.N) + c.m * c.N;
    if (with_x) {
      quadratics(b, one, x, U, "x", "u", 0, 1, c.N,
                 [L](const DualJet& p, int k) { return pow(p.u(0), (2.0 / L) * (k - 2) - k + 1.0); });
      expected += c.N;
    }
  } else {
    field_values(b, c, false);
    auto tr = [g = c.g, U](const DualJet& p) { return S(U(p, 0), g, 1); };
    TraceOptions o;
    o.s_weight = [tr](const DualJet& p, int k) { return pow(tr(p), -k); };
    o.skip_first_k = 1;
    traces(b, c, U, "u", o);
    quadratics(b, c, V, U, "du", "u", 0, 1, c.N, [tr](const DualJet& p, int k) { return pow(tr(p), -k); });
    expected = c.m + c.m * c.N + (c.N - 1) + (c.m - 1) * tri(c.N);
    if (with_x) {
      quadratics(b, one, x, U, "x", "u", 0, 1, c.N, [tr](const DualJet& p, int k) { return pow(tr(p), 2 - k); });
      expected += c.N;
    }
  }
  b.fam.expected_count = expected;
  return b.fam;
}

// Conformal families built from the covariant tensors theta, theta1 and w.
BasisFamily conformal_family(const AlgebraSpec& s, bool with_x, bool corrected, std::string key,
                             std::string label, std::string anchor, std::vector<VectorField> gens) {
  const Flat c = flat(s);
  auto b = start(s, std::move(key), std::move(label), std::move(anchor), with_x, std::move(gens));
  const double L = c.lambda;
  auto x = [N = c.N](const DualJet& p, int) { return positions(p, 0, N); };
  auto x2 = [N = c.N, g = c.g](const DualJet& p) {
    const auto v = positions(p, 0, N);
    return dot(g, v, v);
  };
  Flat one = c;
  one.m = 1;
  int expected = 0;
  if (L != 0.0) {
    const auto T = tensor_of(s, "theta");
    TraceOptions o;
    o.s_weight = [L](const DualJet& p, int k) { return pow(p.u(0), k * (2.0 / L - 1.0)); };
    traces(b, c, T, "theta", o);
    field_values(b, c, true);
    const double shift = corrected ? 1.0 : -1.0;
    quadratics(b, c, vtensor_of(s, "theta1"), T, "theta", "theta", 1, 1, c.N,
               [L, shift](const DualJet& p, int k) { return pow(p.u(0), k * (2.0 / L - 1.0) + shift); });
    expected = c.N + (c.m - 1) * (1 + tri(c.N) + c.N);
    if (with_x) {
      quadratics(b, one, x, T, "x", "theta", 0, 2, c.N + 1, [L, x2](const DualJet& p, int k) {
        return 1.0 / (x2(p) * pow(p.u(0), (k - 1) * (1.0 - 2.0 / L)));
      });
      expected += c.N;
    }
  } else {
    const auto W = tensor_of(s, "w");
    auto gg = [N = c.N, g = c.g](const DualJet& p) {
      const auto v = gradient(p, 0, 0, N);
      return dot(g, v, v);
    };
    field_values(b, c, false);
    TraceOptions o;
    o.s_weight = [gg](const DualJet& p, int k) { return pow(gg(p), -2 * k); };
    o.skip_first_k = c.N;
    traces(b, c, W, "w", o);
    quadratics(b, c, grad_of(c), W, "du", "w", 1, 1, c.N,
               [gg](const DualJet& p, int k) { return pow(gg(p), 1 - 2 * k); });
    expected = c.m + (c.N - 1) + (c.m - 1) * (tri(c.N) + c.N);
    if (with_x) {
      auto trw = [W, g = c.g](const DualJet& p) { return S(W(p, 0), g, 1); };
      quadratics(b, one, x, W, "x", "w", 0, 2, c.N + 1,
                 [x2, trw](const DualJet& p, int k) { return 1.0 / (x2(p) * pow(trw(p), k - 1)); });
      expected += c.N;
    }
  }
  b.fam.expected_count = expected;
  return b.fam;
}

// ---------------------------------------------------------------------------
// Galilei families on phi = log u jets; base index 0 is t.

struct Gal {
  int n;
  Metric g;
  double mu;
  double lambda;
};

Dual phi_t(const DualJet& p, int r) { return p.du(r, 0); }
Dual phi_tt(const DualJet& p, int r) { return p.ddu(r, 0, 0); }

Dual lap(const DualJet& p, int r, int n) {
  Dual s;
  for (int a = 1; a <= n; ++a) s += p.ddu(r, a, a);
  return s;
}

// Sum over l of coefficient(l) * R_l(v, M) (phi_aa)^(power(l)); R_0 = vᵀ M⁻¹ v.
Dual hat_sum(const Vec<Dual>& v, const Mat<Dual>& m, const Metric& g, const Dual& trace, int k,
             const std::function<double(int)>& coeff, const std::function<int(int)>& power) {
  Dual s;
  for (int l = 0; l <= k; ++l) s += coeff(l) * R(v, m, g, l) * pow(trace, power(l));
  return s;
}

Dual s_hat(const Mat<Dual>& m, const Metric& g, const Dual& trace, int n, int k) {
  Dual s;
  for (int l = 0; l <= k; ++l) {
    const double c = std::pow(-n, l) * factorial(k - 1) * (k + 1) / (factorial(l + 1) * factorial(k - l));
    const Dual sl = l == 0 ? Dual(static_cast<double>(n)) : S(m, g, l);
    s += c * sl * pow(trace, k - l);
  }
  return s;
}

// tr(M) I - n M, unchanged when M shifts by a multiple of the identity.
Mat<Dual> deviator(const Mat<Dual>& m, int n) {
  const Dual tr = trace(m);
  Mat<Dual> d(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) d(i, j) = (i == j ? tr : Dual()) - static_cast<double>(n) * m(i, j);
  return d;
}

BasisFamily galilei_real_family(const AlgebraSpec& spec, const std::string& variant) {
  AlgebraSpec s = spec;
  s.log_variables = true;
  const Gal c{s.n, s.metric(), s.mu, s.lambda_value()};
  const int n = c.n;
  const auto gens = catalog(s);
  const bool nonzero = c.mu != 0.0;
  const std::string mu_txt = nonzero ? "mu != 0" : "mu = 0";
  const std::string alg = to_string(s.name);

  auto grad = [n](const DualJet& p) { return gradient(p, 0, 1, n); };
  auto hess = [n](const DualJet& p) { return hessian(p, 0, 1, n); };
  auto tgrad = [n](const DualJet& p) { return time_gradient(p, 0, 1, n); };
  const auto gal_theta = tensor("gal-theta", s, 0);

  if (nonzero) {
    const double mu = c.mu;
    JetFn M1 = [=](const DualJet& p) { return 2.0 * mu * phi_t(p, 0) + dot(c.g, grad(p), grad(p)); };
    JetFn M2 = [=](const DualJet& p) {
      const auto v = grad(p);
      return mu * mu * phi_tt(p, 0) + 2.0 * mu * dot(c.g, v, tgrad(p)) + R(v, hess(p), c.g, 2);
    };
    auto Rk = [=](const DualJet& p, int k) { return R(gal_theta(p).vec, hess(p), c.g, k); };
    auto Sk = [=](const DualJet& p, int k) { return S(hess(p), c.g, k); };
    if (s.name == AlgebraName::AG_I) {
      auto b = start(s, alg, "AG(1,n) basis, mu != 0", "Theorem 9, (4.12)", false, gens);
      b.add("M1", M1);
      b.add("M2", M2);
      for (int k = 1; k <= n; ++k) b.add("R_" + std::to_string(k), [=](const DualJet& p) { return Rk(p, k); });
      for (int k = 1; k <= n; ++k) b.add("S_" + std::to_string(k), [=](const DualJet& p) { return Sk(p, k); });
      b.fam.expected_count = 2 * n + 2;
      return b.fam;
    }
    if (s.name == AlgebraName::AG1_I) {
      auto b = start(s, alg, "AG1(1,n) basis, mu != 0", "Theorem 9, (4.13)", false, gens);
      b.add("M2/M1^2", [=](const DualJet& p) { return M2(p) / pow(M1(p), 2); });
      for (int k = 1; k <= n; ++k)
        b.add("R_" + std::to_string(k) + "/M1^" + std::to_string(k + 2),
              [=](const DualJet& p) { return Rk(p, k) / pow(M1(p), k + 2); });
      for (int k = 1; k <= n; ++k)
        b.add("S_" + std::to_string(k) + "/M1^" + std::to_string(k),
              [=](const DualJet& p) { return Sk(p, k) / pow(M1(p), k); });
      b.fam.expected_count = 2 * n + 1;
      return b.fam;
    }
    // AG2_I
    const bool k_minus_l = variant == "k-l";
    const bool fixed = variant == "corrected";
    if (!variant.empty() && variant != "printed" && !k_minus_l && !fixed)
      throw std::invalid_argument("AG2_I variants are 'printed', 'k-l' and 'corrected'");
    std::string how = "as printed";
    if (k_minus_l) how = "exponent k-l in R-hat";
    if (fixed) how = "traces of phi_aa I - n phi_ab, phi_aa^2/(2n) in N2";
    auto b = start(s, alg + (variant.empty() || variant == "printed" ? "" : ":" + variant),
                   "AG2(1,n) basis, mu != 0, " + how, "Theorem 9, (4.14)-(4.15)", false, gens);
    JetFn N1 = [=](const DualJet& p) { return M1(p) + lap(p, 0, n); };
    const double square_weight = fixed ? 0.5 / n : 1.0 / n;
    JetFn N2 = [=](const DualJet& p) {
      const auto v = grad(p);
      const Dual tr = lap(p, 0, n);
      return mu * mu * phi_tt(p, 0) + 2.0 * mu * (phi_t(p, 0) * tr / n + dot(c.g, v, tgrad(p))) +
             R(v, hess(p), c.g, 2) + dot(c.g, v, v) * tr / n + square_weight * tr * tr;
    };
    b.add("N2/N1^2", [=](const DualJet& p) { return N2(p) / pow(N1(p), 2); });
    for (int k = 1; k <= n; ++k)
      b.add("Rhat_" + std::to_string(k) + "/N1^" + std::to_string(k + 2), [=](const DualJet& p) {
        if (fixed) return R(gal_theta(p).vec, deviator(hess(p), n), c.g, k) / pow(N1(p), k + 2);
        auto coeff = [n, k](int l) { return std::pow(-n, l) * binomial(k, l); };
        auto power = [k, k_minus_l](int l) { return k_minus_l ? k - l : k - 1; };
        return hat_sum(gal_theta(p).vec, hess(p), c.g, lap(p, 0, n), k, coeff, power) / pow(N1(p), k + 2);
      });
    for (int k = 2; k <= n; ++k)
      b.add("Shat_" + std::to_string(k) + "/N1^" + std::to_string(k), [=](const DualJet& p) {
        const Dual sh = fixed ? S(deviator(hess(p), n), c.g, k) : s_hat(hess(p), c.g, lap(p, 0, n), n, k);
        return sh / pow(N1(p), k);
      });
    b.fam.expected_count = 2 * n;
    return b.fam;
  }

  // mu = 0: theta from phi_ab theta_b = phi_at.
  JetFn M1 = [=](const DualJet& p) { return phi_t(p, 0) - dot(c.g, grad(p), implicit_theta(p, 0, n)); };
  JetFn M2 = [=](const DualJet& p) { return phi_tt(p, 0) - dot(c.g, tgrad(p), implicit_theta(p, 0, n)); };
  auto Rk = [=](const DualJet& p, int k) { return R(grad(p), hess(p), c.g, k); };
  auto Sk = [=](const DualJet& p, int k) { return S(hess(p), c.g, k); };
  auto bordered = [=](const DualJet& p, bool second) {
    Mat<Dual> m(n + 1, n + 1);
    const auto v = grad(p);
    const auto vt = tgrad(p);
    const auto h = hess(p);
    m(0, 0) = second ? phi_tt(p, 0) : phi_t(p, 0);
    for (int a = 0; a < n; ++a) {
      m(0, a + 1) = second ? vt[a] : v[a];
      m(a + 1, 0) = vt[a];
      for (int b2 = 0; b2 < n; ++b2) m(a + 1, b2 + 1) = h(a, b2);
    }
    return determinant(m);
  };
  const bool note3 = variant == "note3";
  if (!variant.empty() && !note3) throw std::invalid_argument("Galilei mu = 0 variant must be 'note3'");
  if (note3 && s.name == AlgebraName::AG2_I)
    throw std::invalid_argument("the determinant invariants replace M1, M2 for AG_I and AG1_I only");
  JetFn A1 = note3 ? JetFn([=](const DualJet& p) { return bordered(p, false); }) : M1;
  JetFn A2 = note3 ? JetFn([=](const DualJet& p) { return bordered(p, true); }) : M2;
  const std::string n1 = note3 ? "Mhat1" : "M1";
  const std::string n2 = note3 ? "Mhat2" : "M2";
  const std::string key_suffix = note3 ? ":note3" : "";
  const std::string anchor = note3 ? "Theorem 10, Note 3" : "Theorem 10, (4.16)-(4.17)";
  if (s.name == AlgebraName::AG_I) {
    auto b = start(s, alg + key_suffix, "AG(1,n) basis, mu = 0", anchor, false, gens);
    b.add(n1, A1);
    b.add(n2, A2);
    for (int k = 1; k <= n; ++k) b.add("R_" + std::to_string(k), [=](const DualJet& p) { return Rk(p, k); });
    for (int k = 1; k <= n; ++k) b.add("S_" + std::to_string(k), [=](const DualJet& p) { return Sk(p, k); });
    b.fam.expected_count = 2 * n + 2;
    return b.fam;
  }
  if (s.name == AlgebraName::AG1_I) {
    auto b = start(s, alg + key_suffix, "AG1(1,n) basis, mu = 0", anchor, false, gens);
    b.add(n1 + "^2/" + n2, [=](const DualJet& p) { return pow(A1(p), 2) / A2(p); });
    for (int k = 1; k <= n; ++k)
      b.add("R_" + std::to_string(k) + "/" + n1 + "^" + std::to_string(k),
            [=](const DualJet& p) { return Rk(p, k) / pow(A1(p), k); });
    for (int k = 1; k <= n; ++k)
      b.add("S_" + std::to_string(k) + "/" + n1 + "^" + std::to_string(k),
            [=](const DualJet& p) { return Sk(p, k) / pow(A1(p), k); });
    b.fam.expected_count = 2 * n + 1;
    return b.fam;
  }
  auto b = start(s, alg, "AG2(1,n) basis, mu = 0", "Theorem 10", false, gens);
  const double lambda = c.lambda;
  JetFn M = [=](const DualJet& p) {
    const auto v = grad(p);
    return pow(M1(p), 2) + M2(p) * (lambda + R(v, hess(p), c.g, 0));
  };
  for (int k = 1; k <= n; ++k)
    b.add("R_" + std::to_string(k) + "/M^(k/2)", [=](const DualJet& p) { return Rk(p, k) / pow(M(p), k / 2.0); });
  for (int k = 1; k <= n; ++k)
    b.add("S_" + std::to_string(k) + "/M^(k/2)", [=](const DualJet& p) { return Sk(p, k) / pow(M(p), k / 2.0); });
  b.fam.expected_count = 2 * n;
  return b.fam;
}

// Complex Galilei families; slot 0 is phi, slot 1 its conjugate. The
// "corrected" variant uses theta_a = i m phi_at + phi_b phi_ab, exponents
// balanced against the weight of I, and the deviator traces.
BasisFamily galilei_complex_family(const AlgebraSpec& spec, const std::string& variant) {
  const bool fixed = variant == "corrected";
  if (!variant.empty() && !fixed) throw std::invalid_argument("complex Galilei families have only 'corrected'");
  AlgebraSpec s = spec;
  s.log_variables = true;
  const int n = s.n;
  const Metric g = s.metric();
  const double mass = s.mass;
  const Scalar im = kI * mass;
  const auto gens = catalog(s);
  const std::string alg = to_string(s.name);
  const std::string key = alg + (fixed ? ":corrected" : "");
  const std::string note = fixed ? ", corrected" : "";

  auto grad = [n](const DualJet& p, int r) { return gradient(p, r, 1, n); };
  auto hess = [n](const DualJet& p, int r) { return hessian(p, r, 1, n); };
  auto tgrad = [n](const DualJet& p, int r) { return time_gradient(p, r, 1, n); };
  auto sum_fields = [](const DualJet& p) { return p.u(0) + p.u(1); };
  auto add = [](Vec<Dual> a, const Vec<Dual>& b, double sign) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += sign * b[i];
    return a;
  };
  auto Sjk_count = [n] {
    int c = 0;
    for (int k = 1; k <= n; ++k) c += k + 1;
    return c;
  };
  // Adds S_jk(phi_ab, phi*_ab), j = 0..k, times weight(p, k).
  auto add_sjk = [=](Builder& b, const std::string& suffix, const Weight& w) {
    for (int k = 1; k <= n; ++k)
      for (int j = 0; j <= k; ++j)
        b.add("S_" + std::to_string(j) + std::to_string(k) + suffix,
              [=](const DualJet& p) { return Sjk(hess(p, 0), hess(p, 1), g, j, k) * w(p, k); });
  };

  if (mass != 0.0) {
    const auto th = tensor("cgal-theta", s, 0);
    const auto thc = tensor("cgal-theta", s, 1);
    // mu phi_at + phi_ab phi_b with mu = i m on phi and -i m on phi*.
    auto theta_fixed = [=](const DualJet& p, int r) {
      auto t = hess(p, r) * grad(p, r);
      const auto vt = tgrad(p, r);
      const Scalar mu = r == 0 ? im : -im;
      for (int i = 0; i < n; ++i) t[i] += mu * vt[i];
      return t;
    };
    auto vec_l = [=](const DualJet& p, int l) {
      switch (l) {
        case 1: return fixed ? theta_fixed(p, 0) : th(p).vec;
        case 2: return fixed ? theta_fixed(p, 1) : thc(p).vec;
        default: return add(grad(p, 0), grad(p, 1), 1.0);
      }
    };
    auto Rl = [=](const DualJet& p, int l, int k) { return R(vec_l(p, l), hess(p, 0), g, k); };
    ScalarJetFunction M1("M1", [=](const DualJet& p) {
      return 2.0 * im * phi_t(p, 0) + dot(g, grad(p, 0), grad(p, 0));
    });
    ScalarJetFunction M2("M2", [=](const DualJet& p) {
      const auto v = grad(p, 0);
      return -mass * mass * phi_tt(p, 0) + 2.0 * im * dot(g, v, tgrad(p, 0)) + R(v, hess(p, 0), g, 2);
    });
    const auto M1c = conjugate(M1);
    const auto M2c = conjugate(M2);
    if (s.name == AlgebraName::AG_II) {
      auto b = start(s, key, "AG^II(1,n) basis, m != 0" + note, "Theorem 11 (1)", false, gens);
      b.add("phi+phi*", sum_fields);
      b.add("M1", M1);
      b.add("M1*", M1c);
      b.add("M2", M2);
      b.add("M2*", M2c);
      add_sjk(b, "", unit_weight());
      for (int l = 1; l <= 3; ++l)
        for (int k = 1; k <= n; ++k)
          b.add("R^" + std::to_string(l) + "_" + std::to_string(k), [=](const DualJet& p) { return Rl(p, l, k); });
      b.fam.expected_count = 5 + Sjk_count() + 3 * n;
      return b.fam;
    }
    if (s.name == AlgebraName::AG1_II) {
      auto b = start(s, key, "AG1^II(1,n) basis, m != 0" + note, "Theorem 11 (2)", false, gens);
      const double lambda = s.lambda_value();
      b.add("M1*/M1", [=](const DualJet& p) { return M1c(p) / M1(p); });
      b.add("M2/M1^2", [=](const DualJet& p) { return M2(p) / pow(M1(p), 2); });
      b.add("M2*/M1^2", [=](const DualJet& p) { return M2c(p) / pow(M1(p), 2); });
      for (int l = 1; l <= 3; ++l)
        for (int k = 1; k <= n; ++k) {
          const int e = l < 3 ? k + 2 : k;
          b.add("R^" + std::to_string(l) + "_" + std::to_string(k) + "/M1^" + std::to_string(e),
                [=](const DualJet& p) { return Rl(p, l, k) / pow(M1(p), e); });
        }
      add_sjk(b, "/M1^k", [=](const DualJet& p, int k) { return pow(M1(p), -k); });
      if (lambda == 0.0) {
        b.add("phi+phi*", sum_fields);
      } else {
        const double c = (fixed ? 1.0 : 2.0) / lambda;
        b.add(fixed ? "M1 exp((1/lambda)(phi+phi*))" : "M1 exp((2/lambda)(phi+phi*))",
              [=](const DualJet& p) { return M1(p) * exp(c * sum_fields(p)); });
      }
      b.fam.expected_count = 3 + 3 * n + Sjk_count() + 1;
      return b.fam;
    }
    // AG2_II, m != 0
    auto b = start(s, key, "AG2^II(1,n) basis, m != 0" + note, "Theorem 11 (3)", false, gens);
    ScalarJetFunction N1("N1", [=](const DualJet& p) {
      return 2.0 * im * phi_t(p, 0) + lap(p, 0, n) + dot(g, grad(p, 0), grad(p, 0));
    });
    const double square_weight = fixed ? 0.5 / n : 1.0 / n;
    ScalarJetFunction N2("N2", [=](const DualJet& p) {
      const auto v = grad(p, 0);
      const Dual tr = lap(p, 0, n);
      return -mass * mass * phi_tt(p, 0) + 2.0 * im * (dot(g, v, tgrad(p, 0)) + phi_t(p, 0) * tr / n) +
             R(v, hess(p, 0), g, 2) + dot(g, v, v) * tr / n + square_weight * tr * tr;
    });
    const auto N1c = conjugate(N1);
    const auto N2c = conjugate(N2);
    if (fixed) {
      b.add("N1 exp(-(2/n)(phi+phi*))", [=](const DualJet& p) { return N1(p) * exp((-2.0 / n) * sum_fields(p)); });
      b.add("N1/N1*", [=](const DualJet& p) { return N1(p) / N1c(p); });
      b.add("N2/N1*^2", [=](const DualJet& p) { return N2(p) / pow(N1c(p), 2); });
      b.add("N2*/N1*^2", [=](const DualJet& p) { return N2c(p) / pow(N1c(p), 2); });
      for (int l = 1; l <= 3; ++l)
        for (int k = 1; k <= n; ++k) {
          const int e = l < 3 ? k + 2 : k;
          b.add("Rhat^" + std::to_string(l) + "_" + std::to_string(k) + "/N1^" + std::to_string(e),
                [=](const DualJet& p) { return R(vec_l(p, l), deviator(hess(p, 0), n), g, k) / pow(N1(p), e); });
        }
      b.add("(phi_aa+phi*_aa)/N1", [=](const DualJet& p) { return (lap(p, 0, n) + lap(p, 1, n)) / N1(p); });
      for (int k = 2; k <= n; ++k)
        for (int j = 0; j <= k; ++j)
          b.add("Shat_" + std::to_string(j) + std::to_string(k) + "/N1^" + std::to_string(k), [=](const DualJet& p) {
            return Sjk(deviator(hess(p, 0), n), deviator(hess(p, 1), n), g, j, k) / pow(N1(p), k);
          });
      b.fam.expected_count = 4 + 3 * n + Sjk_count() - 1;
      return b.fam;
    }
    b.add("N1 exp(-(4/n)(phi+phi*))", [=](const DualJet& p) { return N1(p) * exp((-4.0 / n) * sum_fields(p)); });
    b.add("N1/N1*", [=](const DualJet& p) { return N1(p) / N1c(p); });
    b.add("N2/N1*", [=](const DualJet& p) { return N2(p) / N1c(p); });
    b.add("N2*/N1*", [=](const DualJet& p) { return N2c(p) / N1c(p); });
    for (int l = 1; l <= 3; ++l)
      for (int k = 1; k <= n; ++k) {
        const int e = l < 3 ? k + 2 : k;
        b.add("Rhat^" + std::to_string(l) + "_" + std::to_string(k) + "/N1^" + std::to_string(e),
              [=](const DualJet& p) {
                auto coeff = [n, k](int j) { return std::pow(-n, j) * binomial(k, j); };
                auto power = [k](int j) { return k - j; };
                return hat_sum(vec_l(p, l), hess(p, 0), g, lap(p, 0, n), k, coeff, power) / pow(N1(p), e);
              });
      }
    for (int k = 1; k <= n; ++k)
      for (int j = 0; j <= k; ++j)
        b.add("Shat_" + std::to_string(j) + std::to_string(k) + "/N1^" + std::to_string(k), [=](const DualJet& p) {
          const auto A = hess(p, 0);
          const auto B = hess(p, 1);
          const Dual ta = lap(p, 0, n);
          const Dual tb = lap(p, 1, n);
          Dual sum;
          for (int l = 0; l <= k; ++l)
            for (int r = 0; r <= j; ++r) {
              const double c = std::pow(-n, l) * binomial(j, r) * binomial(k, l + 1 - r);
              if (c == 0.0 || r > l) continue;
              const Dual srl = l == 0 ? Dual(static_cast<double>(n)) : Sjk(A, B, g, r, l);
              sum += c * srl * pow(ta, j - r) * pow(tb, k - l - j + r);
            }
          sum += static_cast<double>(k) * pow(ta, j) * pow(tb, k - j - 1);
          return sum / pow(N1(p), k);
        });
    b.fam.expected_count = 4 + 3 * n + Sjk_count();
    return b.fam;
  }

  if (s.name != AlgebraName::AG2_II)
    throw std::invalid_argument(alg + " with m = 0 has no printed basis");
  const double lambda = s.lambda_value();
  auto theta = [n](const DualJet& p, int r) { return implicit_theta(p, r, n); };
  auto rinv = [=](const DualJet& p, int r) { return inverse(hess(p, r)); };
  // phi_t - theta_a phi_a
  auto lead = [=](const DualJet& p, int r) { return phi_t(p, r) - dot(g, theta(p, r), grad(p, r)); };
  ScalarJetFunction N1("N1", [=](const DualJet& p) {
    const auto v = grad(p, 0);
    const auto t = theta(p, 0);
    return pow(lead(p, 0), 2) + (phi_tt(p, 0) - dot(g, t, tgrad(p, 0))) * (lambda + R(v, hess(p, 0), g, 0));
  });
  const auto N1c = conjugate(N1);
  JetFn N2 = [=](const DualJet& p) {
    return lead(p, 0) * R(grad(p, 1), hess(p, 1), g, 0) - lead(p, 1) * R(grad(p, 0), hess(p, 0), g, 0);
  };
  JetFn N3 = [=](const DualJet& p) {
    const auto v = grad(p, 0);
    const auto vc = grad(p, 1);
    Mat<Dual> a = hess(p, 0);
    Vec<Dual> rhs = tgrad(p, 0);
    for (int i = 0; i < n; ++i) {
      rhs[i] = lambda * rhs[i] + v[i] * phi_t(p, 0);
      for (int j = 0; j < n; ++j) a(i, j) = lambda * a(i, j) + v[i] * v[j];
    }
    const auto tau = solve(a, rhs);
    return (phi_t(p, 0) - phi_t(p, 1)) - dot(g, tau, add(v, vc, -1.0));
  };
  // (phi_t - theta.phi)(r* phi* - r phi) - (lambda + phi r phi)(theta - theta*)
  auto rho_fixed = [=](const DualJet& p) {
    const auto w = add(rinv(p, 1) * grad(p, 1), rinv(p, 0) * grad(p, 0), -1.0);
    const Dual q = lambda + R(grad(p, 0), hess(p, 0), g, 0);
    const auto dth = add(theta(p, 0), theta(p, 1), -1.0);
    const Dual l0 = lead(p, 0);
    Vec<Dual> rho(w.size());
    for (int a = 0; a < n; ++a) rho[a] = l0 * w[a] - q * dth[a];
    return rho;
  };
  auto vec_l = [=](const DualJet& p, int l) -> Vec<Dual> {
    switch (l) {
      case 1: return grad(p, 0);
      case 2: return grad(p, 1);
      case 3: return fixed ? rho_fixed(p) : add(theta(p, 0), theta(p, 1), -1.0);
      default: {
        if (fixed) return rho_fixed(p);
        const auto v = grad(p, 0);
        const auto vc = grad(p, 1);
        const auto r0 = rinv(p, 0);
        const auto r1 = rinv(p, 1);
        const auto h = hess(p, 0);
        const auto dth = add(theta(p, 0), theta(p, 1), -1.0);
        const Dual l0 = lead(p, 0);
        Vec<Dual> rho(v.size());
        for (int a = 0; a < n; ++a) {
          Dual c1, c2;
          for (int c = 0; c < n; ++c) c1 += vc[c] * r0(a, c) - v[c] * r1(a, c);
          for (int b2 = 0; b2 < n; ++b2)
            for (int d = 0; d < n; ++d) c2 += v[b2] * h(a, d) * r0(b2, d);
          rho[a] = l0 * c1 - c2 * dth[a];
        }
        return rho;
      }
    }
  };
  auto Rl = [=](const DualJet& p, int l, int k) { return R(vec_l(p, l), hess(p, 0), g, k); };
  auto add_squares = [=](Builder& b) {
    for (int k = 1; k <= n; ++k)
      for (int j = 0; j <= k; ++j)
        b.add("(S_" + std::to_string(j) + std::to_string(k) + ")^2/N1^" + std::to_string(k),
              [=](const DualJet& p) { return pow(Sjk(hess(p, 0), hess(p, 1), g, j, k), 2) / pow(N1(p), k); });
  };
  if (lambda == 0.0) {
    auto b = start(s, key, "AG2^II(1,n) basis, m = 0, lambda = 0" + note, "Theorem 11, m = 0 (1)", false, gens);
    b.add("phi+phi*", sum_fields);
    if (fixed) {
      b.add("N1/N2^2", [=](const DualJet& p) { return N1(p) / pow(N2(p), 2); });
      b.add("N1*/N2^2", [=](const DualJet& p) { return N1c(p) / pow(N2(p), 2); });
    } else {
      b.add("N1^2/N2^2", [=](const DualJet& p) { return pow(N1(p), 2) / pow(N2(p), 2); });
      b.add("N1*^2/N2", [=](const DualJet& p) { return pow(N1c(p), 2) / N2(p); });
    }
    add_squares(b);
    const int shift = fixed ? 0 : 1;
    for (int l : {1, 2, 4})
      for (int k = 1; k <= n; ++k)
        b.add("(R^" + std::to_string(l) + "_" + std::to_string(k) + ")^2 N1^-" + std::to_string(k + shift),
              [=](const DualJet& p) { return pow(Rl(p, l, k), 2) * pow(N1(p), -k - shift); });
    b.fam.expected_count = 3 + Sjk_count() + 3 * n;
    return b.fam;
  }
  auto b = start(s, key, "AG2^II(1,n) basis, m = 0, lambda != 0" + note, "Theorem 11, m = 0 (2)", false, gens);
  const double c1 = (fixed ? 2.0 : 4.0) / lambda;
  const double c3 = (fixed ? 1.0 : 3.0) / lambda;
  const std::string e1 = fixed ? "2" : "4";
  const std::string e3 = fixed ? "1" : "3";
  b.add("N1 exp((" + e1 + "/lambda)(phi+phi*))", [=](const DualJet& p) { return N1(p) * exp(c1 * sum_fields(p)); });
  b.add("N1*/N1", [=](const DualJet& p) { return N1c(p) / N1(p); });
  b.add("N3 exp((" + e3 + "/lambda)(phi+phi*))", [=](const DualJet& p) { return N3(p) * exp(c3 * sum_fields(p)); });
  for (int l = 1; l <= 3; ++l)
    for (int k = 1; k <= n; ++k)
      b.add("(R^" + std::to_string(l) + "_" + std::to_string(k) + ")^2/N1^" + std::to_string(k),
            [=](const DualJet& p) { return pow(Rl(p, l, k), 2) / pow(N1(p), k); });
  add_squares(b);
  b.fam.expected_count = 3 + 3 * n + Sjk_count();
  return b.fam;
}

}  // namespace

BasisFamily basis(const AlgebraSpec& spec, const std::string& variant) {
  spec.validate();
  const std::string alg = to_string(spec.name);
  const bool no_trans = variant == "no-translations";
  const bool corrected = variant == "corrected";
  auto lam_txt = [&] { return spec.lambda_value() != 0.0 ? std::string("lambda != 0") : std::string("lambda = 0"); };
  auto check_variant = [&](std::initializer_list<const char*> allowed) {
    if (variant.empty()) return;
    for (const char* a : allowed)
      if (variant == a) return;
    throw std::invalid_argument("basis " + alg + " has no variant '" + variant + "'");
  };
  switch (spec.name) {
    case AlgebraName::AO:
      check_variant({});
      return rotation_family(spec, true, alg, "AO(n) m-field basis", "Theorem 5", catalog(spec));
    case AlgebraName::AE:
      check_variant({});
      return rotation_family(spec, false, alg, "AE(n) m-field basis",
                             spec.m == 1 ? "Theorem 1, (1.2)" : "Theorem 2, (1.3)", catalog(spec));
    case AlgebraName::AP:
      check_variant({});
      return rotation_family(spec, false, alg, "AP(1,n) m-field basis", "Theorem 6", catalog(spec));
    case AlgebraName::AE1: {
      check_variant({"no-translations"});
      if (no_trans)
        return dilation_family(spec, true, alg + ":no-translations", "<J_ab, D> basis, " + lam_txt(), "Theorem 5",
                               without_translations(catalog(spec)));
      const std::string anchor = spec.m == 1 ? (spec.lambda_value() != 0.0 ? "Theorem 3, (1.20)" : "Theorem 3, (1.21)")
                                             : "Theorem 4";
      return dilation_family(spec, false, alg, "AE1(n) basis, " + lam_txt(), anchor, catalog(spec));
    }
    case AlgebraName::APtilde:
      check_variant({});
      return dilation_family(spec, false, alg, "extended Poincare basis, " + lam_txt(), "Theorem 6, (2.3)",
                             catalog(spec));
    case AlgebraName::AC:
    case AlgebraName::AC1n: {
      check_variant({"no-translations", "corrected"});
      const bool euclid = spec.name == AlgebraName::AC;
      std::string anchor;
      if (euclid && spec.m == 1)
        anchor = spec.lambda_value() != 0.0 ? "Theorem 3, (1.22)" : "Theorem 3, (1.23)";
      else if (euclid)
        anchor = spec.lambda_value() != 0.0 ? "Theorem 4, (1.29a)" : "Theorem 4, (1.29b)";
      else
        anchor = "Theorem 6, AC(1,n)";
      if (no_trans) {
        if (!euclid) throw std::invalid_argument("no-translations is defined for AC only");
        return conformal_family(spec, true, false, alg + ":no-translations", "<J_ab, D, K_a> basis, " + lam_txt(),
                                "Theorem 5", without_translations(catalog(spec)));
      }
      return conformal_family(spec, false, corrected, alg + (corrected ? ":corrected" : ""),
                              std::string(euclid ? "AC(n)" : "AC(1,n)") + " basis, " + lam_txt() +
                                  (corrected ? ", R_k exponent k(2/lambda-1)+1" : ""),
                              anchor, catalog(spec));
    }
    case AlgebraName::AG_I:
    case AlgebraName::AG1_I:
    case AlgebraName::AG2_I:
      return galilei_real_family(spec, variant);
    case AlgebraName::AG_II:
    case AlgebraName::AG1_II:
    case AlgebraName::AG2_II:
      return galilei_complex_family(spec, variant);
    case AlgebraName::AP_inf:
    case AlgebraName::AP_BornInfeld:
      break;
  }
  throw std::invalid_argument("no printed basis for " + alg + "; use the equation checks");
}

std::vector<FamilyInfo> list_bases() {
  return {
      {"AO", "", "AO(n) m-field basis with x_a", "Theorem 5"},
      {"AE", "", "AE(n) m-field basis", "Theorems 1-2"},
      {"AE1", "", "AE1(n) basis (lambda != 0 and lambda = 0)", "Theorems 3-4"},
      {"AE1", "no-translations", "<J_ab, D> basis", "Theorem 5"},
      {"AC", "", "AC(n) basis from theta_ab / w_ab", "Theorems 3-4"},
      {"AC", "corrected", "AC(n) m-field basis, R_k exponent k(2/lambda-1)+1", "Theorem 4"},
      {"AC", "no-translations", "<J_ab, D, K_a> basis", "Theorem 5"},
      {"AP", "", "AP(1,n) m-field basis", "Theorem 6"},
      {"APtilde", "", "extended Poincare basis (lambda != 0 and lambda = 0)", "Theorem 6"},
      {"AC1n", "", "AC(1,n) basis", "Theorem 6"},
      {"AC1n", "corrected", "AC(1,n) basis, R_k exponent k(2/lambda-1)+1", "Theorem 6"},
      {"AG_I", "", "AG(1,n) basis (mu != 0 and mu = 0)", "Theorems 9-10"},
      {"AG_I", "note3", "AG(1,n) basis with determinant invariants, mu = 0", "Note 3"},
      {"AG1_I", "", "AG1(1,n) basis (mu != 0 and mu = 0)", "Theorems 9-10"},
      {"AG1_I", "note3", "AG1(1,n) basis with determinant invariants, mu = 0", "Note 3"},
      {"AG2_I", "printed", "AG2(1,n) basis, R-hat as printed", "Theorems 9-10"},
      {"AG2_I", "k-l", "AG2(1,n) basis, R-hat with exponent k-l", "Theorem 9"},
      {"AG2_I", "corrected", "AG2(1,n) basis, deviator traces, phi_aa^2/(2n) in N2", "Theorem 9"},
      {"AG_II", "", "complex AG(1,n) basis, m != 0", "Theorem 11 (1)"},
      {"AG1_II", "", "complex AG1(1,n) basis, m != 0", "Theorem 11 (2)"},
      {"AG2_II", "", "complex AG2(1,n) basis (m != 0, m = 0)", "Theorem 11"},
      {"AG_II", "corrected", "complex AG(1,n) basis, theta_a = i m phi_at + phi_b phi_ab", "Theorem 11 (1)"},
      {"AG1_II", "corrected", "complex AG1(1,n) basis, corrected theta and exponent", "Theorem 11 (2)"},
      {"AG2_II", "corrected", "complex AG2(1,n) basis with weight-balanced corrections", "Theorem 11"},
  };
}

}  // namespace invforge
