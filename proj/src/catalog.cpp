#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "invforge/liealg.hpp"

namespace invforge {

namespace {

constexpr std::array<std::pair<AlgebraName, const char*>, 15> kNames{{
    {AlgebraName::AO, "AO"},
    {AlgebraName::AE, "AE"},
    {AlgebraName::AE1, "AE1"},
    {AlgebraName::AC, "AC"},
    {AlgebraName::AP, "AP"},
    {AlgebraName::APtilde, "APtilde"},
    {AlgebraName::AC1n, "AC1n"},
    {AlgebraName::AG_I, "AG_I"},
    {AlgebraName::AG1_I, "AG1_I"},
    {AlgebraName::AG2_I, "AG2_I"},
    {AlgebraName::AG_II, "AG_II"},
    {AlgebraName::AG1_II, "AG1_II"},
    {AlgebraName::AG2_II, "AG2_II"},
    {AlgebraName::AP_inf, "AP_inf"},
    {AlgebraName::AP_BornInfeld, "AP_BornInfeld"},
}};

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

using Span = std::span<const Taylor2>;

CoeffFn constant(Scalar c) {
  return [c](Span xu) { return Taylor2::constant(xu.size(), c); };
}

CoeffFn coord(int k, Scalar c = 1.0) {
  return [k, c](Span xu) { return xu[k] * c; };
}

// Adds a term to a coefficient slot, treating an empty slot as zero.
void add(CoeffFn& slot, CoeffFn term) {
  if (!slot) {
    slot = std::move(term);
    return;
  }
  slot = [a = std::move(slot), b = std::move(term)](Span xu) { return a(xu) + b(xu); };
}

CoeffFn times(CoeffFn f, CoeffFn g) {
  return [f = std::move(f), g = std::move(g)](Span xu) { return f(xu) * g(xu); };
}

/// sum_i w_i x_i^2 over base indices [lo, hi).
CoeffFn square_norm(std::vector<double> weights, int lo) {
  return [weights = std::move(weights), lo](Span xu) {
    Taylor2 s = Taylor2::constant(xu.size(), 0.0);
    for (std::size_t i = 0; i < weights.size(); ++i) {
      const auto& x = xu[lo + static_cast<int>(i)];
      s += weights[i] * (x * x);
    }
    return s;
  };
}

struct Builder {
  int n_base;
  int slots;
  std::vector<VectorField> out;

  VectorField& make(std::string label) {
    out.emplace_back(std::move(label), n_base, slots);
    return out.back();
  }
};

std::string idx(int i) { return std::to_string(i); }

// Euclidean block: translations, rotations, optional dilation and conformal.
void euclidean(Builder& b, const AlgebraSpec& s, bool translations, bool dilation, bool conformal) {
  const int n = s.n;
  const int m = s.m;
  const double lambda = s.lambda_value();
  if (translations)
    for (int a = 0; a < n; ++a) b.make("P_" + idx(a + 1)).xi[a] = constant(1.0);
  for (int a = 0; a < n; ++a)
    for (int c = a + 1; c < n; ++c) {
      auto& v = b.make("J_" + idx(a + 1) + idx(c + 1));
      v.xi[c] = coord(a);
      v.xi[a] = coord(c, -1.0);
    }
  if (dilation) {
    auto& d = b.make("D");
    for (int a = 0; a < n; ++a) d.xi[a] = coord(a);
    for (int r = 0; r < m; ++r) d.eta[r] = coord(n + r, lambda);
  }
  if (conformal) {
    const auto r2 = square_norm(std::vector<double>(n, 1.0), 0);
    for (int a = 0; a < n; ++a) {
      auto& k = b.make("K_" + idx(a + 1));
      for (int i = 0; i < n; ++i) {
        k.xi[i] = times(coord(a, 2.0), coord(i));
        if (i == a) add(k.xi[i], times(constant(-1.0), r2));
      }
      for (int r = 0; r < m; ++r) k.eta[r] = times(coord(a, 2.0 * lambda), coord(n + r));
    }
  }
}

// Poincare block in n+1 dimensions, signature (+, -, ..., -).
void minkowski(Builder& b, const AlgebraSpec& s, bool dilation, bool conformal) {
  const int dim = s.n + 1;
  const int m = s.m;
  const Metric g = Metric::minkowski(dim);
  const double lambda = s.lambda_value();
  for (int mu = 0; mu < dim; ++mu) b.make("P_" + idx(mu)).xi[mu] = constant(g.weight(mu));
  for (int mu = 0; mu < dim; ++mu)
    for (int nu = mu + 1; nu < dim; ++nu) {
      auto& v = b.make("J_" + idx(mu) + idx(nu));
      v.xi[nu] = coord(mu, g.weight(nu));
      v.xi[mu] = coord(nu, -g.weight(mu));
    }
  if (dilation) {
    auto& d = b.make("D");
    for (int mu = 0; mu < dim; ++mu) d.xi[mu] = coord(mu);
    for (int r = 0; r < m; ++r) d.eta[r] = coord(dim + r, lambda);
  }
  if (conformal) {
    std::vector<double> w(dim);
    for (int i = 0; i < dim; ++i) w[i] = g.weight(i);
    const auto x2 = square_norm(w, 0);
    for (int mu = 0; mu < dim; ++mu) {
      auto& k = b.make("K_" + idx(mu));
      for (int i = 0; i < dim; ++i) {
        k.xi[i] = times(coord(mu, 2.0), coord(i));
        if (i == mu) add(k.xi[i], times(constant(-g.weight(mu)), x2));
      }
      for (int r = 0; r < m; ++r) k.eta[r] = times(coord(mu, 2.0 * lambda), coord(dim + r));
    }
  }
}

// Real Galilei operators acting on u; base index 0 is t.
void galilei_real(Builder& b, const AlgebraSpec& s, int level) {
  const int n = s.n;
  const int u = n + 1;
  const double mu = s.mu;
  b.make("P_t").xi[0] = constant(1.0);
  for (int a = 1; a <= n; ++a) b.make("P_" + idx(a)).xi[a] = constant(1.0);
  for (int a = 1; a <= n; ++a)
    for (int c = a + 1; c <= n; ++c) {
      auto& v = b.make("J_" + idx(a) + idx(c));
      v.xi[c] = coord(a);
      v.xi[a] = coord(c, -1.0);
    }
  for (int a = 1; a <= n; ++a) {
    auto& g = b.make("G_" + idx(a));
    g.xi[a] = coord(0);
    g.eta[0] = times(coord(a, mu), coord(u));
  }
  b.make("I").eta[0] = coord(u);
  if (level < 1) return;
  const double lambda = s.lambda_value();
  auto& d = b.make("D");
  d.xi[0] = coord(0, 2.0);
  for (int a = 1; a <= n; ++a) d.xi[a] = coord(a);
  d.eta[0] = coord(u, lambda);
  if (level < 2) return;
  auto& A = b.make("A");
  A.xi[0] = times(coord(0), coord(0));
  for (int a = 1; a <= n; ++a) A.xi[a] = times(coord(0), coord(a));
  CoeffFn factor = coord(0, lambda);
  add(factor, times(constant(mu / 2.0), square_norm(std::vector<double>(n, 1.0), 1)));
  A.eta[0] = times(factor, coord(u));
}

// Complex Galilei operators on (psi, psi*); the factor i of the momenta is
// dropped while J = i(psi d_psi - psi* d_psi*) keeps its own.
void galilei_complex(Builder& b, const AlgebraSpec& s, int level) {
  const int n = s.n;
  const int psi = n + 1;
  const int psic = n + 2;
  const double mass = s.mass;
  const Scalar i = kI;
  auto set_J = [&](VectorField& v, CoeffFn scale) {
    add(v.eta[0], times(scale, coord(psi, i)));
    add(v.eta[1], times(scale, coord(psic, -i)));
  };
  auto set_I = [&](VectorField& v, CoeffFn scale) {
    add(v.eta[0], times(scale, coord(psi)));
    add(v.eta[1], times(scale, coord(psic)));
  };
  b.make("P_t").xi[0] = constant(1.0);
  for (int a = 1; a <= n; ++a) b.make("P_" + idx(a)).xi[a] = constant(-1.0);
  set_J(b.make("J"), constant(1.0));
  for (int a = 1; a <= n; ++a)
    for (int c = a + 1; c <= n; ++c) {
      auto& v = b.make("J_" + idx(a) + idx(c));
      v.xi[c] = coord(a, -1.0);
      v.xi[a] = coord(c);
    }
  for (int a = 1; a <= n; ++a) {
    auto& g = b.make("G_" + idx(a));
    g.xi[a] = coord(0, -1.0);
    set_J(g, coord(a, -mass));
  }
  if (level < 1) return;
  const double lambda = s.lambda_value();
  auto& d = b.make("D");
  d.xi[0] = coord(0, 2.0);
  for (int a = 1; a <= n; ++a) d.xi[a] = coord(a);
  set_I(d, constant(lambda));
  if (level < 2) return;
  auto& A = b.make("A");
  A.xi[0] = times(coord(0), coord(0));
  for (int a = 1; a <= n; ++a) A.xi[a] = times(coord(0), coord(a));
  set_I(A, coord(0, lambda));
  set_J(A, times(constant(mass / 2.0), square_norm(std::vector<double>(n, 1.0), 1)));
}

CoeffFn of_u(const UnivariateFn& f, int u) {
  return [f, u](Span xu) { return f(xu[u]); };
}

void ap_inf_instance(Builder& b, const AlgebraSpec& s, const ApInfFunctions& fns, const std::string& label) {
  const int dim = s.n + 1;
  const int u = dim;
  const Metric g = Metric::minkowski(dim);
  auto& v = b.make(label);
  for (int mu = 0; mu < dim; ++mu) {
    for (int nu = 0; nu < dim; ++nu) {
      if (mu == nu) continue;
      const bool upper = mu < nu;
      const auto& f = upper ? fns.b[mu][nu] : fns.b[nu][mu];
      if (!f) continue;
      const double sign = upper ? g.weight(nu) : -g.weight(nu);
      add(v.xi[mu], times(of_u(f, u), coord(nu, sign)));
    }
    if (fns.a.size() > static_cast<std::size_t>(mu) && fns.a[mu]) add(v.xi[mu], of_u(fns.a[mu], u));
    if (s.ap_inf_dilation && fns.d) add(v.xi[mu], times(of_u(fns.d, u), coord(mu)));
  }
  if (fns.eta) v.eta[0] = of_u(fns.eta, u);
}

void born_infeld(Builder& b, const AlgebraSpec& s) {
  const int dim = s.n + 1;
  const Metric g = Metric::minkowski(dim);
  auto weight = [&](int A) { return A < dim ? g.weight(A) : -1.0; };
  // y_A = x_A for A <= n, y_{n+1} = u; d/dy_{n+1} is the field direction.
  auto slot = [&](VectorField& v, int A) -> CoeffFn& { return A < dim ? v.xi[A] : v.eta[0]; };
  for (int A = 0; A <= dim; ++A)
    for (int B = A + 1; B <= dim; ++B) {
      auto& v = b.make("J_" + idx(A) + idx(B));
      slot(v, B) = coord(A, weight(B));
      slot(v, A) = coord(B, -weight(A));
    }
}

}  // namespace

std::string to_string(AlgebraName name) {
  for (const auto& [n, s] : kNames)
    if (n == name) return s;
  return "?";
}

AlgebraName parse_algebra(const std::string& text) {
  const auto t = lowercase(text);
  for (const auto& [n, s] : kNames)
    if (lowercase(s) == t) return n;
  throw std::invalid_argument("unknown algebra '" + text + "'");
}

std::vector<AlgebraName> all_algebras() {
  std::vector<AlgebraName> r;
  for (const auto& [n, s] : kNames) r.push_back(n);
  return r;
}

Geometry AlgebraSpec::geometry() const {
  switch (name) {
    case AlgebraName::AO:
    case AlgebraName::AE:
    case AlgebraName::AE1:
    case AlgebraName::AC:
      return Geometry::euclidean;
    case AlgebraName::AP:
    case AlgebraName::APtilde:
    case AlgebraName::AC1n:
    case AlgebraName::AP_inf:
    case AlgebraName::AP_BornInfeld:
      return Geometry::minkowski;
    default:
      return Geometry::galilei;
  }
}

int AlgebraSpec::n_base() const { return geometry() == Geometry::euclidean ? n : n + 1; }

FieldKind AlgebraSpec::field_kind() const {
  switch (name) {
    case AlgebraName::AG_II:
    case AlgebraName::AG1_II:
    case AlgebraName::AG2_II:
      return FieldKind::complex;
    default:
      return FieldKind::real;
  }
}

Metric AlgebraSpec::metric() const {
  switch (geometry()) {
    case Geometry::minkowski:
      return Metric::minkowski(n + 1);
    default:
      return Metric::euclidean(n);
  }
}

JetLayout AlgebraSpec::layout() const { return {n_base(), m, field_kind()}; }

bool AlgebraSpec::has_lambda_parameter() const {
  switch (name) {
    case AlgebraName::AE1:
    case AlgebraName::AC:
    case AlgebraName::APtilde:
    case AlgebraName::AC1n:
    case AlgebraName::AG1_I:
    case AlgebraName::AG2_I:
    case AlgebraName::AG1_II:
    case AlgebraName::AG2_II:
      return true;
    default:
      return false;
  }
}

double AlgebraSpec::lambda_value() const {
  if (!has_lambda_parameter()) return 0.0;
  if (lambda) return *lambda;
  return geometry() == Geometry::galilei ? -n / 2.0 : 1.0;
}

void AlgebraSpec::validate() const {
  const std::string nm = to_string(name);
  if (n < 1) throw std::invalid_argument(nm + ": n must be at least 1");
  if (m < 1) throw std::invalid_argument(nm + ": m must be at least 1");
  if (lambda && !has_lambda_parameter()) throw std::invalid_argument(nm + " has no lambda parameter");
  if (lambda && !std::isfinite(*lambda)) throw std::invalid_argument(nm + ": lambda must be finite");
  const bool single = geometry() == Geometry::galilei || name == AlgebraName::AP_inf ||
                      name == AlgebraName::AP_BornInfeld;
  if (single && m != 1) throw std::invalid_argument(nm + " is defined for one scalar function (m = 1)");
  if (name == AlgebraName::AG2_I || name == AlgebraName::AG2_II) {
    const double coupling = name == AlgebraName::AG2_I ? mu : mass;
    if (coupling != 0.0 && lambda && *lambda != -n / 2.0)
      throw std::invalid_argument(nm + " requires lambda = -n/2 when the mass parameter is nonzero");
  }
  if (name == AlgebraName::AP_inf && !ap_inf && ap_inf_instances < 1)
    throw std::invalid_argument("AP_inf needs at least one generator instance");
  if (ap_inf) {
    const auto dim = static_cast<std::size_t>(n + 1);
    if (ap_inf->b.size() != dim || ap_inf->a.size() != dim)
      throw std::invalid_argument("AP_inf functions have the wrong dimension");
  }
}

ApInfFunctions sample_ap_inf(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  auto coefficient = [&rng] {
    const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const double mag = 0.5 + 1.5 * static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return unit < 0.5 ? -mag : mag;
  };
  auto quadratic = [&] {
    const double c0 = coefficient(), c1 = coefficient(), c2 = coefficient();
    return UnivariateFn([c0, c1, c2](const Taylor2& u) { return (u * c2 + c1) * u + c0; });
  };
  ApInfFunctions f;
  f.b.assign(static_cast<std::size_t>(dim), std::vector<UnivariateFn>(static_cast<std::size_t>(dim)));
  for (int mu = 0; mu < dim; ++mu)
    for (int nu = mu + 1; nu < dim; ++nu) f.b[mu][nu] = quadratic();
  for (int mu = 0; mu < dim; ++mu) f.a.push_back(quadratic());
  f.eta = quadratic();
  f.d = quadratic();
  return f;
}

std::vector<VectorField> catalog(const AlgebraSpec& spec) {
  spec.validate();
  Builder b{spec.n_base(), spec.layout().slots(), {}};
  switch (spec.name) {
    case AlgebraName::AO: euclidean(b, spec, false, false, false); break;
    case AlgebraName::AE: euclidean(b, spec, true, false, false); break;
    case AlgebraName::AE1: euclidean(b, spec, true, true, false); break;
    case AlgebraName::AC: euclidean(b, spec, true, true, true); break;
    case AlgebraName::AP: minkowski(b, spec, false, false); break;
    case AlgebraName::APtilde: minkowski(b, spec, true, false); break;
    case AlgebraName::AC1n: minkowski(b, spec, true, true); break;
    case AlgebraName::AG_I: galilei_real(b, spec, 0); break;
    case AlgebraName::AG1_I: galilei_real(b, spec, 1); break;
    case AlgebraName::AG2_I: galilei_real(b, spec, 2); break;
    case AlgebraName::AG_II: galilei_complex(b, spec, 0); break;
    case AlgebraName::AG1_II: galilei_complex(b, spec, 1); break;
    case AlgebraName::AG2_II: galilei_complex(b, spec, 2); break;
    case AlgebraName::AP_inf:
      if (spec.ap_inf) {
        ap_inf_instance(b, spec, *spec.ap_inf, "X");
      } else {
        for (int k = 0; k < spec.ap_inf_instances; ++k)
          ap_inf_instance(b, spec, sample_ap_inf(spec.n + 1, spec.ap_inf_seed + k), "X_" + idx(k + 1));
      }
      break;
    case AlgebraName::AP_BornInfeld: born_infeld(b, spec); break;
  }
  if (spec.log_variables)
    for (auto& v : b.out) v = log_substitution(v);
  return std::move(b.out);
}

}  // namespace invforge
