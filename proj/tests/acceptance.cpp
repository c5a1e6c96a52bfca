// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "invforge/cli.hpp"
#include "invforge/expr.hpp"
#include "invforge/invcat.hpp"
#include "invforge/verify.hpp"

using namespace invforge;

namespace {

constexpr double kTol = 1e-8;
constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
  bool pass{true};
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

AlgebraSpec make_spec(AlgebraName name, int n, int m = 1, std::optional<double> lambda = std::nullopt) {
  AlgebraSpec s;
  s.name = name;
  s.n = n;
  s.m = m;
  s.lambda = lambda;
  return s;
}

std::vector<ProlongedOperator> ops_of(const BasisFamily& f) { return prolong2(f.generators, f.domain.layout); }

// Closed-form rotation operator applied to the coordinate functions u_i and u_ij, with the
// symmetric derivative d u_ij / d u_pq = (d_ip d_jq + d_iq d_jp) / 2.
Scalar closed_form(const JetPoint& p, int a, int b, const JetCoordinateId& id) {
  auto d = [](int x, int y) { return x == y ? 1.0 : 0.0; };
  const int n = p.n_base();
  if (id.tag == JetCoordinateId::Tag::d1) return p.du(id.r, a) * d(id.i, b) - p.du(id.r, b) * d(id.i, a);
  if (id.tag != JetCoordinateId::Tag::d2) return 0.0;
  Scalar s = 0.0;
  for (int c = 0; c < n; ++c) {
    // 2 (u_ac d/du_bc - u_bc d/du_ac) u_ij
    const double dbc = 0.5 * (d(b, id.i) * d(c, id.j) + d(b, id.j) * d(c, id.i));
    const double dac = 0.5 * (d(a, id.i) * d(c, id.j) + d(a, id.j) * d(c, id.i));
    s += 2.0 * (p.ddu(id.r, a, c) * dbc - p.ddu(id.r, b, c) * dac);
  }
  return s;
}

Outcome criterion1() {
  Outcome o;
  for (int n : {3, 4}) {
    const auto spec = make_spec(AlgebraName::AO, n);
    const auto ops = prolong2(catalog(spec), spec.layout());
    double worst = 0.0;
    for (int s = 0; s < 20; ++s) {
      const auto p = sample_generic(n, 1, FieldKind::real, kSeed + s);
      for (const auto& op : ops) {
        const int a = op.label()[2] - '1';
        const int b = op.label()[3] - '1';
        for (const auto& id : spec.layout().enumerate()) {
          if (id.tag != JetCoordinateId::Tag::d1 && id.tag != JetCoordinateId::Tag::d2) continue;
          const ScalarJetFunction coordinate("c", [id](const DualJet& q) { return q.at(id); });
          worst = std::max(worst, std::abs(apply(op, coordinate, p) - closed_form(p, a, b, id)));
        }
      }
    }
    o.require(worst <= 1e-12, "n=" + std::to_string(n) + " deviation " + std::to_string(worst));
  }
  return o;
}

Outcome criterion2() {
  Outcome o;
  for (int n : {3, 4, 5}) {
    const auto spec = make_spec(AlgebraName::AO, n);
    const auto r = generic_rank(prolong2(catalog(spec), spec.layout()), Domain{spec.layout()}, 5, kSeed);
    o.require(r.rank == n * (n - 1) / 2, "AO(" + std::to_string(n) + ") rank " + std::to_string(r.rank));
  }
  return o;
}

Outcome criterion3() {
  Outcome o;
  for (int n : {3, 4}) {
    const auto fam = basis(make_spec(AlgebraName::AE, n));
    const auto tag = "n=" + std::to_string(n);
    o.require(fam.members.size() == static_cast<std::size_t>(2 * n + 1), tag + " size");
    o.require(check_absolute(ops_of(fam), fam.members, fam.domain, 50, kTol, kSeed).pass(), tag + " invariance");
    o.require(independence_rank(fam.members, fam.domain, 5, kSeed).rank == 2 * n + 1, tag + " rank");
    const auto c = completeness(fam, 50, kTol, kSeed);
    o.require(c.pass() && c.expected == 2 * n + 1, tag + " completeness");
  }
  return o;
}

Outcome criterion4() {
  Outcome o;
  const int n = 3, m = 2;
  const auto fam = basis(make_spec(AlgebraName::AE, n, m));
  const int size = 2 * m * n + m + (m - 1) * n * (n - 1) / 2;
  o.require(size == 17 && fam.members.size() == 17u, "size " + std::to_string(fam.members.size()));
  o.require(check_absolute(ops_of(fam), fam.members, fam.domain, 50, kTol, kSeed).pass(), "invariance");
  o.require(independence_rank(fam.members, fam.domain, 5, kSeed).rank == 17, "rank");
  return o;
}

std::vector<ScalarJetFunction> lemma3_family(int n) {
  const Metric g = Metric::euclidean(n);
  std::vector<ScalarJetFunction> fam;
  for (int k = 1; k <= n; ++k)
    for (int j = 0; j <= k; ++j)
      fam.emplace_back("S_" + std::to_string(j) + std::to_string(k), [=](const DualJet& p) {
        return Sjk(hessian(p, 0, 0, n), hessian(p, 1, 0, n), g, j, k);
      });
  return fam;
}

Outcome criterion5() {
  Outcome o;
  for (int n : {3, 4}) {
    const auto fam = lemma3_family(n);
    const Domain dom{JetLayout(n, 2)};
    const int want = n * (n + 3) / 2;
    const auto r = independence_rank(fam, dom, 5, kSeed);
    o.require(r.rank == want, "n=" + std::to_string(n) + " rank " + std::to_string(r.rank));
    auto p = dom.sample(kSeed);
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) p.set(JetCoordinateId::d2(0, a, b), a == b ? 1.0 : 0.0);
    const auto d = rank_at(fam, p);
    o.require(d.rank < want, "n=" + std::to_string(n) + " no drop at U = I (" + std::to_string(d.rank) + ")");
  }
  return o;
}

Outcome criterion6() {
  Outcome o;
  for (double lambda : {1.0, 2.0, 0.0}) {
    const auto tag = "lambda=" + std::to_string(static_cast<int>(lambda));
    const auto ae1 = basis(make_spec(AlgebraName::AE1, 3, 1, lambda));
    o.require(check_absolute(ops_of(ae1), ae1.members, ae1.domain, 50, kTol, kSeed).pass(), "AE1 " + tag);
    const auto spec = make_spec(AlgebraName::AC, 3, 1, lambda);
    const auto ac = basis(spec);
    o.require(ac.members.size() == 3u, "AC size " + tag);
    const auto ops = ops_of(ac);
    o.require(check_absolute(ops, ac.members, ac.domain, 50, kTol, kSeed).pass(), "AC " + tag);
    const auto name = lambda == 0.0 ? "w" : "theta";
    o.require(check_covariance(tensor(name, spec), ops, ac.domain, 20, kTol, kSeed).pass(),
              std::string(name) + " covariance " + tag);
  }
  return o;
}

Outcome criterion7() {
  Outcome o;
  const auto ap = basis(make_spec(AlgebraName::AP, 3, 2));
  o.require(ap.members.size() == 24u, "AP size " + std::to_string(ap.members.size()));
  o.require(check_absolute(ops_of(ap), ap.members, ap.domain, 50, kTol, kSeed).pass(), "AP invariance");
  for (double lambda : {0.0, 1.0}) {
    const auto fam = basis(make_spec(AlgebraName::APtilde, 3, 2, lambda));
    o.require(check_absolute(ops_of(fam), fam.members, fam.domain, 50, kTol, kSeed).pass(),
              "APtilde lambda=" + std::to_string(static_cast<int>(lambda)));
    o.require(independence_rank(fam.members, fam.domain, 5, kSeed).rank == static_cast<int>(fam.members.size()),
              "APtilde rank");
  }
  const int n = 3;
  const auto spec = make_spec(AlgebraName::AC1n, n, 1, 0.0);
  const auto b = expr::binding_for(spec);
  const auto trw = expr::compile("tr(w)", b);
  const auto lhs = expr::compile("R(1)*S(1)/(1 - 3) - R(2)", b);
  double worst = 0.0;
  for (int s = 0; s < 20; ++s) {
    const auto p = sample_generic(n + 1, 1, FieldKind::real, kSeed + s);
    const Scalar a = trw.eval(p), c = lhs.eval(p);
    worst = std::max(worst, std::abs(a - 2.0 * c) / (1.0 + std::abs(a)));
  }
  o.require(worst <= 1e-12, "w trace identity " + std::to_string(worst));
  return o;
}

Outcome criterion8() {
  Outcome o;
  AlgebraSpec params;
  params.n = 3;
  auto run = [&](const std::string& name, int k = 1) {
    const auto eq = equation(name, params, k);
    const auto rep = check_on_manifold(prolong2(eq.generators, eq.domain.layout), eq.residual, eq.domain,
                                       eq.solve_for, 20, kTol, kSeed);
    o.require(rep.pass(), name + (name == "eik-sk" ? " k=" + std::to_string(k) : ""));
  };
  run("heat");
  run("schrodinger");
  run("born-infeld");
  run("eq35");
  run("eik-sk", 1);
  run("eik-sk", 2);
  return o;
}

// Families with per-member verdicts; only a crash or a missing verdict fails.
Outcome per_member_reports(const std::vector<std::pair<AlgebraSpec, std::string>>& cases, Outcome o = {}) {
  for (const auto& [spec, variant] : cases) {
    const auto fam = basis(spec, variant);
    const auto rep = check_absolute(ops_of(fam), fam.members, fam.domain, 20, kTol, kSeed);
    const auto per = rep.per_function();
    std::size_t ok = 0;
    for (const auto& r : per) ok += r.pass;
    std::cout << "    " << fam.key << " (mu " << spec.mu << ", mass " << spec.mass << "): " << ok << "/" << per.size() << " invariants pass\n";
    o.require(per.size() == fam.members.size(), fam.key + " report incomplete");
  }
  return o;
}

Outcome criterion9() {
  std::vector<std::pair<AlgebraSpec, std::string>> cases;
  for (auto name : {AlgebraName::AG_I, AlgebraName::AG1_I, AlgebraName::AG2_I}) {
    auto s = make_spec(name, 3);
    s.mu = 1.0;
    cases.emplace_back(s, "");
  }
  auto corrected = make_spec(AlgebraName::AG2_I, 3);
  cases.emplace_back(corrected, "corrected");
  return per_member_reports(cases);
}

Outcome criterion10() {
  std::vector<std::pair<AlgebraSpec, std::string>> cases;
  for (auto name : {AlgebraName::AG_I, AlgebraName::AG1_I, AlgebraName::AG2_I}) {
    auto s = make_spec(name, 3);
    s.mu = 0.0;
    cases.emplace_back(s, "");
  }
  for (auto name : {AlgebraName::AG_II, AlgebraName::AG1_II, AlgebraName::AG2_II}) cases.emplace_back(make_spec(name, 3), "");
  auto m0 = make_spec(AlgebraName::AG2_II, 3);
  m0.mass = 0.0;
  cases.emplace_back(m0, "");
  for (auto name : {AlgebraName::AG_II, AlgebraName::AG1_II, AlgebraName::AG2_II})
    cases.emplace_back(make_spec(name, 3), "corrected");
  cases.emplace_back(m0, "corrected");
  Outcome o = per_member_reports(cases);

  const int n = 3;
  double worst = 0.0;
  for (int s = 0; s < 20; ++s) {
    const auto p = make_dual(sample_generic(n + 1, 1, FieldKind::real, kSeed + s));
    const auto theta = implicit_theta(p, 0, n);
    for (int a = 1; a <= n; ++a) {
      Scalar lhs = 0.0;
      for (int b = 1; b <= n; ++b) lhs += p.ddu(0, a, b).val * theta[b - 1].val;
      const Scalar rhs = p.ddu(0, a, 0).val;
      worst = std::max(worst, std::abs(lhs - rhs) / (1.0 + std::abs(rhs)));
    }
  }
  o.require(worst < 1e-10, "implicit theta residual " + std::to_string(worst));
  return o;
}

Outcome criterion11() {
  Outcome o;
  auto compare = [&](const std::string& what, const ScalarJetFunction& a, const ScalarJetFunction& b,
                     const Domain& dom) {
    double worst = 0.0;
    for (int s = 0; s < 20; ++s) {
      const auto p = dom.sample(kSeed + s);
      const Scalar x = a.eval(p), y = b.eval(p);
      worst = std::max(worst, std::abs(x - y) / (1.0 + std::abs(y)));
    }
    o.require(worst <= 1e-12, what + " " + std::to_string(worst));
  };
  const auto ae = make_spec(AlgebraName::AE, 3);
  const Domain ae_dom{ae.layout()};
  const Metric g = ae.metric();
  compare("S_2", expr::compile("S(2)", expr::binding_for(ae)),
          ScalarJetFunction("S_2", [g](const DualJet& p) { return S(hessian(p, 0, 0, 3), g, 2); }), ae_dom);
  compare("R_3", expr::compile("R(3)", expr::binding_for(ae)),
          ScalarJetFunction("R_3",
                            [g](const DualJet& p) { return R(gradient(p, 0, 0, 3), hessian(p, 0, 0, 3), g, 3); }),
          ae_dom);
  AlgebraSpec params;
  params.n = 3;
  for (const auto& [name, text] : std::vector<std::pair<std::string, std::string>>{
           {"born-infeld", "(1 - R(1)) * S(1) + R(2)"},
           {"born-infeld-printed", "(1 - R(1)) * S(1) - R(2)"},
           {"eq35", "R(2) - R(1) * S(1)"}}) {
    const auto eq = equation(name, params);
    compare(name, expr::compile(text, expr::binding_for(eq.spec)), eq.residual, eq.domain);
  }
  return o;
}

Outcome criterion12() {
  Outcome o;
  RunConfig cfg;
  cfg.algebra = "AE";
  cfg.n = 3;
  cfg.seed = 42;
  std::ostringstream sink;
  auto a = cli::verify(cfg, sink);
  auto b = cli::verify(cfg, sink);
  a.canonicalize();
  b.canonicalize();
  o.require(!a.checks.empty() && a.checks == b.checks, "check records differ");
  o.require(a.to_json()["checks"].dump() == b.to_json()["checks"].dump(), "serialized checks differ");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"1 prolongation closed form", criterion1},
      {"2 rank of the rotation algebra", criterion2},
      {"3 AE(n) basis, n = 3, 4", criterion3},
      {"4 AE(3) with two fields", criterion4},
      {"5 mixed traces independence", criterion5},
      {"6 AE1 and AC bases, covariance", criterion6},
      {"7 Poincare bases and w trace", criterion7},
      {"8 equations on their manifolds", criterion8},
      {"9 Galilei bases, mu = 1", criterion9},
      {"10 Galilei bases, mu = 0 and complex", criterion10},
      {"11 expression forms match the catalog", criterion11},
      {"12 deterministic reports", criterion12},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << name;
    if (!o.detail.empty()) std::cout << "  (" << o.detail << ")";
    std::cout << std::endl;
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
