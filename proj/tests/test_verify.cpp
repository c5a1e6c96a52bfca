#include <gtest/gtest.h>

#include "invforge/invcat.hpp"
#include "invforge/verify.hpp"

using namespace invforge;

namespace {

AlgebraSpec spec_of(AlgebraName name, int n, int m = 1, std::optional<double> lambda = std::nullopt) {
  AlgebraSpec s;
  s.name = name;
  s.n = n;
  s.m = m;
  s.lambda = lambda;
  return s;
}

std::vector<ProlongedOperator> ops_of(const BasisFamily& f) { return prolong2(f.generators, f.domain.layout); }

}  // namespace

TEST(CheckAbsolute, EuclideanFamilyPasses) {
  const auto f = basis(spec_of(AlgebraName::AE, 3));
  const auto rep = check_absolute(ops_of(f), f.members, f.domain, 50, 1e-8, 1);
  EXPECT_TRUE(rep.pass());
  EXPECT_LT(rep.residual_max(), 1e-9);
  EXPECT_EQ(rep.pairs.size(), f.members.size() * f.generators.size());
}

TEST(CheckAbsolute, SingleDerivativeFails) {
  const auto f = basis(spec_of(AlgebraName::AE, 3));
  const std::vector<ScalarJetFunction> u1{{"u_1", [](const DualJet& p) { return p.du(0, 0); }}};
  EXPECT_FALSE(check_absolute(ops_of(f), u1, f.domain, 10, 1e-8, 1).pass());
}

TEST(CheckAbsolute, PerturbedMemberFails) {
  auto f = basis(spec_of(AlgebraName::AC, 3, 1, 1.0));
  const auto member = f.members[1];
  f.members[1] = ScalarJetFunction("perturbed", [member](const DualJet& p) { return member(p) + p.du(0, 0); });
  const auto rep = check_absolute(ops_of(f), f.members, f.domain, 20, 1e-8, 3);
  const auto per = rep.per_function();
  EXPECT_TRUE(per[0].pass);
  EXPECT_FALSE(per[1].pass);
  EXPECT_TRUE(per[2].pass);
}

TEST(CheckAbsolute, DeterministicForSeed) {
  const auto f = basis(spec_of(AlgebraName::AE, 3, 2));
  const auto a = check_absolute(ops_of(f), f.members, f.domain, 10, 1e-8, 99);
  const auto b = check_absolute(ops_of(f), f.members, f.domain, 10, 1e-8, 99);
  ASSERT_EQ(a.pairs.size(), b.pairs.size());
  for (std::size_t i = 0; i < a.pairs.size(); ++i) {
    EXPECT_EQ(a.pairs[i].residual_max, b.pairs[i].residual_max);
    EXPECT_EQ(a.pairs[i].scale, b.pairs[i].scale);
  }
}

TEST(CheckAbsolute, ScalingJetValuesKeepsVerdict) {
  // Homogeneous invariants must not flip when every jet value is doubled.
  const auto f = basis(spec_of(AlgebraName::AE, 3));
  const auto ops = ops_of(f);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto p = f.domain.sample(seed);
    auto q = p;
    for (std::size_t k = 0; k < q.size(); ++k) q[k] *= 2.0;
    for (const auto& m : f.members)
      for (const auto& op : ops) {
        const auto tp = op.tangent(p), tq = op.tangent(q);
        double scale_p = 0.0, scale_q = 0.0;
        const auto gp = m.grad(p), gq = m.grad(q);
        for (std::size_t k = 0; k < gp.size(); ++k) {
          scale_p += std::abs(tp[k] * gp[k]);
          scale_q += std::abs(tq[k] * gq[k]);
        }
        EXPECT_LE(std::abs(apply(op, m, p)), 1e-8 * (1.0 + scale_p));
        EXPECT_LE(std::abs(apply(op, m, q)), 1e-8 * (1.0 + scale_q));
      }
  }
}

TEST(CheckAbsolute, EvaluationFailureEverywhereThrows) {
  const auto f = basis(spec_of(AlgebraName::AE, 2));
  const std::vector<ScalarJetFunction> bad{
      {"bad", [](const DualJet&) -> Dual { throw EvaluationError("always"); }}};
  EXPECT_THROW(check_absolute(ops_of(f), bad, f.domain, 2, 1e-8, 1), EvaluationError);
}

TEST(IndependenceRank, DependentPair) {
  const Metric g = Metric::euclidean(3);
  const std::vector<ScalarJetFunction> fam{
      {"S1", [g](const DualJet& p) { return S(hessian(p, 0, 0, 3), g, 1); }},
      {"S1^2", [g](const DualJet& p) { return pow(S(hessian(p, 0, 0, 3), g, 1), 2); }}};
  const auto r = independence_rank(fam, Domain{JetLayout(3, 1)}, 5, 1);
  EXPECT_EQ(r.rank, 1);
  EXPECT_LE(r.rank, std::min(r.rows, r.cols));
}

TEST(IndependenceRank, FamilyFullRankAndDropsAtIdentity) {
  const auto f = basis(spec_of(AlgebraName::AE, 3));
  EXPECT_EQ(independence_rank(f.members, f.domain, 5, 1).rank, 7);
  auto p = f.domain.sample(4);
  for (int a = 0; a < 3; ++a)
    for (int b = a; b < 3; ++b) p.set(JetCoordinateId::d2(0, a, b), a == b ? 1.0 : 0.0);
  EXPECT_LT(rank_at(f.members, p).rank, 7);
}

TEST(Completeness, EuclideanCount) {
  const auto c = completeness(basis(spec_of(AlgebraName::AE, 3)), 20, 1e-8, 1);
  EXPECT_EQ(c.n_jet_vars, 10);
  EXPECT_EQ(c.algebra_rank, 3);
  EXPECT_EQ(c.expected, 7);
  EXPECT_TRUE(c.pass());
}

TEST(Completeness, TwoFieldRotationCount) {
  // Two vectors and two symmetric tensors under AO(3) give n(n+7)/2 = 15,
  // plus the two field values.
  auto s = spec_of(AlgebraName::AE, 3, 2);
  const auto f = basis(s);
  const auto c = completeness(f, 10, 1e-8, 1);
  EXPECT_EQ(c.expected, 15 + 2);
  EXPECT_TRUE(c.pass());
}

TEST(Completeness, TruncatedFamilyFails) {
  auto f = basis(spec_of(AlgebraName::AE, 3));
  f.members.pop_back();
  const auto c = completeness(f, 10, 1e-8, 1);
  EXPECT_NE(c.family_size, c.expected);
  EXPECT_FALSE(c.pass());
}

TEST(Completeness, ConformalCount) {
  const auto c = completeness(basis(spec_of(AlgebraName::AC, 3, 1, 1.0)), 10, 1e-8, 1);
  EXPECT_EQ(c.expected, 3);
  EXPECT_TRUE(c.pass());
}

TEST(OnManifold, HeatEquation) {
  AlgebraSpec params;
  params.n = 3;
  const auto eq = equation("heat", params);
  const auto rep =
      check_on_manifold(prolong2(eq.generators, eq.domain.layout), eq.residual, eq.domain, eq.solve_for, 20, 1e-8, 1);
  EXPECT_TRUE(rep.pass());
}

TEST(OnManifold, BornInfeldSignMatters) {
  AlgebraSpec params;
  params.n = 3;
  for (const std::string name : {"born-infeld", "born-infeld-printed"}) {
    const auto eq = equation(name, params);
    const auto rep = check_on_manifold(prolong2(eq.generators, eq.domain.layout), eq.residual, eq.domain,
                                       std::nullopt, 20, 1e-8, 1);
    EXPECT_EQ(rep.pass(), name == "born-infeld") << name;
  }
}

TEST(OnManifold, ProjectionReachesZero) {
  AlgebraSpec params;
  params.n = 2;
  const auto eq = equation("heat", params);
  auto p = eq.domain.sample(8);
  ASSERT_TRUE(project_to_manifold(eq.residual, p, p.layout().index(JetCoordinateId::d1(0, 0))));
  EXPECT_LT(std::abs(eq.residual.eval(p)), 1e-12 * 10);
}

TEST(Covariance, ConformalTensors) {
  for (double lambda : {1.0, 2.0}) {
    const auto s = spec_of(AlgebraName::AC, 3, 1, lambda);
    const auto ops = prolong2(catalog(s), s.layout());
    EXPECT_TRUE(check_covariance(tensor("theta", s), ops, Domain{s.layout()}, 10, 1e-8, 1).pass());
    std::vector<ProlongedOperator> k_ops;
    for (const auto& op : ops)
      if (op.label().starts_with("K_")) k_ops.push_back(op);
    EXPECT_TRUE(check_covariance(tensor("x", s), k_ops, Domain{s.layout()}, 10, 1e-8, 1).pass());
  }
  const auto s0 = spec_of(AlgebraName::AC, 3, 1, 0.0);
  EXPECT_TRUE(check_covariance(tensor("w", s0), prolong2(catalog(s0), s0.layout()), Domain{s0.layout()}, 10, 1e-8, 1)
                  .pass());
}

TEST(Covariance, HessianNotCovariantUnderSpecialConformal) {
  const auto s = spec_of(AlgebraName::AC, 3, 1, 1.0);
  const auto ops = prolong2(catalog(s), s.layout());
  EXPECT_FALSE(check_covariance(tensor("hess", s), ops, Domain{s.layout()}, 5, 1e-8, 1).pass());
}
