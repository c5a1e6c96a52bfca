#include <gtest/gtest.h>

#include <random>

#include "invforge/jetfunction.hpp"
#include "invforge/jetspace.hpp"
#include "invforge/matrix.hpp"

using namespace invforge;

TEST(JetLayout, SizeAndIndexRoundTrip) {
  const JetLayout real(3, 2);
  EXPECT_EQ(real.size(), 3u + 2 + 2 * 3 + 2 * 6);
  const JetLayout cplx(4, 1, FieldKind::complex);
  EXPECT_EQ(cplx.slots(), 2);
  EXPECT_EQ(cplx.size(), 4u + 2 + 2 * 4 + 2 * 10);
  for (const auto& layout : {real, cplx}) {
    const auto ids = layout.enumerate();
    ASSERT_EQ(ids.size(), layout.size());
    for (std::size_t k = 0; k < ids.size(); ++k) {
      EXPECT_EQ(layout.index(ids[k]), k);
      EXPECT_EQ(layout.id(k), ids[k]);
    }
  }
}

TEST(JetLayout, SecondDerivativesAreSymmetric) {
  const JetLayout l(3, 1);
  EXPECT_EQ(l.index(JetCoordinateId::d2(0, 2, 0)), l.index(JetCoordinateId::d2(0, 0, 2)));
  EXPECT_TRUE(l.is_offdiagonal(l.index(JetCoordinateId::d2(0, 0, 1))));
  EXPECT_FALSE(l.is_offdiagonal(l.index(JetCoordinateId::d2(0, 1, 1))));
}

TEST(JetLayout, OutOfRangeThrows) {
  const JetLayout l(2, 1);
  EXPECT_THROW(l.index(JetCoordinateId::base(2)), JetError);
  EXPECT_THROW(l.index(JetCoordinateId::field(1)), JetError);
  EXPECT_THROW(l.index(JetCoordinateId::d2(0, 0, 5)), JetError);
}

TEST(JetLayout, ConjugateSlots) {
  const JetLayout l(2, 2, FieldKind::complex);
  EXPECT_EQ(l.conj_slot(0), 2);
  EXPECT_EQ(l.conj_slot(3), 1);
  EXPECT_EQ(l.conj(JetCoordinateId::d1(1, 0)), JetCoordinateId::d1(3, 0));
}

TEST(Metric, MinkowskiContraction) {
  const Metric g = Metric::minkowski(3);
  const std::vector<Scalar> a{2.0, 1.0, 3.0};
  EXPECT_EQ(contract(g, a, a), Scalar(4.0 - 1.0 - 9.0));
  EXPECT_EQ(contract(Metric::euclidean(3), a, a), Scalar(14.0));
}

TEST(SampleGeneric, DeterministicAndConjugateConsistent) {
  const auto a = sample_generic(3, 1, FieldKind::complex, 7);
  const auto b = sample_generic(3, 1, FieldKind::complex, 7);
  EXPECT_TRUE(std::equal(a.values().begin(), a.values().end(), b.values().begin()));
  for (const auto& id : a.layout().enumerate()) {
    if (id.tag == JetCoordinateId::Tag::base) continue;
    if (id.r == 0) EXPECT_EQ(a.at(a.layout().conj(id)), std::conj(a.at(id)));
  }
  const auto pos = sample_generic(2, 2, FieldKind::real, 3, true);
  EXPECT_GT(pos.u(0).real(), 0.0);
  EXPECT_GT(pos.u(1).real(), 0.0);
}

TEST(Dual, ProductAndChainRulesExact) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  for (int i = 0; i < 100; ++i) {
    const Dual f{Scalar(d(rng), d(rng)), Scalar(d(rng), d(rng))};
    const Dual g{Scalar(d(rng), d(rng)), Scalar(d(rng), d(rng))};
    const Dual fg = f * g;
    EXPECT_EQ(fg.der, f.der * g.val + f.val * g.der);
    const Dual e = exp(g);
    EXPECT_EQ(e.der, std::exp(g.val) * g.der);
    const Dual q = f / g;
    EXPECT_NEAR(std::abs(q.der - (f.der * g.val - f.val * g.der) / (g.val * g.val)), 0.0, 1e-12);
  }
}

TEST(Dual, IntegerPower) {
  const Dual x = Dual::variable(Scalar(1.5));
  const Dual c = pow(x, 3);
  EXPECT_NEAR(c.val.real(), 3.375, 1e-15);
  EXPECT_NEAR(c.der.real(), 3 * 2.25, 1e-15);
  const Dual inv = pow(x, -2);
  EXPECT_NEAR(inv.der.real(), -2 / (1.5 * 1.5 * 1.5), 1e-15);
}

TEST(ScalarJetFunction, GradientIsUnitVectorOnCoordinate) {
  const JetLayout l(3, 1);
  const auto id = JetCoordinateId::d1(0, 1);
  const ScalarJetFunction f("u_2", [id](const DualJet& p) { return p.at(id); });
  const auto g = f.grad(sample_generic(3, 1, FieldKind::real, 1));
  for (std::size_t k = 0; k < g.size(); ++k) EXPECT_EQ(g[k], Scalar(k == l.index(id) ? 1.0 : 0.0));
}

TEST(ScalarJetFunction, ConjugateOnComplexLayout) {
  const ScalarJetFunction f("u*u_x", [](const DualJet& p) { return p.u(0) * p.du(0, 1); });
  const auto p = sample_generic(2, 1, FieldKind::complex, 5);
  EXPECT_NEAR(std::abs(conjugate(f).eval(p) - std::conj(f.eval(p))), 0.0, 1e-14);
}

TEST(NumericalRank, DetectsDependence) {
  std::vector<std::vector<Scalar>> rows{{1.0, 2.0, 3.0}, {2.0, 4.0, 6.0}, {0.0, 1.0, 0.0}};
  EXPECT_EQ(numerical_rank(rows).rank, 2);
  rows[1][2] = 6.5;
  EXPECT_EQ(numerical_rank(rows).rank, 3);
}

TEST(Matrix, DeterminantAndSolve) {
  Mat<Scalar> a(2, 2);
  a(0, 0) = 2.0;
  a(0, 1) = 1.0;
  a(1, 0) = 1.0;
  a(1, 1) = 3.0;
  EXPECT_NEAR(std::abs(determinant(a) - Scalar(5.0)), 0.0, 1e-14);
  const auto x = solve(a, Vec<Scalar>{3.0, 4.0});
  EXPECT_NEAR(std::abs(x[0] - Scalar(1.0)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(x[1] - Scalar(1.0)), 0.0, 1e-14);
  Mat<Scalar> z(2, 2);
  EXPECT_THROW(solve(z, Vec<Scalar>{1.0, 1.0}), SingularMatrix);
}
