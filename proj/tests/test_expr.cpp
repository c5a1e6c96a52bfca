#include <gtest/gtest.h>

#include "invforge/expr.hpp"
#include "invforge/invcat.hpp"
#include "invforge/verify.hpp"

using namespace invforge;
using namespace invforge::expr;

namespace {

AlgebraSpec spec_of(AlgebraName name, int n, int m = 1) {
  AlgebraSpec s;
  s.name = name;
  s.n = n;
  s.m = m;
  return s;
}

Scalar value(std::string_view text, const Binding& b, std::uint64_t seed = 1) {
  return compile(text, b).eval(Domain{b.layout}.sample(seed));
}

const Binding& ae3() {
  static const Binding b = binding_for(spec_of(AlgebraName::AE, 3));
  return b;
}

}  // namespace

TEST(Lexer, TokensAndSpans) {
  const auto t = lex("u_x1x2 ^ 2.5e1");
  ASSERT_EQ(t.size(), 4u);
  EXPECT_EQ(t[0].kind, TokenKind::ident);
  EXPECT_EQ(t[0].span.end, 6u);
  EXPECT_EQ(t[1].kind, TokenKind::caret);
  EXPECT_EQ(t[2].number, 25.0);
  EXPECT_EQ(t[3].kind, TokenKind::end);
}

TEST(Lexer, BadCharacterHasSpan) {
  try {
    lex("u + $");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.span().begin, 4u);
    EXPECT_EQ(e.span().end, 5u);
  }
}

TEST(Parser, Precedence) {
  const Binding b = binding(1, 1, Metric::euclidean(1), FieldKind::real);
  EXPECT_EQ(value("2+3*4^2", b), Scalar(50.0));
  EXPECT_EQ(value("2^3^2", b), Scalar(512.0));
  EXPECT_EQ(value("-2^2", b), Scalar(-4.0));
  EXPECT_EQ(value("2^-1", b), Scalar(0.5));
  EXPECT_EQ(value("8/4/2", b), Scalar(1.0));
  EXPECT_EQ(value("1-2-3", b), Scalar(-4.0));
}

TEST(Parser, TreeShape) {
  const auto n = parse("u_x1x2 ^ 2 + S(2)");
  ASSERT_EQ(n->kind, Node::Kind::binary);
  EXPECT_EQ(n->op, '+');
  EXPECT_EQ(n->args[0]->op, '^');
  EXPECT_EQ(n->args[1]->kind, Node::Kind::call);
  EXPECT_EQ(n->args[1]->name, "S");
  const auto f = parse("Sjk(1, 2; 1, 2)");
  EXPECT_EQ(f->fields, (std::vector<int>{1, 2}));
}

TEST(Parser, RoundTrip) {
  for (const char* text :
       {"u_x1x2 ^ 2 + S(2)", "(1 - R(1)) * S(1) - R(2)", "R(2) - R(1) * S(1)", "-(a*b)^2", "a-(b-c)", "a/(b*c)",
        "(a+b)^(c^d)", "-x^-2", "exp(log(u)) * conj(u)", "Sjk(1, 2, hess, theta; 1, 2)", "2.5e-3*x1", "--u",
        "tr(w) / det(hess; 2)", "contract(grad, hess, grad)"}) {
    const auto a = parse(text);
    const auto printed = print(*a);
    const auto b = parse(printed);
    EXPECT_TRUE(same_tree(*a, *b)) << text << " -> " << printed;
    EXPECT_EQ(print(*b), printed);
  }
}

TEST(Parser, ErrorsPointInsideInput) {
  for (const char* text : {"S(2", "1 +", "(", "u * * 2", "S(2; 0)", "S(2; x)", ")", "f(1,)"}) {
    const std::string s(text);
    try {
      parse(s);
      ADD_FAILURE() << text;
    } catch (const ParseError& e) {
      EXPECT_LT(e.span().begin, s.size()) << text;
      EXPECT_LE(e.span().end, s.size()) << text;
    }
  }
}

TEST(Bind, IndexOutOfRange) {
  try {
    compile("u1_x9", ae3());
    FAIL();
  } catch (const BindError& e) {
    EXPECT_NE(std::string(e.what()).find("index out of range"), std::string::npos);
    EXPECT_EQ(e.span().begin, 0u);
  }
  EXPECT_THROW(compile("u2", ae3()), BindError);
  EXPECT_THROW(compile("x0", ae3()), BindError);
}

TEST(Bind, UnknownAndMisusedNames) {
  EXPECT_THROW(compile("foo + 1", ae3()), BindError);
  EXPECT_THROW(compile("bar(1)", ae3()), BindError);
  EXPECT_THROW(compile("theta", ae3()), BindError);
  EXPECT_THROW(compile("S(2, grad)", ae3()), BindError);
  EXPECT_THROW(compile("R(1, hess, hess)", ae3()), BindError);
  EXPECT_THROW(compile("S(x1)", ae3()), BindError);
  EXPECT_THROW(compile("S(9)", ae3()), BindError);
  EXPECT_THROW(compile("exp(1, 2)", ae3()), BindError);
  EXPECT_THROW(compile("conj(u)", ae3()), BindError);
  EXPECT_THROW(compile("u_t", ae3()), BindError);
  // theta needs lambda != 0 data from an algebra; a plain binding has none.
  EXPECT_THROW(compile("S(1, theta)", binding(3, 1, Metric::euclidean(3), FieldKind::real)), BindError);
}

TEST(Bind, TraceMatchesCatalog) {
  const auto f = compile("S(2)", ae3());
  const Metric g = Metric::euclidean(3);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto p = Domain{ae3().layout}.sample(s);
    const Scalar want = S(hessian(make_dual(p), 0, 0, 3), g, 2).val;
    EXPECT_NEAR(std::abs(f.eval(p) - want), 0.0, 1e-12 * (1 + std::abs(want)));
  }
}

TEST(Bind, FieldValueGradientIsUnitVector) {
  const auto f = compile("u", ae3());
  const auto p = Domain{ae3().layout}.sample(3);
  const auto g = f.grad(p);
  const auto at = ae3().layout.index(JetCoordinateId::field(0));
  for (std::size_t k = 0; k < g.size(); ++k) EXPECT_EQ(g[k], Scalar(k == at ? 1.0 : 0.0));
}

TEST(Bind, DerivativeSymbols) {
  const auto p = Domain{ae3().layout}.sample(2);
  EXPECT_EQ(compile("u_x2x3", ae3()).eval(p), p.ddu(0, 1, 2));
  EXPECT_EQ(compile("u1_x3x2", ae3()).eval(p), p.ddu(0, 1, 2));
  EXPECT_EQ(compile("x1", ae3()).eval(p), p.x(0));
  const auto gal = binding_for(spec_of(AlgebraName::AG_I, 2));
  const auto q = Domain{gal.layout}.sample(2);
  EXPECT_EQ(compile("u_t", gal).eval(q), q.du(0, 0));
  EXPECT_EQ(compile("u_x1t", gal).eval(q), q.ddu(0, 0, 1));
  EXPECT_EQ(compile("t", gal).eval(q), q.x(0));
  EXPECT_EQ(compile("S(1)", gal).eval(q), q.ddu(0, 1, 1) + q.ddu(0, 2, 2));
  const auto mink = binding_for(spec_of(AlgebraName::AP, 2));
  const auto r = Domain{mink.layout}.sample(2);
  EXPECT_EQ(compile("u_x0", mink).eval(r), r.du(0, 0));
  EXPECT_EQ(compile("R(1)", mink).eval(r), r.du(0, 0) * r.du(0, 0) - r.du(0, 1) * r.du(0, 1) - r.du(0, 2) * r.du(0, 2));
}

TEST(Bind, FieldSelection) {
  const auto b = binding_for(spec_of(AlgebraName::AE, 3, 2));
  const auto p = Domain{b.layout}.sample(5);
  const Metric g = Metric::euclidean(3);
  const auto d = make_dual(p);
  EXPECT_NEAR(std::abs(compile("Sjk(1, 2; 1, 2)", b).eval(p) - Sjk(hessian(d, 0, 0, 3), hessian(d, 1, 0, 3), g, 1, 2).val),
              0.0, 1e-12);
  EXPECT_NEAR(std::abs(compile("R(2; 2)", b).eval(p) - R(gradient(d, 1, 0, 3), hessian(d, 1, 0, 3), g, 2).val), 0.0,
              1e-12);
  EXPECT_NEAR(std::abs(compile("contract(grad, grad; 1, 2)", b).eval(p) -
                       dot(g, gradient(d, 0, 0, 3), gradient(d, 1, 0, 3)).val),
              0.0, 1e-12);
}

TEST(Bind, ConjugateOnComplexLayout) {
  const auto b = binding_for(spec_of(AlgebraName::AG_II, 2));
  const auto p = Domain{b.layout}.sample(1);
  EXPECT_NEAR(std::abs(compile("conj(u_x1)", b).eval(p) - std::conj(p.du(0, 1))), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(compile("u2", b).eval(p) - std::conj(p.u(0))), 0.0, 1e-15);
  EXPECT_EQ(compile("I*I", b).eval(p), Scalar(-1.0));
}

TEST(Bind, RealDomainErrorsAtEvaluation) {
  const Binding b = binding(1, 1, Metric::euclidean(1), FieldKind::real);
  auto p = Domain{b.layout}.sample(1);
  p.set(JetCoordinateId::field(0), -2.0);
  EXPECT_THROW(compile("u^0.5", b).eval(p), EvaluationError);
  EXPECT_THROW(compile("log(u)", b).eval(p), EvaluationError);
  EXPECT_THROW(compile("sqrt(u)", b).eval(p), EvaluationError);
  EXPECT_EQ(compile("u^2", b).eval(p), Scalar(4.0));
  p.set(JetCoordinateId::field(0), 4.0);
  EXPECT_EQ(compile("u^0.5", b).eval(p), Scalar(2.0));
}

TEST(Bind, InvarianceOfCompiledExpressions) {
  const auto s = spec_of(AlgebraName::AE, 3);
  const auto ops = prolong2(catalog(s), s.layout());
  const std::vector<ScalarJetFunction> good{compile("S(2) * R(1) - exp(S(1))", ae3())};
  const std::vector<ScalarJetFunction> bad{compile("u_x1", ae3())};
  EXPECT_TRUE(check_absolute(ops, good, Domain{s.layout()}, 10, 1e-8, 1).pass());
  EXPECT_FALSE(check_absolute(ops, bad, Domain{s.layout()}, 10, 1e-8, 1).pass());
}

TEST(Bind, EquationTextMatchesCatalog) {
  AlgebraSpec params;
  params.n = 3;
  const auto eq = equation("eq35", params);
  const auto f = compile("R(2) - R(1)*S(1)", binding_for(eq.spec));
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto p = eq.domain.sample(s);
    EXPECT_NEAR(std::abs(f.eval(p) - eq.residual.eval(p)), 0.0, 1e-12 * (1 + std::abs(eq.residual.eval(p))));
  }
}
