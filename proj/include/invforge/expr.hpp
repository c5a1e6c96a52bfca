#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "invforge/jetfunction.hpp"
#include "invforge/liealg.hpp"

namespace invforge::expr {

/// Byte offsets [begin, end) into the source text.
struct SourceSpan {
  std::size_t begin{0};
  std::size_t end{0};
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, SourceSpan span) : std::runtime_error(msg), span_(span) {}
  SourceSpan span() const { return span_; }

 private:
  SourceSpan span_;
};

/// Unresolved symbol, bad index, arity or tensor-kind mismatch.
class BindError : public std::runtime_error {
 public:
  BindError(const std::string& msg, SourceSpan span) : std::runtime_error(msg), span_(span) {}
  SourceSpan span() const { return span_; }

 private:
  SourceSpan span_;
};

enum class TokenKind { number, ident, lparen, rparen, comma, semicolon, plus, minus, star, slash, caret, end };

struct Token {
  TokenKind kind;
  std::string text;
  double number{0.0};
  SourceSpan span;
};

std::vector<Token> lex(std::string_view text);

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  enum class Kind { number, symbol, negate, binary, call };
  Kind kind{Kind::number};
  double number{0.0};
  /// Symbol or function name.
  std::string name;
  /// One of + - * / ^ for binary nodes.
  char op{0};
  std::vector<NodePtr> args;
  /// Field indices after ';' in a call (1-based).
  std::vector<int> fields;
  SourceSpan span;
};

/// Structural equality; spans are ignored.
bool same_tree(const Node& a, const Node& b);

/// Grammar, lowest precedence first:
///   sum     := product (('+' | '-') product)*
///   product := unary (('*' | '/') unary)*
///   unary   := '-' unary | power
///   power   := primary ('^' unary)?          (right-associative)
///   primary := number | ident | ident '(' args? (';' int (',' int)*)? ')' | '(' sum ')'
NodePtr parse(std::string_view text);

/// Canonical text with the fewest parentheses that reparse to the same tree.
std::string print(const Node& node);

/// How symbols map onto a jet layout.
struct Binding {
  JetLayout layout;
  Metric metric{MetricKind::euclidean, 1};
  /// First base index of the contracted block (1 for Galilei, where x0 = t).
  int lo{0};
  bool galilei{false};
  /// Needed for tensors other than grad, hess and x.
  std::optional<AlgebraSpec> spec;
};

/// Binding for an algebra: Euclid uses x1..xN, Minkowski x0..xn, Galilei
/// t (= x0) and x1..xn.
Binding binding_for(const AlgebraSpec& spec);
/// Plain binding without algebra parameters; Minkowski metrics number the
/// coordinates from x0.
Binding binding(int n_base, int m, const Metric& metric, FieldKind kind);

/// Differentiable evaluator for a scalar expression.
ScalarJetFunction bind(const Node& node, const Binding& b, std::string label = "");

/// parse + bind; the label is the source text.
ScalarJetFunction compile(std::string_view text, const Binding& b);

}  // namespace invforge::expr
