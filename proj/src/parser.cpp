#include <charconv>

#include "invforge/expr.hpp"

namespace invforge::expr {

namespace {

class Parser {
 public:
  Parser(std::string_view text) : tokens_(lex(text)), size_(text.size()) {}

  NodePtr run() {
    auto e = sum();
    if (peek().kind != TokenKind::end) fail("unexpected '" + peek().text + "'", peek().span);
    return e;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_++]; }
  bool accept(TokenKind k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }

  [[noreturn]] void fail(const std::string& msg, SourceSpan span) const {
    // Keep the span inside the text, also at the end of input.
    if (span.begin >= size_ && size_ > 0) span = {size_ - 1, size_};
    throw ParseError(msg, span);
  }

  const Token& expect(TokenKind k, const char* what) {
    if (peek().kind != k)
      fail(std::string("expected ") + what + (peek().kind == TokenKind::end ? " at end of input"
                                                                           : ", found '" + peek().text + "'"),
           peek().span);
    return next();
  }

  static NodePtr binary(char op, NodePtr l, NodePtr r) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::binary;
    n->op = op;
    n->span = {l->span.begin, r->span.end};
    n->args = {std::move(l), std::move(r)};
    return n;
  }

  NodePtr sum() {
    auto l = product();
    while (peek().kind == TokenKind::plus || peek().kind == TokenKind::minus) {
      const char op = next().text[0];
      l = binary(op, l, product());
    }
    return l;
  }

  NodePtr product() {
    auto l = unary();
    while (peek().kind == TokenKind::star || peek().kind == TokenKind::slash) {
      const char op = next().text[0];
      l = binary(op, l, unary());
    }
    return l;
  }

  NodePtr unary() {
    if (peek().kind == TokenKind::minus) {
      const auto start = next().span.begin;
      auto child = unary();
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::negate;
      n->span = {start, child->span.end};
      n->args = {std::move(child)};
      return n;
    }
    return power();
  }

  NodePtr power() {
    auto base = primary();
    if (accept(TokenKind::caret)) return binary('^', base, unary());
    return base;
  }

  NodePtr primary() {
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::number: {
        next();
        auto n = std::make_shared<Node>();
        n->kind = Node::Kind::number;
        n->number = t.number;
        n->span = t.span;
        return n;
      }
      case TokenKind::lparen: {
        const auto start = next().span.begin;
        auto inner = sum();
        const auto end = expect(TokenKind::rparen, "')'").span.end;
        // Parentheses do not create nodes; widen the span for messages.
        auto copy = std::make_shared<Node>(*inner);
        copy->span = {start, end};
        return copy;
      }
      case TokenKind::ident: {
        next();
        auto n = std::make_shared<Node>();
        n->name = t.text;
        n->span = t.span;
        if (!accept(TokenKind::lparen)) {
          n->kind = Node::Kind::symbol;
          return n;
        }
        n->kind = Node::Kind::call;
        if (peek().kind != TokenKind::rparen && peek().kind != TokenKind::semicolon) {
          n->args.push_back(sum());
          while (accept(TokenKind::comma)) n->args.push_back(sum());
        }
        if (accept(TokenKind::semicolon)) {
          do {
            const Token& f = expect(TokenKind::number, "a field index");
            int v = 0;
            const auto r = std::from_chars(f.text.data(), f.text.data() + f.text.size(), v);
            if (r.ec != std::errc() || r.ptr != f.text.data() + f.text.size() || v < 1)
              fail("field index must be a positive integer", f.span);
            n->fields.push_back(v);
          } while (accept(TokenKind::comma));
        }
        n->span.end = expect(TokenKind::rparen, "')'").span.end;
        return n;
      }
      case TokenKind::end:
        fail("unexpected end of input", t.span);
      default:
        fail("unexpected '" + t.text + "'", t.span);
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_{0};
  std::size_t size_;
};

int precedence(const Node& n) {
  switch (n.kind) {
    case Node::Kind::negate: return 3;
    case Node::Kind::binary:
      switch (n.op) {
        case '+':
        case '-': return 1;
        case '*':
        case '/': return 2;
        default: return 4;
      }
    default: return 5;
  }
}

std::string wrap(const Node& n, bool parens) { return parens ? "(" + print(n) + ")" : print(n); }

}  // namespace

NodePtr parse(std::string_view text) { return Parser(text).run(); }

bool same_tree(const Node& a, const Node& b) {
  if (a.kind != b.kind || a.name != b.name || a.op != b.op || a.fields != b.fields || a.args.size() != b.args.size())
    return false;
  if (a.kind == Node::Kind::number && a.number != b.number) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!same_tree(*a.args[i], *b.args[i])) return false;
  return true;
}

std::string print(const Node& n) {
  switch (n.kind) {
    case Node::Kind::number: {
      char buf[64];
      const auto r = std::to_chars(buf, buf + sizeof buf, n.number);
      return std::string(buf, r.ptr);
    }
    case Node::Kind::symbol: return n.name;
    case Node::Kind::negate: return "-" + wrap(*n.args[0], precedence(*n.args[0]) < 3);
    case Node::Kind::binary: {
      const Node& l = *n.args[0];
      const Node& r = *n.args[1];
      const int p = precedence(n);
      if (n.op == '^') return wrap(l, precedence(l) < 5) + "^" + wrap(r, precedence(r) < 3);
      const std::string op = p == 1 ? std::string(" ") + n.op + " " : std::string(1, n.op);
      return wrap(l, precedence(l) < p) + op + wrap(r, precedence(r) <= p);
    }
    case Node::Kind::call: {
      std::string s = n.name + "(";
      for (std::size_t i = 0; i < n.args.size(); ++i) s += (i ? ", " : "") + print(*n.args[i]);
      if (!n.fields.empty()) {
        s += "; ";
        for (std::size_t i = 0; i < n.fields.size(); ++i) s += (i ? ", " : "") + std::to_string(n.fields[i]);
      }
      return s + ")";
    }
  }
  return {};
}

}  // namespace invforge::expr
