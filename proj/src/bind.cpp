#include <cmath>
#include <numbers>

#include "invforge/expr.hpp"
#include "invforge/invcat.hpp"

namespace invforge::expr {

namespace {

using SFn = std::function<Dual(const DualJet&)>;
using TFn = std::function<TensorValue(const DualJet&)>;

struct Tensor {
  TFn fn;
  bool is_matrix{false};
};

bool all_digits(std::string_view s) {
  return !s.empty() && s.find_first_not_of("0123456789") == std::string_view::npos;
}

class Binder {
 public:
  explicit Binder(const Binding& b) : b_(b), real_(b.layout.kind() == FieldKind::real) {}

  SFn scalar(const Node& n) {
    switch (n.kind) {
      case Node::Kind::number: {
        const double v = n.number;
        return [v](const DualJet&) { return Dual(v); };
      }
      case Node::Kind::symbol: return symbol(n);
      case Node::Kind::negate: {
        auto a = scalar(*n.args[0]);
        return [a](const DualJet& p) { return -a(p); };
      }
      case Node::Kind::binary: return binary(n);
      case Node::Kind::call: return call(n);
    }
    throw BindError("unsupported node", n.span);
  }

 private:
  // Base index of x<k>, or -1.
  int base_index(int k) const {
    const int N = b_.layout.n_base();
    if (b_.galilei || b_.metric.kind() == MetricKind::minkowski) return k >= 0 && k < N ? k : -1;
    return k >= 1 && k <= N ? k - 1 : -1;
  }

  int parse_base(std::string_view s, const Node& n) const {
    if (s == "t") {
      if (!b_.galilei) throw BindError("'t' is only defined for Galilei bindings", n.span);
      return 0;
    }
    if (s.size() < 2 || s[0] != 'x' || !all_digits(s.substr(1)))
      throw BindError("bad derivative suffix in '" + n.name + "'", n.span);
    const int k = std::stoi(std::string(s.substr(1)));
    const int i = base_index(k);
    if (i < 0) throw BindError("index out of range in '" + n.name + "'", n.span);
    return i;
  }

  SFn symbol(const Node& n) {
    const std::string& s = n.name;
    if (s == "pi") return [](const DualJet&) { return Dual(std::numbers::pi); };
    if (s == "I") return [](const DualJet&) { return Dual(kI); };
    if (s == "t" || (s.size() >= 2 && s[0] == 'x' && all_digits(std::string_view(s).substr(1)))) {
      const auto id = JetCoordinateId::base(parse_base(s, n));
      return [id](const DualJet& p) { return p.at(id); };
    }
    if (!s.empty() && s[0] == 'u') {
      const auto us = s.find('_');
      const std::string_view head = std::string_view(s).substr(0, us);
      if (head == "u" || all_digits(head.substr(1))) {
        const int r = head == "u" ? 1 : std::stoi(std::string(head.substr(1)));
        if (r < 1 || r > b_.layout.slots()) throw BindError("index out of range in '" + s + "'", n.span);
        if (us == std::string::npos) {
          const auto id = JetCoordinateId::field(r - 1);
          return [id](const DualJet& p) { return p.at(id); };
        }
        std::vector<int> idx;
        std::string_view rest = std::string_view(s).substr(us + 1);
        while (!rest.empty()) {
          std::size_t len = 1;
          if (rest[0] == 'x')
            while (len < rest.size() && std::isdigit(static_cast<unsigned char>(rest[len]))) ++len;
          idx.push_back(parse_base(rest.substr(0, len), n));
          rest.remove_prefix(len);
        }
        if (idx.empty() || idx.size() > 2) throw BindError("only first and second derivatives exist", n.span);
        const auto id = idx.size() == 1 ? JetCoordinateId::d1(r - 1, idx[0])
                                        : JetCoordinateId::d2(r - 1, idx[0], idx[1]);
        return [id](const DualJet& p) { return p.at(id); };
      }
    }
    if (is_tensor_name(s))
      throw BindError("tensor '" + s + "' can only appear as an argument of S, R, Sjk, tr, det or contract",
                      n.span);
    throw BindError("unknown symbol '" + s + "'", n.span);
  }

  static std::string tensor_key(std::string s) {
    for (auto& c : s)
      if (c == '_') c = '-';
    return s;
  }

  static bool is_tensor_name(const std::string& s) {
    const auto key = tensor_key(s);
    for (const auto& t : tensor_names())
      if (t == key) return true;
    return false;
  }

  Tensor tensor_arg(const Node& n, int field) {
    if (n.kind != Node::Kind::symbol || !is_tensor_name(n.name))
      throw BindError("expected a tensor name (grad, hess, x, theta, w, ...)", n.span);
    if (field < 1 || field > b_.layout.slots()) throw BindError("field index out of range", n.span);
    const int r = field - 1;
    const int lo = b_.lo;
    const int dim = b_.metric.dim();
    const auto key = tensor_key(n.name);
    if (key == "grad") return {[=](const DualJet& p) { return TensorValue{gradient(p, r, lo, dim), {}, false}; }, false};
    if (key == "hess") return {[=](const DualJet& p) { return TensorValue{{}, hessian(p, r, lo, dim), true}; }, true};
    if (key == "x") return {[=](const DualJet& p) { return TensorValue{positions(p, lo, dim), {}, false}; }, false};
    if (!b_.spec) throw BindError("tensor '" + n.name + "' needs an algebra binding", n.span);
    try {
      const TensorBuilder t = tensor(key, *b_.spec, r);
      return {[t](const DualJet& p) { return t(p); }, t.is_matrix()};
    } catch (const std::invalid_argument& e) {
      throw BindError(e.what(), n.span);
    }
  }

  static int integer_arg(const Node& n, int lo, int hi, const char* what) {
    if (n.kind != Node::Kind::number || n.number != std::floor(n.number))
      throw BindError(std::string(what) + " must be an integer literal", n.span);
    if (n.number < lo || n.number > hi)
      throw BindError(std::string(what) + " out of range " + std::to_string(lo) + ".." + std::to_string(hi), n.span);
    return static_cast<int>(n.number);
  }

  // Field for each of `count` tensor arguments.
  static std::vector<int> fields_for(const Node& n, std::size_t count) {
    if (n.fields.empty()) return std::vector<int>(count, 1);
    if (n.fields.size() == 1) return std::vector<int>(count, n.fields[0]);
    if (n.fields.size() == count) return n.fields;
    throw BindError(n.name + ": give one field index or one per tensor argument", n.span);
  }

  Node named(const char* name, SourceSpan span) const {
    Node d;
    d.kind = Node::Kind::symbol;
    d.name = name;
    d.span = span;
    return d;
  }

  void arity(const Node& n, std::initializer_list<std::size_t> allowed) const {
    for (auto a : allowed)
      if (n.args.size() == a) return;
    std::string msg = n.name + " takes ";
    std::size_t k = 0;
    for (auto a : allowed) msg += (k++ ? " or " : "") + std::to_string(a);
    throw BindError(msg + " arguments", n.span);
  }

  Tensor matrix(const Node& n, int field) {
    auto t = tensor_arg(n, field);
    if (!t.is_matrix) throw BindError("'" + n.name + "' is a vector, a matrix is needed here", n.span);
    return t;
  }
  Tensor vector(const Node& n, int field) {
    auto t = tensor_arg(n, field);
    if (t.is_matrix) throw BindError("'" + n.name + "' is a matrix, a vector is needed here", n.span);
    return t;
  }

  SFn call(const Node& n) {
    const std::string& f = n.name;
    const Metric g = b_.metric;
    const int dim = g.dim();
    auto no_fields = [&] {
      if (!n.fields.empty()) throw BindError(f + " takes no field indices", n.span);
    };
    if (f == "exp" || f == "log" || f == "sqrt" || f == "conj") {
      arity(n, {1});
      no_fields();
      auto a = scalar(*n.args[0]);
      const bool real = real_;
      if (f == "exp") return [a](const DualJet& p) { return exp(a(p)); };
      if (f == "log")
        return [a, real](const DualJet& p) {
          const Dual v = a(p);
          if (real && !(v.val.real() > 0.0)) throw EvaluationError("log of a non-positive value");
          return log(v);
        };
      if (f == "sqrt")
        return [a, real](const DualJet& p) {
          const Dual v = a(p);
          if (real && v.val.real() < 0.0) throw EvaluationError("sqrt of a negative value");
          return sqrt(v);
        };
      if (real) throw BindError("conj needs a complex field", n.span);
      const auto c = conjugate(ScalarJetFunction("conj", a));
      return [c](const DualJet& p) { return c(p); };
    }
    if (f == "S") {
      arity(n, {1, 2});
      const int k = integer_arg(*n.args[0], 1, dim + 1, "trace order");
      const auto fl = fields_for(n, 1);
      const auto m = n.args.size() == 2 ? matrix(*n.args[1], fl[0]) : matrix(named("hess", n.span), fl[0]);
      return [m, g, k](const DualJet& p) { return S(m.fn(p).mat, g, k); };
    }
    if (f == "R") {
      arity(n, {1, 3});
      const int k = integer_arg(*n.args[0], 0, dim + 1, "order");
      const auto fl = fields_for(n, 2);
      const auto v = n.args.size() == 3 ? vector(*n.args[1], fl[0]) : vector(named("grad", n.span), fl[0]);
      const auto m = n.args.size() == 3 ? matrix(*n.args[2], fl[1]) : matrix(named("hess", n.span), fl[1]);
      return [v, m, g, k](const DualJet& p) { return R(v.fn(p).vec, m.fn(p).mat, g, k); };
    }
    if (f == "Sjk") {
      arity(n, {2, 4});
      const int k = integer_arg(*n.args[1], 1, dim + 1, "trace order");
      const int j = integer_arg(*n.args[0], 0, k, "j");
      const auto fl = fields_for(n, 2);
      const auto a = n.args.size() == 4 ? matrix(*n.args[2], fl[0]) : matrix(named("hess", n.span), fl[0]);
      const auto c = n.args.size() == 4 ? matrix(*n.args[3], fl[1]) : matrix(named("hess", n.span), fl[1]);
      return [a, c, g, j, k](const DualJet& p) { return Sjk(a.fn(p).mat, c.fn(p).mat, g, j, k); };
    }
    if (f == "tr" || f == "det") {
      arity(n, {1});
      const auto m = matrix(*n.args[0], fields_for(n, 1)[0]);
      if (f == "tr") return [m, g](const DualJet& p) { return S(m.fn(p).mat, g, 1); };
      return [m](const DualJet& p) { return determinant(m.fn(p).mat); };
    }
    if (f == "contract") {
      arity(n, {2, 3});
      const auto fl = fields_for(n, n.args.size());
      const auto a = vector(*n.args[0], fl[0]);
      const auto c = vector(*n.args.back(), fl.back());
      if (n.args.size() == 2) return [a, c, g](const DualJet& p) { return dot(g, a.fn(p).vec, c.fn(p).vec); };
      const auto m = matrix(*n.args[1], fl[1]);
      // a_i g_ii M_ij g_jj c_j
      return [a, m, c, g](const DualJet& p) {
        auto mc = c.fn(p).vec;
        for (int i = 0; i < g.dim(); ++i) mc[i] = mc[i] * g.weight(i);
        return dot(g, a.fn(p).vec, m.fn(p).mat * mc);
      };
    }
    throw BindError("unknown function '" + f + "'", n.span);
  }

  static std::optional<double> constant(const Node& n) {
    if (n.kind == Node::Kind::number) return n.number;
    if (n.kind == Node::Kind::negate && n.args[0]->kind == Node::Kind::number) return -n.args[0]->number;
    return std::nullopt;
  }

  SFn binary(const Node& n) {
    auto a = scalar(*n.args[0]);
    if (n.op == '^') {
      const bool real = real_;
      if (const auto c = constant(*n.args[1])) {
        const double e = *c;
        if (e == std::floor(e) && std::abs(e) < 64) {
          const int k = static_cast<int>(e);
          return [a, k](const DualJet& p) { return pow(a(p), k); };
        }
        return [a, e, real](const DualJet& p) {
          const Dual v = a(p);
          if (real && !(v.val.real() > 0.0)) throw EvaluationError("non-integer power of a non-positive base");
          return pow(v, e);
        };
      }
      auto b = scalar(*n.args[1]);
      return [a, b, real](const DualJet& p) {
        const Dual v = a(p);
        const Dual e = b(p);
        if (e.der == Scalar{} && e.val.imag() == 0.0 && e.val.real() == std::floor(e.val.real()) &&
            std::abs(e.val.real()) < 64)
          return pow(v, static_cast<int>(e.val.real()));
        if (real && !(v.val.real() > 0.0)) throw EvaluationError("non-integer power of a non-positive base");
        return pow(v, e);
      };
    }
    auto b = scalar(*n.args[1]);
    switch (n.op) {
      case '+': return [a, b](const DualJet& p) { return a(p) + b(p); };
      case '-': return [a, b](const DualJet& p) { return a(p) - b(p); };
      case '*': return [a, b](const DualJet& p) { return a(p) * b(p); };
      default: return [a, b](const DualJet& p) { return a(p) / b(p); };
    }
  }

  const Binding& b_;
  bool real_;
};

}  // namespace

Binding binding_for(const AlgebraSpec& spec) {
  Binding b;
  b.layout = spec.layout();
  b.metric = spec.metric();
  b.galilei = spec.geometry() == Geometry::galilei;
  b.lo = b.galilei ? 1 : 0;
  b.spec = spec;
  return b;
}

Binding binding(int n_base, int m, const Metric& metric, FieldKind kind) {
  if (metric.dim() != n_base) throw std::invalid_argument("metric dimension must equal the number of base coordinates");
  Binding b;
  b.layout = JetLayout(n_base, m, kind);
  b.metric = metric;
  return b;
}

ScalarJetFunction bind(const Node& node, const Binding& b, std::string label) {
  Binder binder(b);
  auto fn = binder.scalar(node);
  if (label.empty()) label = print(node);
  return ScalarJetFunction(std::move(label), std::move(fn));
}

ScalarJetFunction compile(std::string_view text, const Binding& b) {
  return bind(*parse(text), b, std::string(text));
}

}  // namespace invforge::expr
