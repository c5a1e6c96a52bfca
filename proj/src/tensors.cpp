#include <stdexcept>

#include "invforge/invcat.hpp"

namespace invforge {

Mat<Dual> hessian(const DualJet& p, int r, int lo, int dim) {
  Mat<Dual> m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = p.ddu(r, lo + i, lo + j);
  return m;
}

Vec<Dual> gradient(const DualJet& p, int r, int lo, int dim) {
  Vec<Dual> v(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) v[i] = p.du(r, lo + i);
  return v;
}

Vec<Dual> positions(const DualJet& p, int lo, int dim) {
  Vec<Dual> v(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) v[i] = p.x(lo + i);
  return v;
}

Vec<Dual> time_gradient(const DualJet& p, int r, int lo, int dim) {
  Vec<Dual> v(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) v[i] = p.ddu(r, lo + i, 0);
  return v;
}

std::vector<Scalar> TensorBuilder::values(const JetPoint& p) const {
  const auto t = fn_(make_dual(p));
  std::vector<Scalar> out;
  if (t.is_matrix) {
    for (int i = 0; i < t.mat.rows(); ++i)
      for (int j = 0; j < t.mat.cols(); ++j) out.push_back(t.mat(i, j).val);
  } else {
    for (const auto& c : t.vec) out.push_back(c.val);
  }
  return out;
}

std::vector<Scalar> TensorBuilder::directional(const JetPoint& p, std::span<const Scalar> tangent) const {
  const auto t = fn_(make_dual(p, tangent));
  std::vector<Scalar> out;
  if (t.is_matrix) {
    for (int i = 0; i < t.mat.rows(); ++i)
      for (int j = 0; j < t.mat.cols(); ++j) out.push_back(t.mat(i, j).der);
  } else {
    for (const auto& c : t.vec) out.push_back(c.der);
  }
  return out;
}

Vec<Dual> implicit_theta(const DualJet& p, int r, int n) {
  return solve(hessian(p, r, 1, n), time_gradient(p, r, 1, n));
}

namespace {

TensorValue vec_value(Vec<Dual> v) { return {std::move(v), {}, false}; }
TensorValue mat_value(Mat<Dual> m) { return {{}, std::move(m), true}; }

// M v with the metric applied to the contracted index.
Vec<Dual> contract_mv(const Mat<Dual>& m, const Vec<Dual>& v, const Metric& g) {
  Vec<Dual> r(v.size());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r[i] += m(i, j) * v[j] * g.weight(j);
  return r;
}

Dual metric_trace(const Mat<Dual>& m, const Metric& g) {
  Dual s;
  for (int i = 0; i < m.rows(); ++i) s += m(i, i) * g.weight(i);
  return s;
}

}  // namespace

std::vector<std::string> tensor_names() {
  return {"grad", "hess", "x", "theta", "theta1", "w", "eik", "gal-theta", "gal-theta2",
          "h", "hhat", "h0", "hhat0", "implicit-theta", "cgal-theta"};
}

TensorBuilder tensor(const std::string& name, const AlgebraSpec& spec, int r) {
  const bool galilei = spec.geometry() == Geometry::galilei;
  const int lo = galilei ? 1 : 0;
  const int dim = galilei ? spec.n : spec.n_base();
  const Metric g = spec.metric();
  const int slots = spec.layout().slots();
  if (r < 0 || r >= slots) throw std::invalid_argument("tensor: field index out of range");
  const double lambda = spec.lambda_value();
  const double mu = spec.mu;
  const int n = spec.n;
  const std::string label = name + (r == 0 ? "" : "^" + std::to_string(r + 1));

  auto galilei_only = [&] {
    if (!galilei) throw std::invalid_argument("tensor '" + name + "' is defined for Galilei algebras");
  };

  if (name == "grad")
    return {label, g, false, [=](const DualJet& p) { return vec_value(gradient(p, r, lo, dim)); }};
  if (name == "hess")
    return {label, g, true, [=](const DualJet& p) { return mat_value(hessian(p, r, lo, dim)); }};
  if (name == "x")
    return {label, g, false, [=](const DualJet& p) { return vec_value(positions(p, lo, dim)); }};
  if (name == "theta") {
    if (galilei) throw std::invalid_argument("use gal-theta2 for the Galilei order-2 tensor");
    return {label, g, true, [=](const DualJet& p) {
              const Dual u = p.u(r);
              const auto v = gradient(p, r, lo, dim);
              const Dual vv = dot(g, v, v);
              Mat<Dual> m = hessian(p, r, lo, dim);
              for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j) {
                  m(i, j) = lambda * m(i, j) + (1.0 - lambda) * v[i] * v[j] / u;
                  if (i == j) m(i, j) -= g.weight(i) * vv / (2.0 * u);
                }
              return mat_value(std::move(m));
            }};
  }
  if (name == "theta1")
    return {label, g, false, [=](const DualJet& p) {
              auto v = gradient(p, r, lo, dim);
              const auto v1 = gradient(p, 0, lo, dim);
              for (int i = 0; i < dim; ++i) v[i] = v[i] / p.u(r) - v1[i] / p.u(0);
              return vec_value(std::move(v));
            }};
  if (name == "w") {
    if (dim == 2) throw std::invalid_argument("tensor 'w' needs dimension other than 2");
    return {label, g, true, [=](const DualJet& p) {
              const auto v = gradient(p, r, lo, dim);
              const Mat<Dual> h = hessian(p, r, lo, dim);
              const Dual vv = dot(g, v, v);
              const Dual tr = metric_trace(h, g);
              const auto hv = contract_mv(h, v, g);
              Mat<Dual> m(dim, dim);
              for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j) {
                  Dual e = h(i, j);
                  if (i == j) e += g.weight(i) * tr / (2.0 - dim);
                  m(i, j) = vv * e - (v[i] * hv[j] + v[j] * hv[i]);
                }
              return mat_value(std::move(m));
            }};
  }
  if (name == "eik")
    return {label, g, true, [=](const DualJet& p) {
              const auto v = gradient(p, r, lo, dim);
              const Mat<Dual> h = hessian(p, r, lo, dim);
              const Dual vv = dot(g, v, v);
              const Dual tr = metric_trace(h, g);
              const auto hv = contract_mv(h, v, g);
              Mat<Dual> m(dim, dim);
              for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j)
                  m(i, j) = v[i] * hv[j] + v[j] * hv[i] - v[i] * v[j] * tr - vv * h(i, j);
              return mat_value(std::move(m));
            }};
  if (name == "gal-theta") {
    galilei_only();
    return {label, g, false, [=](const DualJet& p) {
              const auto v = gradient(p, r, lo, dim);
              auto t = contract_mv(hessian(p, r, lo, dim), v, g);
              const auto vt = time_gradient(p, r, lo, dim);
              for (int i = 0; i < dim; ++i) t[i] += mu * vt[i];
              return vec_value(std::move(t));
            }};
  }
  if (name == "gal-theta2") {
    galilei_only();
    return {label, g, true, [=](const DualJet& p) {
              const auto v = gradient(p, r, lo, dim);
              Mat<Dual> m = hessian(p, r, lo, dim);
              const Dual shift = (2.0 / n) * (dot(g, v, v) + mu * p.du(r, 0));
              for (int i = 0; i < dim; ++i) m(i, i) -= shift;
              return mat_value(std::move(m));
            }};
  }
  if (name == "h" || name == "hhat") {
    galilei_only();
    const bool hat = name == "hhat";
    return {label, g, false, [=](const DualJet& p) {
              const Dual t = p.x(0);
              const auto v = gradient(p, r, lo, dim);
              Vec<Dual> h(v.size());
              for (int i = 0; i < dim; ++i)
                h[i] = hat ? mu * p.x(lo + i) / t - v[i] : mu * p.x(lo + i) - t * v[i];
              return vec_value(std::move(h));
            }};
  }
  if (name == "h0" || name == "hhat0") {
    galilei_only();
    const bool hat = name == "hhat0";
    return {label, g, false, [=](const DualJet& p) {
              const Dual t = p.x(0);
              const auto v = gradient(p, r, lo, dim);
              const auto x = positions(p, lo, dim);
              auto h = contract_mv(hessian(p, r, lo, dim), x, g);
              const auto vt = time_gradient(p, r, lo, dim);
              for (int i = 0; i < dim; ++i) h[i] += t * vt[i];
              if (hat) {
                const Dual xv = dot(g, x, v);
                for (int i = 0; i < dim; ++i)
                  h[i] = h[i] / t + (2.0 / n) * t * v[i] * p.du(r, 0) + (4.0 / n) * xv * v[i] / t;
              }
              return vec_value(std::move(h));
            }};
  }
  if (name == "implicit-theta") {
    galilei_only();
    return {label, g, false, [=](const DualJet& p) { return vec_value(implicit_theta(p, r, dim)); }};
  }
  if (name == "cgal-theta") {
    galilei_only();
    if (spec.field_kind() != FieldKind::complex)
      throw std::invalid_argument("tensor 'cgal-theta' needs a complex Galilei algebra");
    // -i m phi_at on the field slot, +i m on its conjugate.
    const Scalar coeff = (r < spec.m ? -kI : kI) * spec.mass;
    return {label, g, false, [=](const DualJet& p) {
              const auto v = gradient(p, r, lo, dim);
              auto t = contract_mv(hessian(p, r, lo, dim), v, g);
              const auto vt = time_gradient(p, r, lo, dim);
              for (int i = 0; i < dim; ++i) t[i] += coeff * vt[i];
              return vec_value(std::move(t));
            }};
  }
  throw std::invalid_argument("unknown tensor '" + name + "'");
}

}  // namespace invforge
