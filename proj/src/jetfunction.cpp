#include "invforge/jetfunction.hpp"

namespace invforge {

std::vector<Scalar> ScalarJetFunction::grad(const JetPoint& p) const {
  std::vector<std::size_t> all(p.size());
  for (std::size_t k = 0; k < all.size(); ++k) all[k] = k;
  return grad(p, all);
}

std::vector<Scalar> ScalarJetFunction::grad(const JetPoint& p,
                                            std::span<const std::size_t> coords) const {
  DualJet d = make_dual(p);
  std::vector<Scalar> g;
  g.reserve(coords.size());
  for (const std::size_t k : coords) {
    d[k].der = 1.0;
    g.push_back(fn_(d).der);
    d[k].der = 0.0;
  }
  return g;
}

ScalarJetFunction conjugate(const ScalarJetFunction& f) {
  return ScalarJetFunction("conj(" + f.label() + ")", [f](const DualJet& p) {
    const JetLayout& L = p.layout();
    DualJet q(L);
    for (std::size_t k = 0; k < p.size(); ++k) {
      const std::size_t src = L.index(L.conj(L.id(k)));
      q[k] = Dual(std::conj(p[src].val), std::conj(p[src].der));
    }
    const Dual r = f(q);
    return Dual(std::conj(r.val), std::conj(r.der));
  });
}

}  // namespace invforge
