#include "anticyc/brandtforms/quotient.hpp"

#include <map>

#include "anticyc/error.hpp"
#include "anticyc/exactalg/linalg.hpp"

namespace anticyc::brandtforms {

using namespace exactalg;
using quatarith::Lattice;
using quatarith::RightIdeal;

QuotientGraph::QuotientGraph(ClassSet classes) : classes_(std::move(classes)) {
  const auto& O = classes_.order();
  const auto& A = classes_.algebra();
  const std::size_t h = classes_.size();
  std::vector<std::map<std::string, std::size_t>> keys(h);
  for (std::size_t i = 0; i < h; ++i) {
    neighbor_ideals_.push_back(quatarith::neighbors(O, classes_[i].ideal, classes_.splitting()));
    for (std::size_t k = 0; k < neighbor_ideals_[i].size(); ++k) keys[i][neighbor_ideals_[i][k].lattice.key()] = k;
  }
  const std::size_t deg = prime().get_ui() + 1;
  edge_of_.assign(h, std::vector<std::size_t>(deg, SIZE_MAX));
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t k = 0; k < deg; ++k) {
      if (edge_of_[i][k] != SIZE_MAX) continue;
      EdgeClass e{i, k, {}, classes_.links()[i][k].target, 0, 0};
      for (const auto& u : classes_[i].units) {
        auto it = keys[i].find(quatarith::left_multiply(A, u, neighbor_ideals_[i][k].lattice).key());
        if (it == keys[i].end()) throw InvariantViolation("brandtforms", "unit does not permute the neighbors");
        if (edge_of_[i][it->second] == SIZE_MAX) {
          edge_of_[i][it->second] = edges_.size();
          e.orbit.push_back(it->second);
        }
      }
      std::sort(e.orbit.begin(), e.orbit.end());
      edges_.push_back(std::move(e));
    }
  for (auto& e : edges_) {
    const auto& link = classes_.links()[e.source][e.rep];
    Quat back = A.inverse(link.x) * Rational(prime());
    Lattice rev = quatarith::left_multiply(A, back, classes_[e.source].ideal.lattice);
    auto it = keys[e.target].find(rev.key());
    if (it == keys[e.target].end()) throw InvariantViolation("brandtforms", "reversed edge is not a neighbor");
    e.reverse_index = it->second;
    e.reverse = edge_of_[e.target][it->second];
  }
}

std::size_t QuotientGraph::weighted_degree(std::size_t i) const {
  std::size_t d = 0;
  for (const auto& e : edges_)
    if (e.source == i) d += e.orbit.size();
  return d;
}

std::size_t QuotientGraph::edge_of_neighbor(std::size_t i, const Lattice& N) const {
  for (std::size_t k = 0; k < neighbor_ideals_[i].size(); ++k)
    if (neighbor_ideals_[i][k].lattice == N) return edge_of_[i][k];
  throw InvariantViolation("brandtforms", "lattice is not a neighbor of the class representative");
}

QuotientGraph quotient_graph(const quatarith::QuaternionOrder& O, const Integer& p, std::size_t max_classes) {
  return QuotientGraph(quatarith::ideal_class_set(O, p, max_classes));
}

IntMatrix brandt_matrix(const Integer& l, const ClassSet& classes) {
  const auto& O = classes.order();
  if (!is_prime(l) || (O.discriminant() * O.level()) % l == 0)
    throw UsageError("brandtforms", "Brandt matrices need a prime not dividing disc * level");
  const std::size_t h = classes.size();
  IntMatrix B(h, h);
  if (l == classes.prime()) {
    for (std::size_t i = 0; i < h; ++i)
      for (const auto& link : classes.links()[i]) B(i, link.target) += 1;
    return B;
  }
  quatarith::LocalSplitting split(O, l, 1);
  for (std::size_t i = 0; i < h; ++i)
    for (const auto& N : quatarith::neighbors(O, classes[i].ideal, split)) B(i, classes.find(N).index) += 1;
  return B;
}

IntMatrix ramified_operator(const Integer& v, const ClassSet& classes) {
  const auto& O = classes.order();
  const auto& A = classes.algebra();
  Lattice P = quatarith::ramified_prime_ideal(O, v);
  const std::size_t h = classes.size();
  IntMatrix B(h, h);
  for (std::size_t i = 0; i < h; ++i) {
    RightIdeal J{quatarith::product(A, classes[i].ideal.lattice, P), classes[i].ideal.norm * Rational(v)};
    B(i, classes.find(J).index) = 1;
  }
  return B;
}

Form tp_apply(const QuotientGraph& G, const Form& phi) {
  if (phi.size() != G.vertex_count()) throw UsageError("brandtforms", "vertex form has the wrong length");
  Form out(G.vertex_count());
  for (const auto& e : G.edges()) out[e.source] += Integer(e.orbit.size()) * phi[e.target];
  return out;
}

IntMatrix up_matrix(const QuotientGraph& G) {
  const std::size_t E = G.edge_count();
  const std::size_t deg = G.prime().get_ui() + 1;
  IntMatrix U(E, E);
  for (std::size_t e = 0; e < E; ++e) {
    const auto& ec = G.edge(e);
    for (std::size_t k = 0; k < deg; ++k)
      if (k != ec.reverse_index) U(e, G.edge_of(ec.target, k)) += 1;
  }
  return U;
}

Form up_apply(const QuotientGraph& G, const Form& Phi) {
  if (Phi.size() != G.edge_count()) throw UsageError("brandtforms", "edge form has the wrong length");
  const std::size_t deg = G.prime().get_ui() + 1;
  Form out(G.edge_count());
  for (std::size_t e = 0; e < G.edge_count(); ++e) {
    const auto& ec = G.edge(e);
    for (std::size_t k = 0; k < deg; ++k)
      if (k != ec.reverse_index) out[e] += Phi[G.edge_of(ec.target, k)];
  }
  return out;
}

Degeneracy degeneracy_and_vnew(const QuotientGraph& G) {
  const std::size_t V = G.vertex_count(), E = G.edge_count();
  const std::size_t deg = G.prime().get_ui() + 1;
  Degeneracy d{IntMatrix(E, V), IntMatrix(E, V), IntMatrix(V, E), IntMatrix(V, E), {}};
  for (std::size_t e = 0; e < E; ++e) {
    d.alpha_up(e, G.edge(e).source) = 1;
    d.beta_up(e, G.edge(e).target) = 1;
  }
  for (std::size_t i = 0; i < V; ++i)
    for (std::size_t k = 0; k < deg; ++k) {
      std::size_t e = G.edge_of(i, k);
      d.alpha_down(i, e) += 1;
      d.beta_down(i, G.edge(e).reverse) += 1;
    }
  IntMatrix stacked(2 * V, E);
  for (std::size_t i = 0; i < V; ++i)
    for (std::size_t e = 0; e < E; ++e) {
      stacked(i, e) = d.alpha_down(i, e);
      stacked(V + i, e) = d.beta_down(i, e);
    }
  d.vnew_basis = integer_kernel(stacked);
  return d;
}

}  // namespace anticyc::brandtforms
