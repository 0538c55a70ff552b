#include "anticyc/compgraph/graph.hpp"

#include <deque>

#include "anticyc/error.hpp"

namespace anticyc::compgraph {

using exactalg::to_string;

namespace {

Integer parse_length(const nlohmann::json& j) {
  if (j.is_number_integer()) return Integer(j.get<long>());
  if (j.is_string()) return Integer(j.get<std::string>());
  throw UsageError("compgraph", "edge length must be an integer");
}

}  // namespace

LengthGraph::LengthGraph(std::size_t vertices, std::vector<LengthEdge> edges)
    : n_(vertices), edges_(std::move(edges)), component_(vertices, 0) {
  for (const auto& e : edges_) {
    if (e.source >= n_ || e.target >= n_) throw UsageError("compgraph", "edge endpoint out of range");
    if (e.length < 1) throw UsageError("compgraph", "edge lengths must be at least 1");
  }
  std::vector<std::vector<std::size_t>> adj(n_);
  for (const auto& e : edges_) {
    adj[e.source].push_back(e.target);
    adj[e.target].push_back(e.source);
  }
  std::vector<bool> seen(n_, false);
  for (std::size_t v = 0; v < n_; ++v) {
    if (seen[v]) continue;
    std::deque<std::size_t> queue{v};
    seen[v] = true;
    while (!queue.empty()) {
      auto u = queue.front();
      queue.pop_front();
      component_[u] = components_;
      for (auto w : adj[u])
        if (!seen[w]) {
          seen[w] = true;
          queue.push_back(w);
        }
    }
    ++components_;
  }
}

LengthGraph LengthGraph::from_json(const nlohmann::json& j) {
  if (!j.contains("vertices") || !j.contains("edges")) throw UsageError("compgraph", "graph needs vertices and edges");
  std::vector<LengthEdge> edges;
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() < 2 || e.size() > 3) throw UsageError("compgraph", "edges are [s, t] or [s, t, len]");
    edges.push_back({e[0].get<std::size_t>(), e[1].get<std::size_t>(), e.size() == 3 ? parse_length(e[2]) : Integer(1)});
  }
  return LengthGraph(j.at("vertices").get<std::size_t>(), std::move(edges));
}

nlohmann::json LengthGraph::to_json() const {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : edges_) {
    nlohmann::json len = e.length.fits_slong_p() ? nlohmann::json(e.length.get_si()) : nlohmann::json(to_string(e.length));
    edges.push_back({e.source, e.target, len});
  }
  return {{"vertices", n_}, {"edges", edges}};
}

LengthGraph LengthGraph::from_quotient(const brandtforms::QuotientGraph& G) {
  const std::size_t V = G.vertex_count();
  std::vector<LengthEdge> edges;
  for (const auto& e : G.edges()) edges.push_back({e.source, V + e.target, 1});
  return LengthGraph(2 * V, std::move(edges));
}

LengthGraph LengthGraph::component(std::size_t c) const {
  if (c >= components_) throw UsageError("compgraph", "no such component");
  std::vector<std::size_t> index(n_, n_);
  std::size_t k = 0;
  for (std::size_t v = 0; v < n_; ++v)
    if (component_[v] == c) index[v] = k++;
  std::vector<LengthEdge> edges;
  for (const auto& e : edges_)
    if (component_[e.source] == c) edges.push_back({index[e.source], index[e.target], e.length});
  return LengthGraph(k, std::move(edges));
}

std::optional<std::vector<int>> LengthGraph::bipartition() const {
  std::vector<int> color(n_, -1);
  std::vector<std::vector<std::size_t>> adj(n_);
  for (const auto& e : edges_) {
    adj[e.source].push_back(e.target);
    adj[e.target].push_back(e.source);
  }
  for (std::size_t v = 0; v < n_; ++v) {
    if (color[v] != -1) continue;
    color[v] = 0;
    std::deque<std::size_t> queue{v};
    while (!queue.empty()) {
      auto u = queue.front();
      queue.pop_front();
      for (auto w : adj[u]) {
        if (color[w] == -1) {
          color[w] = 1 - color[u];
          queue.push_back(w);
        } else if (color[w] == color[u]) {
          return std::nullopt;
        }
      }
    }
  }
  return color;
}

LengthGraph LengthGraph::bipartite_oriented() const {
  auto color = bipartition();
  if (!color) throw ConfigurationError("compgraph", "graph is not bipartite");
  std::vector<LengthEdge> edges;
  for (const auto& e : edges_)
    edges.push_back((*color)[e.source] == 0 ? e : LengthEdge{e.target, e.source, e.length});
  return LengthGraph(n_, std::move(edges));
}

LengthGraph LengthGraph::subdivided() const {
  std::vector<LengthEdge> edges;
  std::size_t next = n_;
  for (const auto& e : edges_) {
    // Loops stay loops: they are dropped from the character group either way.
    if (e.is_loop() || e.length == 1) {
      edges.push_back({e.source, e.target, 1});
      continue;
    }
    std::size_t prev = e.source;
    for (Integer i = 1; i < e.length; ++i) {
      edges.push_back({prev, next, 1});
      prev = next++;
    }
    edges.push_back({prev, e.target, 1});
  }
  return LengthGraph(next, std::move(edges));
}

IntMatrix boundary_matrix(const LengthGraph& G) {
  IntMatrix D(G.vertex_count(), G.edge_count());
  for (std::size_t k = 0; k < G.edge_count(); ++k) {
    const auto& e = G.edge(k);
    if (e.is_loop()) continue;
    D(e.target, k) += 1;
    D(e.source, k) -= 1;
  }
  return D;
}

std::vector<Integer> boundary(const LengthGraph& G, const std::vector<Integer>& x) {
  if (x.size() != G.edge_count()) throw UsageError("compgraph", "edge chain has the wrong length");
  return boundary_matrix(G) * x;
}

std::vector<Integer> coboundary(const LengthGraph& G, const std::vector<Integer>& y) {
  if (y.size() != G.vertex_count()) throw UsageError("compgraph", "vertex chain has the wrong length");
  return boundary_matrix(G).transpose() * y;
}

CharacterGroup character_group(const LengthGraph& G) {
  std::vector<std::size_t> proper;
  for (std::size_t k = 0; k < G.edge_count(); ++k)
    if (!G.edge(k).is_loop()) proper.push_back(k);
  auto D = boundary_matrix(G);
  IntMatrix Dp(G.vertex_count(), proper.size());
  for (std::size_t i = 0; i < G.vertex_count(); ++i)
    for (std::size_t k = 0; k < proper.size(); ++k) Dp(i, k) = D(i, proper[k]);
  auto K = exactalg::integer_kernel(Dp);
  IntMatrix basis(K.rows(), G.edge_count());
  for (std::size_t r = 0; r < K.rows(); ++r)
    for (std::size_t k = 0; k < proper.size(); ++k) basis(r, proper[k]) = K(r, k);
  const std::size_t betti = proper.size() + G.component_count() - G.vertex_count();
  if (basis.rows() != betti) throw InvariantViolation("compgraph", "cycle rank differs from the first Betti number");
  return CharacterGroup{basis};
}

bool raynaud_exact(const LengthGraph& G, const CharacterGroup& X) {
  auto D = boundary_matrix(G);
  if (!(D * X.basis.transpose()).is_zero()) return false;
  std::size_t proper = 0;
  for (const auto& e : G.edges()) proper += e.is_loop() ? 0 : 1;
  if (X.rank() + exactalg::rank(D) != proper) return false;
  // Degree-zero lattice: v - (first vertex of its component).
  std::vector<std::size_t> first(G.component_count(), G.vertex_count());
  for (std::size_t v = G.vertex_count(); v-- > 0;) first[G.components()[v]] = v;
  std::vector<std::vector<Integer>> rows;
  for (std::size_t v = 0; v < G.vertex_count(); ++v) {
    if (first[G.components()[v]] == v) continue;
    std::vector<Integer> r(G.vertex_count(), 0);
    r[v] = 1;
    r[first[G.components()[v]]] = -1;
    rows.push_back(std::move(r));
  }
  auto degree_zero = exactalg::hermite_normal_form(IntMatrix::from_rows(rows, G.vertex_count()));
  return exactalg::hermite_normal_form(D.transpose()) == degree_zero;
}

IntMatrix monodromy_map(const LengthGraph& G, const CharacterGroup& X) {
  const std::size_t r = X.rank();
  IntMatrix gram(r, r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j)
      for (std::size_t k = 0; k < G.edge_count(); ++k)
        gram(i, j) += G.edge(k).length * X.basis(i, k) * X.basis(j, k);
  return gram;
}

ComponentGroup::ComponentGroup(IntMatrix gram)
    : gram_(std::move(gram)), snf_(exactalg::smith_normal_form(gram_)), shape_(exactalg::cokernel_shape(gram_)) {
  for (const auto& d : snf_.diagonal())
    if (abs(d) == 1) ++offset_;
}

std::vector<Integer> ComponentGroup::class_of(const std::vector<Integer>& functional) const {
  if (functional.size() != gram_.rows()) throw UsageError("compgraph", "functional has the wrong length");
  auto c = snf_.U * functional;
  auto diag = snf_.diagonal();
  std::vector<Integer> out;
  for (std::size_t i = offset_; i < c.size(); ++i)
    out.push_back(i < diag.size() ? exactalg::mod(c[i], abs(diag[i])) : c[i]);
  return out;
}

std::vector<std::vector<Integer>> ComponentGroup::elements() const {
  auto order = shape_.order();
  if (!order) throw UsageError("compgraph", "component group is infinite");
  if (*order > 1000000) throw SearchExhaustedError("compgraph", "component group too large to enumerate");
  std::vector<std::vector<Integer>> out{zero()};
  for (std::size_t i = 0; i < shape_.factors.size(); ++i) {
    std::vector<std::vector<Integer>> next;
    for (const auto& x : out)
      for (Integer a = 0; a < shape_.factors[i]; ++a) {
        auto y = x;
        y[i] = a;
        next.push_back(std::move(y));
      }
    out = std::move(next);
  }
  return out;
}

ComponentGroup component_group(const LengthGraph& G) {
  if (!G.connected()) throw UsageError("compgraph", "graph is disconnected; use per-component groups");
  return ComponentGroup(monodromy_map(G, character_group(G)));
}

std::vector<ComponentGroup> component_groups(const LengthGraph& G) {
  std::vector<ComponentGroup> out;
  for (std::size_t c = 0; c < G.component_count(); ++c) out.push_back(component_group(G.component(c)));
  return out;
}

namespace {

// Preimage of a degree-zero chain routed along a BFS spanning forest.
std::vector<Integer> tree_preimage(const LengthGraph& G, const std::vector<Integer>& x) {
  const std::size_t n = G.vertex_count();
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(n);
  for (std::size_t k = 0; k < G.edge_count(); ++k) {
    const auto& e = G.edge(k);
    if (e.is_loop()) continue;
    adj[e.source].push_back({e.target, k});
    adj[e.target].push_back({e.source, k});
  }
  std::vector<std::size_t> parent_edge(n, G.edge_count()), order;
  std::vector<bool> seen(n, false);
  for (std::size_t r = 0; r < n; ++r) {
    if (seen[r]) continue;
    seen[r] = true;
    std::deque<std::size_t> queue{r};
    while (!queue.empty()) {
      auto u = queue.front();
      queue.pop_front();
      order.push_back(u);
      for (auto [w, k] : adj[u])
        if (!seen[w]) {
          seen[w] = true;
          parent_edge[w] = k;
          queue.push_back(w);
        }
    }
  }
  std::vector<Integer> y(G.edge_count(), 0), charge = x;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    auto v = *it;
    auto k = parent_edge[v];
    if (k == G.edge_count()) continue;
    const auto& e = G.edge(k);
    // Edge k must deliver charge[v] into v.
    std::size_t parent = e.source == v ? e.target : e.source;
    y[k] = e.target == v ? charge[v] : -charge[v];
    charge[parent] += charge[v];
    charge[v] = 0;
  }
  return y;
}

std::vector<Integer> functional(const LengthGraph& G, const CharacterGroup& X, const std::vector<Integer>& y) {
  std::vector<Integer> c(X.rank(), 0);
  for (std::size_t i = 0; i < X.rank(); ++i)
    for (std::size_t k = 0; k < G.edge_count(); ++k) c[i] += G.edge(k).length * y[k] * X.basis(i, k);
  return c;
}

}  // namespace

std::vector<Integer> omega_map(const LengthGraph& G, const ComponentGroup& Phi, const std::vector<Integer>& x) {
  if (x.size() != G.vertex_count()) throw UsageError("compgraph", "vertex chain has the wrong length");
  std::vector<Integer> degree(G.component_count(), 0);
  for (std::size_t v = 0; v < x.size(); ++v) degree[G.components()[v]] += x[v];
  for (const auto& d : degree)
    if (d != 0) throw UsageError("compgraph", "chain does not have degree zero on every component");
  auto X = character_group(G);
  if (X.rank() != Phi.gram().rows()) throw UsageError("compgraph", "component group belongs to another graph");
  auto y1 = exactalg::solve_integer(boundary_matrix(G), x);
  if (!y1) throw InvariantViolation("compgraph", "degree-zero chain has no preimage under the boundary");
  auto y2 = tree_preimage(G, x);
  if (boundary(G, y2) != x) throw InvariantViolation("compgraph", "spanning-tree preimage is wrong");
  auto c1 = Phi.class_of(functional(G, X, *y1));
  auto c2 = Phi.class_of(functional(G, X, y2));
  if (c1 != c2) throw InvariantViolation("compgraph", "omega depends on the chosen preimage");
  return c1;
}

std::vector<Integer> specialize_divisor(const LengthGraph& G, const ComponentGroup& Phi,
                                        const std::vector<ReducedPoint>& D) {
  std::vector<Integer> x(G.vertex_count(), 0);
  for (const auto& P : D) {
    if (P.edge || !P.vertex)
      throw ConfigurationError("compgraph", "a point of the divisor reduces to a double point");
    if (*P.vertex >= G.vertex_count()) throw UsageError("compgraph", "reduction vertex out of range");
    x[*P.vertex] += P.coefficient;
  }
  return omega_map(G, Phi, x);
}

IntMatrix intersection_matrix(const LengthGraph& G) {
  auto S = G.subdivided();
  IntMatrix mu(S.vertex_count(), S.vertex_count());
  for (const auto& e : S.edges()) {
    if (e.is_loop()) continue;
    mu(e.source, e.target) += 1;
    mu(e.target, e.source) += 1;
    mu(e.source, e.source) -= 1;
    mu(e.target, e.target) -= 1;
  }
  return mu;
}

EdixhovenReport edixhoven_check(const LengthGraph& G) {
  if (!G.connected()) throw UsageError("compgraph", "the comparison needs a connected graph");
  EdixhovenReport r;
  auto S = G.subdivided();
  auto mu = intersection_matrix(G);
  auto D = boundary_matrix(S);
  auto L = D * D.transpose();
  r.laplacian_square = (L + mu).is_zero();

  // Subdivision map X(G) -> X(S): each edge goes to its path of unit edges.
  auto X = character_group(G);
  auto XS = character_group(S);
  IntMatrix image(X.rank(), S.edge_count());
  std::size_t k = 0;
  for (std::size_t e = 0; e < G.edge_count(); ++e) {
    const auto& edge = G.edge(e);
    std::size_t pieces = (edge.is_loop() || edge.length == 1) ? 1 : edge.length.get_ui();
    for (std::size_t s = 0; s < pieces; ++s, ++k)
      for (std::size_t i = 0; i < X.rank(); ++i) image(i, k) = X.basis(i, e);
  }
  auto gram = monodromy_map(G, X);
  auto unit_gram = image * image.transpose();
  bool spans = exactalg::hermite_normal_form(image) == exactalg::hermite_normal_form(XS.basis);
  r.monodromy_square = spans && (D * image.transpose()).is_zero() && unit_gram == gram;

  r.from_monodromy = exactalg::cokernel_shape(gram);
  r.from_intersection = exactalg::cokernel_shape(mu);
  r.from_intersection.free_rank -= 1;
  r.agree = r.from_monodromy == r.from_intersection;
  return r;
}

nlohmann::json EdixhovenReport::to_json() const {
  return {{"laplacian_square", laplacian_square},
          {"monodromy_square", monodromy_square},
          {"from_monodromy", from_monodromy.to_string()},
          {"from_intersection", from_intersection.to_string()},
          {"agree", agree}};
}

}  // namespace anticyc::compgraph
