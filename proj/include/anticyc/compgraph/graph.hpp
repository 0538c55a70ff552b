#pragma once

#include <optional>
#include <vector>

#include "anticyc/brandtforms/quotient.hpp"
#include "anticyc/exactalg/fitting.hpp"
#include "anticyc/exactalg/linalg.hpp"
#include "json.hpp"

namespace anticyc::compgraph {

using exactalg::AbelianGroupShape;
using exactalg::Integer;
using exactalg::IntMatrix;

/// One representative per reversal pair; the reversal has the same length.
struct LengthEdge {
  std::size_t source;
  std::size_t target;
  Integer length = 1;
  bool is_loop() const { return source == target; }
};

class LengthGraph {
 public:
  /// UsageError for endpoints out of range or lengths below 1.
  LengthGraph(std::size_t vertices, std::vector<LengthEdge> edges);

  /// {"vertices": k, "edges": [[s, t, len], ...]}, len optional (default 1).
  static LengthGraph from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  /// Dual graph of the special fiber attached to Gamma \ T: two copies of the
  /// vertex classes (even, odd) and one edge even -> odd per directed edge
  /// class, all of unit length.
  static LengthGraph from_quotient(const brandtforms::QuotientGraph& G);

  std::size_t vertex_count() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<LengthEdge>& edges() const noexcept { return edges_; }
  const LengthEdge& edge(std::size_t e) const { return edges_[e]; }

  /// Component label of each vertex, labels in order of first vertex.
  const std::vector<std::size_t>& components() const noexcept { return component_; }
  std::size_t component_count() const noexcept { return components_; }
  bool connected() const noexcept { return components_ <= 1; }
  /// The subgraph on component c, vertices renumbered in order.
  LengthGraph component(std::size_t c) const;

  /// Two-coloring with vertex 0 of each component even; nullopt if none.
  std::optional<std::vector<int>> bipartition() const;
  /// The same graph with every edge running from its even to its odd end;
  /// ConfigurationError when the graph is not bipartite.
  LengthGraph bipartite_oriented() const;
  /// Each edge of length l replaced by a path of l unit edges.
  LengthGraph subdivided() const;

 private:
  std::size_t n_;
  std::vector<LengthEdge> edges_;
  std::vector<std::size_t> component_;
  std::size_t components_ = 0;
};

/// d_* = t_* - s_* as a |V| x |E| matrix. Loops give zero columns.
IntMatrix boundary_matrix(const LengthGraph& G);
std::vector<Integer> boundary(const LengthGraph& G, const std::vector<Integer>& x);
/// d^* = t^* - s^*, the transpose of d_*.
std::vector<Integer> coboundary(const LengthGraph& G, const std::vector<Integer>& y);

/// ker(d_*) inside Z[E] with loops dropped: rows are a basis.
struct CharacterGroup {
  IntMatrix basis;
  std::size_t rank() const { return basis.rows(); }
};
CharacterGroup character_group(const LengthGraph& G);
/// rank X + rank d_* = number of non-loop edges, and im d_* is the
/// degree-zero lattice of every component.
bool raynaud_exact(const LengthGraph& G, const CharacterGroup& X);

/// Gram matrix <x_i, x_j> = sum_e l(e) x_i(e) x_j(e).
IntMatrix monodromy_map(const LengthGraph& G, const CharacterGroup& X);

/// coker(lambda : X -> X^dual) with its Smith data, used to name classes.
class ComponentGroup {
 public:
  explicit ComponentGroup(IntMatrix gram);

  const AbelianGroupShape& shape() const noexcept { return shape_; }
  const IntMatrix& gram() const noexcept { return gram_; }
  /// Class of a functional on X, coordinates along the nontrivial factors.
  std::vector<Integer> class_of(const std::vector<Integer>& functional) const;
  /// All classes, for small groups.
  std::vector<std::vector<Integer>> elements() const;
  std::vector<Integer> zero() const { return std::vector<Integer>(shape_.factors.size(), 0); }

 private:
  IntMatrix gram_;
  exactalg::SmithForm snf_;
  AbelianGroupShape shape_;
  std::size_t offset_ = 0;  // number of unit invariant factors
};

/// UsageError when G is disconnected; use component_groups instead.
ComponentGroup component_group(const LengthGraph& G);
std::vector<ComponentGroup> component_groups(const LengthGraph& G);

/// UsageError when x has nonzero degree on some component. The class is
/// computed from two preimages y of x and InvariantViolation raised if they
/// disagree.
std::vector<Integer> omega_map(const LengthGraph& G, const ComponentGroup& Phi, const std::vector<Integer>& x);

/// A point of a divisor with its reduction: a vertex (nonsingular) or an
/// edge (the point reduces to a double point).
struct ReducedPoint {
  std::optional<std::size_t> vertex;
  std::optional<std::size_t> edge;
  Integer coefficient;
};
/// ConfigurationError for a point reducing to an edge.
std::vector<Integer> specialize_divisor(const LengthGraph& G, const ComponentGroup& Phi,
                                        const std::vector<ReducedPoint>& D);

struct EdixhovenReport {
  /// d_* d^* = -mu on the subdivided graph.
  bool laplacian_square = false;
  /// Subdivision carries the monodromy pairing to the unit pairing.
  bool monodromy_square = false;
  AbelianGroupShape from_monodromy;
  AbelianGroupShape from_intersection;
  bool agree = false;
  nlohmann::json to_json() const;
};
/// Intersection matrix of the subdivided graph: C.C' = number of shared
/// double points, C.C = -(number of non-loop edges at C).
IntMatrix intersection_matrix(const LengthGraph& G);
EdixhovenReport edixhoven_check(const LengthGraph& G);

}  // namespace anticyc::compgraph
