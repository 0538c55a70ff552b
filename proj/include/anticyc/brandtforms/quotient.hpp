#pragma once

#include <vector>

#include "anticyc/exactalg/matrix.hpp"
#include "anticyc/quatarith/ideals.hpp"

namespace anticyc::brandtforms {

using exactalg::Integer;
using exactalg::IntMatrix;
using exactalg::Rational;
using quatarith::ClassSet;
using quatarith::Quat;

/// A directed edge class: the orbit of neighbor `rep` of class `source`
/// under the units of its left order.
struct EdgeClass {
  std::size_t source;
  std::size_t rep;
  std::vector<std::size_t> orbit;  // neighbor indices in the orbit
  std::size_t target;              // class of the neighbor
  std::size_t reverse;             // edge class of the reversed edge
  std::size_t reverse_index;       // neighbor index of the reversal at the target
};

/// Gamma \ T for Gamma = O[1/p]^x: vertex classes are the right ideal
/// classes, directed edge classes are unit orbits on p-neighbors.
class QuotientGraph {
 public:
  explicit QuotientGraph(ClassSet classes);

  const ClassSet& classes() const noexcept { return classes_; }
  const Integer& prime() const noexcept { return classes_.prime(); }
  std::size_t vertex_count() const noexcept { return classes_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<EdgeClass>& edges() const noexcept { return edges_; }
  const EdgeClass& edge(std::size_t e) const { return edges_[e]; }
  /// Edge class of neighbor k of class i.
  std::size_t edge_of(std::size_t i, std::size_t k) const { return edge_of_[i][k]; }
  /// |O_l(I_i)^x|.
  std::size_t unit_order(std::size_t i) const { return classes_[i].units.size(); }
  /// Weighted out-degree: sum of orbit sizes, always p + 1.
  std::size_t weighted_degree(std::size_t i) const;

  /// Edge class of neighbor lattice N of class i (N must be one of the
  /// stored neighbors); InvariantViolation otherwise.
  std::size_t edge_of_neighbor(std::size_t i, const quatarith::Lattice& N) const;

 private:
  ClassSet classes_;
  std::vector<std::vector<quatarith::RightIdeal>> neighbor_ideals_;
  std::vector<EdgeClass> edges_;
  std::vector<std::vector<std::size_t>> edge_of_;
};

QuotientGraph quotient_graph(const quatarith::QuaternionOrder& O, const Integer& p, std::size_t max_classes = 400);

/// B_ij = number of l-neighbors of I_i in class j. Row sums are l + 1.
IntMatrix brandt_matrix(const Integer& l, const ClassSet& classes);
/// For v dividing the discriminant: B_ij = 1 when I_i P_v is in class j.
IntMatrix ramified_operator(const Integer& v, const ClassSet& classes);

/// Vertex forms are indexed by class, edge forms by edge class.
using Form = std::vector<Integer>;

/// (T_p phi)(i) = sum over the p + 1 neighbors of phi at their classes.
Form tp_apply(const QuotientGraph& G, const Form& phi);
/// (U_p Phi)(e) = sum over the p edges leaving t(e), the reversal of e excluded.
Form up_apply(const QuotientGraph& G, const Form& Phi);
IntMatrix up_matrix(const QuotientGraph& G);

/// Pullbacks to edges along source and target, and pushforwards summing
/// over the p + 1 edges out of (respectively into) each vertex.
struct Degeneracy {
  IntMatrix alpha_up;    // alpha^*: vertices -> edges, phi(s(e))
  IntMatrix beta_up;     // beta^*: vertices -> edges, phi(t(e))
  IntMatrix alpha_down;  // alpha_*: edges -> vertices
  IntMatrix beta_down;   // beta_*: edges -> vertices
  IntMatrix vnew_basis;  // rows: basis of ker(alpha_*) cap ker(beta_*)
};
Degeneracy degeneracy_and_vnew(const QuotientGraph& G);

}  // namespace anticyc::brandtforms
