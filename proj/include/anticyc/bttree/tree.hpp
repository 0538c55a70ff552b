#pragma once

#include <array>
#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "anticyc/exactalg/matrix.hpp"

namespace anticyc::bttree {

using exactalg::Integer;
using exactalg::Rational;
using exactalg::RatMatrix;

/// Homothety class of a Z_p-lattice, stored as the primitive column Hermite
/// form [[p^a, b], [0, p^d]] with 0 <= b < p^a.
struct TreeVertex {
  unsigned long a = 0;
  Integer b = 0;
  unsigned long d = 0;

  static TreeVertex root() { return TreeVertex{}; }
  /// Distance from the root.
  unsigned long depth() const { return a + d; }
  /// The basis matrix for a given p.
  std::array<Integer, 4> matrix(const Integer& p) const;
  std::string to_string() const;

  std::strong_ordering operator<=>(const TreeVertex& o) const {
    if (auto c = a <=> o.a; c != 0) return c;
    if (int c = cmp(b, o.b); c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    return d <=> o.d;
  }
  bool operator==(const TreeVertex& o) const = default;
};

enum class Parity { even, odd };
Parity parity(const TreeVertex& v);
std::string to_string(Parity p);

struct TreeEdge {
  TreeVertex source;
  TreeVertex target;

  TreeEdge reversed() const { return TreeEdge{target, source}; }
  bool operator==(const TreeEdge& o) const = default;
  auto operator<=>(const TreeEdge& o) const = default;
};

/// The class of the lattice spanned by the columns of a 2x2 matrix over Q.
/// UsageError when the columns are dependent.
TreeVertex vertex_from_columns(const RatMatrix& M, const Integer& p);

/// The p + 1 neighbors: M [[p, c], [0, 1]] for c = 0..p-1, then M diag(1, p).
std::vector<TreeVertex> neighbors(const TreeVertex& v, const Integer& p);
/// Action of an invertible rational matrix; UsageError when det = 0.
TreeVertex act(const RatMatrix& g, const TreeVertex& v, const Integer& p);
unsigned long distance(const TreeVertex& v, const TreeVertex& w, const Integer& p);

/// All vertices within distance r of the root, breadth first.
std::vector<TreeVertex> ball(const Integer& p, unsigned long r);

enum class TieBreak { least, greatest };

/// The local torus data needed to lay down the standard edge sequence.
struct LocalTorus {
  Integer p;
  TreeVertex fixed;
  bool inert = false;
};

/// Edges e_0, e_1, ... along a geodesic ray from the fixed vertex: e_0 leaves
/// the fixed vertex and each later edge continues away from it. Among the
/// admissible targets the tie-break picks the least or greatest vertex.
/// ConfigurationError unless the torus is inert.
TreeEdge standard_edge_sequence(std::size_t j, const LocalTorus& torus, TieBreak tie = TieBreak::least);
std::vector<TreeEdge> standard_edge_ray(std::size_t length, const LocalTorus& torus, TieBreak tie = TieBreak::least);

}  // namespace anticyc::bttree
