#include "anticyc/bttree/tree.hpp"

#include <deque>
#include <set>
#include <sstream>

#include "anticyc/error.hpp"

namespace anticyc::bttree {

using namespace exactalg;

namespace {

long vp(const Rational& x, const Integer& p) { return *valuation(x, p); }

}  // namespace

std::array<Integer, 4> TreeVertex::matrix(const Integer& p) const {
  return {pow(p, a), b, Integer(0), pow(p, d)};
}

std::string TreeVertex::to_string() const {
  std::ostringstream os;
  os << "(" << a << ", " << b.get_str() << ", " << d << ")";
  return os.str();
}

Parity parity(const TreeVertex& v) { return v.depth() % 2 == 0 ? Parity::even : Parity::odd; }

std::string to_string(Parity p) { return p == Parity::even ? "even" : "odd"; }

TreeVertex vertex_from_columns(const RatMatrix& M0, const Integer& p) {
  if (M0.rows() != 2 || M0.cols() != 2) throw UsageError("bttree", "expected a 2x2 matrix");
  if (M0(0, 0) * M0(1, 1) - M0(0, 1) * M0(1, 0) == 0) throw UsageError("bttree", "matrix is singular");
  // Scale so that the smallest entry valuation is zero: the lattice is then
  // integral and primitive.
  long vmin = 0;
  bool first = true;
  for (const auto& x : M0.data())
    if (x != 0) {
      long v = vp(x, p);
      vmin = first ? v : std::min(vmin, v);
      first = false;
    }
  Rational s = vmin >= 0 ? make_rational(1, pow(p, vmin)) : Rational(pow(p, -vmin));
  RatMatrix M = M0.scaled(s);

  // Column operations over Z_(p): pivot on the column whose second entry has
  // the smaller valuation.
  std::size_t piv = 1, other = 0;
  if (M(1, 1) == 0 || (M(1, 0) != 0 && vp(M(1, 0), p) < vp(M(1, 1), p))) std::swap(piv, other);
  Rational f = M(1, other) / M(1, piv);
  Rational first_col = M(0, other) - f * M(0, piv);
  TreeVertex v;
  v.a = static_cast<unsigned long>(vp(first_col, p));
  v.d = static_cast<unsigned long>(vp(M(1, piv), p));
  Rational unit = Rational(pow(p, v.d)) / M(1, piv);
  v.b = rational_mod(M(0, piv) * unit, pow(p, v.a));
  return v;
}

std::vector<TreeVertex> neighbors(const TreeVertex& v, const Integer& p) {
  auto m = v.matrix(p);
  std::vector<TreeVertex> out;
  const long pp = p.get_si();
  for (long c = 0; c <= pp; ++c) {
    // columns of M * [[p, c], [0, 1]] or M * diag(1, p)
    RatMatrix N(2, 2);
    if (c < pp) {
      N(0, 0) = Rational(m[0] * p);
      N(1, 0) = 0;
      N(0, 1) = Rational(m[0] * c + m[1]);
      N(1, 1) = Rational(m[3]);
    } else {
      N(0, 0) = Rational(m[0]);
      N(1, 0) = 0;
      N(0, 1) = Rational(m[1] * p);
      N(1, 1) = Rational(m[3] * p);
    }
    out.push_back(vertex_from_columns(N, p));
  }
  return out;
}

TreeVertex act(const RatMatrix& g, const TreeVertex& v, const Integer& p) {
  if (g.rows() != 2 || g.cols() != 2) throw UsageError("bttree", "expected a 2x2 matrix");
  if (g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0) == 0) throw UsageError("bttree", "acting matrix has determinant zero");
  auto m = v.matrix(p);
  RatMatrix M{{Rational(m[0]), Rational(m[1])}, {Rational(m[2]), Rational(m[3])}};
  return vertex_from_columns(g * M, p);
}

unsigned long distance(const TreeVertex& v, const TreeVertex& w, const Integer& p) {
  auto mv = v.matrix(p), mw = w.matrix(p);
  RatMatrix Mv{{Rational(mv[0]), Rational(mv[1])}, {Rational(mv[2]), Rational(mv[3])}};
  RatMatrix Mw{{Rational(mw[0]), Rational(mw[1])}, {Rational(mw[2]), Rational(mw[3])}};
  RatMatrix R = exactalg::Matrix<Rational>{{Mv(1, 1), -Mv(0, 1)}, {-Mv(1, 0), Mv(0, 0)}} * Mw;
  long vmin = 0;
  bool first = true;
  for (const auto& x : R.data())
    if (x != 0) {
      long val = vp(x, p);
      vmin = first ? val : std::min(vmin, val);
      first = false;
    }
  Rational det = R(0, 0) * R(1, 1) - R(0, 1) * R(1, 0);
  return static_cast<unsigned long>(vp(det, p) - 2 * vmin);
}

std::vector<TreeVertex> ball(const Integer& p, unsigned long r) {
  std::vector<TreeVertex> out{TreeVertex::root()};
  std::set<TreeVertex> seen{TreeVertex::root()};
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].depth() >= r) continue;
    for (const auto& w : neighbors(out[i], p))
      if (seen.insert(w).second) out.push_back(w);
  }
  return out;
}

std::vector<TreeEdge> standard_edge_ray(std::size_t length, const LocalTorus& torus, TieBreak tie) {
  if (!torus.inert)
    throw ConfigurationError("bttree", "only the inert torus fixes a single vertex; split or ramified p is unsupported");
  std::vector<TreeEdge> out;
  TreeVertex prev = torus.fixed, cur = torus.fixed;
  bool at_start = true;
  for (std::size_t j = 0; j < length; ++j) {
    std::optional<TreeVertex> pick;
    for (const auto& w : neighbors(cur, torus.p)) {
      if (!at_start && w == prev) continue;
      if (!pick || (tie == TieBreak::least ? w < *pick : w > *pick)) pick = w;
    }
    out.push_back(TreeEdge{cur, *pick});
    prev = cur;
    cur = *pick;
    at_start = false;
  }
  return out;
}

TreeEdge standard_edge_sequence(std::size_t j, const LocalTorus& torus, TieBreak tie) {
  return standard_edge_ray(j + 1, torus, tie).back();
}

}  // namespace anticyc::bttree
