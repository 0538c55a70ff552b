#pragma once

#include <map>
#include <vector>

#include "anticyc/brandtforms/quotient.hpp"
#include "anticyc/bttree/tree.hpp"
#include "anticyc/quatarith/embedding.hpp"
#include "json.hpp"

namespace anticyc::toruscm {

using exactalg::Integer;
using quatarith::Mat2;

/// a + b*omega in (O_K / p^r)^x modulo scalars, normalized to (1, b) when a
/// is a unit and to (a, 1) otherwise.
struct TorusElement {
  Integer a;
  Integer b;
  bool operator==(const TorusElement& o) const { return a == o.a && b == o.b; }
  bool operator<(const TorusElement& o) const { return cmp(a, o.a) < 0 || (a == o.a && cmp(b, o.b) < 0); }
};

/// The torus K_p^x / Q_p^x acting on the tree through iota_p o Psi, for p
/// inert in K. Elements are handled modulo p^precision, which determines
/// their action on vertices up to that depth.
class TorusData {
 public:
  TorusData(Integer disc_K, Integer p, unsigned precision, Integer trace, Integer norm, Mat2 W,
            quatarith::Embedding embedding);

  const Integer& disc_K() const noexcept { return disc_K_; }
  const Integer& prime() const noexcept { return p_; }
  unsigned precision() const noexcept { return r_; }
  const Integer& modulus() const noexcept { return mod_; }
  /// omega^2 = trace * omega - norm.
  const Integer& trace() const noexcept { return t_; }
  const Integer& norm() const noexcept { return n_; }
  /// iota_p(Psi(omega)) mod p^precision.
  const Mat2& omega_matrix() const noexcept { return W_; }
  const quatarith::Embedding& embedding() const noexcept { return emb_; }
  bttree::TreeVertex fixed_vertex() const { return bttree::TreeVertex::root(); }
  bttree::LocalTorus local() const { return bttree::LocalTorus{p_, fixed_vertex(), true}; }
  /// |O_K^x / +-1|.
  long global_units() const;

  TorusElement normalize(const Integer& a, const Integer& b) const;
  TorusElement mul(const TorusElement& x, const TorusElement& y) const;
  TorusElement power(const TorusElement& x, Integer e) const;
  Mat2 matrix(const TorusElement& x) const;
  bttree::TreeVertex act(const TorusElement& x, const bttree::TreeVertex& v) const;
  bttree::TreeEdge act(const TorusElement& x, const bttree::TreeEdge& e) const;

  /// x in U_j = (1 + p^j O_K)^x Z_p^x / Z_p^x (U_0 is everything).
  bool in_level(const TorusElement& x, unsigned j) const;
  /// Representatives of U_0 / U_j for 1 <= j <= precision, (p + 1) p^(j-1) of them.
  std::vector<TorusElement> quotient(unsigned j) const;
  /// Representatives of U_i / U_j, i <= j.
  std::vector<TorusElement> subquotient(unsigned i, unsigned j) const;

 private:
  Integer disc_K_, p_;
  unsigned r_;
  Integer mod_, t_, n_;
  Mat2 W_;
  quatarith::Embedding emb_;
};

/// Rejects split and ramified p (and p = 2) with ConfigurationError. Verifies
/// that W satisfies the minimal polynomial of omega and that the root is the
/// only vertex of the radius-2 ball fixed by U_0 \ U_1.
TorusData build_torus(const quatarith::QuaternionOrder& O, const quatarith::Embedding& embedding, const Integer& p,
                      unsigned precision);

/// H_m = U_1 / U_(m+1), cyclic of order p^m generated by 1 + p*omega.
class TorusLevelGroup {
 public:
  TorusLevelGroup(const TorusData& T, unsigned m);

  unsigned level() const noexcept { return m_; }
  std::size_t order() const noexcept { return elements_.size(); }
  /// gamma^k.
  const TorusElement& element(std::size_t k) const { return elements_[k]; }
  const std::vector<TorusElement>& elements() const noexcept { return elements_; }
  /// Index k of gamma^k; InvariantViolation for elements outside U_1.
  std::size_t log(const TorusElement& x) const;
  /// Index in H_m of the p-part of x in U_0 / U_(m+1).
  std::size_t project(const TorusElement& x) const;
  std::size_t compose(std::size_t i, std::size_t j) const { return (i + j) % order(); }

 private:
  const TorusData* T_;
  unsigned m_;
  Integer exponent_;
  std::vector<TorusElement> elements_;
  std::map<TorusElement, std::size_t> index_;
};

TorusLevelGroup level_group(const TorusData& T, unsigned m);

/// Quotient classes of tree vertices and edges: the vertex L corresponds to
/// the right ideal J_L = {x in O : iota(x) Z_p^2 in L}.
class EdgeClassifier {
 public:
  EdgeClassifier(const TorusData& T, const brandtforms::QuotientGraph& G);

  const brandtforms::QuotientGraph& graph() const noexcept { return *G_; }
  const TorusData& torus() const noexcept { return *T_; }
  quatarith::RightIdeal ideal(const bttree::TreeVertex& v) const;
  std::size_t vertex_class(const bttree::TreeVertex& v) const;
  std::size_t edge_class(const bttree::TreeEdge& e) const;

 private:
  const TorusData* T_;
  const brandtforms::QuotientGraph* G_;
  quatarith::LocalSplitting split_;
  mutable std::map<bttree::TreeEdge, std::size_t> edge_cache_;
};

/// Rows sigma = gamma^k in H_m, columns e_0..e_m of the standard ray.
struct EdgeOrbitTable {
  unsigned m;
  std::vector<bttree::TreeEdge> ray;
  std::vector<std::vector<std::size_t>> classes;  // [k][j]
  nlohmann::json to_json() const;
};
EdgeOrbitTable edge_orbit_table(const EdgeClassifier& C, const TorusLevelGroup& H,
                                bttree::TieBreak tie = bttree::TieBreak::least);

/// Stab(e_j) = U_(j+1) for j < depth, checked over U_0 / U_depth.
bool stabilizer_check(const TorusData& T, const std::vector<bttree::TreeEdge>& ray, unsigned depth);

}  // namespace anticyc::toruscm
