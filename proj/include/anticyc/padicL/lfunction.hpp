#pragma once

#include <string>
#include <vector>

#include "anticyc/brandtforms/eigen.hpp"
#include "anticyc/exactalg/group_ring.hpp"
#include "anticyc/toruscm/torus.hpp"
#include "json.hpp"

namespace anticyc::padicL {

using exactalg::GroupRingElement;
using exactalg::Integer;
using exactalg::PrimePowerRing;
using toruscm::TorusElement;

/// An edge form with its U_p-eigenvalue, reduced modulo p^n.
struct EdgeForm {
  PrimePowerRing ring;
  Integer alpha;
  brandtforms::Form values;
  std::string provenance = "computed";
};
EdgeForm from_eigenform(const brandtforms::EdgeEigenform& Phi);
/// Phi(e) = phi(t(e)) - alpha^(-1) phi(s(e)) modulo p^n from a system known
/// only modulo p^n (no rescaling is possible). UsageError unless the system
/// has a single eigenvector on the classes of G and carries a_p.
EdgeForm edge_form_mod(const brandtforms::QuotientGraph& G, const brandtforms::EigenSystem& g);

/// Binds an edge form to the torus through the edge classifier and a fixed
/// standard ray e_0, e_1, ... of the torus.
class Measure {
 public:
  /// ConfigurationError when alpha is not a unit.
  Measure(const toruscm::EdgeClassifier& C, EdgeForm Phi, bttree::TieBreak tie = bttree::TieBreak::least);

  const PrimePowerRing& ring() const noexcept { return Phi_.ring; }
  const EdgeForm& form() const noexcept { return Phi_; }
  const toruscm::EdgeClassifier& classifier() const noexcept { return *C_; }
  const std::vector<bttree::TreeEdge>& ray() const noexcept { return ray_; }
  /// Highest level m with a full table, precision - 1.
  unsigned max_level() const;

  /// Phi at the quotient class of sigma * e_j.
  Integer pairing_value(const TorusElement& sigma, unsigned j) const;
  /// alpha^(-j) [sigma, e_j]: the measure of sigma U_(j+1).
  Integer theta(const TorusElement& sigma, unsigned j) const;

 private:
  const toruscm::EdgeClassifier* C_;
  EdgeForm Phi_;
  Integer alpha_inv_;
  std::vector<bttree::TreeEdge> ray_;
};

/// Measure values of the cosets of U_(m+1) in U_0, pushed forward to
/// H_m = U_1 / U_(m+1) and divided by |O_K^x / +-1|.
GroupRingElement partial_L(const Measure& mu, unsigned m);

struct LFunctionElement {
  GroupRingElement L_phi;
  GroupRingElement L_p;
  unsigned m;
  std::string provenance;
  nlohmann::json to_json() const;
};
/// L_p = L_phi * involution(L_phi).
LFunctionElement full_Lp(const Measure& mu, unsigned m);

struct MuReport {
  /// Largest nu <= n with Phi constant mod p^nu.
  unsigned nu = 0;
  unsigned mu_L_phi = 0;
  unsigned mu_L_p = 0;
  bool bound_holds = false;  // mu(L_p) >= min(2 nu, n)
  bool equality = false;     // mu(L_p) == min(2 nu, n)
  nlohmann::json to_json() const;
};
unsigned constancy_exponent(const EdgeForm& Phi);
MuReport mu_two_nu_check(const EdgeForm& Phi, const LFunctionElement& L);

}  // namespace anticyc::padicL
