#include "anticyc/padicL/lfunction.hpp"

#include <algorithm>

#include "anticyc/error.hpp"

namespace anticyc::padicL {

EdgeForm from_eigenform(const brandtforms::EdgeEigenform& Phi) {
  PrimePowerRing R(Phi.p, static_cast<unsigned>(Phi.n));
  brandtforms::Form v;
  for (const auto& x : Phi.values) v.push_back(R.reduce(x));
  return EdgeForm{R, R.reduce(Phi.alpha), std::move(v), "edge eigenform"};
}

EdgeForm edge_form_mod(const brandtforms::QuotientGraph& G, const brandtforms::EigenSystem& g) {
  if (g.p != G.prime()) throw UsageError("padicL", "eigensystem and quotient graph use different primes");
  if (g.vector.size() != G.vertex_count() || g.multiplicity != 1)
    throw UsageError("padicL", "eigensystem has no single eigenvector on these classes");
  PrimePowerRing R(g.p, static_cast<unsigned>(g.n));
  const Integer alpha = brandtforms::unit_root(g.a_at(g.p.get_si()), g.p, g.n);
  const Integer alpha_inv = R.inverse(alpha);
  brandtforms::Form values;
  for (const auto& e : G.edges()) values.push_back(R.reduce(g.vector[e.target] - alpha_inv * g.vector[e.source]));
  auto U = brandtforms::up_apply(G, values);
  for (std::size_t e = 0; e < U.size(); ++e)
    if (R.reduce(U[e] - alpha * values[e]) != 0)
      throw InvariantViolation("padicL", "edge form is not a U_p-eigenvector modulo p^n");
  return EdgeForm{R, alpha, std::move(values), brandtforms::to_string(g.provenance) + " eigensystem"};
}

Measure::Measure(const toruscm::EdgeClassifier& C, EdgeForm Phi, bttree::TieBreak tie)
    : C_(&C), Phi_(std::move(Phi)) {
  const auto& T = C.torus();
  if (Phi_.ring.p() != T.prime()) throw UsageError("padicL", "form and torus use different primes");
  if (Phi_.values.size() != C.graph().edge_count())
    throw UsageError("padicL", "form has " + std::to_string(Phi_.values.size()) + " values for " +
                                   std::to_string(C.graph().edge_count()) + " edge classes");
  if (!Phi_.ring.is_unit(Phi_.alpha))
    throw ConfigurationError("padicL", "U_p-eigenvalue " + exactalg::to_string(Phi_.alpha) + " is not a p-adic unit");
  alpha_inv_ = Phi_.ring.inverse(Phi_.alpha);
  for (auto& x : Phi_.values) x = Phi_.ring.reduce(x);
  ray_ = bttree::standard_edge_ray(T.precision(), T.local(), tie);
}

unsigned Measure::max_level() const { return C_->torus().precision() - 1; }

Integer Measure::pairing_value(const TorusElement& sigma, unsigned j) const {
  if (j >= ray_.size()) throw UsageError("padicL", "edge index beyond the ray");
  return Phi_.values[C_->edge_class(C_->torus().act(sigma, ray_[j]))];
}

Integer Measure::theta(const TorusElement& sigma, unsigned j) const {
  return ring().reduce(exactalg::pow(alpha_inv_, j) * pairing_value(sigma, j));
}

GroupRingElement partial_L(const Measure& mu, unsigned m) {
  if (m > mu.max_level()) throw UsageError("padicL", "level " + std::to_string(m) + " exceeds the torus precision");
  const auto& T = mu.classifier().torus();
  const auto& R = mu.ring();
  auto H = toruscm::level_group(T, m);
  std::vector<Integer> coeffs(H.order(), 0);
  for (const auto& sigma : T.quotient(m + 1)) {
    auto& c = coeffs[H.project(sigma)];
    c = R.reduce(c + mu.theta(sigma, m));
  }
  const Integer w_inv = R.inverse(T.global_units());
  for (auto& c : coeffs) c = R.reduce(c * w_inv);
  return GroupRingElement(R, m, std::move(coeffs));
}

LFunctionElement full_Lp(const Measure& mu, unsigned m) {
  auto L = partial_L(mu, m);
  auto Lp = L * exactalg::involution(L);
  if (exactalg::involution(Lp) != Lp) throw InvariantViolation("padicL", "L_p is not fixed by the involution");
  return LFunctionElement{std::move(L), std::move(Lp), m, mu.form().provenance};
}

nlohmann::json LFunctionElement::to_json() const {
  return {{"m", m},
          {"p", exactalg::to_string(L_phi.ring().p())},
          {"n", L_phi.ring().n()},
          {"provenance", provenance},
          {"L_phi", L_phi.to_json()},
          {"L_p", L_p.to_json()}};
}

unsigned constancy_exponent(const EdgeForm& Phi) {
  const auto& R = Phi.ring;
  unsigned nu = R.n();
  for (const auto& x : Phi.values) nu = std::min(nu, R.valuation(R.reduce(x - Phi.values.front())));
  return nu;
}

MuReport mu_two_nu_check(const EdgeForm& Phi, const LFunctionElement& L) {
  MuReport r;
  r.nu = constancy_exponent(Phi);
  r.mu_L_phi = exactalg::mu_invariant(L.L_phi);
  r.mu_L_p = exactalg::mu_invariant(L.L_p);
  const unsigned bound = std::min(2 * r.nu, L.L_p.ring().n());
  r.bound_holds = r.mu_L_p >= bound;
  r.equality = r.mu_L_p == bound;
  return r;
}

nlohmann::json MuReport::to_json() const {
  return {{"nu", nu}, {"mu_L_phi", mu_L_phi}, {"mu_L_p", mu_L_p}, {"bound_holds", bound_holds}, {"equality", equality}};
}

}  // namespace anticyc::padicL
