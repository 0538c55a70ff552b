#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "anticyc/exactalg/numeric.hpp"

namespace anticyc::exactalg {

/// Z/p^n, the finite-level coefficient ring.
class PrimePowerRing {
 public:
  PrimePowerRing(Integer p, unsigned n);

  const Integer& p() const noexcept { return p_; }
  unsigned n() const noexcept { return n_; }
  const Integer& modulus() const noexcept { return modulus_; }

  Integer reduce(const Integer& x) const { return mod(x, modulus_); }
  Integer reduce(const Rational& x) const { return rational_mod(x, modulus_); }
  template <class Expr>
  Integer reduce(const __gmp_expr<mpz_t, Expr>& x) const { return mod(Integer(x), modulus_); }
  Integer inverse(const Integer& x) const;
  bool is_unit(const Integer& x) const;
  /// v_p of a residue, capped at n (the valuation of 0).
  unsigned valuation(const Integer& x) const;

  bool operator==(const PrimePowerRing& o) const { return p_ == o.p_ && n_ == o.n_; }
  bool operator!=(const PrimePowerRing& o) const { return !(*this == o); }

 private:
  Integer p_;
  unsigned n_;
  Integer modulus_;
};

/// Element of (Z/p^n)[Z/p^m], coefficients indexed by powers of a fixed
/// generator g of the cyclic group.
class GroupRingElement {
 public:
  GroupRingElement(PrimePowerRing ring, unsigned m, std::vector<Integer> coeffs);

  static GroupRingElement zero(const PrimePowerRing& ring, unsigned m);
  static GroupRingElement constant(const PrimePowerRing& ring, unsigned m, const Integer& c);
  /// The group element g^k.
  static GroupRingElement group_element(const PrimePowerRing& ring, unsigned m, const Integer& k);

  const PrimePowerRing& ring() const noexcept { return ring_; }
  unsigned level() const noexcept { return m_; }
  std::size_t group_order() const noexcept { return coeffs_.size(); }
  const std::vector<Integer>& coeffs() const noexcept { return coeffs_; }
  const Integer& operator[](std::size_t k) const { return coeffs_[k]; }

  GroupRingElement operator+(const GroupRingElement& o) const;
  GroupRingElement operator-(const GroupRingElement& o) const;
  /// Cyclic convolution.
  GroupRingElement operator*(const GroupRingElement& o) const;
  GroupRingElement scaled(const Integer& c) const;

  bool operator==(const GroupRingElement& o) const;
  bool operator!=(const GroupRingElement& o) const { return !(*this == o); }
  bool is_zero() const;

  nlohmann::json to_json() const;
  static GroupRingElement from_json(const nlohmann::json& j);

 private:
  void check_compatible(const GroupRingElement& o) const;

  PrimePowerRing ring_;
  unsigned m_;
  std::vector<Integer> coeffs_;
};

/// g^k -> g^{-k}. A self-inverse ring automorphism.
GroupRingElement involution(const GroupRingElement& a);

/// Largest c with a in p^c * (group ring), capped at n; mu(0) = n.
unsigned mu_invariant(const GroupRingElement& a);

/// Natural surjection from level m+1 to level `target`, summing over fibers.
GroupRingElement project_level(const GroupRingElement& a, unsigned target);

/// Residue of (Z/p^n)[x]/(Phi_{p^k}(x)); k = 0 means Z/p^n itself.
class CyclotomicResidue {
 public:
  CyclotomicResidue(PrimePowerRing ring, unsigned k, std::vector<Integer> coeffs);

  static CyclotomicResidue constant(const PrimePowerRing& ring, unsigned k, const Integer& c);
  /// Reduce an arbitrary polynomial in x modulo Phi_{p^k} and p^n.
  static CyclotomicResidue from_polynomial(const PrimePowerRing& ring, unsigned k, const std::vector<Integer>& poly);

  const PrimePowerRing& ring() const noexcept { return ring_; }
  unsigned conductor_exponent() const noexcept { return k_; }
  const std::vector<Integer>& coeffs() const noexcept { return coeffs_; }
  /// Ramification index of Z_p[zeta_{p^k}] over Z_p.
  Integer ramification_index() const;

  CyclotomicResidue operator+(const CyclotomicResidue& o) const;
  CyclotomicResidue operator*(const CyclotomicResidue& o) const;
  bool operator==(const CyclotomicResidue& o) const;
  bool operator!=(const CyclotomicResidue& o) const { return !(*this == o); }
  bool is_zero() const;

  /// n * e: the valuation of zero at this precision.
  unsigned long precision_cap() const;
  /// Valuation with respect to the uniformizer 1 - zeta (v_p when k = 0),
  /// capped at precision_cap().
  unsigned long valuation() const;

 private:
  PrimePowerRing ring_;
  unsigned k_;
  std::vector<Integer> coeffs_;
};

/// Coefficients (degree 0 upward) of the cyclotomic polynomial Phi_{p^k}.
std::vector<Integer> cyclotomic_polynomial(const Integer& p, unsigned k);

/// The character g -> zeta_{p^k}^exponent.
struct Character {
  unsigned k = 0;
  Integer exponent = 0;

  Character inverse() const { return Character{k, -exponent}; }
  static Character trivial() { return Character{}; }
};

/// rho(sum c_s s) = sum c_s rho(s); UsageError when p^k does not divide the group order.
CyclotomicResidue specialize(const GroupRingElement& a, const Character& rho);

}  // namespace anticyc::exactalg
