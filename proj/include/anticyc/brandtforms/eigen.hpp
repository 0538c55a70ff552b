#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "anticyc/brandtforms/quotient.hpp"
#include "json.hpp"

namespace anticyc::brandtforms {

enum class Provenance { rational, padic, residual, fixture };
std::string to_string(Provenance p);

/// Hecke eigenvalues modulo p^n. `a` holds T_l eigenvalues reduced into
/// [0, p^n); `eps` holds the signs of the involutions at ramified primes.
struct EigenSystem {
  Integer p;
  long n = 1;
  std::map<long, Integer> a;
  std::map<long, int> eps;
  Provenance provenance = Provenance::fixture;
  bool eisenstein = false;
  /// Characteristic-zero eigenvalues, when the system is rational or the
  /// fixture supplied integers.
  std::optional<std::map<long, Integer>> exact;
  /// Eigenvector on the vertex classes: exact for rational systems,
  /// reduced mod p^n otherwise. Empty for fixtures.
  std::vector<Integer> vector;
  std::size_t multiplicity = 1;
  /// U_p-eigenvalue after p-stabilization.
  std::optional<Integer> alpha;

  Integer modulus() const;
  /// Throws DataMissingError when l was not computed.
  Integer a_at(long l) const;
  /// Integer representative of a_l: exact when known, else reduced.
  Integer a_lift(long l) const;

  nlohmann::json to_json() const;
  /// Fixture format {"p", "n", "a": {"2": -2, ...}, "eps": {"11": 1}}.
  static EigenSystem from_json(const nlohmann::json& j);
};

/// a_l == l + 1 mod p^n for every stored l. Empty maps are never Eisenstein.
bool is_eisenstein_mod(const EigenSystem& E);
/// The characteristic-zero Eisenstein system, when exact data is available.
bool is_exact_eisenstein(const EigenSystem& E);

/// T_l for unramified l and the ramified involutions for l | disc, keyed by l.
/// Primes dividing the level are skipped.
std::map<long, IntMatrix> hecke_family(const ClassSet& classes, const std::vector<long>& primes);

/// Degree functional u with u_i proportional to 1/|O_i^x|, primitive.
std::vector<Integer> eisenstein_functional(const ClassSet& classes);

/// Simultaneous eigensystems of the family on vertex forms (or on the
/// cuspidal lattice ker u when `cuspidal`). Rational systems are split off
/// exactly and reduced; the irrational remainder contributes its F_p-rational
/// residual systems, Hensel-lifted to p^n where the joint eigenspace is a line.
std::vector<EigenSystem> eigensystems_mod(const ClassSet& classes, const std::vector<long>& primes,
                                          const Integer& p, long n, bool cuspidal = false);
std::vector<EigenSystem> eigensystems_mod(const ClassSet& classes, const std::map<long, IntMatrix>& family,
                                          const Integer& p, long n, bool cuspidal = false);

/// Root of poly (coefficients from degree 0) modulo p^n lifted from the simple root r mod p.
Integer hensel_lift(const std::vector<Integer>& poly, const Integer& r, const Integer& p, long n);

/// Unit root of x^2 - a_p x + p modulo p^n; ConfigurationError when a_p == 0 mod p.
Integer unit_root(const Integer& a_p, const Integer& p, long n);
EigenSystem p_stabilize(const EigenSystem& f, const Integer& p, long n);

/// Phi(e) = phi(t(e)) - alpha^{-1} phi(s(e)), scaled to be primitive.
struct EdgeEigenform {
  Integer p;
  long n;
  Integer alpha;
  Form values;  // reduced into [0, p^n)
  long scaled_out = 0;  // power of p removed to make the form primitive
};
/// Requires a rational system carrying its exact eigenvector and a_p.
EdgeEigenform edge_eigenform(const QuotientGraph& G, const EigenSystem& f, long n);

}  // namespace anticyc::brandtforms
