#include "anticyc/admraise/admissible.hpp"

#include <algorithm>
#include <sstream>

#include "anticyc/error.hpp"
#include "anticyc/quatarith/ideals.hpp"

namespace anticyc::admraise {

using exactalg::mod;
using exactalg::to_string;

namespace {

long capped_valuation(const Integer& x, const Integer& p, long cap) {
  auto v = exactalg::valuation(x, p);
  return v ? std::min(*v, cap) : cap;
}

// Conditions (i)-(iii); returns the failed index or 0.
int structural_failure(long v, const Integer& disc_K, const Integer& p, const Integer& level, std::string& reason) {
  const Integer V(v);
  if (!exactalg::is_prime(V)) {
    reason = std::to_string(v) + " is not prime";
    return 1;
  }
  if (mod(p * level, V) == 0) {
    reason = std::to_string(v) + " divides pN";
    return 1;
  }
  if (exactalg::kronecker(disc_K, V) != -1) {
    reason = std::to_string(v) + (mod(disc_K, V) == 0 ? " ramifies in K" : " splits in K");
    return 2;
  }
  if (mod(V * V - 1, p) == 0) {
    reason = "p divides " + std::to_string(v) + "^2 - 1";
    return 3;
  }
  return 0;
}

}  // namespace

bool AdmissibleCert::reverify() const {
  std::string reason;
  if (structural_failure(v, disc_K, p, level, reason) != 0) return false;
  if (legendre != exactalg::kronecker(disc_K, Integer(v))) return false;
  if (v2_minus_1 != Integer(v) * v - 1) return false;
  if (epsilon != 1 && epsilon != -1) return false;
  const Integer gap = Integer(v) + 1 - epsilon * a_v;
  return mod(gap, exactalg::pow(p, n)) == 0 && capped_valuation(gap, p, 2 * n) == congruence_valuation;
}

nlohmann::json AdmissibleCert::to_json() const {
  return {{"v", v},
          {"epsilon", epsilon},
          {"disc_K", to_string(disc_K)},
          {"p", to_string(p)},
          {"n", n},
          {"level", to_string(level)},
          {"legendre", legendre},
          {"a_v", to_string(a_v)},
          {"v2_minus_1", to_string(v2_minus_1)},
          {"congruence_valuation", congruence_valuation}};
}

Admissibility is_n_admissible(long v, const EigenSystem& f, const Integer& disc_K, const Integer& p, long n,
                              const Integer& level) {
  if (n < 1) throw UsageError("admraise", "n must be positive");
  Admissibility out;
  out.failed_condition = structural_failure(v, disc_K, p, level, out.reason);
  if (out.failed_condition != 0) return out;
  if (f.p != p || f.n < n)
    throw UsageError("admraise", "eigensystem is known modulo " + to_string(f.p) + "^" + std::to_string(f.n) +
                                     ", not modulo " + to_string(p) + "^" + std::to_string(n));
  const Integer a_v = f.a_lift(v);
  const Integer pn = exactalg::pow(p, n);
  for (int eps : {1, -1}) {
    const Integer gap = Integer(v) + 1 - eps * a_v;
    if (mod(gap, pn) != 0) continue;
    out.cert = AdmissibleCert{v,   eps, disc_K, p, n, level, exactalg::kronecker(disc_K, Integer(v)), a_v,
                              Integer(v) * v - 1, capped_valuation(gap, p, 2 * n)};
    return out;
  }
  out.failed_condition = 4;
  out.reason = "p^n divides neither v + 1 - a_v nor v + 1 + a_v";
  return out;
}

std::vector<AdmissibleCert> search_admissible(const EigenSystem& f, const Integer& disc_K, const Integer& p, long n,
                                              const Integer& level, long bound) {
  std::vector<AdmissibleCert> out;
  if (bound < 2) return out;
  for (long v : exactalg::primes_up_to(bound))
    if (auto r = is_n_admissible(v, f, disc_K, p, n, level)) out.push_back(*r.cert);
  return out;
}

bool eisenstein_test(const EigenSystem& E, const std::vector<long>& samples) {
  if (samples.empty()) throw UsageError("admraise", "the Eisenstein test needs at least one sample prime");
  const Integer m = E.modulus();
  for (long l : samples)
    if (mod(E.a_at(l) - (l + 1), m) != 0) return false;
  return true;
}

nlohmann::json CongruencePair::to_json() const {
  return {{"disc", to_string(disc)}, {"v1", v1},         {"v2", v2},           {"eps1", eps1},
          {"eps2", eps2},            {"p", to_string(p)}, {"n", n},             {"compared", compared},
          {"excluded", excluded},    {"f", f.to_json()},  {"g", g.to_json()}};
}

CongruencePair raise_level_search(const EigenSystem& f, const AdmissibleCert& c1, const AdmissibleCert& c2,
                                  const Integer& N_minus, const std::vector<long>& samples,
                                  std::size_t max_classes) {
  if (c1.v == c2.v) throw UsageError("admraise", "the two admissible primes must be distinct");
  if (c1.p != c2.p || c1.n != c2.n || c1.level != c2.level || c1.disc_K != c2.disc_K)
    throw UsageError("admraise", "certificates were issued for different data");
  if (!c1.reverify() || !c2.reverify()) throw InvariantViolation("admraise", "an admissibility certificate fails to re-verify");
  if (samples.empty()) throw UsageError("admraise", "the congruence search needs sample primes");
  if (brandtforms::is_exact_eisenstein(f))
    throw ConfigurationError("admraise", "f is the Eisenstein system; level raising needs a cuspidal form");
  const Integer& p = c1.p;
  const long n = c1.n;
  if (mod(c1.level, N_minus) != 0) throw UsageError("admraise", "N- does not divide the level of f");
  const Integer N_plus = c1.level / N_minus;
  const Integer D = Integer(c1.v) * c2.v * N_minus;

  CongruencePair out{f, {}, D, c1.v, c2.v, c1.epsilon, c2.epsilon, p, n, {}, {}};
  const Integer bad = D * N_plus * p;
  for (long l : samples) {
    if (mod(bad, Integer(l)) == 0) {
      out.excluded.push_back(l);
      continue;
    }
    f.a_at(l);  // DataMissingError when f lacks l
    out.compared.push_back(l);
  }
  if (out.compared.empty()) throw UsageError("admraise", "every sample prime divides the bad set");

  auto A = quatarith::algebra_from_discriminant(D);
  auto O = quatarith::maximal_order(A);
  if (N_plus != 1) O = quatarith::eichler_order(O, N_plus);
  long q = 2;
  while (!exactalg::is_prime(q) || mod(D * N_plus, Integer(q)) == 0) ++q;
  auto cs = quatarith::ideal_class_set(O, Integer(q), max_classes);

  std::vector<long> primes = out.compared;
  for (const auto& r : exactalg::prime_divisors(D)) primes.push_back(r.get_si());
  std::sort(primes.begin(), primes.end());
  auto systems = brandtforms::eigensystems_mod(cs, primes, p, n, /*cuspidal=*/true);

  const Integer pn = exactalg::pow(p, n);
  std::ostringstream report;
  for (const auto& g : systems) {
    std::vector<long> mismatched;
    for (long l : out.compared)
      if (mod(g.a_at(l) - f.a_lift(l), pn) != 0) mismatched.push_back(l);
    const int e1 = g.eps.at(c1.v), e2 = g.eps.at(c2.v);
    if (mismatched.empty() && e1 == c1.epsilon && e2 == c2.epsilon) {
      out.g = g;
      return out;
    }
    report << "\n  " << brandtforms::to_string(g.provenance) << " system (multiplicity " << g.multiplicity
           << "): " << mismatched.size() << " mismatched primes";
    if (!mismatched.empty()) report << " starting at " << mismatched.front();
    report << ", U signs (" << e1 << ", " << e2 << ")";
  }
  throw SearchExhaustedError("admraise", "no eigensystem on discriminant " + to_string(D) + " is congruent to f modulo " +
                                             to_string(p) + "^" + std::to_string(n) + " with U signs (" +
                                             std::to_string(c1.epsilon) + ", " + std::to_string(c2.epsilon) +
                                             "); this contradicts the level-raising hypotheses at this instance. " +
                                             std::to_string(systems.size()) + " cuspidal systems examined:" +
                                             report.str());
}

}  // namespace anticyc::admraise
