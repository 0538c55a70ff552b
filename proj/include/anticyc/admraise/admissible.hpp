#pragma once

#include <optional>
#include <string>
#include <vector>

#include "anticyc/brandtforms/eigen.hpp"
#include "json.hpp"

namespace anticyc::admraise {

using brandtforms::EigenSystem;
using exactalg::Integer;

/// Everything needed to re-verify that v is n-admissible for f.
struct AdmissibleCert {
  long v;
  int epsilon;
  Integer disc_K;
  Integer p;
  long n;
  Integer level;      // N = N+ N- of f
  int legendre;       // (disc_K / v), -1 for inert
  Integer a_v;
  Integer v2_minus_1;
  long congruence_valuation;  // v_p(v + 1 - epsilon a_v), capped at 2n
  /// Recomputes all four conditions from v, p, n, N, K and a_v.
  bool reverify() const;
  nlohmann::json to_json() const;
};

/// Which condition failed: 1 v | pN, 2 v not inert, 3 p | v^2 - 1,
/// 4 no sign with p^n | v + 1 - eps a_v.
struct Admissibility {
  std::optional<AdmissibleCert> cert;
  int failed_condition = 0;
  std::string reason;
  explicit operator bool() const { return cert.has_value(); }
};

/// DataMissingError when conditions (i)-(iii) pass and a_v(f) is unknown.
Admissibility is_n_admissible(long v, const EigenSystem& f, const Integer& disc_K, const Integer& p, long n,
                              const Integer& level);
/// All admissible primes v <= bound, increasing.
std::vector<AdmissibleCert> search_admissible(const EigenSystem& f, const Integer& disc_K, const Integer& p, long n,
                                              const Integer& level, long bound);

/// a_l == l + 1 modulo p^n at every sampled l; UsageError for no samples.
bool eisenstein_test(const EigenSystem& E, const std::vector<long>& samples);

struct CongruencePair {
  EigenSystem f;
  EigenSystem g;
  Integer disc;  // v1 v2 N-
  long v1, v2;
  int eps1, eps2;
  Integer p;
  long n;
  std::vector<long> compared;  // sampled l coprime to v1 v2 p N
  std::vector<long> excluded;
  nlohmann::json to_json() const;
};

/// Searches the cuspidal Brandt module of the definite algebra of
/// discriminant v1 v2 N- for g with a_l(g) == a_l(f) mod p^n on the samples
/// and U_(v_i) g = eps_i g mod p^n. SearchExhaustedError, with the closest
/// candidates in the message, when nothing matches.
CongruencePair raise_level_search(const EigenSystem& f, const AdmissibleCert& c1, const AdmissibleCert& c2,
                                  const Integer& N_minus, const std::vector<long>& samples,
                                  std::size_t max_classes = 400);

}  // namespace anticyc::admraise
