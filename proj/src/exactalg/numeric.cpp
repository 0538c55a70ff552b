#include "anticyc/exactalg/numeric.hpp"

#include "anticyc/error.hpp"

namespace anticyc::exactalg {

Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw UsageError("exactalg", "zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Integer floor(const Rational& x) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return q;
}

Integer ceil(const Rational& x) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return q;
}

Integer floor_sqrt(const Rational& x) {
  if (x < 0) throw UsageError("exactalg", "square root of a negative rational");
  Integer nd = x.get_num() * x.get_den();
  Integer s;
  mpz_sqrt(s.get_mpz_t(), nd.get_mpz_t());
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), s.get_mpz_t(), x.get_den_mpz_t());
  return q;
}

Integer floor_add_sqrt(const Rational& c, const Rational& r) {
  // k = floor(c + sqrt r) is the largest k with k <= c or (k - c)^2 <= r.
  Integer k = floor(c) + floor_sqrt(r);
  auto fits = [&](const Integer& cand) {
    Rational diff = Rational(cand) - c;
    return diff <= 0 || diff * diff <= r;
  };
  while (fits(k + 1)) ++k;
  while (!fits(k)) --k;
  return k;
}

Integer gcd(const Integer& a, const Integer& b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

Integer lcm(const Integer& a, const Integer& b) {
  Integer l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

Integer extended_gcd(const Integer& a, const Integer& b, Integer& x, Integer& y) {
  Integer g;
  mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

Integer mod(const Integer& a, const Integer& m) {
  Integer r;
  mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

Integer inverse_mod(const Integer& a, const Integer& m) {
  Integer r;
  if (m == 1) return 0;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
    throw UsageError("exactalg", "no inverse of " + to_string(a) + " modulo " + to_string(m));
  return r;
}

Integer rational_mod(const Rational& x, const Integer& m) {
  return mod(x.get_num() * inverse_mod(x.get_den(), m), m);
}

Integer pow(const Integer& base, unsigned long exp) {
  Integer r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
  return r;
}

Integer pow_mod(const Integer& base, const Integer& exp, const Integer& m) {
  Integer r;
  mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), m.get_mpz_t());
  return r;
}

std::optional<long> valuation(const Integer& x, const Integer& p) {
  if (x == 0) return std::nullopt;
  Integer q = x;
  long v = 0;
  while (mpz_divisible_p(q.get_mpz_t(), p.get_mpz_t())) {
    mpz_divexact(q.get_mpz_t(), q.get_mpz_t(), p.get_mpz_t());
    ++v;
  }
  return v;
}

std::optional<long> valuation(const Rational& x, const Integer& p) {
  if (x == 0) return std::nullopt;
  return *valuation(x.get_num(), p) - *valuation(x.get_den(), p);
}

bool is_prime(const Integer& n) {
  if (n < 2) return false;
  // Deterministic at desk scale: trial division below 2^32, BPSW-style
  // probabilistic test with many rounds otherwise.
  if (n < Integer("4294967296")) return is_prime(n.get_si());
  return mpz_probab_prime_p(n.get_mpz_t(), 50) != 0;
}

bool is_prime(long n) {
  if (n < 2) return false;
  if (n < 4) return true;
  if (n % 2 == 0) return false;
  for (long d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

std::vector<long> primes_up_to(long bound) {
  std::vector<long> out;
  if (bound < 2) return out;
  std::vector<bool> composite(static_cast<std::size_t>(bound) + 1, false);
  for (long i = 2; i <= bound; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (long j = i * i; j <= bound; j += i) composite[j] = true;
  }
  return out;
}

std::vector<Integer> prime_divisors(const Integer& n) {
  std::vector<Integer> out;
  Integer m = abs(n);
  for (Integer d = 2; d * d <= m; ++d) {
    if (mpz_divisible_p(m.get_mpz_t(), d.get_mpz_t())) {
      out.push_back(d);
      while (mpz_divisible_p(m.get_mpz_t(), d.get_mpz_t())) m /= d;
    }
  }
  if (m > 1) out.push_back(m);
  return out;
}

bool is_squarefree(const Integer& n) {
  if (n == 0) return false;
  for (const auto& q : prime_divisors(n))
    if (mpz_divisible_p(n.get_mpz_t(), Integer(q * q).get_mpz_t())) return false;
  return true;
}

int legendre(const Integer& a, const Integer& p) {
  return mpz_legendre(mod(a, p).get_mpz_t(), p.get_mpz_t());
}

int kronecker(const Integer& d, const Integer& n) {
  return mpz_kronecker(d.get_mpz_t(), n.get_mpz_t());
}

std::string to_string(const Integer& x) { return x.get_str(); }
std::string to_string(const Rational& x) { return x.get_str(); }

}  // namespace anticyc::exactalg
