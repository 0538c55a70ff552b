#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace anticyc::exactalg {

using Integer = mpz_class;
using Rational = mpq_class;

Rational make_rational(const Integer& num, const Integer& den);

Integer floor(const Rational& x);
Integer ceil(const Rational& x);
/// floor(sqrt(x)) for x >= 0.
Integer floor_sqrt(const Rational& x);
/// floor(c + sqrt(r)) for r >= 0, computed exactly.
Integer floor_add_sqrt(const Rational& c, const Rational& r);

Integer gcd(const Integer& a, const Integer& b);
Integer lcm(const Integer& a, const Integer& b);
/// Returns g = gcd(a, b) and sets x, y with a*x + b*y = g.
Integer extended_gcd(const Integer& a, const Integer& b, Integer& x, Integer& y);

/// Least non-negative residue.
Integer mod(const Integer& a, const Integer& m);
/// Inverse of a modulo m; throws UsageError if gcd(a, m) != 1.
Integer inverse_mod(const Integer& a, const Integer& m);
/// Residue of a rational whose denominator is prime to m.
Integer rational_mod(const Rational& x, const Integer& m);
Integer pow(const Integer& base, unsigned long exp);
Integer pow_mod(const Integer& base, const Integer& exp, const Integer& m);

/// p-adic valuation; nullopt for zero.
std::optional<long> valuation(const Integer& x, const Integer& p);
std::optional<long> valuation(const Rational& x, const Integer& p);

bool is_prime(const Integer& n);
bool is_prime(long n);
std::vector<long> primes_up_to(long bound);
/// Prime factors with multiplicity collapsed, ascending.
std::vector<Integer> prime_divisors(const Integer& n);
bool is_squarefree(const Integer& n);

/// Legendre symbol (a/p) for an odd prime p.
int legendre(const Integer& a, const Integer& p);
/// Kronecker symbol (d/n) for n > 0.
int kronecker(const Integer& d, const Integer& n);

std::string to_string(const Integer& x);
std::string to_string(const Rational& x);

}  // namespace anticyc::exactalg
