#pragma once

// Independent reference computations shared by the test binaries.

#include <vector>

namespace oracle {

// a_l of y^2 + y = x^3 - x^2 - 10x - 20 by counting points over F_l.
inline long ap_11a(long l) {
  long count = 1;  // the point at infinity
  for (long x = 0; x < l; ++x)
    for (long y = 0; y < l; ++y) {
      long lhs = (y * y + y) % l;
      long rhs = ((x * x % l * x - x * x - 10 * x - 20) % l + 2 * l * l) % l;
      if (lhs == rhs) ++count;
    }
  return l + 1 - count;
}

inline bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline long legendre(long a, long p) {
  a = ((a % p) + p) % p;
  if (a == 0) return 0;
  long r = 1, base = a, e = (p - 1) / 2;
  while (e) {
    if (e & 1) r = r * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return r == 1 ? 1 : -1;
}

// Kronecker symbol (d / v) for a fundamental discriminant d and prime v.
inline long kronecker_prime(long d, long v) {
  if (v != 2) return legendre(d, v);
  long r = ((d % 8) + 8) % 8;
  if (r % 2 == 0) return 0;
  return (r == 1 || r == 7) ? 1 : -1;
}

}  // namespace oracle
