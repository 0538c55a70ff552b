#include "anticyc/quatarith/algebra.hpp"

#include <sstream>

#include "anticyc/error.hpp"

namespace anticyc::quatarith {

using namespace exactalg;

Quat Quat::operator+(const Quat& o) const {
  return Quat(c[0] + o.c[0], c[1] + o.c[1], c[2] + o.c[2], c[3] + o.c[3]);
}
Quat Quat::operator-(const Quat& o) const {
  return Quat(c[0] - o.c[0], c[1] - o.c[1], c[2] - o.c[2], c[3] - o.c[3]);
}
Quat Quat::operator-() const { return Quat(-c[0], -c[1], -c[2], -c[3]); }
Quat Quat::operator*(const Rational& s) const { return Quat(c[0] * s, c[1] * s, c[2] * s, c[3] * s); }

bool Quat::is_zero() const { return c[0] == 0 && c[1] == 0 && c[2] == 0 && c[3] == 0; }

std::string to_string(const Quat& x) {
  std::ostringstream os;
  os << "(" << x[0] << ", " << x[1] << ", " << x[2] << ", " << x[3] << ")";
  return os.str();
}

namespace {

long eps2(const Integer& u) { return mod(Integer((u - 1) / 2), Integer(2)).get_si(); }
long omega2(const Integer& u) { return mod(Integer((u * u - 1) / 8), Integer(2)).get_si(); }

}  // namespace

int hilbert_symbol(const Integer& a, const Integer& b, const Integer& p) {
  if (a == 0 || b == 0) throw UsageError("quatarith", "Hilbert symbol of zero");
  if (p == 0) return (a < 0 && b < 0) ? -1 : 1;
  long alpha = *valuation(a, p), beta = *valuation(b, p);
  Integer u = a / pow(p, alpha), v = b / pow(p, beta);
  if (p == 2) {
    long e = eps2(u) * eps2(v) + alpha * omega2(v) + beta * omega2(u);
    return (e & 1) ? -1 : 1;
  }
  int s = ((alpha * beta) & 1) && mod(p, Integer(4)) == 3 ? -1 : 1;
  if (beta & 1) s *= legendre(u, p);
  if (alpha & 1) s *= legendre(v, p);
  return s;
}

std::vector<Integer> ramified_primes(const Integer& a, const Integer& b) {
  std::vector<Integer> out;
  for (const auto& q : prime_divisors(abs(Integer(2 * a * b))))
    if (hilbert_symbol(a, b, q) == -1) out.push_back(q);
  return out;
}

QuaternionAlgebra::QuaternionAlgebra(Integer a, Integer b) : a_(std::move(a)), b_(std::move(b)) {
  if (a_ >= 0 || b_ >= 0) throw UsageError("quatarith", "only definite algebras (a, b < 0) are supported");
  ramified_ = ramified_primes(a_, b_);
  disc_ = 1;
  for (const auto& q : ramified_) disc_ *= q;
}

Quat QuaternionAlgebra::mul(const Quat& x, const Quat& y) const {
  const Rational A(a_), B(b_), AB(a_ * b_);
  return Quat(x[0] * y[0] + A * x[1] * y[1] + B * x[2] * y[2] - AB * x[3] * y[3],
              x[0] * y[1] + x[1] * y[0] - B * x[2] * y[3] + B * x[3] * y[2],
              x[0] * y[2] + x[2] * y[0] + A * x[1] * y[3] - A * x[3] * y[1],
              x[0] * y[3] + x[3] * y[0] + x[1] * y[2] - x[2] * y[1]);
}

Quat QuaternionAlgebra::conj(const Quat& x) const { return Quat(x[0], -x[1], -x[2], -x[3]); }

Rational QuaternionAlgebra::nrd(const Quat& x) const {
  return x[0] * x[0] - Rational(a_) * x[1] * x[1] - Rational(b_) * x[2] * x[2] + Rational(a_ * b_) * x[3] * x[3];
}

Rational QuaternionAlgebra::trd(const Quat& x) const { return 2 * x[0]; }

Quat QuaternionAlgebra::inverse(const Quat& x) const {
  Rational n = nrd(x);
  if (n == 0) throw UsageError("quatarith", "zero quaternion has no inverse");
  return conj(x) * (Rational(1) / n);
}

QuaternionAlgebra algebra_from_discriminant(const Integer& D) {
  if (D < 1 || !is_squarefree(D))
    throw ConfigurationError("quatarith", "discriminant " + to_string(D) + " is not a positive squarefree integer");
  auto primes = prime_divisors(D);
  if (primes.size() % 2 == 0)
    throw ConfigurationError("quatarith", "discriminant " + to_string(D) +
                                              " has an even number of prime factors; no definite algebra exists");
  for (Integer B = 1;; ++B)
    for (Integer A = 1; A <= B; ++A)
      if (ramified_primes(-A, -B) == primes) return QuaternionAlgebra(-A, -B);
}

}  // namespace anticyc::quatarith
