#include "anticyc/quatarith/order.hpp"

#include "anticyc/error.hpp"
#include "anticyc/exactalg/linalg.hpp"

namespace anticyc::quatarith {

using namespace exactalg;

Rational reduced_discriminant(const QuaternionAlgebra& A, const Lattice& L) {
  auto b = L.basis();
  RatMatrix T(4, 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) T(i, j) = A.trd(A.mul(b[i], b[j]));
  Rational d = abs(determinant(T));
  Integer num = floor_sqrt(Rational(d.get_num())), den = floor_sqrt(Rational(d.get_den()));
  if (num * num != d.get_num() || den * den != d.get_den())
    throw InvariantViolation("quatarith", "discriminant is not a square");
  return make_rational(num, den);
}

bool is_order(const QuaternionAlgebra& A, const Lattice& L) {
  if (!L.contains(Quat::scalar(1))) return false;
  for (const auto& x : L.basis())
    for (const auto& y : L.basis())
      if (!L.contains(A.mul(x, y))) return false;
  return true;
}

QuaternionOrder::QuaternionOrder(QuaternionAlgebra algebra, Lattice lattice, Integer level)
    : algebra_(std::move(algebra)), lattice_(std::move(lattice)), level_(std::move(level)) {
  if (!is_order(algebra_, lattice_)) throw InvariantViolation("quatarith", "lattice is not an order");
  if (reduced_discriminant(algebra_, lattice_) != Rational(level_ * algebra_.discriminant()))
    throw InvariantViolation("quatarith", "reduced discriminant does not equal level times discriminant");
  auto b = lattice_.basis();
  table_.assign(4, std::vector<std::vector<Integer>>(4));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) table_[i][j] = *lattice_.coordinates(algebra_.mul(b[i], b[j]));
}

namespace {

bool integral(const Rational& x) { return x.get_den() == 1; }

// Smallest order containing L, or nullopt once a non-integral element shows up.
std::optional<Lattice> ring_closure(const QuaternionAlgebra& A, Lattice L) {
  for (;;) {
    auto b = L.basis();
    for (std::size_t i = 0; i < 4; ++i) {
      if (!integral(A.nrd(b[i]))) return std::nullopt;
      for (std::size_t j = 0; j < 4; ++j)
        if (!integral(A.trd(A.mul(b[i], b[j])))) return std::nullopt;
    }
    Lattice next = product(A, L, L);
    if (next == L) return L;
    L = next;
  }
}

}  // namespace

QuaternionOrder maximal_order(const QuaternionAlgebra& A) {
  Lattice L = Lattice::from_generators({Quat(1, 0, 0, 0), Quat(0, 1, 0, 0), Quat(0, 0, 1, 0), Quat(0, 0, 0, 1)});
  const Integer D = A.discriminant();
  for (;;) {
    Rational disc = reduced_discriminant(A, L);
    if (disc == Rational(D)) break;
    bool grown = false;
    for (const auto& q : prime_divisors(disc.get_num() / D)) {
      auto b = L.basis();
      const long qq = q.get_si();
      std::vector<Integer> c(4);
      for (long code = 1; code < qq * qq * qq * qq && !grown; ++code) {
        long t = code;
        for (auto& x : c) {
          x = t % qq;
          t /= qq;
        }
        Quat x = L.element(c) * make_rational(1, q);
        if (!integral(A.trd(x)) || !integral(A.nrd(x))) continue;
        auto gens = b;
        gens.push_back(x);
        if (auto closed = ring_closure(A, Lattice::from_generators(gens))) {
          L = *closed;
          grown = true;
        }
      }
      if (grown) break;
    }
    if (!grown) throw InvariantViolation("quatarith", "could not enlarge a non-maximal order");
  }
  return QuaternionOrder(A, L, 1);
}

QuaternionOrder eichler_order(const QuaternionOrder& maximal, const Integer& N) {
  if (N < 1 || !is_squarefree(N) || gcd(N, maximal.discriminant()) != 1)
    throw ConfigurationError("quatarith", "Eichler level must be squarefree and prime to the discriminant");
  if (N == 1) return maximal;
  auto primes = prime_divisors(N);
  IntMatrix rows(primes.size(), 4);
  std::vector<Integer> moduli;
  for (std::size_t k = 0; k < primes.size(); ++k) {
    LocalSplitting s(maximal, primes[k], 1);
    for (std::size_t i = 0; i < 4; ++i) {
      std::vector<Integer> e(4);
      e[i] = 1;
      rows(k, i) = s.matrix(e)[2];
    }
    moduli.push_back(primes[k]);
  }
  IntMatrix C = congruence_sublattice(rows, moduli);
  return QuaternionOrder(maximal.algebra(), Lattice::from_coordinates(maximal.lattice(), C), N);
}

namespace {

using Vec = std::vector<Integer>;

struct CoordRing {
  const std::vector<std::vector<Vec>>& table;
  Integer m;

  Vec mul(const Vec& x, const Vec& y) const {
    Vec z(4);
    for (std::size_t i = 0; i < 4; ++i) {
      if (x[i] == 0) continue;
      for (std::size_t j = 0; j < 4; ++j) {
        if (y[j] == 0) continue;
        Integer s = x[i] * y[j];
        for (std::size_t k = 0; k < 4; ++k) z[k] += s * table[i][j][k];
      }
    }
    for (auto& v : z) v = mod(v, m);
    return z;
  }
  Vec add(const Vec& x, const Vec& y, const Integer& s = 1) const {
    Vec z(4);
    for (std::size_t k = 0; k < 4; ++k) z[k] = mod(Integer(x[k] + s * y[k]), m);
    return z;
  }
  Vec scale(const Vec& x, const Integer& s) const {
    Vec z(4);
    for (std::size_t k = 0; k < 4; ++k) z[k] = mod(Integer(x[k] * s), m);
    return z;
  }
  bool is_zero_mod(const Vec& x, const Integer& q) const {
    for (const auto& v : x)
      if (mod(v, q) != 0) return false;
    return true;
  }
};

// The scalar c with y = c e, where e has a coordinate that is a unit mod q.
std::optional<Integer> scalar_multiple(const CoordRing& R, const Vec& y, const Vec& e, const Integer& q) {
  for (std::size_t k = 0; k < 4; ++k) {
    if (mod(e[k], q) == 0) continue;
    Integer c = mod(Integer(y[k] * inverse_mod(e[k], R.m)), R.m);
    if (R.scale(e, c) != y) return std::nullopt;
    return c;
  }
  return std::nullopt;
}

}  // namespace

LocalSplitting::LocalSplitting(const QuaternionOrder& O, Integer q, unsigned precision)
    : q_(std::move(q)), r_(precision) {
  if (r_ < 1) throw UsageError("quatarith", "splitting precision must be positive");
  if ((O.discriminant() * O.level()) % q_ == 0)
    throw UsageError("quatarith", "order is not split and maximal at " + to_string(q_));
  mod_ = pow(q_, r_);
  CoordRing R{O.structure_constants(), mod_};
  const auto& A = O.algebra();
  const long qq = q_.get_si();

  // An element with nrd = 0 and trd != 0 mod q: a rank-one matrix with nonzero trace.
  Vec x(4);
  bool found = false;
  Vec c(4);
  for (long code = 1; !found; ++code) {
    if (code >= qq * qq * qq * qq) throw InvariantViolation("quatarith", "no idempotent found mod " + to_string(q_));
    long t = code;
    for (auto& v : c) {
      v = t % qq;
      t /= qq;
    }
    Quat el = O.element(c);
    Integer n = A.nrd(el).get_num(), tr = A.trd(el).get_num();
    if (mod(n, q_) == 0 && mod(tr, q_) != 0) {
      x = R.scale(c, inverse_mod(tr, mod_));
      found = true;
    }
  }
  // Newton iteration e <- 3e^2 - 2e^3 doubles the precision of e^2 = e.
  Vec e = x;
  for (;;) {
    Vec e2 = R.mul(e, e);
    if (e2 == e) break;
    Vec e3 = R.mul(e2, e);
    e = R.add(R.scale(e2, 3), e3, -2);
  }
  Vec one = *O.lattice().coordinates(Quat::scalar(1));
  for (auto& v : one) v = mod(v, mod_);
  Vec f = R.add(one, e, -1);

  std::optional<Vec> e12, e21;
  for (std::size_t i = 0; i < 4 && !e12; ++i) {
    Vec b(4);
    b[i] = 1;
    Vec u = R.mul(R.mul(e, b), f);
    if (!R.is_zero_mod(u, q_)) e12 = u;
  }
  for (std::size_t j = 0; j < 4 && e12 && !e21; ++j) {
    Vec b(4);
    b[j] = 1;
    Vec w = R.mul(R.mul(f, b), e);
    auto cc = scalar_multiple(R, R.mul(*e12, w), e, q_);
    if (cc && mod(*cc, q_) != 0) e21 = R.scale(w, inverse_mod(*cc, mod_));
  }
  if (!e12 || !e21) throw InvariantViolation("quatarith", "matrix units not found mod " + to_string(q_));
  E_ = {e, *e12, *e21, f};

  for (std::size_t i = 0; i < 4; ++i) {
    Vec b(4);
    b[i] = 1;
    Mat2 m;
    const std::array<std::pair<int, int>, 4> slots{{{0, 0}, {0, 3}, {3, 0}, {3, 3}}};
    for (std::size_t s = 0; s < 4; ++s) {
      auto [l, r] = slots[s];
      Vec y = R.mul(R.mul(E_[l], b), E_[r]);
      auto cc = scalar_multiple(R, y, E_[s], q_);
      if (!cc) throw InvariantViolation("quatarith", "splitting coordinates failed");
      m[s] = *cc;
    }
    basis_images_.push_back(m);
  }
  // iota must be multiplicative on the basis.
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      const Mat2 &a = basis_images_[i], &b = basis_images_[j];
      Mat2 prod{a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
                a[2] * b[1] + a[3] * b[3]};
      Mat2 expect = matrix(O.structure_constants()[i][j]);
      for (std::size_t s = 0; s < 4; ++s)
        if (mod(prod[s], mod_) != expect[s]) throw InvariantViolation("quatarith", "splitting is not multiplicative");
    }
}

Mat2 LocalSplitting::matrix(const std::vector<Integer>& coords) const {
  Mat2 m{0, 0, 0, 0};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t s = 0; s < 4; ++s) m[s] += coords[i] * basis_images_[i][s];
  for (auto& v : m) v = mod(v, mod_);
  return m;
}

Mat2 LocalSplitting::matrix(const QuaternionOrder& O, const Quat& x) const {
  // x may have denominators prime to q.
  std::vector<Integer> c;
  for (const auto& v : O.lattice().rational_coordinates(x)) {
    if (v.get_den() % q_ == 0) throw UsageError("quatarith", "element is not integral at " + to_string(q_));
    c.push_back(rational_mod(v, mod_));
  }
  return matrix(c);
}

std::vector<Integer> LocalSplitting::coordinates(const Mat2& m) const {
  std::vector<Integer> out(4);
  for (std::size_t s = 0; s < 4; ++s)
    for (std::size_t k = 0; k < 4; ++k) out[k] += m[s] * E_[s][k];
  for (auto& v : out) v = mod(v, mod_);
  return out;
}

}  // namespace anticyc::quatarith
