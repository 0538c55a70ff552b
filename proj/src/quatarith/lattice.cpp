#include "anticyc/quatarith/lattice.hpp"

#include <sstream>

#include "anticyc/error.hpp"
#include "anticyc/exactalg/linalg.hpp"

namespace anticyc::quatarith {

using namespace exactalg;

namespace {

Rational rational_gcd(const Rational& x, const Rational& y) {
  if (x == 0) return abs(y);
  if (y == 0) return abs(x);
  return make_rational(gcd(x.get_num(), y.get_num()), lcm(x.get_den(), y.get_den()));
}

}  // namespace

Lattice Lattice::from_generators(const std::vector<Quat>& gens) {
  Integer d = 1;
  for (const auto& g : gens)
    for (const auto& x : g.c) d = lcm(d, x.get_den());
  IntMatrix M(gens.size(), 4);
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      Rational s = gens[i][j] * Rational(d);
      M(i, j) = s.get_num();
    }
  IntMatrix H = hermite_normal_form(M);
  if (H.rows() != 4) throw UsageError("quatarith", "generators do not span a full-rank lattice");
  Integer content = 0;
  for (const auto& x : H.data()) content = gcd(content, x);
  content = gcd(content, d);
  Lattice L;
  L.denom_ = d / content;
  L.hnf_ = IntMatrix(4, 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) L.hnf_(i, j) = H(i, j) / content;
  return L;
}

Lattice Lattice::from_coordinates(const Lattice& ambient, const IntMatrix& coords) {
  std::vector<Quat> gens;
  for (std::size_t i = 0; i < coords.rows(); ++i) gens.push_back(ambient.element(coords.row(i)));
  return from_generators(gens);
}

std::vector<Quat> Lattice::basis() const {
  std::vector<Quat> out(4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) out[i][j] = make_rational(hnf_(i, j), denom_);
  return out;
}

Quat Lattice::element(const std::vector<Integer>& coords) const {
  Quat x;
  for (std::size_t j = 0; j < 4; ++j) {
    Integer s = 0;
    for (std::size_t i = 0; i < 4; ++i) s += coords[i] * hnf_(i, j);
    x[j] = make_rational(s, denom_);
  }
  return x;
}

std::optional<std::vector<Integer>> Lattice::coordinates(const Quat& x) const {
  std::vector<Integer> v(4);
  for (std::size_t j = 0; j < 4; ++j) {
    Rational s = x[j] * Rational(denom_);
    if (s.get_den() != 1) return std::nullopt;
    v[j] = s.get_num();
  }
  // The Hermite basis is upper triangular with positive diagonal.
  std::vector<Integer> c(4);
  for (std::size_t j = 0; j < 4; ++j) {
    Integer r = v[j];
    for (std::size_t i = 0; i < j; ++i) r -= c[i] * hnf_(i, j);
    if (r % hnf_(j, j) != 0) return std::nullopt;
    c[j] = r / hnf_(j, j);
  }
  return c;
}

std::vector<Rational> Lattice::rational_coordinates(const Quat& x) const {
  std::vector<Rational> c(4);
  for (std::size_t j = 0; j < 4; ++j) {
    Rational r = x[j] * Rational(denom_);
    for (std::size_t i = 0; i < j; ++i) r -= c[i] * Rational(hnf_(i, j));
    c[j] = r / Rational(hnf_(j, j));
  }
  return c;
}

bool Lattice::contains(const Lattice& other) const {
  for (const auto& b : other.basis())
    if (!contains(b)) return false;
  return true;
}

Rational Lattice::covolume() const {
  Integer d = 1;
  for (std::size_t i = 0; i < 4; ++i) d *= hnf_(i, i);
  return make_rational(d, pow(denom_, 4));
}

Lattice Lattice::scaled(const Rational& s) const {
  auto b = basis();
  for (auto& x : b) x = x * s;
  return from_generators(b);
}

Lattice Lattice::conj() const {
  auto b = basis();
  for (auto& x : b) x = Quat(x[0], -x[1], -x[2], -x[3]);
  return from_generators(b);
}

std::string Lattice::key() const {
  std::ostringstream os;
  os << denom_.get_str();
  for (const auto& x : hnf_.data()) os << "," << x.get_str();
  return os.str();
}

Lattice product(const QuaternionAlgebra& A, const Lattice& I, const Lattice& J) {
  std::vector<Quat> gens;
  auto bi = I.basis(), bj = J.basis();
  for (const auto& x : bi)
    for (const auto& y : bj) gens.push_back(A.mul(x, y));
  return Lattice::from_generators(gens);
}

Lattice left_multiply(const QuaternionAlgebra& A, const Quat& x, const Lattice& I) {
  std::vector<Quat> gens;
  for (const auto& y : I.basis()) gens.push_back(A.mul(x, y));
  return Lattice::from_generators(gens);
}

Lattice right_multiply(const QuaternionAlgebra& A, const Lattice& I, const Quat& x) {
  std::vector<Quat> gens;
  for (const auto& y : I.basis()) gens.push_back(A.mul(y, x));
  return Lattice::from_generators(gens);
}

Lattice operator+(const Lattice& I, const Lattice& J) {
  auto gens = I.basis();
  for (const auto& y : J.basis()) gens.push_back(y);
  return Lattice::from_generators(gens);
}

RatMatrix norm_gram(const QuaternionAlgebra& A, const Lattice& L) {
  auto b = L.basis();
  RatMatrix G(4, 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) G(i, j) = A.trd(A.mul(b[i], A.conj(b[j]))) / 2;
  return G;
}

Rational norm_gcd(const QuaternionAlgebra& A, const Lattice& L) {
  RatMatrix G = norm_gram(A, L);
  Rational g = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    g = rational_gcd(g, G(i, i));
    for (std::size_t j = i + 1; j < 4; ++j) g = rational_gcd(g, 2 * G(i, j));
  }
  return g;
}

}  // namespace anticyc::quatarith
