#include "anticyc/brandtforms/eigen.hpp"

#include <random>

#include "anticyc/error.hpp"
#include "anticyc/exactalg/linalg.hpp"

namespace anticyc::brandtforms {

using namespace exactalg;
using Poly = std::vector<Integer>;

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::rational: return "rational";
    case Provenance::padic: return "p-adic";
    case Provenance::residual: return "residual";
    case Provenance::fixture: return "fixture";
  }
  return "?";
}

namespace {

Provenance provenance_from(const std::string& s) {
  for (auto p : {Provenance::rational, Provenance::padic, Provenance::residual, Provenance::fixture})
    if (to_string(p) == s) return p;
  throw DataMissingError("brandtforms", "unknown provenance '" + s + "'");
}

nlohmann::json int_json(const Integer& x) {
  if (x.fits_slong_p()) return x.get_si();
  return exactalg::to_string(x);
}

Integer int_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) return Integer(j.get<long>());
  if (j.is_string()) return Integer(j.get<std::string>());
  throw DataMissingError("brandtforms", "expected an integer in eigensystem data");
}

Integer eval(const Poly& f, const Integer& x) {
  Integer r = 0;
  for (std::size_t i = f.size(); i-- > 0;) r = r * x + f[i];
  return r;
}

Poly derivative(const Poly& f) {
  Poly d;
  for (std::size_t i = 1; i < f.size(); ++i) d.push_back(f[i] * Integer(i));
  return d;
}

// f / (x - r), assuming the remainder vanishes (modulo m when m != 0).
Poly divide_linear(const Poly& f, const Integer& r, const Integer& m) {
  Poly q(f.size() - 1);
  Integer carry = 0;
  for (std::size_t i = f.size(); i-- > 1;) {
    carry = carry * r + f[i];
    if (m != 0) carry = mod(carry, m);
    q[i - 1] = carry;
  }
  return q;
}

IntMatrix eval_matrix(const Poly& f, const IntMatrix& M, const Integer& m = 0) {
  IntMatrix r(M.rows(), M.cols());
  for (std::size_t i = f.size(); i-- > 0;) {
    r = r * M;
    for (std::size_t k = 0; k < M.rows(); ++k) r(k, k) += f[i];
    if (m != 0) r = reduce_mod(r, m);
  }
  return r;
}

IntMatrix shifted(const IntMatrix& M, const Integer& r) {
  IntMatrix s(M);
  for (std::size_t i = 0; i < M.rows(); ++i) s(i, i) -= r;
  return s;
}

// R with T B == B R, for B of full column rank spanning a T-stable saturated lattice.
IntMatrix restrict_to(const IntMatrix& T, const IntMatrix& B) {
  IntMatrix TB = T * B;
  IntMatrix R(B.cols(), B.cols());
  for (std::size_t j = 0; j < B.cols(); ++j) {
    auto x = solve_integer(B, TB.col(j));
    if (!x) throw InvariantViolation("brandtforms", "subspace is not stable under a Hecke operator");
    for (std::size_t i = 0; i < B.cols(); ++i) R(i, j) = (*x)[i];
  }
  return R;
}

Integer spectral_bound(const IntMatrix& T) {
  Integer best = 0;
  for (std::size_t i = 0; i < T.rows(); ++i) {
    Integer s = 0;
    for (std::size_t j = 0; j < T.cols(); ++j) s += abs(T(i, j));
    if (s > best) best = s;
  }
  return best;
}

std::vector<Integer> primitive(std::vector<Integer> v) {
  Integer g = 0;
  for (const auto& x : v) g = gcd(g, x);
  if (g == 0) return v;
  for (auto& x : v) x /= g;
  for (const auto& x : v)
    if (x != 0) {
      if (x < 0)
        for (auto& y : v) y = -y;
      break;
    }
  return v;
}

int sign_mod(const Integer& x, const Integer& m) {
  if (mod(x - 1, m) == 0) return 1;
  if (mod(x + 1, m) == 0) return -1;
  throw InvariantViolation("brandtforms", "involution eigenvalue is not +-1");
}

struct Piece {
  IntMatrix basis;  // columns
  std::map<long, Integer> values;
  bool rational = true;
};

EigenSystem make_system(const Integer& p, long n, const std::map<long, Integer>& values, const Integer& disc,
                        Provenance prov) {
  EigenSystem E;
  E.p = p;
  E.n = n;
  E.provenance = prov;
  const Integer m = E.modulus();
  for (const auto& [l, v] : values) {
    if (disc % l == 0)
      E.eps[l] = sign_mod(v, m);
    else
      E.a[l] = mod(v, m);
  }
  E.eisenstein = is_eisenstein_mod(E);
  return E;
}

// Lift a one-dimensional residual eigenline to p^n through a combination of
// the operators with a simple residual eigenvalue.
std::optional<std::pair<std::vector<Integer>, std::map<long, Integer>>> lift_line(
    const std::map<long, IntMatrix>& R, const std::map<long, Integer>& residual, const Integer& p, long n) {
  const Integer m = pow(p, n);
  const std::size_t L = R.size();
  std::vector<std::vector<long>> trials;
  for (std::size_t i = 0; i < L; ++i) {
    std::vector<long> c(L, 0);
    c[i] = 1;
    trials.push_back(c);
  }
  std::mt19937 rng(20261016);
  std::uniform_int_distribution<long> coeff(-3, 3);
  for (int t = 0; t < 40; ++t) {
    std::vector<long> c(L);
    for (auto& x : c) x = coeff(rng);
    trials.push_back(c);
  }
  const std::size_t k = R.begin()->second.rows();
  for (const auto& c : trials) {
    IntMatrix C(k, k);
    Integer r = 0;
    std::size_t idx = 0;
    for (const auto& [l, M] : R) {
      C = C + M.scaled(Integer(c[idx]));
      r += Integer(c[idx]) * residual.at(l);
      ++idx;
    }
    r = mod(r, p);
    Poly f = characteristic_polynomial(C);
    if (mod(eval(f, r), p) != 0 || mod(eval(derivative(f), r), p) == 0) continue;
    Integer root = hensel_lift(f, r, p, n);
    IntMatrix H = eval_matrix(divide_linear(f, root, m), C, m);
    std::vector<Integer> v;
    for (std::size_t j = 0; j < k && v.empty(); ++j)
      for (std::size_t i = 0; i < k; ++i)
        if (mod(H(i, j), p) != 0) {
          v = H.col(j);
          break;
        }
    if (v.empty()) continue;
    std::size_t unit = 0;
    while (mod(v[unit], p) == 0) ++unit;
    const Integer inv = inverse_mod(v[unit], m);
    std::map<long, Integer> values;
    for (const auto& [l, M] : R) {
      auto w = M * v;
      Integer a = mod(w[unit] * inv, m);
      for (std::size_t i = 0; i < k; ++i)
        if (mod(w[i] - a * v[i], m) != 0)
          throw InvariantViolation("brandtforms", "lifted vector is not a joint eigenvector");
      if (mod(a - residual.at(l), p) != 0) throw InvariantViolation("brandtforms", "lift changed the residual system");
      values[l] = a;
    }
    return std::make_pair(v, values);
  }
  return std::nullopt;
}

}  // namespace

Integer EigenSystem::modulus() const { return pow(p, static_cast<unsigned long>(n)); }

Integer EigenSystem::a_at(long l) const {
  auto it = a.find(l);
  if (it == a.end()) throw DataMissingError("brandtforms", "eigenvalue a_" + std::to_string(l) + " is not available");
  return it->second;
}

Integer EigenSystem::a_lift(long l) const {
  if (exact) {
    auto it = exact->find(l);
    if (it != exact->end()) return it->second;
  }
  return a_at(l);
}

nlohmann::json EigenSystem::to_json() const {
  nlohmann::json j;
  j["p"] = int_json(p);
  j["n"] = n;
  j["a"] = nlohmann::json::object();
  for (const auto& [l, v] : a) j["a"][std::to_string(l)] = int_json(v);
  j["eps"] = nlohmann::json::object();
  for (const auto& [l, s] : eps) j["eps"][std::to_string(l)] = s;
  j["provenance"] = to_string(provenance);
  j["eisenstein"] = eisenstein;
  if (exact) {
    j["exact"] = nlohmann::json::object();
    for (const auto& [l, v] : *exact) j["exact"][std::to_string(l)] = int_json(v);
  }
  if (!vector.empty()) {
    j["vector"] = nlohmann::json::array();
    for (const auto& x : vector) j["vector"].push_back(int_json(x));
  }
  j["multiplicity"] = multiplicity;
  if (alpha) j["alpha"] = int_json(*alpha);
  return j;
}

EigenSystem EigenSystem::from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("p") || !j.contains("n") || !j.contains("a"))
    throw DataMissingError("brandtforms", "eigensystem needs p, n and a");
  EigenSystem E;
  try {
    E.p = int_from_json(j.at("p"));
    E.n = j.at("n").get<long>();
    if (!is_prime(E.p) || E.n < 1) throw DataMissingError("brandtforms", "eigensystem modulus is not a prime power");
    const Integer m = E.modulus();
    const bool computed = j.contains("provenance") && j.at("provenance") != "fixture";
    std::map<long, Integer> raw;
    for (const auto& [key, val] : j.at("a").items()) {
      long l = std::stol(key);
      raw[l] = int_from_json(val);
      E.a[l] = mod(raw[l], m);
    }
    if (j.contains("eps"))
      for (const auto& [key, val] : j.at("eps").items()) {
        int s = val.get<int>();
        if (s != 1 && s != -1) throw DataMissingError("brandtforms", "eps values must be +1 or -1");
        E.eps[std::stol(key)] = s;
      }
    if (j.contains("provenance")) E.provenance = provenance_from(j.at("provenance").get<std::string>());
    if (j.contains("exact")) {
      E.exact.emplace();
      for (const auto& [key, val] : j.at("exact").items()) (*E.exact)[std::stol(key)] = int_from_json(val);
    } else if (!computed) {
      E.exact = raw;
    }
    if (j.contains("vector"))
      for (const auto& x : j.at("vector")) E.vector.push_back(int_from_json(x));
    if (j.contains("multiplicity")) E.multiplicity = j.at("multiplicity").get<std::size_t>();
    if (j.contains("alpha")) E.alpha = int_from_json(j.at("alpha"));
  } catch (const nlohmann::json::exception& e) {
    throw DataMissingError("brandtforms", std::string("malformed eigensystem: ") + e.what());
  } catch (const std::invalid_argument&) {
    throw DataMissingError("brandtforms", "malformed prime key in eigensystem");
  }
  E.eisenstein = is_eisenstein_mod(E);
  return E;
}

bool is_eisenstein_mod(const EigenSystem& E) {
  if (E.a.empty()) return false;
  const Integer m = E.modulus();
  for (const auto& [l, v] : E.a)
    if (mod(v - (l + 1), m) != 0) return false;
  return true;
}

bool is_exact_eisenstein(const EigenSystem& E) {
  if (!E.exact || E.exact->empty()) return false;
  for (const auto& [l, v] : *E.exact)
    if (v != l + 1) return false;
  return true;
}

std::map<long, IntMatrix> hecke_family(const ClassSet& classes, const std::vector<long>& primes) {
  const Integer disc = classes.order().discriminant();
  const Integer level = classes.order().level();
  std::map<long, IntMatrix> out;
  for (long l : primes) {
    if (!is_prime(l)) throw UsageError("brandtforms", std::to_string(l) + " is not prime");
    if (level % l == 0) continue;
    out[l] = disc % l == 0 ? ramified_operator(Integer(l), classes) : brandt_matrix(Integer(l), classes);
  }
  return out;
}

std::vector<Integer> eisenstein_functional(const ClassSet& classes) {
  Integer L = 1;
  for (const auto& c : classes.classes()) L = lcm(L, Integer(c.units.size()));
  std::vector<Integer> u;
  for (const auto& c : classes.classes()) u.push_back(L / Integer(c.units.size()));
  return primitive(u);
}

std::vector<EigenSystem> eigensystems_mod(const ClassSet& classes, const std::vector<long>& primes,
                                          const Integer& p, long n, bool cuspidal) {
  return eigensystems_mod(classes, hecke_family(classes, primes), p, n, cuspidal);
}

std::vector<EigenSystem> eigensystems_mod(const ClassSet& classes, const std::map<long, IntMatrix>& family,
                                          const Integer& p, long n, bool cuspidal) {
  if (!is_prime(p) || n < 1) throw UsageError("brandtforms", "modulus must be a positive prime power");
  if (family.empty()) throw UsageError("brandtforms", "empty Hecke family");
  const std::size_t h = classes.size();
  const Integer disc = classes.order().discriminant();
  const Integer m = pow(p, static_cast<unsigned long>(n));

  Piece start;
  if (cuspidal) {
    IntMatrix u(1, h);
    auto f = eisenstein_functional(classes);
    for (std::size_t i = 0; i < h; ++i) u(0, i) = f[i];
    start.basis = integer_kernel(u).transpose();
  } else {
    start.basis = IntMatrix::identity(h);
  }
  std::vector<Piece> pieces;
  if (start.basis.cols() > 0) pieces.push_back(start);

  for (const auto& [l, T] : family) {
    const Integer bound = spectral_bound(T);
    std::vector<Piece> next;
    for (auto& piece : pieces) {
      if (!piece.rational) {
        next.push_back(std::move(piece));
        continue;
      }
      IntMatrix R = restrict_to(T, piece.basis);
      Poly g = characteristic_polynomial(R);
      for (Integer r = -bound; r <= bound; ++r) {
        std::size_t mult = 0;
        while (g.size() > 1 && eval(g, r) == 0) {
          g = divide_linear(g, r, 0);
          ++mult;
        }
        if (mult == 0) continue;
        IntMatrix K = integer_kernel(shifted(R, r));
        if (K.rows() != mult) throw InvariantViolation("brandtforms", "Hecke operator is not semisimple over Q");
        Piece sub{piece.basis * K.transpose(), piece.values, true};
        sub.values[l] = r;
        next.push_back(std::move(sub));
      }
      if (g.size() > 1) {
        IntMatrix K = integer_kernel(eval_matrix(g, R));
        next.push_back(Piece{piece.basis * K.transpose(), piece.values, false});
      }
    }
    pieces = std::move(next);
  }

  std::vector<EigenSystem> out;
  for (const auto& piece : pieces) {
    if (!piece.rational) continue;
    EigenSystem E = make_system(p, n, piece.values, disc, Provenance::rational);
    E.exact.emplace();
    for (const auto& [l, v] : piece.values)
      if (disc % l != 0) (*E.exact)[l] = v;
    E.multiplicity = piece.basis.cols();
    if (E.multiplicity == 1) E.vector = primitive(piece.basis.col(0));
    out.push_back(std::move(E));
  }

  for (const auto& piece : pieces) {
    if (piece.rational) continue;
    const std::size_t k = piece.basis.cols();
    std::map<long, IntMatrix> R;
    for (const auto& [l, T] : family) R[l] = restrict_to(T, piece.basis);

    struct Residual {
      IntMatrix P;
      std::map<long, Integer> values;
    };
    std::vector<Residual> res{{IntMatrix::identity(k), {}}};
    for (const auto& [l, M] : R) {
      std::vector<Residual> next;
      for (const auto& r : res) {
        const std::size_t d = r.P.cols();
        auto X = solve_mod_prime(r.P, reduce_mod(M * r.P, p), p);
        if (!X) throw InvariantViolation("brandtforms", "residual subspace is not stable");
        Poly f = characteristic_polynomial(*X);
        for (Integer root = 0; root < p; ++root) {
          if (mod(eval(f, root), p) != 0) continue;
          IntMatrix N = IntMatrix::identity(d);
          IntMatrix S = reduce_mod(shifted(*X, root), p);
          for (std::size_t i = 0; i < d; ++i) N = reduce_mod(N * S, p);
          IntMatrix K = kernel_mod_prime(N, p);
          Residual sub{reduce_mod(r.P * K.transpose(), p), r.values};
          sub.values[l] = root;
          next.push_back(std::move(sub));
        }
      }
      res = std::move(next);
    }
    for (const auto& r : res) {
      std::optional<std::pair<std::vector<Integer>, std::map<long, Integer>>> lifted;
      if (n > 1 && r.P.cols() == 1) lifted = lift_line(R, r.values, p, n);
      EigenSystem E = lifted ? make_system(p, n, lifted->second, disc, Provenance::padic)
                             : make_system(p, 1, r.values, disc, Provenance::residual);
      E.multiplicity = r.P.cols();
      if (lifted)
        E.vector = reduce_mod(piece.basis, m) * lifted->first;
      else if (r.P.cols() == 1)
        E.vector = piece.basis * r.P.col(0);
      for (auto& x : E.vector) x = mod(x, E.modulus());
      out.push_back(std::move(E));
    }
  }
  return out;
}

Integer hensel_lift(const std::vector<Integer>& poly, const Integer& r, const Integer& p, long n) {
  const Integer m = pow(p, static_cast<unsigned long>(n));
  const Poly d = derivative(poly);
  if (mod(eval(poly, r), p) != 0) throw UsageError("brandtforms", "not a root modulo p");
  if (mod(eval(d, r), p) == 0) throw UsageError("brandtforms", "Hensel lifting needs a simple root");
  Integer x = mod(r, m);
  for (long i = 0; i < n; ++i) x = mod(x - eval(poly, x) * inverse_mod(eval(d, x), m), m);
  if (mod(eval(poly, x), m) != 0) throw InvariantViolation("brandtforms", "Hensel iteration did not converge");
  return x;
}

Integer unit_root(const Integer& a_p, const Integer& p, long n) {
  if (mod(a_p, p) == 0)
    throw ConfigurationError("brandtforms", "not p-ordinary: a_" + exactalg::to_string(p) + " is divisible by p");
  return hensel_lift({p, -a_p, 1}, mod(a_p, p), p, n);
}

EigenSystem p_stabilize(const EigenSystem& f, const Integer& p, long n) {
  if (f.p != p) throw UsageError("brandtforms", "eigensystem is for a different prime");
  const long pl = p.get_si();
  const bool exact_ap = f.exact && f.exact->count(pl);
  if (!exact_ap && f.n < n) throw UsageError("brandtforms", "eigensystem precision is below the requested p^n");
  EigenSystem g = f;
  g.n = exact_ap ? n : std::min(f.n, n);
  const Integer m = g.modulus();
  for (auto& [l, v] : g.a) v = mod(f.a_lift(l), m);
  g.alpha = unit_root(f.a_lift(pl), p, g.n);
  g.eisenstein = is_eisenstein_mod(g);
  return g;
}

EdgeEigenform edge_eigenform(const QuotientGraph& G, const EigenSystem& f, long n) {
  const Integer& p = G.prime();
  const long pl = p.get_si();
  if (!f.exact || !f.exact->count(pl) || f.vector.size() != G.vertex_count())
    throw UsageError("brandtforms", "edge eigenform needs an exact eigenvector and a_p");
  if (is_exact_eisenstein(f)) throw ConfigurationError("brandtforms", "the Eisenstein system has no cuspidal edge form");
  const Integer ap = f.exact->at(pl);
  for (long extra = 0; extra < 64; ++extra) {
    const long N = n + extra;
    const Integer M = pow(p, static_cast<unsigned long>(N));
    const Integer alpha = unit_root(ap, p, N);
    const Integer ainv = inverse_mod(alpha, M);
    Form Phi(G.edge_count());
    long v = N;
    for (std::size_t e = 0; e < G.edge_count(); ++e) {
      Phi[e] = mod(f.vector[G.edge(e).target] - ainv * f.vector[G.edge(e).source], M);
      if (Phi[e] != 0) v = std::min(v, *valuation(Phi[e], p));
    }
    if (v > extra) continue;
    EdgeEigenform out{p, n, mod(alpha, pow(p, static_cast<unsigned long>(n))), {}, v};
    const Integer m = pow(p, static_cast<unsigned long>(n));
    const Integer scale = pow(p, static_cast<unsigned long>(v));
    for (auto& x : Phi) out.values.push_back(mod(x / scale, m));
    auto U = up_apply(G, out.values);
    for (std::size_t e = 0; e < U.size(); ++e)
      if (mod(U[e] - out.alpha * out.values[e], m) != 0)
        throw InvariantViolation("brandtforms", "edge form is not a U_p eigenform");
    return out;
  }
  throw InvariantViolation("brandtforms", "edge form vanishes to high p-adic order");
}

}  // namespace anticyc::brandtforms
