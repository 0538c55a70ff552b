#include "anticyc/quatarith/ideals.hpp"

#include <deque>

#include "anticyc/error.hpp"
#include "anticyc/exactalg/linalg.hpp"
#include "anticyc/quatarith/short_vectors.hpp"

namespace anticyc::quatarith {

using namespace exactalg;

RightIdeal make_right_ideal(const QuaternionOrder& O, const Lattice& L) {
  const auto& A = O.algebra();
  for (const auto& x : L.basis())
    for (const auto& o : O.lattice().basis())
      if (!L.contains(A.mul(x, o))) throw InvariantViolation("quatarith", "lattice is not a right ideal");
  return RightIdeal{L, norm_gcd(A, L)};
}

RightIdeal principal_right_ideal(const QuaternionOrder& O, const Quat& x) {
  return RightIdeal{left_multiply(O.algebra(), x, O.lattice()), O.algebra().nrd(x)};
}

Lattice left_order(const QuaternionAlgebra& A, const RightIdeal& I) {
  return product(A, I.lattice, I.lattice.conj()).scaled(Rational(1) / I.norm);
}

std::vector<Quat> unit_group(const QuaternionAlgebra& A, const Lattice& order) {
  std::vector<Quat> out;
  for (const auto& c : vectors_of_norm(norm_gram(A, order), 1)) {
    Quat u = order.element(c);
    out.push_back(u);
    out.push_back(-u);
  }
  return out;
}

std::vector<Integer> theta_series(const QuaternionAlgebra& A, const RightIdeal& I, unsigned terms) {
  std::vector<Integer> counts(terms + 1);
  counts[0] = 1;
  RatMatrix G = norm_gram(A, I.lattice).scaled(Rational(1) / I.norm);
  short_vectors(G, Rational(terms), [&](const std::vector<Integer>&, const Rational& q) {
    if (q.get_den() != 1) throw InvariantViolation("quatarith", "normalized norm form is not integral");
    counts[q.get_num().get_ui()] += 1;
    return true;
  });
  return counts;
}

std::optional<Quat> isometry(const QuaternionAlgebra& A, const RightIdeal& I, const RightIdeal& J) {
  Lattice M = product(A, I.lattice, J.lattice.conj());
  const Rational target = I.norm * J.norm;
  RatMatrix G = norm_gram(A, M);
  std::optional<Quat> found;
  short_vectors(G, target, [&](const std::vector<Integer>& c, const Rational& q) {
    if (q != target) return true;
    Quat x = M.element(c) * (Rational(1) / J.norm);
    if (left_multiply(A, x, J.lattice) == I.lattice) {
      found = x;
      return false;
    }
    return true;
  });
  return found;
}

bool isometric(const QuaternionAlgebra& A, const RightIdeal& I, const RightIdeal& J) {
  return isometry(A, I, J).has_value();
}

std::vector<RightIdeal> neighbors(const QuaternionOrder& O, const RightIdeal& I, const LocalSplitting& split) {
  const auto& A = O.algebra();
  const Integer& l = split.prime();
  // A local generator of I at l: nrd(alpha) / nrd(I) prime to l.
  RatMatrix G = norm_gram(A, I.lattice).scaled(Rational(1) / I.norm);
  std::optional<Quat> alpha;
  for (Rational bound = 1; !alpha; bound *= 2)
    short_vectors(G, bound, [&](const std::vector<Integer>& c, const Rational& q) {
      if (mod(q.get_num(), l) == 0) return true;
      alpha = I.lattice.element(c);
      return false;
    });

  const auto& E = split.units();
  std::vector<Quat> scaled_basis;
  for (const auto& b : I.lattice.basis()) scaled_basis.push_back(b * Rational(l));
  auto order_basis = O.lattice().basis();

  std::vector<RightIdeal> out;
  const long ll = l.get_si();
  for (long k = 0; k <= ll; ++k) {
    Integer w1 = k < ll ? 1 : 0, w2 = k < ll ? k : 1;
    std::vector<Integer> y(4);
    for (std::size_t t = 0; t < 4; ++t) y[t] = w1 * E[0][t] + w2 * E[2][t];
    Quat ay = A.mul(*alpha, O.element(y));
    auto gens = scaled_basis;
    for (const auto& o : order_basis) gens.push_back(A.mul(ay, o));
    RightIdeal J{Lattice::from_generators(gens), I.norm * Rational(l)};
    if (J.lattice.covolume() != I.lattice.covolume() * Rational(l * l * l * l) / Rational(l * l))
      throw InvariantViolation("quatarith", "neighbor has the wrong index");
    out.push_back(J);
  }
  return out;
}

Lattice ramified_prime_ideal(const QuaternionOrder& O, const Integer& v) {
  if (O.discriminant() % v != 0) throw UsageError("quatarith", to_string(v) + " does not ramify");
  const auto& A = O.algebra();
  std::vector<Quat> gens;
  for (const auto& b : O.lattice().basis()) gens.push_back(b * Rational(v));
  const long vv = v.get_si();
  std::vector<Integer> c(4);
  for (long code = 1; code < vv * vv * vv * vv; ++code) {
    long t = code;
    for (auto& x : c) {
      x = t % vv;
      t /= vv;
    }
    Quat x = O.element(c);
    if (A.nrd(x).get_num() % v == 0) gens.push_back(x);
  }
  Lattice P = Lattice::from_generators(gens);
  if (P.covolume() != O.lattice().covolume() * Rational(v * v))
    throw InvariantViolation("quatarith", "ramified prime ideal has the wrong index");
  return P;
}

Rational eichler_mass(const Integer& D, const Integer& N) {
  Rational m(1, 24);
  for (const auto& q : prime_divisors(D)) m *= Rational(q - 1);
  for (const auto& q : prime_divisors(N)) m *= Rational(q + 1);
  return m;
}

IdealClass make_ideal_class(const QuaternionAlgebra& A, const RightIdeal& I) {
  IdealClass c{I, left_order(A, I), {}, theta_series(A, I, ClassSet::theta_terms)};
  c.units = unit_group(A, c.left_order);
  return c;
}

ClassSet::ClassSet(QuaternionOrder order, Integer p, std::vector<IdealClass> classes,
                   std::vector<std::vector<NeighborLink>> links)
    : order_(std::move(order)),
      p_(std::move(p)),
      classes_(std::move(classes)),
      links_(std::move(links)),
      split_(order_, p_, 1) {
  for (std::size_t i = 0; i < classes_.size(); ++i) buckets_.emplace(classes_[i].theta, i);
}

Rational ClassSet::mass() const {
  Rational m = 0;
  for (const auto& c : classes_) m += Rational(1, c.units.size());
  return m;
}

ClassSet::Match ClassSet::find(const RightIdeal& J) const {
  auto theta = theta_series(algebra(), J, theta_terms);
  auto [lo, hi] = buckets_.equal_range(theta);
  for (auto it = lo; it != hi; ++it)
    if (auto x = isometry(algebra(), J, classes_[it->second].ideal)) return Match{it->second, *x};
  throw InvariantViolation("quatarith", "ideal matches no class of the class set");
}

namespace {

nlohmann::json lattice_json(const Lattice& L) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < 4; ++i) {
    nlohmann::json r = nlohmann::json::array();
    for (std::size_t j = 0; j < 4; ++j) r.push_back(L.hnf()(i, j).get_str());
    rows.push_back(r);
  }
  return {{"denominator", L.denominator().get_str()}, {"rows", rows}};
}

Lattice lattice_from_json(const nlohmann::json& j) {
  Rational d(Integer(j.at("denominator").get<std::string>()));
  std::vector<Quat> gens;
  for (const auto& r : j.at("rows")) {
    Quat x;
    for (std::size_t k = 0; k < 4; ++k) x[k] = Rational(Integer(r.at(k).get<std::string>())) / d;
    gens.push_back(x);
  }
  return Lattice::from_generators(gens);
}

nlohmann::json quat_json(const Quat& x) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& c : x.c) a.push_back(c.get_str());
  return a;
}

Quat quat_from_json(const nlohmann::json& j) {
  Quat x;
  for (std::size_t k = 0; k < 4; ++k) {
    x[k] = Rational(j.at(k).get<std::string>());
    x[k].canonicalize();
  }
  return x;
}

void check_mass(const ClassSet& cs) {
  Rational expected = eichler_mass(cs.order().discriminant(), cs.order().level());
  if (cs.mass() != expected)
    throw InvariantViolation("quatarith", "class set mass " + cs.mass().get_str() + " differs from " +
                                              expected.get_str());
}

}  // namespace

nlohmann::json ClassSet::to_json() const {
  nlohmann::json classes = nlohmann::json::array();
  for (const auto& c : classes_) classes.push_back(lattice_json(c.ideal.lattice));
  nlohmann::json links = nlohmann::json::array();
  for (const auto& row : links_) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& l : row) r.push_back({{"target", l.target}, {"x", quat_json(l.x)}});
    links.push_back(r);
  }
  return {{"algebra", {algebra().a().get_str(), algebra().b().get_str()}},
          {"level", order_.level().get_str()},
          {"order", lattice_json(order_.lattice())},
          {"p", p_.get_str()},
          {"classes", classes},
          {"links", links}};
}

ClassSet ClassSet::from_json(const nlohmann::json& j) {
  try {
    QuaternionAlgebra A(Integer(j.at("algebra").at(0).get<std::string>()),
                        Integer(j.at("algebra").at(1).get<std::string>()));
    QuaternionOrder O(A, lattice_from_json(j.at("order")), Integer(j.at("level").get<std::string>()));
    std::vector<IdealClass> classes;
    for (const auto& c : j.at("classes")) classes.push_back(make_ideal_class(A, make_right_ideal(O, lattice_from_json(c))));
    std::vector<std::vector<NeighborLink>> links;
    for (const auto& row : j.at("links")) {
      std::vector<NeighborLink> r;
      for (const auto& l : row) r.push_back({l.at("target").get<std::size_t>(), quat_from_json(l.at("x"))});
      links.push_back(r);
    }
    ClassSet cs(O, Integer(j.at("p").get<std::string>()), std::move(classes), std::move(links));
    check_mass(cs);
    if (cs.links_.size() != cs.size()) throw InvariantViolation("quatarith", "cached links are incomplete");
    for (std::size_t i = 0; i < cs.size(); ++i) {
      auto nb = neighbors(O, cs[i].ideal, cs.splitting());
      if (nb.size() != cs.links_[i].size()) throw InvariantViolation("quatarith", "cached links are incomplete");
      for (std::size_t k = 0; k < nb.size(); ++k) {
        const auto& l = cs.links_[i][k];
        if (l.target >= cs.size() || left_multiply(A, l.x, cs[l.target].ideal.lattice) != nb[k].lattice)
          throw InvariantViolation("quatarith", "cached neighbor link does not verify");
      }
    }
    return cs;
  } catch (const nlohmann::json::exception& e) {
    throw DataMissingError("quatarith", std::string("malformed class set cache: ") + e.what());
  }
}

ClassSet ideal_class_set(const QuaternionOrder& O, const Integer& p, std::size_t max_classes) {
  if (!is_prime(p) || (O.discriminant() * O.level()) % p == 0)
    throw ConfigurationError("quatarith", "traversal prime must be a prime not dividing disc * level");
  const auto& A = O.algebra();
  LocalSplitting split(O, p, 1);
  std::vector<IdealClass> classes{make_ideal_class(A, make_right_ideal(O, O.lattice()))};
  std::multimap<std::vector<Integer>, std::size_t> buckets{{classes[0].theta, 0}};
  std::vector<std::vector<NeighborLink>> links;

  for (std::size_t i = 0; i < classes.size(); ++i) {
    std::vector<NeighborLink> row;
    for (const auto& N : neighbors(O, classes[i].ideal, split)) {
      auto theta = theta_series(A, N, ClassSet::theta_terms);
      std::optional<NeighborLink> link;
      auto [lo, hi] = buckets.equal_range(theta);
      for (auto it = lo; it != hi && !link; ++it)
        if (auto x = isometry(A, N, classes[it->second].ideal)) link = NeighborLink{it->second, *x};
      if (!link) {
        if (classes.size() >= max_classes)
          throw SearchExhaustedError("quatarith", "class number exceeds the bound " + std::to_string(max_classes));
        IdealClass c{N, left_order(A, N), {}, theta};
        c.units = unit_group(A, c.left_order);
        classes.push_back(std::move(c));
        buckets.emplace(theta, classes.size() - 1);
        link = NeighborLink{classes.size() - 1, Quat::scalar(1)};
      }
      row.push_back(*link);
    }
    links.push_back(std::move(row));
  }
  ClassSet cs(O, p, std::move(classes), std::move(links));
  check_mass(cs);
  return cs;
}

}  // namespace anticyc::quatarith
