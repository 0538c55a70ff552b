#include "acceptance.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <memory>
#include <numeric>
#include <random>
#include <sstream>

#include "anticyc/admraise/admissible.hpp"
#include "anticyc/compgraph/graph.hpp"
#include "anticyc/error.hpp"
#include "anticyc/exactalg/fitting.hpp"
#include "anticyc/padicL/lfunction.hpp"
#include "oracles.hpp"

namespace anticyc::app {

namespace {

using brandtforms::EigenSystem;
using exactalg::Integer;
using exactalg::IntMatrix;

// Runtime ceilings in seconds; criteria without one are unbounded.
constexpr double kBrandtSeconds = 10;
constexpr double kDistributionSeconds = 60;
constexpr double kRaiseSeconds = 600;

class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    ++total_;
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    if (!ok) ++failed_;
  }
  bool ok() const { return failed_ == 0; }
  std::string summary(const std::string& detail) const {
    if (ok()) return detail;
    std::string s = std::to_string(failed_) + "/" + std::to_string(total_) + " checks failed:";
    for (const auto& f : failures_) s += " [" + f + "]";
    return s;
  }

 private:
  std::size_t total_ = 0, failed_ = 0;
  std::vector<std::string> failures_;
};

std::vector<long> primes_to(long bound, std::initializer_list<long> skip) {
  std::vector<long> out;
  for (long l = 2; l <= bound; ++l)
    if (oracle::is_prime(l) && std::find(skip.begin(), skip.end(), l) == skip.end()) out.push_back(l);
  return out;
}

// 11a from point counts, for l <= 60.
EigenSystem fixture_11a(long n) {
  nlohmann::json a;
  for (long l : primes_to(60, {11})) a[std::to_string(l)] = oracle::ap_11a(l);
  return EigenSystem::from_json({{"p", 5}, {"n", n}, {"a", a}, {"eps", {{"11", 1}}}});
}

// The disc-11 order containing a cube root of unity, its quotient at p = 5,
// the torus and the 11a edge eigenforms for n = 1, 2.
struct Pipeline11a {
  quatarith::EmbeddedOrder eo;
  brandtforms::QuotientGraph G;
  toruscm::TorusData T;
  std::unique_ptr<toruscm::EdgeClassifier> C;
  std::map<long, padicL::EdgeForm> forms;
};

const Pipeline11a& pipeline_11a() {
  static const Pipeline11a* s = [] {
    auto O = quatarith::maximal_order(quatarith::algebra_from_discriminant(11));
    auto eo = quatarith::order_with_embedding(quatarith::ideal_class_set(O, 5), -3, 1);
    auto G = brandtforms::quotient_graph(eo.order, 5);
    auto T = toruscm::build_torus(eo.order, eo.embedding, 5, 4);
    auto* p = new Pipeline11a{eo, G, T, nullptr, {}};
    p->C = std::make_unique<toruscm::EdgeClassifier>(p->T, p->G);
    for (long n : {1L, 2L})
      for (const auto& f : brandtforms::eigensystems_mod(p->G.classes(), {2, 3, 5, 7}, 5, n))
        if (!brandtforms::is_exact_eisenstein(f))
          p->forms.emplace(n, padicL::from_eigenform(brandtforms::edge_eigenform(p->G, f, n)));
    if (p->forms.size() != 2) throw InvariantViolation("selftest", "11a edge eigenform not found");
    return p;
  }();
  return *s;
}

std::string join(const std::vector<long>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "}";
}

CriterionResult brandt_engine() {
  Checker c;
  auto O = quatarith::maximal_order(quatarith::algebra_from_discriminant(11));
  auto cs = quatarith::ideal_class_set(O, 2);
  c.expect(cs.size() == 2, "class number");
  c.expect(cs.mass() == exactalg::make_rational(5, 12), "mass");
  const std::map<long, long> expected{{2, -2}, {3, -1}, {7, -2}, {13, 4}};
  for (auto [l, a] : expected) {
    long oracle_a = oracle::ap_11a(l);
    c.expect(oracle_a == a, "point count at " + std::to_string(l));
    // The roots {l + 1, a} of a 2x2 matrix are fixed by its trace and determinant.
    auto B = brandtforms::brandt_matrix(l, cs);
    Integer tr = B(0, 0) + B(1, 1), det = B(0, 0) * B(1, 1) - B(0, 1) * B(1, 0);
    c.expect(tr == l + 1 + oracle_a && det == (l + 1) * oracle_a, "eigenvalues of T_" + std::to_string(l));
  }
  return {1, c.ok(), c.summary("h = 2, mass 5/12, T_l roots {l+1, a_l} for l in {2,3,7,13}")};
}

CriterionResult tree_quotient() {
  Checker c;
  std::mt19937 rng(20240611);
  std::uniform_int_distribution<long> coeff(-50, 50);
  auto O = quatarith::maximal_order(quatarith::algebra_from_discriminant(11));
  for (long p : {2L, 3L}) {
    auto G = brandtforms::quotient_graph(O, p);
    auto B = brandtforms::brandt_matrix(p, G.classes());
    for (int trial = 0; trial < 20; ++trial) {
      brandtforms::Form phi(G.vertex_count());
      for (auto& x : phi) x = coeff(rng);
      auto lhs = brandtforms::tp_apply(G, phi);
      for (std::size_t i = 0; i < G.vertex_count(); ++i) {
        Integer rhs = 0;
        for (std::size_t j = 0; j < G.vertex_count(); ++j) rhs += B(i, j) * phi[j];
        c.expect(lhs[i] == rhs, "T_p at p=" + std::to_string(p));
      }
    }
  }
  std::vector<brandtforms::QuotientGraph> quotients{brandtforms::quotient_graph(O, 2), brandtforms::quotient_graph(O, 3),
                                                    pipeline_11a().G};
  for (const auto& G : quotients)
    for (std::size_t i = 0; i < G.vertex_count(); ++i)
      c.expect(G.weighted_degree(i) == G.prime().get_ui() + 1, "regularity at p=" + exactalg::to_string(G.prime()));
  return {2, c.ok(), c.summary("tp_apply = Brandt action on 40 forms; 3 quotients regular")};
}

CriterionResult distribution() {
  Checker c;
  const auto& P = pipeline_11a();
  for (long n : {1L, 2L}) {
    padicL::Measure mu(*P.C, P.forms.at(n));
    for (unsigned j = 0; j <= 2; ++j)
      for (const auto& sigma : P.T.quotient(j + 1)) {
        Integer sum = 0;
        for (const auto& tau : P.T.subquotient(j + 1, j + 2)) sum += mu.theta(P.T.mul(sigma, tau), j + 1);
        c.expect(mu.ring().reduce(sum) == mu.theta(sigma, j), "theta additivity n=" + std::to_string(n));
      }
    for (unsigned m = 0; m <= 2; ++m)
      c.expect(exactalg::project_level(padicL::partial_L(mu, m + 1), m) == padicL::partial_L(mu, m),
               "project_level n=" + std::to_string(n) + " m=" + std::to_string(m));
  }
  return {3, c.ok(), c.summary("theta additivity and partial_L compatibility, n in {1,2}, m = 0..2")};
}

CriterionResult ray_independence() {
  Checker c;
  const auto& P = pipeline_11a();
  for (long n : {1L, 2L}) {
    padicL::Measure least(*P.C, P.forms.at(n), bttree::TieBreak::least);
    padicL::Measure greatest(*P.C, P.forms.at(n), bttree::TieBreak::greatest);
    c.expect(least.ray() != greatest.ray(), "tie-breaks give distinct rays");
    for (unsigned m = 0; m <= 2; ++m) {
      auto a = padicL::full_Lp(least, m), b = padicL::full_Lp(greatest, m);
      c.expect(a.L_p == b.L_p, "L_p identical at m=" + std::to_string(m));
      bool shifted = false;
      for (std::size_t k = 0; k < a.L_phi.group_order() && !shifted; ++k)
        shifted = exactalg::GroupRingElement::group_element(a.L_phi.ring(), m, k) * a.L_phi == b.L_phi;
      c.expect(shifted, "L_phi shifted at m=" + std::to_string(m));
    }
  }
  return {4, c.ok(), c.summary("L_p identical under both tie-breaks; L_phi differs by a group element")};
}

CriterionResult mu_bookkeeping() {
  Checker c;
  const auto& P = pipeline_11a();
  std::vector<std::string> anomalies;
  std::vector<padicL::EdgeForm> fixtures{P.forms.at(1), P.forms.at(2)};
  // p * Phi at n = 2 is constant modulo p, so nu >= 1.
  auto tilted = P.forms.at(2);
  for (auto& x : tilted.values) x = tilted.ring.reduce(5 * x);
  tilted.provenance = "5 * 11a";
  fixtures.push_back(tilted);
  for (std::size_t f = 0; f < fixtures.size(); ++f) {
    padicL::Measure mu(*P.C, fixtures[f]);
    for (unsigned m = 0; m <= 2; ++m) {
      auto r = padicL::mu_two_nu_check(fixtures[f], padicL::full_Lp(mu, m));
      c.expect(r.bound_holds, "mu >= 2 nu for fixture " + std::to_string(f));
      if (f < 2) {
        c.expect(r.nu == 0, "11a has nu = 0");
        if (r.mu_L_p != 0) anomalies.push_back("n=" + std::to_string(f + 1) + " m=" + std::to_string(m));
      }
    }
  }
  c.expect(anomalies.empty(), "anomalous mu(L_p) != 0 for 11a");
  return {5, c.ok(), c.summary("mu(L_p) >= min(2 nu, n) on 3 fixtures; 11a records mu(L_p) = 0")};
}

// Spanning-tree sum of products of the lengths outside the tree.
Integer spanning_tree_sum(const compgraph::LengthGraph& G) {
  const std::size_t n = G.vertex_count(), E = G.edge_count();
  Integer total = 0;
  for (unsigned long mask = 0; mask < (1ul << E); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcountl(mask)) + 1 != n) continue;
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
      return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    bool forest = true;
    Integer weight = 1;
    for (std::size_t i = 0; i < E; ++i) {
      const auto& e = G.edge(i);
      if (mask >> i & 1) {
        auto a = find(e.source), b = find(e.target);
        forest = forest && a != b;
        parent[a] = b;
      } else {
        weight *= e.length;
      }
    }
    if (forest) total += weight;
  }
  return total;
}

// Every connected loopless multigraph on up to 4 vertices with at most 8
// edges, lengths cycling through 1, 2, 3.
std::size_t exhaustive_graphs(const std::function<void(const compgraph::LengthGraph&)>& visit) {
  std::size_t count = 0;
  for (std::size_t n = 1; n <= 4; ++n) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b) pairs.push_back({a, b});
    std::vector<unsigned> mult(pairs.size(), 0);
    std::function<void(std::size_t, unsigned)> rec = [&](std::size_t i, unsigned left) {
      if (i == pairs.size()) {
        std::vector<compgraph::LengthEdge> edges;
        for (std::size_t k = 0; k < pairs.size(); ++k)
          for (unsigned r = 0; r < mult[k]; ++r)
            edges.push_back({pairs[k].first, pairs[k].second, Integer(1 + edges.size() % 3)});
        compgraph::LengthGraph G(n, std::move(edges));
        if (G.connected()) {
          visit(G);
          ++count;
        }
        return;
      }
      for (unsigned m = 0; m <= left; ++m) {
        mult[i] = m;
        rec(i + 1, left - m);
      }
      mult[i] = 0;
    };
    rec(0, 8);
  }
  return count;
}

CriterionResult component_groups() {
  Checker c;
  std::mt19937 rng(7);
  std::uniform_int_distribution<long> len(1, 40);
  for (int trial = 0; trial < 10; ++trial) {
    long a = len(rng), b = len(rng);
    auto Phi = compgraph::component_group(compgraph::LengthGraph(2, {{0, 1, a}, {1, 0, b}}));
    c.expect(Phi.shape() == exactalg::cokernel_shape(IntMatrix{{a + b}}) && Phi.shape().factors.size() == 1 &&
                 Phi.shape().factors[0] == a + b,
             "Z/(a+b) for (" + std::to_string(a) + "," + std::to_string(b) + ")");
  }
  auto graphs = exhaustive_graphs([&](const compgraph::LengthGraph& G) {
    auto order = compgraph::component_group(G).shape().order();
    c.expect(order && *order == spanning_tree_sum(G), "coker order vs spanning trees");
  });

  std::uniform_int_distribution<int> coef(-6, 6);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 3 + trial % 4;
    std::vector<compgraph::LengthEdge> edges;
    for (std::size_t v = 1; v < n; ++v) edges.push_back({rng() % v, v, len(rng) % 5 + 1});
    for (std::size_t k = 0; k < 3; ++k) edges.push_back({rng() % n, rng() % n, len(rng) % 5 + 1});
    compgraph::LengthGraph G(n, std::move(edges));
    auto Phi = compgraph::component_group(G);
    std::vector<Integer> x(n, 0);
    Integer degree = 0;
    for (std::size_t v = 1; v < n; ++v) degree += x[v] = coef(rng);
    x[0] = -degree;
    try {
      compgraph::omega_map(G, Phi, x);
      c.expect(true, "omega");
    } catch (const InvariantViolation& e) {
      c.expect(false, e.what());
    }
  }

  std::vector<compgraph::LengthGraph> unit{
      compgraph::LengthGraph(2, {{0, 1, 1}, {1, 0, 1}}),
      compgraph::LengthGraph(2, {{0, 1, 1}, {0, 1, 1}, {0, 1, 1}}),
      compgraph::LengthGraph(3, {{0, 1, 1}, {1, 2, 1}}),
  };
  auto O = quatarith::maximal_order(quatarith::algebra_from_discriminant(11));
  for (long p : {2L, 3L}) unit.push_back(compgraph::LengthGraph::from_quotient(brandtforms::quotient_graph(O, p)));
  for (const auto& G : unit) {
    auto r = compgraph::edixhoven_check(G);
    c.expect(r.agree && r.laplacian_square && r.monodromy_square, "Edixhoven agreement");
  }
  return {6, c.ok(),
          c.summary("10 two-cycles, " + std::to_string(graphs) + " graphs vs spanning trees, 50 omega chains, " +
                    std::to_string(unit.size()) + " Edixhoven fixtures")};
}

CriterionResult admissible_primes() {
  Checker c;
  std::vector<long> oracle_vs;
  for (long v : primes_to(25, {5, 11})) {
    if (oracle::kronecker_prime(-3, v) != -1 || (v * v - 1) % 5 == 0) continue;
    long a = oracle::ap_11a(v);
    if ((v + 1 - a) % 5 == 0 || (v + 1 + a) % 5 == 0) oracle_vs.push_back(v);
  }
  c.expect(oracle_vs == std::vector<long>{2, 17, 23}, "oracle set");

  auto O = quatarith::maximal_order(quatarith::algebra_from_discriminant(11));
  std::optional<EigenSystem> computed;
  for (const auto& s : brandtforms::eigensystems_mod(quatarith::ideal_class_set(O, 2), primes_to(25, {11}), 5, 1))
    if (!brandtforms::is_exact_eisenstein(s)) computed = s;
  c.expect(computed.has_value(), "computed 11a");
  std::vector<EigenSystem> forms{fixture_11a(1)};
  if (computed) forms.push_back(*computed);
  std::vector<long> found;
  for (const auto& f : forms) {
    auto certs = admraise::search_admissible(f, -3, 5, 1, 11, 25);
    found.clear();
    for (const auto& cert : certs) {
      found.push_back(cert.v);
      c.expect(cert.epsilon == 1 && cert.reverify(), "certificate for " + std::to_string(cert.v));
    }
    c.expect(found == oracle_vs, "search result " + join(found));
  }
  return {7, c.ok(), c.summary("admissible " + join(found) + " with eps = +1, matching the oracle")};
}

CriterionResult level_raising() {
  Checker c;
  auto f = fixture_11a(1);
  auto c2 = admraise::is_n_admissible(2, f, -3, 5, 1, 11);
  auto c17 = admraise::is_n_admissible(17, f, -3, 5, 1, 11);
  if (!c2 || !c17) return {8, false, "2 or 17 not admissible"};
  auto pair = admraise::raise_level_search(f, *c2.cert, *c17.cert, 11, primes_to(50, {}));
  c.expect(pair.disc == 374, "discriminant");
  std::vector<long> expected_compared;
  for (long l : primes_to(50, {2, 5, 11, 17})) expected_compared.push_back(l);
  c.expect(pair.compared == expected_compared, "compared primes");
  for (long l : pair.compared)
    c.expect(exactalg::mod(pair.g.a_at(l) - oracle::ap_11a(l), Integer(5)) == 0, "a_" + std::to_string(l));
  c.expect(pair.g.eps.at(2) == c2.cert->epsilon && pair.g.eps.at(17) == c17.cert->epsilon, "U_v signs");
  return {8, c.ok(), c.summary("disc 374 system congruent to 11a mod 5 at " + std::to_string(pair.compared.size()) +
                               " primes, signs (+1,+1)")};
}

// Valuation of the determinant of a 3x3 matrix expanded by hand.
std::optional<unsigned long> det_valuation(const IntMatrix& M, long p) {
  Integer d = M(0, 0) * (M(1, 1) * M(2, 2) - M(1, 2) * M(2, 1)) - M(0, 1) * (M(1, 0) * M(2, 2) - M(1, 2) * M(2, 0)) +
              M(0, 2) * (M(1, 0) * M(2, 1) - M(1, 1) * M(2, 0));
  if (d == 0) return std::nullopt;
  unsigned long v = 0;
  while (d % p == 0) {
    d /= p;
    ++v;
  }
  return v;
}

CriterionResult fitting() {
  Checker c;
  const long p = 5;
  exactalg::PrimePowerRing R(p, 3);
  std::mt19937 rng(31337);
  std::uniform_int_distribution<int> entry(-12, 12), shift(0, 2);
  for (int trial = 0; trial < 100; ++trial) {
    IntMatrix M(3, 3);
    for (std::size_t i = 0; i < 3; ++i) {
      long scale = trial % 2 ? static_cast<long>(std::pow(p, shift(rng))) : 1;
      for (std::size_t j = 0; j < 3; ++j) M(i, j) = scale * entry(rng);
    }
    auto f = exactalg::fitting_exponent(M, R);
    auto v = det_valuation(M, p);
    c.expect(f.exponent == v, "trial " + std::to_string(trial));
    c.expect(f.vanishes_mod_pn == (!v || *v >= 3), "vanishing trial " + std::to_string(trial));
  }
  auto L = exactalg::GroupRingElement::constant(R, 1, 5);
  auto triv = exactalg::Character::trivial();
  auto r0 = exactalg::inequality_check(IntMatrix::identity(1), L, triv);
  c.expect(r0.s == 0u && r0.inequality == exactalg::CheckStatus::holds && r0.in_fitting, "trivial module");
  auto r2 = exactalg::inequality_check(IntMatrix{{25}}, L, triv);
  c.expect(r2.s == 2u && r2.two_t == 2 && r2.inequality == exactalg::CheckStatus::holds && r2.in_fitting, "s = 2t");
  auto r3 = exactalg::inequality_check(IntMatrix{{125}}, L, triv);
  c.expect(r3.s == 3u && r3.inequality == exactalg::CheckStatus::violated && !r3.in_fitting, "s > 2t");
  return {9, c.ok(), c.summary("100 presentations over Z/125 match det valuations; s <= 2t report s = 0, 2, 3")};
}

}  // namespace

std::string format_result(const CriterionResult& r) {
  char time[32];
  std::snprintf(time, sizeof time, "%.2fs", r.seconds);
  return "criterion " + std::to_string(r.id) + ": " + (r.pass ? "PASS" : "FAIL") + " (" + time + ") " + r.detail;
}

std::vector<CriterionResult> run_acceptance(const std::function<void(const CriterionResult&)>& report) {
  const std::vector<std::pair<std::function<CriterionResult()>, double>> criteria{
      {brandt_engine, kBrandtSeconds},   {tree_quotient, 0},    {distribution, kDistributionSeconds},
      {ray_independence, 0},             {mu_bookkeeping, 0},   {component_groups, 0},
      {admissible_primes, 0},            {level_raising, kRaiseSeconds}, {fitting, 0},
  };
  std::vector<CriterionResult> out;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& [run, limit] = criteria[i];
    auto start = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = run();
    } catch (const std::exception& e) {
      r = {static_cast<int>(i + 1), false, std::string("exception: ") + e.what()};
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (limit > 0 && r.seconds > limit) {
      r.pass = false;
      r.detail += " [exceeded " + std::to_string(static_cast<int>(limit)) + "s]";
    }
    if (report) report(r);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace anticyc::app
