#include "anticyc/toruscm/torus.hpp"

#include "anticyc/error.hpp"
#include "anticyc/exactalg/linalg.hpp"

namespace anticyc::toruscm {

using namespace exactalg;
using bttree::TreeEdge;
using bttree::TreeVertex;

namespace {

RatMatrix to_rat(const Mat2& m) { return RatMatrix{{m[0], m[1]}, {m[2], m[3]}}; }

TorusElement normalize_mod(const Integer& a, const Integer& b, const Integer& p, const Integer& m) {
  if (mod(a, p) != 0) return {1, mod(b * inverse_mod(a, m), m)};
  if (mod(b, p) == 0) throw UsageError("toruscm", "element is not a unit of O_K tensor Z_p");
  return {mod(a * inverse_mod(b, m), m), 1};
}

}  // namespace

TorusData::TorusData(Integer disc_K, Integer p, unsigned precision, Integer trace, Integer norm, Mat2 W,
                     quatarith::Embedding embedding)
    : disc_K_(std::move(disc_K)),
      p_(std::move(p)),
      r_(precision),
      mod_(pow(p_, precision)),
      t_(std::move(trace)),
      n_(std::move(norm)),
      W_(W),
      emb_(std::move(embedding)) {}

long TorusData::global_units() const {
  if (disc_K_ == -3) return 3;
  if (disc_K_ == -4) return 2;
  return 1;
}

TorusElement TorusData::normalize(const Integer& a, const Integer& b) const { return normalize_mod(a, b, p_, mod_); }

TorusElement TorusData::mul(const TorusElement& x, const TorusElement& y) const {
  return normalize(x.a * y.a - n_ * x.b * y.b, x.a * y.b + x.b * y.a + t_ * x.b * y.b);
}

TorusElement TorusData::power(const TorusElement& x, Integer e) const {
  if (e < 0) throw UsageError("toruscm", "negative exponent");
  TorusElement r{1, 0}, base = x;
  while (e > 0) {
    if (mod(e, Integer(2)) == 1) r = mul(r, base);
    base = mul(base, base);
    e /= 2;
  }
  return r;
}

Mat2 TorusData::matrix(const TorusElement& x) const {
  Mat2 m;
  for (int k = 0; k < 4; ++k) m[k] = mod(x.b * W_[k] + ((k == 0 || k == 3) ? x.a : Integer(0)), mod_);
  return m;
}

TreeVertex TorusData::act(const TorusElement& x, const TreeVertex& v) const {
  if (v.depth() > r_) throw UsageError("toruscm", "vertex lies beyond the torus precision");
  return bttree::act(to_rat(matrix(x)), v, p_);
}

TreeEdge TorusData::act(const TorusElement& x, const TreeEdge& e) const {
  return TreeEdge{act(x, e.source), act(x, e.target)};
}

bool TorusData::in_level(const TorusElement& x, unsigned j) const {
  if (j == 0) return true;
  return x.a == 1 && mod(x.b, pow(p_, j)) == 0;
}

std::vector<TorusElement> TorusData::quotient(unsigned j) const {
  if (j < 1 || j > r_) throw UsageError("toruscm", "quotient level out of range");
  const Integer m = pow(p_, j);
  std::vector<TorusElement> out;
  for (Integer t = 0; t < m; ++t) out.push_back({1, t});
  for (Integer s = 0; s < m; s += p_) out.push_back({s, 1});
  return out;
}

std::vector<TorusElement> TorusData::subquotient(unsigned i, unsigned j) const {
  if (i == 0) return quotient(j);
  if (i > j || j > r_) throw UsageError("toruscm", "subquotient levels out of range");
  const Integer step = pow(p_, i), m = pow(p_, j);
  std::vector<TorusElement> out;
  for (Integer t = 0; t < m; t += step) out.push_back({1, t});
  return out;
}

TorusData build_torus(const quatarith::QuaternionOrder& O, const quatarith::Embedding& embedding, const Integer& p,
                      unsigned precision) {
  if (p == 2) throw ConfigurationError("toruscm", "p = 2 is not supported");
  if (kronecker(embedding.disc_K, p) != -1)
    throw ConfigurationError("toruscm", "p = " + to_string(p) + " is not inert in K; only the inert torus is supported");
  if (embedding.conductor != 1) throw UsageError("toruscm", "the torus is built from the maximal order of K");
  if (precision < 1) throw UsageError("toruscm", "precision must be positive");
  quatarith::LocalSplitting S(O, p, precision);
  Mat2 W = S.matrix(O, embedding.image);
  TorusData T(embedding.disc_K, p, precision, embedding.trace, embedding.norm, W, embedding);

  const Integer& m = T.modulus();
  const Integer& t = T.trace();
  const Integer& n = T.norm();
  Mat2 W2{W[0] * W[0] + W[1] * W[2], W[0] * W[1] + W[1] * W[3], W[2] * W[0] + W[3] * W[2], W[2] * W[1] + W[3] * W[3]};
  for (int k = 0; k < 4; ++k)
    if (mod(W2[k] - t * W[k] + ((k == 0 || k == 3) ? n : Integer(0)), m) != 0)
      throw InvariantViolation("toruscm", "omega matrix does not satisfy its minimal polynomial");

  const unsigned radius = std::min(2u, precision);
  auto ball = bttree::ball(p, radius);
  auto reps = T.quotient(1);
  for (const auto& v : ball) {
    bool fixed = true;
    for (const auto& x : reps)
      if (T.act(x, v) != v) {
        fixed = false;
        break;
      }
    if (fixed != (v == T.fixed_vertex()))
      throw InvariantViolation("toruscm", "torus does not fix exactly one vertex: " + v.to_string());
  }
  return T;
}

TorusLevelGroup::TorusLevelGroup(const TorusData& T, unsigned m) : T_(&T), m_(m) {
  if (m + 1 > T.precision()) throw UsageError("toruscm", "level exceeds the torus precision");
  const Integer& p = T.prime();
  const Integer pm = pow(p, m);
  exponent_ = m == 0 ? Integer(p + 1) : Integer((p + 1) * inverse_mod(p + 1, pm));
  const Integer mod_level = pow(p, m + 1);
  const TorusElement gamma{1, p};
  TorusElement x{1, 0};
  for (Integer k = 0; k < pm; ++k) {
    TorusElement key = normalize_mod(x.a, x.b, p, mod_level);
    if (index_.count(key)) throw InvariantViolation("toruscm", "1 + p omega has order below p^m");
    index_[key] = elements_.size();
    elements_.push_back(key);
    x = T.mul(x, gamma);
  }
  if (normalize_mod(x.a, x.b, p, mod_level) != TorusElement{1, 0})
    throw InvariantViolation("toruscm", "H_m is not cyclic of order p^m");
}

std::size_t TorusLevelGroup::log(const TorusElement& x) const {
  const Integer& p = T_->prime();
  auto it = index_.find(normalize_mod(x.a, x.b, p, pow(p, m_ + 1)));
  if (it == index_.end()) throw InvariantViolation("toruscm", "element is not in U_1");
  return it->second;
}

std::size_t TorusLevelGroup::project(const TorusElement& x) const { return log(T_->power(x, exponent_)); }

TorusLevelGroup level_group(const TorusData& T, unsigned m) { return TorusLevelGroup(T, m); }

EdgeClassifier::EdgeClassifier(const TorusData& T, const brandtforms::QuotientGraph& G)
    : T_(&T), G_(&G), split_(G.classes().order(), T.prime(), T.precision()) {
  if (G.prime() != T.prime()) throw UsageError("toruscm", "torus and quotient graph use different primes");
  if (!G.classes().order().lattice().contains(T.embedding().image))
    throw UsageError("toruscm", "the embedding does not land in the order of the quotient graph");
}

quatarith::RightIdeal EdgeClassifier::ideal(const TreeVertex& v) const {
  const Integer& p = T_->prime();
  if (v.depth() > T_->precision()) throw UsageError("toruscm", "vertex lies beyond the torus precision");
  const auto& O = G_->classes().order();
  auto M = v.matrix(p);
  const Integer D = pow(p, v.depth());
  Mat2 adj{M[3], -M[1], -M[2], M[0]};
  IntMatrix A(4, 4);
  for (std::size_t i = 0; i < 4; ++i) {
    std::vector<Integer> e(4, 0);
    e[i] = 1;
    Mat2 b = split_.matrix(e);
    for (std::size_t r = 0; r < 2; ++r)
      for (std::size_t c = 0; c < 2; ++c) A(2 * r + c, i) = adj[2 * r] * b[c] + adj[2 * r + 1] * b[2 + c];
  }
  IntMatrix basis = congruence_sublattice(A, {D, D, D, D});
  return quatarith::RightIdeal{quatarith::Lattice::from_coordinates(O.lattice(), basis), Rational(D)};
}

std::size_t EdgeClassifier::vertex_class(const TreeVertex& v) const { return G_->classes().find(ideal(v)).index; }

std::size_t EdgeClassifier::edge_class(const TreeEdge& e) const {
  if (auto it = edge_cache_.find(e); it != edge_cache_.end()) return it->second;
  std::size_t out;
  if (e.target.depth() < e.source.depth()) {
    out = G_->edge(edge_class(e.reversed())).reverse;
  } else {
    const auto& A = G_->classes().algebra();
    auto match = G_->classes().find(ideal(e.source));
    auto N = quatarith::left_multiply(A, A.inverse(match.x), ideal(e.target).lattice);
    out = G_->edge_of_neighbor(match.index, N);
  }
  edge_cache_[e] = out;
  return out;
}

nlohmann::json EdgeOrbitTable::to_json() const {
  nlohmann::json j;
  j["m"] = m;
  j["ray"] = nlohmann::json::array();
  for (const auto& e : ray) j["ray"].push_back({e.source.to_string(), e.target.to_string()});
  j["classes"] = classes;
  return j;
}

EdgeOrbitTable edge_orbit_table(const EdgeClassifier& C, const TorusLevelGroup& H, bttree::TieBreak tie) {
  const auto& T = C.torus();
  EdgeOrbitTable out{H.level(), bttree::standard_edge_ray(H.level() + 1, T.local(), tie), {}};
  for (const auto& sigma : H.elements()) {
    std::vector<std::size_t> row;
    for (const auto& e : out.ray) row.push_back(C.edge_class(T.act(sigma, e)));
    out.classes.push_back(std::move(row));
  }
  return out;
}

bool stabilizer_check(const TorusData& T, const std::vector<TreeEdge>& ray, unsigned depth) {
  if (depth > T.precision() || depth > ray.size()) throw UsageError("toruscm", "stabilizer check beyond the ray");
  for (const auto& x : T.quotient(depth))
    for (unsigned j = 0; j < depth; ++j)
      if ((T.act(x, ray[j]) == ray[j]) != T.in_level(x, j + 1)) return false;
  return true;
}

}  // namespace anticyc::toruscm
