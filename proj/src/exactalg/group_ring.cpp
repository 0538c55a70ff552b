#include "anticyc/exactalg/group_ring.hpp"

#include "anticyc/error.hpp"
#include "anticyc/exactalg/linalg.hpp"

namespace anticyc::exactalg {

namespace {

std::size_t group_size(const Integer& p, unsigned m) {
  Integer q = pow(p, m);
  if (!q.fits_ulong_p() || q > 1000000) throw UsageError("exactalg", "group order too large");
  return q.get_ui();
}

nlohmann::json integer_to_json(const Integer& x) {
  if (x.fits_slong_p()) return x.get_si();
  return x.get_str();
}

Integer integer_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) return Integer(j.get<long>());
  if (j.is_string()) return Integer(j.get<std::string>());
  throw UsageError("exactalg", "group ring coefficient must be an integer");
}

}  // namespace

PrimePowerRing::PrimePowerRing(Integer p, unsigned n) : p_(std::move(p)), n_(n) {
  if (!is_prime(p_)) throw UsageError("exactalg", "modulus base " + to_string(p_) + " is not prime");
  if (n_ < 1) throw UsageError("exactalg", "precision exponent must be at least 1");
  modulus_ = pow(p_, n_);
}

Integer PrimePowerRing::inverse(const Integer& x) const { return inverse_mod(x, modulus_); }

bool PrimePowerRing::is_unit(const Integer& x) const { return mod(x, p_) != 0; }

unsigned PrimePowerRing::valuation(const Integer& x) const {
  auto v = exactalg::valuation(reduce(x), p_);
  if (!v || *v >= static_cast<long>(n_)) return n_;
  return static_cast<unsigned>(*v);
}

GroupRingElement::GroupRingElement(PrimePowerRing ring, unsigned m, std::vector<Integer> coeffs)
    : ring_(std::move(ring)), m_(m), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != group_size(ring_.p(), m_))
    throw UsageError("exactalg", "coefficient count does not match group order");
  for (auto& c : coeffs_) c = ring_.reduce(c);
}

GroupRingElement GroupRingElement::zero(const PrimePowerRing& ring, unsigned m) {
  return GroupRingElement(ring, m, std::vector<Integer>(group_size(ring.p(), m)));
}

GroupRingElement GroupRingElement::constant(const PrimePowerRing& ring, unsigned m, const Integer& c) {
  std::vector<Integer> v(group_size(ring.p(), m));
  v[0] = c;
  return GroupRingElement(ring, m, std::move(v));
}

GroupRingElement GroupRingElement::group_element(const PrimePowerRing& ring, unsigned m, const Integer& k) {
  std::vector<Integer> v(group_size(ring.p(), m));
  v[mod(k, Integer(v.size())).get_ui()] = 1;
  return GroupRingElement(ring, m, std::move(v));
}

void GroupRingElement::check_compatible(const GroupRingElement& o) const {
  if (ring_ != o.ring_ || m_ != o.m_) throw UsageError("exactalg", "group ring elements live in different rings");
}

GroupRingElement GroupRingElement::operator+(const GroupRingElement& o) const {
  check_compatible(o);
  std::vector<Integer> v(coeffs_.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = coeffs_[k] + o.coeffs_[k];
  return GroupRingElement(ring_, m_, std::move(v));
}

GroupRingElement GroupRingElement::operator-(const GroupRingElement& o) const {
  check_compatible(o);
  std::vector<Integer> v(coeffs_.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = coeffs_[k] - o.coeffs_[k];
  return GroupRingElement(ring_, m_, std::move(v));
}

GroupRingElement GroupRingElement::operator*(const GroupRingElement& o) const {
  check_compatible(o);
  const std::size_t q = coeffs_.size();
  std::vector<Integer> v(q);
  for (std::size_t i = 0; i < q; ++i) {
    if (coeffs_[i] == 0) continue;
    for (std::size_t j = 0; j < q; ++j) {
      if (o.coeffs_[j] == 0) continue;
      std::size_t k = i + j;
      if (k >= q) k -= q;
      v[k] += coeffs_[i] * o.coeffs_[j];
    }
  }
  return GroupRingElement(ring_, m_, std::move(v));
}

GroupRingElement GroupRingElement::scaled(const Integer& c) const {
  std::vector<Integer> v(coeffs_);
  for (auto& x : v) x *= c;
  return GroupRingElement(ring_, m_, std::move(v));
}

bool GroupRingElement::operator==(const GroupRingElement& o) const {
  return ring_ == o.ring_ && m_ == o.m_ && coeffs_ == o.coeffs_;
}

bool GroupRingElement::is_zero() const {
  for (const auto& c : coeffs_)
    if (c != 0) return false;
  return true;
}

nlohmann::json GroupRingElement::to_json() const {
  nlohmann::json c = nlohmann::json::array();
  for (const auto& x : coeffs_) c.push_back(integer_to_json(x));
  return {{"p", integer_to_json(ring_.p())}, {"n", ring_.n()}, {"m", m_}, {"coeffs", c}};
}

GroupRingElement GroupRingElement::from_json(const nlohmann::json& j) {
  try {
    PrimePowerRing ring(integer_from_json(j.at("p")), j.at("n").get<unsigned>());
    std::vector<Integer> c;
    for (const auto& x : j.at("coeffs")) c.push_back(integer_from_json(x));
    return GroupRingElement(ring, j.at("m").get<unsigned>(), std::move(c));
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("exactalg", std::string("malformed group ring element: ") + e.what());
  }
}

GroupRingElement involution(const GroupRingElement& a) {
  const std::size_t q = a.group_order();
  std::vector<Integer> v(q);
  for (std::size_t k = 0; k < q; ++k) v[(q - k) % q] = a[k];
  return GroupRingElement(a.ring(), a.level(), std::move(v));
}

unsigned mu_invariant(const GroupRingElement& a) {
  unsigned mu = a.ring().n();
  for (const auto& c : a.coeffs()) mu = std::min(mu, a.ring().valuation(c));
  return mu;
}

GroupRingElement project_level(const GroupRingElement& a, unsigned target) {
  if (target > a.level()) throw UsageError("exactalg", "cannot project to a higher level");
  auto out = GroupRingElement::zero(a.ring(), target);
  std::vector<Integer> v(out.group_order());
  for (std::size_t k = 0; k < a.group_order(); ++k) v[k % v.size()] += a[k];
  return GroupRingElement(a.ring(), target, std::move(v));
}

std::vector<Integer> cyclotomic_polynomial(const Integer& p, unsigned k) {
  if (k == 0) return {Integer(-1), Integer(1)};
  const std::size_t step = group_size(p, k - 1);
  const std::size_t pp = p.get_ui();
  std::vector<Integer> c(step * (pp - 1) + 1);
  for (std::size_t i = 0; i < pp; ++i) c[i * step] = 1;
  return c;
}

CyclotomicResidue::CyclotomicResidue(PrimePowerRing ring, unsigned k, std::vector<Integer> coeffs)
    : ring_(std::move(ring)), k_(k), coeffs_(std::move(coeffs)) {
  std::size_t deg = cyclotomic_polynomial(ring_.p(), k_).size() - 1;
  if (coeffs_.size() != deg) throw UsageError("exactalg", "cyclotomic residue has wrong degree");
  for (auto& c : coeffs_) c = ring_.reduce(c);
}

CyclotomicResidue CyclotomicResidue::constant(const PrimePowerRing& ring, unsigned k, const Integer& c) {
  return from_polynomial(ring, k, {c});
}

CyclotomicResidue CyclotomicResidue::from_polynomial(const PrimePowerRing& ring, unsigned k,
                                                     const std::vector<Integer>& poly) {
  const auto phi = cyclotomic_polynomial(ring.p(), k);
  const std::size_t deg = phi.size() - 1;
  std::vector<Integer> r(poly);
  for (auto& c : r) c = ring.reduce(c);
  // phi is monic, so plain long division stays integral.
  for (std::size_t top = r.size(); top-- > deg;) {
    Integer lead = r[top];
    if (lead == 0) continue;
    for (std::size_t i = 0; i <= deg; ++i) r[top - deg + i] = ring.reduce(Integer(r[top - deg + i] - lead * phi[i]));
  }
  r.resize(deg);
  return CyclotomicResidue(ring, k, std::move(r));
}

Integer CyclotomicResidue::ramification_index() const {
  return Integer(cyclotomic_polynomial(ring_.p(), k_).size() - 1);
}

CyclotomicResidue CyclotomicResidue::operator+(const CyclotomicResidue& o) const {
  if (ring_ != o.ring_ || k_ != o.k_) throw UsageError("exactalg", "cyclotomic residues in different rings");
  std::vector<Integer> v(coeffs_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = coeffs_[i] + o.coeffs_[i];
  return CyclotomicResidue(ring_, k_, std::move(v));
}

CyclotomicResidue CyclotomicResidue::operator*(const CyclotomicResidue& o) const {
  if (ring_ != o.ring_ || k_ != o.k_) throw UsageError("exactalg", "cyclotomic residues in different rings");
  std::vector<Integer> v(2 * coeffs_.size());
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    for (std::size_t j = 0; j < o.coeffs_.size(); ++j) v[i + j] += coeffs_[i] * o.coeffs_[j];
  return from_polynomial(ring_, k_, v);
}

bool CyclotomicResidue::operator==(const CyclotomicResidue& o) const {
  return ring_ == o.ring_ && k_ == o.k_ && coeffs_ == o.coeffs_;
}

bool CyclotomicResidue::is_zero() const {
  for (const auto& c : coeffs_)
    if (c != 0) return false;
  return true;
}

unsigned long CyclotomicResidue::precision_cap() const {
  return ring_.n() * ramification_index().get_ui();
}

unsigned long CyclotomicResidue::valuation() const {
  // Totally ramified of degree e, so v_pi(x) = v_p(N(x)). A perturbation by
  // p^n changes the norm by a unit factor whenever v_pi(x) < n e.
  const std::size_t deg = coeffs_.size();
  IntMatrix mult(deg, deg);
  for (std::size_t j = 0; j < deg; ++j) {
    std::vector<Integer> xj(j + 1);
    xj[j] = 1;
    auto col = (*this * from_polynomial(ring_, k_, xj)).coeffs_;
    for (std::size_t i = 0; i < deg; ++i) mult(i, j) = col[i];
  }
  auto v = exactalg::valuation(determinant(mult), ring_.p());
  const unsigned long cap = precision_cap();
  if (!v || static_cast<unsigned long>(*v) >= cap) return cap;
  return static_cast<unsigned long>(*v);
}

CyclotomicResidue specialize(const GroupRingElement& a, const Character& rho) {
  const Integer pk = pow(a.ring().p(), rho.k);
  if (Integer(a.group_order()) % pk != 0)
    throw UsageError("exactalg", "character order does not divide the group order");
  std::vector<Integer> poly(pk.get_ui());
  for (std::size_t s = 0; s < a.group_order(); ++s) {
    if (a[s] == 0) continue;
    poly[mod(rho.exponent * Integer(s), pk).get_ui()] += a[s];
  }
  return CyclotomicResidue::from_polynomial(a.ring(), rho.k, poly);
}

}  // namespace anticyc::exactalg
