#include "anticyc/exactalg/fitting.hpp"

#include <sstream>

#include "anticyc/error.hpp"
#include "anticyc/exactalg/linalg.hpp"

namespace anticyc::exactalg {

std::optional<Integer> AbelianGroupShape::order() const {
  if (free_rank) return std::nullopt;
  Integer o = 1;
  for (const auto& d : factors) o *= d;
  return o;
}

std::string AbelianGroupShape::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& d : factors) {
    os << (first ? "" : " + ") << "Z/" << d.get_str();
    first = false;
  }
  if (free_rank) {
    os << (first ? "" : " + ") << "Z";
    if (free_rank > 1) os << "^" << free_rank;
    first = false;
  }
  return first ? "0" : os.str();
}

AbelianGroupShape cokernel_shape(const IntMatrix& M) {
  AbelianGroupShape out;
  auto snf = smith_normal_form(M);
  auto diag = snf.diagonal();
  for (auto d : diag) {
    d = abs(d);
    if (d != 1) out.factors.push_back(d);
  }
  out.free_rank = M.rows() - diag.size();
  return out;
}

FittingExponent fitting_exponent(const IntMatrix& presentation, const PrimePowerRing& ring) {
  if (presentation.cols() < presentation.rows())
    throw UsageError("exactalg", "presentation needs at least as many relations as generators");
  FittingExponent out;
  auto diag = smith_normal_form(presentation).diagonal();
  if (diag.size() < presentation.rows()) {
    out.vanishes_mod_pn = true;
    return out;
  }
  unsigned long t = 0;
  for (const auto& d : diag) t += static_cast<unsigned long>(*valuation(d, ring.p()));
  out.exponent = t;
  out.vanishes_mod_pn = t >= ring.n();
  return out;
}

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::holds: return "holds";
    case CheckStatus::violated: return "violated";
    case CheckStatus::undetermined: return "undetermined";
  }
  return "?";
}

InequalityReport inequality_check(const IntMatrix& sel_presentation, const GroupRingElement& L,
                                  const Character& phi) {
  InequalityReport r;
  auto value = specialize(L, phi);
  auto value_sq = specialize(L * involution(L), phi);
  const unsigned long e = value.ramification_index().get_ui();
  r.precision_cap = value.precision_cap();
  r.t = value.valuation();
  r.two_t = value_sq.valuation();

  IntMatrix pres = sel_presentation;
  if (pres.cols() < pres.rows()) {
    // Pad with zero relations: they do not change the module.
    IntMatrix padded(pres.rows(), pres.rows());
    for (std::size_t i = 0; i < pres.rows(); ++i)
      for (std::size_t j = 0; j < pres.cols(); ++j) padded(i, j) = pres(i, j);
    pres = padded;
  }
  auto fitt = fitting_exponent(pres, L.ring());
  if (fitt.exponent) r.s = e * *fitt.exponent;

  const bool exact = r.two_t < r.precision_cap;
  if (!r.s) {
    r.inequality = exact ? CheckStatus::violated : CheckStatus::undetermined;
    r.in_fitting = !exact;
  } else if (*r.s <= r.two_t) {
    r.inequality = CheckStatus::holds;
    r.in_fitting = true;
  } else {
    r.inequality = exact ? CheckStatus::violated : CheckStatus::undetermined;
    // Over O'/p^n the ideal (pi^s) is zero once s reaches the cap.
    r.in_fitting = !exact;
  }
  return r;
}

}  // namespace anticyc::exactalg
