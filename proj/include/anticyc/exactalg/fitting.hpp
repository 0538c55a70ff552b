#pragma once

#include <optional>
#include <string>
#include <vector>

#include "anticyc/exactalg/group_ring.hpp"
#include "anticyc/exactalg/matrix.hpp"

namespace anticyc::exactalg {

/// Z^r + Z/d1 + ... + Z/dk with 1 < d1 | d2 | ... | dk.
struct AbelianGroupShape {
  std::vector<Integer> factors;
  std::size_t free_rank = 0;

  bool is_trivial() const { return factors.empty() && free_rank == 0; }
  /// Product of the factors; nullopt when the group is infinite.
  std::optional<Integer> order() const;
  std::string to_string() const;
  bool operator==(const AbelianGroupShape& o) const = default;
};

/// Cokernel of M : Z^cols -> Z^rows.
AbelianGroupShape cokernel_shape(const IntMatrix& M);

/// Fitting ideal of the Z_p-module presented by M (generators are rows,
/// relations are columns). The ideal is (p^exponent), or zero when exponent
/// is empty. Reduction to Z/p^n keeps the exponent and may kill the ideal,
/// which is what vanishes_mod_pn records.
struct FittingExponent {
  std::optional<unsigned long> exponent;
  bool vanishes_mod_pn = false;
};

/// Throws UsageError when there are fewer relations than generators.
FittingExponent fitting_exponent(const IntMatrix& presentation, const PrimePowerRing& ring);

enum class CheckStatus { holds, violated, undetermined };
std::string to_string(CheckStatus s);

struct InequalityReport {
  /// Length of the presented module tensored up to the coefficient ring of
  /// the character, in units of its uniformizer; empty when infinite.
  std::optional<unsigned long> s;
  /// Valuation of phi(L) and of phi(L L*), capped at the working precision.
  unsigned long t = 0;
  unsigned long two_t = 0;
  unsigned long precision_cap = 0;
  CheckStatus inequality = CheckStatus::undetermined;
  /// Whether phi(L L*) lies in the Fitting ideal over the character's ring.
  bool in_fitting = false;
};

/// Compares the length s of the presented module with the valuation 2t of
/// phi(L L*), where L plays the role of the square root element.
InequalityReport inequality_check(const IntMatrix& sel_presentation, const GroupRingElement& L,
                                  const Character& phi);

}  // namespace anticyc::exactalg
