#pragma once

#include <optional>
#include <vector>

#include "anticyc/exactalg/matrix.hpp"

namespace anticyc::exactalg {

/// U * M * V == S with U, V unimodular and S diagonal with d1 | d2 | ...
struct SmithForm {
  IntMatrix U;
  IntMatrix S;
  IntMatrix V;

  std::size_t rank() const;
  /// Nonzero diagonal entries of S, in order.
  std::vector<Integer> diagonal() const;
};

/// Pivot rule: smallest nonzero absolute value in the active block, first
/// occurrence in row-major order wins ties. Output is a pure function of M.
SmithForm smith_normal_form(const IntMatrix& M);

/// Row-style Hermite normal form of the row lattice of M: upper echelon,
/// positive pivots, entries above each pivot reduced into [0, pivot).
/// Zero rows are dropped, so the result has rank(M) rows.
IntMatrix hermite_normal_form(const IntMatrix& M);

/// Saturated basis (as rows, in Hermite form) of {x in Z^n : M x = 0}.
IntMatrix integer_kernel(const IntMatrix& M);
/// Basis (as rows, reduced echelon) of {x in Q^n : M x = 0}.
RatMatrix rational_kernel(const RatMatrix& M);

std::size_t rank(const IntMatrix& M);
std::size_t rank(const RatMatrix& M);
Integer determinant(const IntMatrix& M);
Rational determinant(const RatMatrix& M);
/// Throws UsageError for singular input.
RatMatrix inverse(const RatMatrix& M);

/// Some x in Z^n with M x = b, if one exists.
std::optional<std::vector<Integer>> solve_integer(const IntMatrix& M, const std::vector<Integer>& b);
/// Some x in Q^n with M x = b, if one exists.
std::optional<std::vector<Rational>> solve_rational(const RatMatrix& M, const std::vector<Rational>& b);

/// Basis (as rows) of {x in Z^n : row_i(A) . x == 0 mod moduli[i] for all i},
/// in Hermite form.
IntMatrix congruence_sublattice(const IntMatrix& A, const std::vector<Integer>& moduli);

/// Reduce every entry into [0, m).
IntMatrix reduce_mod(const IntMatrix& M, const Integer& m);
/// Basis (as rows, reduced echelon, entries in [0,p)) of the right kernel over F_p.
IntMatrix kernel_mod_prime(const IntMatrix& M, const Integer& p);
std::size_t rank_mod_prime(const IntMatrix& M, const Integer& p);
/// X with A X == B mod p, for A of full column rank mod p; nullopt when inconsistent.
std::optional<IntMatrix> solve_mod_prime(const IntMatrix& A, const IntMatrix& B, const Integer& p);
/// Inverse modulo m (any modulus); throws UsageError when det is not a unit.
IntMatrix inverse_mod(const IntMatrix& M, const Integer& m);

/// Characteristic polynomial det(x I - M), coefficients from degree 0 upward.
std::vector<Integer> characteristic_polynomial(const IntMatrix& M);
std::vector<Rational> characteristic_polynomial(const RatMatrix& M);

}  // namespace anticyc::exactalg
