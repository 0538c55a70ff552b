#pragma once

#include <functional>
#include <vector>

#include "anticyc/exactalg/matrix.hpp"

namespace anticyc::quatarith {

using exactalg::Integer;
using exactalg::IntMatrix;
using exactalg::RatMatrix;
using exactalg::Rational;

/// Exact LLL (delta = 3/4) on a positive-definite Gram matrix. Returns a
/// unimodular T whose rows give the reduced basis: the reduced Gram is T G T^T.
IntMatrix lll_reduce(const RatMatrix& gram);

/// Calls visit(c, q) for every nonzero integer vector c with q = c^T G c <= bound.
/// Enumeration is exhaustive; bounds per coordinate are exact. Returning
/// false from visit stops the search early.
void short_vectors(const RatMatrix& gram, const Rational& bound,
                   const std::function<bool(const std::vector<Integer>&, const Rational&)>& visit);

/// All nonzero vectors with c^T G c == value, up to sign (first nonzero entry positive).
std::vector<std::vector<Integer>> vectors_of_norm(const RatMatrix& gram, const Rational& value);

}  // namespace anticyc::quatarith
