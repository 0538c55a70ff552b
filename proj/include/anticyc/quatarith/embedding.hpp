#pragma once

#include "anticyc/quatarith/ideals.hpp"
#include "anticyc/quatarith/order.hpp"

namespace anticyc::quatarith {

/// Trace and norm of the standard generator c*omega of Z + c O_K, where
/// omega = (-1 + sqrt(d)) / 2 for d = 1 mod 4 and sqrt(d / 4) otherwise.
struct QuadraticGenerator {
  Integer trace;
  Integer norm;
};
QuadraticGenerator quadratic_generator(const Integer& disc_K, const Integer& conductor);

/// True for negative fundamental discriminants.
bool is_fundamental_discriminant(const Integer& d);

struct Embedding {
  Integer disc_K;
  Integer conductor;
  Integer trace;
  Integer norm;
  Quat image;
};

/// Index of Z + Z x inside (Q + Q x) cap O: gcd of the 2x2 minors of the
/// O-coordinates of 1 and x.
Integer optimality_index(const QuaternionOrder& O, const Quat& x);

/// First element of O, in short-vector order, with the minimal polynomial of
/// the generator of O_c and optimality index 1.
Embedding optimal_embedding(const Integer& disc_K, const Integer& conductor, const QuaternionOrder& O);

/// Not every maximal order of a given discriminant contains O_c; this walks
/// the left orders of the classes of O (in class order) and returns the
/// first one admitting an optimal embedding, together with the embedding.
struct EmbeddedOrder {
  QuaternionOrder order;
  Embedding embedding;
};
EmbeddedOrder order_with_embedding(const ClassSet& classes, const Integer& disc_K, const Integer& conductor);

}  // namespace anticyc::quatarith
