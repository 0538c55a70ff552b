#pragma once

#include <map>
#include <optional>
#include <vector>

#include "json.hpp"

#include "anticyc/quatarith/order.hpp"

namespace anticyc::quatarith {

/// Right ideal of a fixed order O, with its reduced norm.
struct RightIdeal {
  Lattice lattice;
  Rational norm;

  bool operator==(const RightIdeal& o) const { return lattice == o.lattice; }
};

/// Validates I O = I and computes nrd(I) as the gcd of nrd on I.
RightIdeal make_right_ideal(const QuaternionOrder& O, const Lattice& L);
RightIdeal principal_right_ideal(const QuaternionOrder& O, const Quat& x);

/// O_l(I) = I conj(I) / nrd(I).
Lattice left_order(const QuaternionAlgebra& A, const RightIdeal& I);
/// Elements of reduced norm 1 in an order; the full unit group, signs included.
std::vector<Quat> unit_group(const QuaternionAlgebra& A, const Lattice& order);
/// Counts of x in I with nrd(x) / nrd(I) = k for k = 0..terms.
std::vector<Integer> theta_series(const QuaternionAlgebra& A, const RightIdeal& I, unsigned terms);

/// Some x with I = x J, when the two right ideals are in the same class.
std::optional<Quat> isometry(const QuaternionAlgebra& A, const RightIdeal& I, const RightIdeal& J);
bool isometric(const QuaternionAlgebra& A, const RightIdeal& I, const RightIdeal& J);

/// The l + 1 right ideals J with l I < J < I of index l^2, in the order of
/// the lines (1 : k) for k = 0..l-1 and then (0 : 1) in the splitting at l.
std::vector<RightIdeal> neighbors(const QuaternionOrder& O, const RightIdeal& I, const LocalSplitting& split);

/// The two-sided ideal {x in O : v | nrd(x)} for a prime v dividing disc(O).
Lattice ramified_prime_ideal(const QuaternionOrder& O, const Integer& v);

/// sum over classes of 1 / |O_l(I)^x| = prod_{q | D} (q - 1) / 24 * prod_{q | N} (q + 1).
Rational eichler_mass(const Integer& D, const Integer& N);

struct IdealClass {
  RightIdeal ideal;
  Lattice left_order;
  std::vector<Quat> units;
  std::vector<Integer> theta;
};

/// Edge of the traversal graph: neighbor k of class i equals x * I_target.
struct NeighborLink {
  std::size_t target;
  Quat x;
};

/// Complete set of right ideal classes of an order, with the p-neighbor
/// structure that certifies completeness.
class ClassSet {
 public:
  static constexpr unsigned theta_terms = 3;

  ClassSet(QuaternionOrder order, Integer p, std::vector<IdealClass> classes,
           std::vector<std::vector<NeighborLink>> links);

  const QuaternionOrder& order() const noexcept { return order_; }
  const QuaternionAlgebra& algebra() const noexcept { return order_.algebra(); }
  const Integer& prime() const noexcept { return p_; }
  std::size_t size() const noexcept { return classes_.size(); }
  const IdealClass& operator[](std::size_t i) const { return classes_[i]; }
  const std::vector<IdealClass>& classes() const noexcept { return classes_; }
  /// links()[i][k]: neighbor k (in splitting order) of class i.
  const std::vector<std::vector<NeighborLink>>& links() const noexcept { return links_; }
  const LocalSplitting& splitting() const noexcept { return split_; }
  Rational mass() const;

  struct Match {
    std::size_t index;
    Quat x;  // J = x * I_index
  };
  /// Locates the class of a right ideal of the order; InvariantViolation if none.
  Match find(const RightIdeal& J) const;

  nlohmann::json to_json() const;
  /// Rebuilds from cached data, re-deriving units and re-validating the mass
  /// and every stored neighbor link.
  static ClassSet from_json(const nlohmann::json& j);

 private:
  QuaternionOrder order_;
  Integer p_;
  std::vector<IdealClass> classes_;
  std::vector<std::vector<NeighborLink>> links_;
  LocalSplitting split_;
  std::multimap<std::vector<Integer>, std::size_t> buckets_;
};

IdealClass make_ideal_class(const QuaternionAlgebra& A, const RightIdeal& I);

/// Breadth-first p-neighbor traversal from O itself. Raises
/// SearchExhaustedError past max_classes and InvariantViolation if the
/// completed set fails the mass identity.
ClassSet ideal_class_set(const QuaternionOrder& O, const Integer& p, std::size_t max_classes = 400);

}  // namespace anticyc::quatarith
