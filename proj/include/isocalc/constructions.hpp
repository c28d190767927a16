#pragma once

#include <map>

#include "isocalc/operator.hpp"
#include "isocalc/pairing.hpp"

namespace isocalc {

/// A unitary on the coordinate subspace spanned by `carrier`: a bijective
/// affine index map twisted by finitely many phases of unit modulus
/// squared (e.g. +-1, +-i).
struct UnitarySpec {
  IndexSet carrier;
  PartialInjection map;               // bijection carrier -> carrier
  std::map<Nat, Coefficient> phases;  // index -> coefficient, |c|^2 = 1

  static UnitarySpec identity_on(IndexSet carrier);
  /// Throws std::invalid_argument when the invariants fail.
  void check() const;
  Operator to_operator() const;
};

/// Extends a total injective index map to the isometry it induces on basis
/// vectors. Rejects partial maps.
Operator build_basis_isometry(const PartialInjection& map);

/// A shift whose wandering space is spanned by the basis vectors in M.
/// Requires M nonempty with infinite complement. Finite M yields an exact
/// operator; infinite M yields a prefix-tier operator (Cantor pairing).
Operator make_shift_with_wandering(const IndexSet& m, Nat prefix_bound = 4096);

/// A shift whose range is spanned by the basis vectors in K. Requires K
/// infinite and different from the whole space.
Operator make_shift_with_range(const IndexSet& k, Nat prefix_bound = 4096);

/// An isometry with prescribed unitary part U (on its carrier K_u) and
/// range K. Requires K_u contained in K and K minus K_u infinite; K must
/// miss at least one index unless K_u is everything.
Operator make_isometry_with_parts(const UnitarySpec& u, const IndexSet& k,
                                  Nat prefix_bound = 4096);

/// The n Cuntz generators S_r with index map i -> n*i + r.
std::vector<Operator> make_cuntz(int n);

}  // namespace isocalc
