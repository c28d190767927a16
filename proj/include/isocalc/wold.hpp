#pragma once

#include "isocalc/operator.hpp"

namespace isocalc {

/// Splitting of l2(N) reducing a basis-map isometry A: H = H_u + H_s with
/// A unitary on H_u and a shift on H_s. The wandering space is the
/// complement of the range and generates the shift part.
struct WoldResult {
  IndexSet unitary_part;
  IndexSet shift_part;
  IndexSet wandering;
  Cardinality multiplicity;
  Tier certificate = Tier::Exact;
  Nat prefix_bound = 0;
};

/// Wold decomposition of the index map underlying A. Accepts any nonzero
/// scalar multiple of a basis-map isometry; `bound` caps prefix-tier
/// certification. Throws std::invalid_argument for non-isometries.
WoldResult wold_decompose(const Operator& a, Nat bound = 4096);

/// Cardinality of the wandering space (complement of the range).
Cardinality multiplicity(const Operator& a, Nat bound = 4096);

}  // namespace isocalc
