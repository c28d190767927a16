#pragma once

#include <optional>
#include <string>
#include <vector>

#include "isocalc/operator.hpp"

namespace isocalc {

/// The MI inner product <A,B> with B*A = <A,B> I, or the witness index at
/// which B*A fails to be scalar.
struct InnerProductResult {
  bool scalar;
  Coefficient value;  // valid when scalar
  Nat witness = 0;    // valid otherwise
};

InnerProductResult inner_product(const Operator& a, const Operator& b);

struct MiViolation {
  std::size_t first;   // generator indices of the failing ordered pair
  std::size_t second;
  Nat witness;
};

/// Exact Gram presentation of a candidate MI-space. gram[j][k] = <A_j,A_k>,
/// i.e. A_k* A_j = gram[j][k] I. Pairwise scalars on generators extend to
/// the span by sesquilinearity, which is what makes the finite check
/// sufficient; `pairwise_reduction` records that.
struct GramReport {
  std::vector<Operator> generators;
  std::vector<std::vector<Coefficient>> gram;
  std::optional<MiViolation> violation;
  std::size_t dimension = 0;  // rank of the Gram matrix
  bool pairwise_reduction = true;
  Tier certificate = Tier::Exact;

  bool is_mi_space() const { return !violation.has_value(); }
  bool hermitian() const;
  /// All leading principal minors nonnegative (exact determinants).
  bool psd_minors() const;
};

GramReport check_mi_space(const std::vector<Operator>& generators);

/// Unnormalized Gram-Schmidt over the exact coefficient field; zero
/// vectors are dropped, so the output size equals the dimension.
std::vector<Operator> orthogonalize(const GramReport& report);

struct SpanMembership {
  bool in_span;
  std::vector<Coefficient> coefficients;  // valid when in_span
};

SpanMembership span_membership(const Operator& t,
                               const std::vector<Operator>& generators);

Operator commutator(const Operator& a, const Operator& b);

struct CommutatorIdentityResult {
  Operator lhs;            // [A,B]*[A,B]
  Coefficient rhs_scalar;  // 2(<A,A><B,B> - |<A,B>|^2)
  bool holds;
};

/// Verifies [A,B]*[A,B] = 2(|A|^2 |B|^2 - |<A,B>|^2) I exactly. Requires
/// span{A,B} to be an MI-space; throws std::invalid_argument (with the
/// witness in the message) otherwise.
CommutatorIdentityResult commutator_identity_check(const Operator& a,
                                                   const Operator& b);

struct CommutationResult {
  bool commute;     // [A,B] = 0
  bool dependent;   // Gram rank <= 1
  bool consistent;  // commute == dependent; must hold for MI pairs
};

CommutationResult commutation_check(const Operator& a, const Operator& b);

struct AdjointMembershipResult {
  bool adjoint_in_mi;   // A A* is a nonzero scalar
  bool forced_unitary;  // when adjoint_in_mi: A classified unitary-multiple
  Nat witness = 0;      // valid when !adjoint_in_mi
};

AdjointMembershipResult adjoint_membership_check(const Operator& a);

struct ProductMembershipReport {
  bool ab_in_span;
  std::vector<Coefficient> ab_coefficients;  // when ab_in_span
  bool b_scalar;           // scalar_test(B) succeeded
  Coefficient b_lambda;    // when b_scalar
  bool space_is_ci;        // the span is C I
  bool consistent;         // agrees with the no-go statements
  std::string detail;
};

/// Tests AB against span(generators) and checks the result against the
/// trivialization of multiplication on MI-spaces: membership forces B
/// scalar, and in a space other than C I it forces B = 0.
ProductMembershipReport product_membership_check(
    const std::vector<Operator>& generators, const Operator& a,
    const Operator& b);

struct AuditFinding {
  std::string code;  // AUDIT-P24 | AUDIT-C25A | AUDIT-C25B | DIM
  bool ok;           // false = internal inconsistency (theorem violation)
  std::string detail;
};

/// Self-checks a verified MI-space against the structure theorems: finite
/// shift multiplicity, a unitary multiple, or the identity in the span
/// each force dimension one.
std::vector<AuditFinding> structural_audit(const GramReport& report);

}  // namespace isocalc
