#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "isocalc/injection.hpp"

namespace isocalc {

enum class Tier { Exact, Prefix };

struct Entry {
  Nat row;
  Coefficient coeff;
};

/// Pointwise column evaluator for operators that have no finite symbolic
/// normal form (Cantor-pairing constructions). Verified only up to `bound`.
struct PrefixEvaluator {
  std::function<std::vector<Entry>(Nat)> column;
  Nat bound = 4096;
  std::string description;
};

enum class Verdict { Scalar, NotScalar };

struct ScalarVerdict {
  Verdict verdict;
  Coefficient lambda;      // valid when verdict == Scalar
  Nat witness = 0;         // valid when verdict == NotScalar
  Tier certificate = Tier::Exact;
  Nat prefix_bound = 0;    // valid when certificate == Prefix

  bool is_scalar() const { return verdict == Verdict::Scalar; }
  bool is_nonzero_scalar() const {
    return is_scalar() && !lambda.is_zero();
  }
};

enum class OperatorClass {
  Zero,
  ScalarMultipleOfIdentity,
  UnitaryMultiple,
  IsometryMultiple,
  Other,
};

struct Classification {
  OperatorClass kind;
  // |lambda|^2 with A*A = |lambda|^2 I, for (unitary/isometry) multiples
  Rational lambda_abs2;
};

/// A bounded operator on l2(N) in the tractable class: a finite sum of
/// Gaussian-rational coefficients times partial affine injections, kept in
/// a canonical block normal form (tier exact), or a pointwise column
/// evaluator (tier prefix).
class Operator {
 public:
  Operator() = default;  // zero operator

  static Operator zero() { return Operator(); }
  static Operator identity();
  static Operator scalar(const Coefficient& c);
  static Operator from_injection(const PartialInjection& p,
                                 const Coefficient& c = Coefficient(1));
  static Operator from_blocks(std::vector<Block> blocks);
  static Operator prefix(PrefixEvaluator ev);

  Tier tier() const { return prefix_ ? Tier::Prefix : Tier::Exact; }
  bool is_zero() const { return !prefix_ && blocks_.empty(); }
  const std::vector<Block>& blocks() const;
  const PrefixEvaluator& prefix_evaluator() const;
  Nat prefix_bound() const { return prefix_ ? prefix_->bound : 0; }

  /// Coordinates of A e_i, sorted by row. Works for both tiers.
  std::vector<Entry> apply(Nat i) const;

  Operator adjoint() const;
  friend Operator operator*(const Operator& a, const Operator& b);
  friend Operator operator+(const Operator& a, const Operator& b);
  friend Operator operator-(const Operator& a, const Operator& b);
  friend Operator operator*(const Coefficient& c, const Operator& a);

  /// Structural decision of A == lambda*I on canonical forms (exact tier);
  /// column-by-column certification up to the bound (prefix tier).
  ScalarVerdict scalar_test() const;

  Classification classify() const;

  /// True when every column holds at most one entry, i.e. A is a
  /// coefficient-weighted partial injection (the pieces may carry
  /// different weights). Exact tier only.
  bool is_basis_map() const;
  /// The underlying index map of a basis-map operator.
  PartialInjection basis_map() const;

  /// First index at and above which all block domains are purely periodic,
  /// plus the lcm of their moduli: columns at n and n + modulus_lcm() with
  /// n >= this agree in shape.
  Nat structure_threshold() const;
  Nat modulus_lcm() const;

  friend bool operator==(const Operator& a, const Operator& b);
  friend bool operator!=(const Operator& a, const Operator& b) {
    return !(a == b);
  }

  std::string to_string() const;

 private:
  std::vector<Block> blocks_;  // canonical; empty for zero
  std::shared_ptr<const PrefixEvaluator> prefix_;
};

Operator linear_combine(
    const std::vector<std::pair<Coefficient, Operator>>& terms);

}  // namespace isocalc
