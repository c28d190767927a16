#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "isocalc/index_set.hpp"
#include "isocalc/rational.hpp"

namespace isocalc {

/// Partial map i -> (a*i + b)/c on the indices where the value is a
/// nonnegative integer. a, c >= 1; b may be negative. Stored with
/// gcd(a,b,c) = 1 so equal maps have equal fields. c > 1 arises from
/// adjoints: the inverse of i -> a*i + b is j -> (j - b)/a.
struct AffineMap {
  std::int64_t a = 1;
  std::int64_t b = 0;
  std::int64_t c = 1;

  AffineMap() = default;
  AffineMap(std::int64_t a_, std::int64_t b_, std::int64_t c_ = 1);

  static AffineMap identity() { return AffineMap(1, 0, 1); }
  bool is_identity() const { return a == 1 && b == 0 && c == 1; }

  std::optional<Nat> apply(Nat i) const;
  AffineMap inverse() const { return AffineMap(c, -b, a); }
  /// this o other (apply other first).
  AffineMap compose(const AffineMap& other) const;
  /// True if the map is defined (integral, nonnegative) everywhere on d.
  bool valid_on(const IndexSet& d) const;
  /// Index where this and o take equal values, if any (distinct maps agree
  /// at most once).
  std::optional<Nat> agreement_with(const AffineMap& o) const;

  friend bool operator==(const AffineMap& x, const AffineMap& y) {
    return x.a == y.a && x.b == y.b && x.c == y.c;
  }
  friend bool operator!=(const AffineMap& x, const AffineMap& y) {
    return !(x == y);
  }
  friend bool operator<(const AffineMap& x, const AffineMap& y) {
    if (x.a != y.a) return x.a < y.a;
    if (x.b != y.b) return x.b < y.b;
    return x.c < y.c;
  }

  std::string to_string() const;
};

/// One coefficient x one affine map x one index-set domain. The common
/// building block of operator normal forms.
struct Block {
  AffineMap map;
  Coefficient coeff;
  IndexSet domain;
};

/// Canonical form of a finite sum of blocks, determined by the matrix the
/// blocks describe (entry coeff at row map(i), column i for i in domain):
/// equal matrices yield identical block lists. Zero entries vanish.
std::vector<Block> canonicalize_blocks(const std::vector<Block>& in);

struct AffinePiece {
  IndexSet domain;
  AffineMap map;
};

struct InjectionViolation {
  // indices of the two clashing pieces in the candidate list, the witness
  // index, and whether the clash is in the domains or the images
  std::size_t first;
  std::size_t second;
  Nat witness;
  bool in_images;
  std::string describe() const;
};

/// An injective partial self-map of N given by finitely many affine pieces
/// with pairwise disjoint domains and pairwise disjoint images. Canonical:
/// equal maps have identical piece lists.
class PartialInjection {
 public:
  PartialInjection() = default;  // empty map

  static std::variant<PartialInjection, InjectionViolation> validate(
      const std::vector<AffinePiece>& pieces);
  /// Precondition: pieces already injective (e.g. produced by compose /
  /// invert). Canonicalizes without revalidating.
  static PartialInjection unchecked(std::vector<AffinePiece> pieces);

  const std::vector<AffinePiece>& pieces() const { return pieces_; }
  bool is_empty() const { return pieces_.empty(); }

  std::optional<Nat> apply(Nat i) const;
  IndexSet domain() const;
  IndexSet image() const;
  bool is_total() const { return domain().is_all(); }
  bool is_bijection_on(const IndexSet& s) const;

  PartialInjection inverse() const;
  /// this o other (apply other first).
  PartialInjection compose(const PartialInjection& other) const;
  /// Image of a set under the map.
  IndexSet image_of(const IndexSet& s) const;

  friend bool operator==(const PartialInjection& x, const PartialInjection& y);
  friend bool operator!=(const PartialInjection& x, const PartialInjection& y) {
    return !(x == y);
  }
  friend bool operator<(const PartialInjection& x, const PartialInjection& y);

  std::string to_string() const;

 private:
  std::vector<AffinePiece> pieces_;
};

/// The increasing enumeration of S as an injection N -> S (a bijection
/// onto S). Exact: the tail of an eventually periodic set enumerates
/// affinely residue by residue.
PartialInjection enumeration_injection(const IndexSet& s);

}  // namespace isocalc
