#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace isocalc {

using Nat = std::uint64_t;

/// Cardinality of an IndexSet: either a finite count or countably infinite
/// (reported with the natural density of the progression part).
struct Cardinality {
  bool finite;
  Nat count = 0;               // valid when finite
  Nat density_num = 0;         // |residues|
  Nat density_den = 1;         // modulus
};

/// A decidable subset of N (naturals including 0): a finite union of
/// arithmetic progressions with finitely many exceptional points.
///
/// Semantics: ({a*L + r : a >= 0, r in residues} U added) \ removed.
/// Canonical form: minimal modulus, added disjoint from the progression
/// part, removed contained in it. Equality of canonical forms is set
/// equality.
class IndexSet {
 public:
  IndexSet();  // empty set

  static IndexSet empty();
  static IndexSet all();
  static IndexSet finite(std::vector<Nat> elems);
  static IndexSet from_at_least(Nat n);                   // {i >= n}
  static IndexSet residue_class(Nat modulus, Nat residue);
  static IndexSet residues(Nat modulus, std::vector<Nat> rs);
  static IndexSet raw(Nat modulus, std::vector<Nat> rs, std::vector<Nat> plus,
                      std::vector<Nat> minus);

  /// Builds the canonical form of the set that equals `explicit_members`
  /// (restricted below `threshold`) below `threshold`, and agrees with the
  /// residue classes `rs` mod `modulus` at and above it.
  static IndexSet eventually_periodic(Nat modulus, const std::vector<Nat>& rs,
                                      Nat threshold,
                                      const std::vector<Nat>& explicit_members);

  bool contains(Nat i) const;
  bool is_empty() const;
  bool is_all() const;
  bool is_finite() const;
  Cardinality cardinality() const;
  std::optional<Nat> min_element() const;

  /// k-th element in increasing order (0-based). Throws std::out_of_range
  /// for finite sets when k is too large.
  Nat element_at(Nat k) const;
  /// Rank of i within the set. Throws std::invalid_argument if i is absent.
  Nat rank_of(Nat i) const;
  /// Number of elements strictly below bound.
  Nat count_below(Nat bound) const;
  std::vector<Nat> elements_below(Nat bound) const;

  IndexSet set_union(const IndexSet& o) const;
  IndexSet set_intersection(const IndexSet& o) const;
  IndexSet set_difference(const IndexSet& o) const;
  IndexSet complement() const;

  /// Image {(a*s + b)/c : s in S, a*s + b >= 0 and divisible by c}.
  /// a >= 1, c >= 1; b may be negative.
  IndexSet affine_image(std::int64_t a, std::int64_t b, std::int64_t c) const;

  /// First index at and above which membership is purely periodic.
  Nat periodic_threshold() const;

  Nat modulus() const { return mod_; }
  const std::vector<Nat>& residue_list() const { return res_; }
  const std::vector<Nat>& added() const { return plus_; }
  const std::vector<Nat>& removed() const { return minus_; }

  friend bool operator==(const IndexSet& a, const IndexSet& b) {
    return a.mod_ == b.mod_ && a.res_ == b.res_ && a.plus_ == b.plus_ &&
           a.minus_ == b.minus_;
  }
  friend bool operator!=(const IndexSet& a, const IndexSet& b) {
    return !(a == b);
  }
  friend bool operator<(const IndexSet& a, const IndexSet& b);

  std::string to_string() const;

 private:
  Nat mod_;
  std::vector<Nat> res_;
  std::vector<Nat> plus_;
  std::vector<Nat> minus_;
};

enum class SetOp { Union, Intersection, Difference, ComplementOfFirst };

IndexSet combine(const IndexSet& s, const IndexSet& t, SetOp op);

}  // namespace isocalc
