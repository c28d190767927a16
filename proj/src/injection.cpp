#include "isocalc/injection.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace isocalc {

AffineMap::AffineMap(std::int64_t a_, std::int64_t b_, std::int64_t c_)
    : a(a_), b(b_), c(c_) {
  if (a < 1 || c < 1) throw std::invalid_argument("AffineMap: need a,c >= 1");
  std::int64_t g = std::gcd(std::gcd(a, c), b < 0 ? -b : b);
  if (g > 1) {
    a /= g;
    b /= g;
    c /= g;
  }
}

std::optional<Nat> AffineMap::apply(Nat i) const {
  std::int64_t num = a * static_cast<std::int64_t>(i) + b;
  if (num < 0 || num % c != 0) return std::nullopt;
  return static_cast<Nat>(num / c);
}

AffineMap AffineMap::compose(const AffineMap& other) const {
  return AffineMap(a * other.a, a * other.b + b * other.c, c * other.c);
}

bool AffineMap::valid_on(const IndexSet& d) const {
  Nat bound = d.periodic_threshold() + d.modulus() * static_cast<Nat>(c) + 1;
  bound = std::max<Nat>(bound, static_cast<Nat>(b < 0 ? -b : b) + 2);
  for (Nat i : d.elements_below(bound))
    if (!apply(i)) return false;
  return true;
}

std::optional<Nat> AffineMap::agreement_with(const AffineMap& o) const {
  std::int64_t slope = a * o.c - o.a * c;
  std::int64_t offs = o.b * c - b * o.c;
  if (slope == 0) return std::nullopt;  // parallel: equal maps or never equal
  if (offs % slope != 0) return std::nullopt;
  std::int64_t i = offs / slope;
  if (i < 0) return std::nullopt;
  return static_cast<Nat>(i);
}

std::string AffineMap::to_string() const {
  std::ostringstream os;
  os << "i -> ";
  bool frac = c != 1;
  if (frac) os << "(";
  if (a != 1) os << a << "*";
  os << "i";
  if (b > 0) os << " + " << b;
  if (b < 0) os << " - " << -b;
  if (frac) os << ")/" << c;
  return os.str();
}

namespace {

Nat lcm_guarded(Nat a, Nat b) {
  Nat g = std::gcd(a, b);
  Nat l = a / g * b;
  if (l > 100000000ull)
    throw std::overflow_error("index-set modulus blow-up in normal form");
  return l;
}

struct GroupKey {
  AffineMap map;
  Coefficient coeff;
  bool operator<(const GroupKey& o) const {
    if (map != o.map) return map < o.map;
    return coeff < o.coeff;
  }
};

}  // namespace

std::vector<Block> canonicalize_blocks(const std::vector<Block>& in) {
  std::vector<Block> blocks;
  for (const Block& b : in) {
    if (b.coeff.is_zero() || b.domain.is_empty()) continue;
    if (!b.map.valid_on(b.domain))
      throw std::logic_error("block map not defined on its whole domain");
    blocks.push_back(b);
  }
  if (blocks.empty()) return {};

  Nat L = 1;
  for (const Block& b : blocks) L = lcm_guarded(L, b.domain.modulus());
  Nat N = 1;
  for (const Block& b : blocks)
    N = std::max(N, b.domain.periodic_threshold());
  for (size_t x = 0; x < blocks.size(); ++x)
    for (size_t y = x + 1; y < blocks.size(); ++y)
      if (auto ag = blocks[x].map.agreement_with(blocks[y].map))
        N = std::max(N, *ag + 1);
  Nat n_pad = (N + L - 1) / L * L;

  // Tail data: per residue class, the surviving (map -> coefficient) sums.
  std::vector<std::map<AffineMap, Coefficient>> cls(L);
  for (const Block& b : blocks)
    for (Nat r = 0; r < L; ++r)
      if (b.domain.contains(n_pad + r)) cls[r][b.map] += b.coeff;
  for (auto& m : cls)
    for (auto it = m.begin(); it != m.end();)
      it = it->second.is_zero() ? m.erase(it) : std::next(it);

  // Minimal tail period.
  bool reduced = true;
  while (reduced) {
    reduced = false;
    for (Nat p = 2; p <= L && !reduced; ++p) {
      if (L % p != 0) continue;
      Nat cand = L / p;
      bool ok = true;
      for (Nat r = 0; r < cand && ok; ++r)
        for (Nat t = 1; t < p && ok; ++t)
          if (cls[r] != cls[r + t * cand]) ok = false;
      if (ok) {
        cls.resize(cand);
        L = cand;
        reduced = true;
      }
    }
  }

  // Explicit matrix entries below the padded threshold.
  std::map<std::pair<Nat, Nat>, Coefficient> entries;  // (col, row) -> coeff
  for (const Block& b : blocks)
    for (Nat i : b.domain.elements_below(n_pad))
      entries[{i, *b.map.apply(i)}] += b.coeff;
  for (auto it = entries.begin(); it != entries.end();)
    it = it->second.is_zero() ? entries.erase(it) : std::next(it);

  // Groups = distinct (map, coeff) pairs of the tail, with their classes.
  std::map<GroupKey, std::vector<Nat>> group_classes;
  for (Nat r = 0; r < L; ++r)
    for (const auto& [map, coeff] : cls[r])
      group_classes[GroupKey{map, coeff}].push_back(r);

  std::map<GroupKey, std::vector<Nat>> attached;
  for (const auto& [key, rs] : group_classes) attached[key];  // ensure present

  // Attach prefix entries to tail groups; whatever is left becomes
  // finite singleton blocks keyed by the offset map i -> i + (row - col).
  std::map<std::pair<AffineMap, Coefficient>, std::vector<Nat>> leftovers;
  for (const auto& [pos, coeff] : entries) {
    auto [i, j] = pos;
    Coefficient remaining = coeff;
    std::vector<const GroupKey*> matching;
    for (const auto& [key, rs] : group_classes)
      if (auto v = key.map.apply(i); v && *v == j)
        matching.push_back(&key);
    std::vector<char> used(matching.size(), 0);
    while (!remaining.is_zero()) {
      // prefer a group whose coefficient matches the remainder exactly
      size_t pick = matching.size();
      for (size_t g = 0; g < matching.size(); ++g)
        if (!used[g] && matching[g]->coeff == remaining) {
          pick = g;
          break;
        }
      if (pick == matching.size())
        for (size_t g = 0; g < matching.size(); ++g)
          if (!used[g]) {
            pick = g;
            break;
          }
      if (pick == matching.size()) break;
      used[pick] = 1;
      attached[*matching[pick]].push_back(i);
      remaining -= matching[pick]->coeff;
    }
    if (!remaining.is_zero()) {
      std::int64_t off = static_cast<std::int64_t>(j) - static_cast<std::int64_t>(i);
      leftovers[{AffineMap(1, off, 1), remaining}].push_back(i);
    }
  }

  std::vector<Block> out;
  for (const auto& [key, rs] : group_classes) {
    Block b;
    b.map = key.map;
    b.coeff = key.coeff;
    b.domain = IndexSet::eventually_periodic(L, rs, n_pad, attached[key]);
    out.push_back(std::move(b));
  }
  for (const auto& [key, is] : leftovers) {
    Block b;
    b.map = key.first;
    b.coeff = key.second;
    b.domain = IndexSet::finite(is);
    out.push_back(std::move(b));
  }
  std::sort(out.begin(), out.end(), [](const Block& x, const Block& y) {
    if (x.map != y.map) return x.map < y.map;
    if (!(x.coeff == y.coeff)) return x.coeff < y.coeff;
    return x.domain < y.domain;
  });
  return out;
}

std::string InjectionViolation::describe() const {
  std::ostringstream os;
  os << "pieces " << first << " and " << second << " overlap in their "
     << (in_images ? "images" : "domains") << " (witness index " << witness
     << ")";
  return os.str();
}

std::variant<PartialInjection, InjectionViolation> PartialInjection::validate(
    const std::vector<AffinePiece>& pieces) {
  for (const AffinePiece& p : pieces)
    if (!p.map.valid_on(p.domain))
      throw std::invalid_argument(
          "piece map takes a negative or non-integral value on its domain");
  for (size_t x = 0; x < pieces.size(); ++x) {
    for (size_t y = x + 1; y < pieces.size(); ++y) {
      IndexSet dd = pieces[x].domain.set_intersection(pieces[y].domain);
      if (auto w = dd.min_element())
        return InjectionViolation{x, y, *w, false};
      IndexSet ix = pieces[x].domain.affine_image(
          pieces[x].map.a, pieces[x].map.b, pieces[x].map.c);
      IndexSet iy = pieces[y].domain.affine_image(
          pieces[y].map.a, pieces[y].map.b, pieces[y].map.c);
      if (auto w = ix.set_intersection(iy).min_element())
        return InjectionViolation{x, y, *w, true};
    }
  }
  return unchecked(pieces);
}

PartialInjection PartialInjection::unchecked(std::vector<AffinePiece> pieces) {
  std::vector<Block> blocks;
  for (AffinePiece& p : pieces)
    blocks.push_back(Block{p.map, Coefficient(1), std::move(p.domain)});
  PartialInjection out;
  for (Block& b : canonicalize_blocks(blocks)) {
    if (!(b.coeff == Coefficient(1)))
      throw std::logic_error("injection normal form produced a non-unit block");
    out.pieces_.push_back(AffinePiece{std::move(b.domain), b.map});
  }
  return out;
}

std::optional<Nat> PartialInjection::apply(Nat i) const {
  for (const AffinePiece& p : pieces_)
    if (p.domain.contains(i)) return p.map.apply(i);
  return std::nullopt;
}

IndexSet PartialInjection::domain() const {
  IndexSet d = IndexSet::empty();
  for (const AffinePiece& p : pieces_) d = d.set_union(p.domain);
  return d;
}

IndexSet PartialInjection::image() const {
  IndexSet im = IndexSet::empty();
  for (const AffinePiece& p : pieces_)
    im = im.set_union(p.domain.affine_image(p.map.a, p.map.b, p.map.c));
  return im;
}

bool PartialInjection::is_bijection_on(const IndexSet& s) const {
  return domain() == s && image() == s;
}

IndexSet PartialInjection::image_of(const IndexSet& s) const {
  IndexSet out = IndexSet::empty();
  for (const AffinePiece& p : pieces_) {
    IndexSet d = p.domain.set_intersection(s);
    if (d.is_empty()) continue;
    out = out.set_union(d.affine_image(p.map.a, p.map.b, p.map.c));
  }
  return out;
}

PartialInjection enumeration_injection(const IndexSet& s) {
  if (s.is_finite()) {
    std::vector<AffinePiece> pieces;
    const auto& elems = s.added();
    for (Nat k = 0; k < elems.size(); ++k)
      pieces.push_back(AffinePiece{
          IndexSet::finite({k}),
          AffineMap(1, static_cast<std::int64_t>(elems[k]) -
                           static_cast<std::int64_t>(k))});
    return PartialInjection::unchecked(std::move(pieces));
  }
  Nat L = s.modulus();
  Nat base = (s.periodic_threshold() + L - 1) / L * L;  // pure tail from here
  std::vector<Nat> head = s.elements_below(base);
  Nat q = head.size();
  const std::vector<Nat>& rs = s.residue_list();
  Nat R = rs.size();
  std::vector<AffinePiece> pieces;
  for (Nat k = 0; k < q; ++k)
    pieces.push_back(AffinePiece{
        IndexSet::finite({k}),
        AffineMap(1, static_cast<std::int64_t>(head[k]) -
                         static_cast<std::int64_t>(k))});
  for (Nat t = 0; t < R; ++t) {
    // ranks q + u*R + t enumerate base + u*L + rs[t]
    IndexSet dom = IndexSet::residue_class(R, (q + t) % R)
                       .set_intersection(IndexSet::from_at_least(q));
    std::int64_t a = static_cast<std::int64_t>(L);
    std::int64_t c = static_cast<std::int64_t>(R);
    std::int64_t b = c * static_cast<std::int64_t>(base + rs[t]) -
                     a * static_cast<std::int64_t>(q + t);
    pieces.push_back(AffinePiece{std::move(dom), AffineMap(a, b, c)});
  }
  return PartialInjection::unchecked(std::move(pieces));
}

PartialInjection PartialInjection::inverse() const {
  std::vector<AffinePiece> inv;
  for (const AffinePiece& p : pieces_)
    inv.push_back(AffinePiece{
        p.domain.affine_image(p.map.a, p.map.b, p.map.c), p.map.inverse()});
  return unchecked(std::move(inv));
}

PartialInjection PartialInjection::compose(const PartialInjection& other) const {
  std::vector<AffinePiece> out;
  for (const AffinePiece& q : other.pieces_) {
    for (const AffinePiece& p : pieces_) {
      // domain: points of q.domain that q maps into p.domain
      IndexSet pre = p.domain.affine_image(q.map.c, -q.map.b, q.map.a);
      IndexSet dom = q.domain.set_intersection(pre);
      if (dom.is_empty()) continue;
      out.push_back(AffinePiece{std::move(dom), p.map.compose(q.map)});
    }
  }
  return unchecked(std::move(out));
}

bool operator==(const PartialInjection& x, const PartialInjection& y) {
  if (x.pieces_.size() != y.pieces_.size()) return false;
  for (size_t k = 0; k < x.pieces_.size(); ++k)
    if (x.pieces_[k].map != y.pieces_[k].map ||
        x.pieces_[k].domain != y.pieces_[k].domain)
      return false;
  return true;
}

bool operator<(const PartialInjection& x, const PartialInjection& y) {
  for (size_t k = 0; k < std::min(x.pieces_.size(), y.pieces_.size()); ++k) {
    if (x.pieces_[k].map != y.pieces_[k].map)
      return x.pieces_[k].map < y.pieces_[k].map;
    if (x.pieces_[k].domain != y.pieces_[k].domain)
      return x.pieces_[k].domain < y.pieces_[k].domain;
  }
  return x.pieces_.size() < y.pieces_.size();
}

std::string PartialInjection::to_string() const {
  std::ostringstream os;
  os << "[";
  for (size_t k = 0; k < pieces_.size(); ++k) {
    if (k) os << "; ";
    os << pieces_[k].map.to_string() << " on " << pieces_[k].domain.to_string();
  }
  os << "]";
  return os.str();
}

}  // namespace isocalc
