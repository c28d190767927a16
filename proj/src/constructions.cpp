#include "isocalc/constructions.hpp"

#include <sstream>
#include <stdexcept>

namespace isocalc {

UnitarySpec UnitarySpec::identity_on(IndexSet carrier) {
  UnitarySpec u;
  u.map = PartialInjection::unchecked(
      {AffinePiece{carrier, AffineMap::identity()}});
  u.carrier = std::move(carrier);
  return u;
}

void UnitarySpec::check() const {
  if (!map.is_bijection_on(carrier))
    throw std::invalid_argument(
        "unitary spec: map is not a bijection of the carrier onto itself");
  for (const auto& [i, c] : phases) {
    if (!carrier.contains(i))
      throw std::invalid_argument("unitary spec: phase index outside carrier");
    if (c.abs2() != 1)
      throw std::invalid_argument("unitary spec: phase without |c|^2 = 1");
  }
}

Operator UnitarySpec::to_operator() const {
  check();
  std::vector<Nat> phased;
  for (const auto& [i, c] : phases) phased.push_back(i);
  IndexSet phased_set = IndexSet::finite(phased);
  std::vector<Block> blocks;
  for (const AffinePiece& p : map.pieces())
    blocks.push_back(
        Block{p.map, Coefficient(1), p.domain.set_difference(phased_set)});
  for (const auto& [i, c] : phases) {
    auto j = map.apply(i);
    if (!j) throw std::logic_error("unitary spec: carrier point not mapped");
    blocks.push_back(Block{
        AffineMap(1, static_cast<std::int64_t>(*j) - static_cast<std::int64_t>(i)),
        c, IndexSet::finite({i})});
  }
  return Operator::from_blocks(std::move(blocks));
}

Operator build_basis_isometry(const PartialInjection& map) {
  if (!map.domain().is_all())
    throw std::invalid_argument(
        "build_basis_isometry: index map must be total on N");
  return Operator::from_injection(map);
}

namespace {

Operator finite_wandering_shift(const IndexSet& m) {
  const std::vector<Nat>& heads = m.added();  // finite set: canonical plus list
  Nat mult = heads.size();
  IndexSet comp = m.complement();
  Nat top = heads.back() + 1;
  std::vector<AffinePiece> pieces;
  // rows start at the heads: head r continues at complement element r
  for (Nat r = 0; r < mult; ++r) {
    Nat target = comp.element_at(r);
    pieces.push_back(AffinePiece{
        IndexSet::finite({heads[r]}),
        AffineMap(1, static_cast<std::int64_t>(target) -
                         static_cast<std::int64_t>(heads[r]))});
  }
  // complement element j moves to complement element j + mult; beyond the
  // last head that is plainly i -> i + mult
  for (Nat i : comp.elements_below(top)) {
    Nat j = comp.rank_of(i);
    Nat target = comp.element_at(j + mult);
    pieces.push_back(AffinePiece{
        IndexSet::finite({i}),
        AffineMap(1, static_cast<std::int64_t>(target) -
                         static_cast<std::int64_t>(i))});
  }
  pieces.push_back(AffinePiece{IndexSet::from_at_least(top),
                               AffineMap(1, static_cast<std::int64_t>(mult))});
  return Operator::from_injection(PartialInjection::unchecked(std::move(pieces)));
}

Operator infinite_wandering_shift(const IndexSet& m, Nat prefix_bound) {
  IndexSet comp = m.complement();
  PairingScheme pi = PairingScheme::cantor();
  PrefixEvaluator ev;
  std::ostringstream os;
  os << "shift with wandering space " << m.to_string();
  ev.description = os.str();
  ev.bound = prefix_bound;
  ev.column = [m, comp, pi](Nat i) -> std::vector<Entry> {
    if (m.contains(i)) {
      Nat r = m.rank_of(i);
      return {Entry{comp.element_at(pi.pair(r, 0)), Coefficient(1)}};
    }
    Nat j = comp.rank_of(i);
    auto [r, k] = pi.unpair(j);
    return {Entry{comp.element_at(pi.pair(r, k + 1)), Coefficient(1)}};
  };
  return Operator::prefix(std::move(ev));
}

}  // namespace

Operator make_shift_with_wandering(const IndexSet& m, Nat prefix_bound) {
  if (m.is_empty())
    throw std::invalid_argument(
        "make_shift_with_wandering: wandering space must be nonempty");
  if (m.complement().is_finite())
    throw std::invalid_argument(
        "make_shift_with_wandering: complement of the wandering space must be "
        "infinite");
  if (m.is_finite()) return finite_wandering_shift(m);
  return infinite_wandering_shift(m, prefix_bound);
}

Operator make_shift_with_range(const IndexSet& k, Nat prefix_bound) {
  if (k.is_finite())
    throw std::invalid_argument("make_shift_with_range: range must be infinite");
  IndexSet m = k.complement();
  if (m.is_empty())
    throw std::invalid_argument(
        "make_shift_with_range: no shift has the whole space as range");
  return make_shift_with_wandering(m, prefix_bound);
}

Operator make_isometry_with_parts(const UnitarySpec& u, const IndexSet& k,
                                  Nat prefix_bound) {
  u.check();
  const IndexSet& ku = u.carrier;
  if (!ku.set_difference(k).is_empty())
    throw std::invalid_argument(
        "make_isometry_with_parts: unitary carrier must be contained in the "
        "range");
  IndexSet shift_range = k.set_difference(ku);
  if (shift_range.is_finite())
    throw std::invalid_argument(
        "make_isometry_with_parts: range minus carrier must be infinite");
  if (ku.is_empty()) return make_shift_with_range(k, prefix_bound);
  IndexSet wandering = k.complement();
  if (wandering.is_empty())
    throw std::invalid_argument(
        "make_isometry_with_parts: an isometry with full range is unitary, so "
        "the carrier would have to be the whole space");
  IndexSet rest = ku.complement();  // the shift part lives here
  PartialInjection enumerate = enumeration_injection(rest);
  IndexSet inner_wandering = enumerate.inverse().image_of(wandering);
  if (inner_wandering.is_finite()) {
    Operator inner = make_shift_with_wandering(inner_wandering, prefix_bound);
    PartialInjection shifted =
        enumerate.compose(inner.basis_map()).compose(enumerate.inverse());
    return u.to_operator() + Operator::from_injection(shifted);
  }
  Operator inner = make_shift_with_wandering(inner_wandering, prefix_bound);
  Operator u_op = u.to_operator();
  PrefixEvaluator ev;
  ev.bound = prefix_bound;
  ev.description = "unitary part on " + ku.to_string() + " plus shift with range " +
                   shift_range.to_string();
  ev.column = [ku, rest, u_op, inner](Nat i) -> std::vector<Entry> {
    if (ku.contains(i)) return u_op.apply(i);
    Nat pos = rest.rank_of(i);
    auto col = inner.apply(pos);
    std::vector<Entry> out;
    for (const Entry& e : col) out.push_back(Entry{rest.element_at(e.row), e.coeff});
    return out;
  };
  return Operator::prefix(std::move(ev));
}

std::vector<Operator> make_cuntz(int n) {
  if (n < 2) throw std::invalid_argument("make_cuntz: need n >= 2");
  std::vector<Operator> out;
  for (int r = 0; r < n; ++r)
    out.push_back(Operator::from_injection(PartialInjection::unchecked(
        {AffinePiece{IndexSet::all(), AffineMap(n, r)}})));
  return out;
}

}  // namespace isocalc
