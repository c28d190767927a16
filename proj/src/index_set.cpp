#include "isocalc/index_set.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace isocalc {

namespace {

std::vector<Nat> sorted_unique(std::vector<Nat> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

bool contains_sorted(const std::vector<Nat>& v, Nat x) {
  return std::binary_search(v.begin(), v.end(), x);
}

Nat lcm_capped(Nat a, Nat b) {
  Nat g = std::gcd(a, b);
  return a / g * b;
}

}  // namespace

IndexSet::IndexSet() : mod_(1) {}

IndexSet IndexSet::empty() { return IndexSet(); }

IndexSet IndexSet::all() {
  IndexSet s;
  s.res_ = {0};
  return s;
}

IndexSet IndexSet::raw(Nat modulus, std::vector<Nat> rs, std::vector<Nat> plus,
                       std::vector<Nat> minus) {
  if (modulus == 0) throw std::invalid_argument("IndexSet modulus must be >= 1");
  Nat threshold = 0;
  for (Nat p : plus) threshold = std::max(threshold, p + 1);
  for (Nat m : minus) threshold = std::max(threshold, m + 1);
  rs = sorted_unique(std::move(rs));
  for (Nat r : rs)
    if (r >= modulus) throw std::invalid_argument("residue out of range");
  plus = sorted_unique(std::move(plus));
  minus = sorted_unique(std::move(minus));
  std::vector<Nat> members;
  for (Nat i = 0; i < threshold; ++i) {
    bool in_prog = contains_sorted(rs, i % modulus);
    bool in = (in_prog && !contains_sorted(minus, i)) || contains_sorted(plus, i);
    if (in) members.push_back(i);
  }
  return eventually_periodic(modulus, rs, threshold, members);
}

IndexSet IndexSet::finite(std::vector<Nat> elems) {
  elems = sorted_unique(std::move(elems));
  IndexSet s;
  s.plus_ = std::move(elems);
  return s;
}

IndexSet IndexSet::from_at_least(Nat n) {
  IndexSet s;
  s.res_ = {0};
  for (Nat i = 0; i < n; ++i) s.minus_.push_back(i);
  return s;
}

IndexSet IndexSet::residue_class(Nat modulus, Nat residue) {
  return residues(modulus, {residue});
}

IndexSet IndexSet::residues(Nat modulus, std::vector<Nat> rs) {
  return raw(modulus, std::move(rs), {}, {});
}

IndexSet IndexSet::eventually_periodic(Nat modulus, const std::vector<Nat>& rs,
                                       Nat threshold,
                                       const std::vector<Nat>& explicit_members) {
  if (modulus == 0) throw std::invalid_argument("IndexSet modulus must be >= 1");
  std::vector<char> in_class(modulus, 0);
  for (Nat r : rs) {
    if (r >= modulus) throw std::invalid_argument("residue out of range");
    in_class[r] = 1;
  }
  // Minimal period of the tail indicator.
  Nat L = modulus;
  bool reduced = true;
  while (reduced) {
    reduced = false;
    for (Nat p = 2; p <= L && !reduced; ++p) {
      if (L % p != 0) continue;
      Nat cand = L / p;
      bool ok = true;
      for (Nat r = 0; r < cand && ok; ++r)
        for (Nat t = 1; t < p && ok; ++t)
          if (in_class[r] != in_class[r + t * cand]) ok = false;
      if (ok) {
        in_class.resize(cand);
        L = cand;
        reduced = true;
      }
    }
  }
  bool tail_empty = std::all_of(in_class.begin(), in_class.end(),
                                [](char c) { return c == 0; });
  IndexSet out;
  std::vector<Nat> members = sorted_unique(explicit_members);
  for (Nat m : members)
    if (m >= threshold)
      throw std::invalid_argument("explicit member at or above threshold");
  if (tail_empty) {
    out.mod_ = 1;
    out.plus_ = std::move(members);
    return out;
  }
  out.mod_ = L;
  for (Nat r = 0; r < L; ++r)
    if (in_class[r]) out.res_.push_back(r);
  for (Nat i = 0; i < threshold; ++i) {
    bool in_prog = in_class[i % L];
    bool in = contains_sorted(members, i);
    if (in && !in_prog) out.plus_.push_back(i);
    if (!in && in_prog) out.minus_.push_back(i);
  }
  return out;
}

bool IndexSet::contains(Nat i) const {
  if (contains_sorted(plus_, i)) return true;
  if (contains_sorted(minus_, i)) return false;
  return contains_sorted(res_, i % mod_);
}

bool IndexSet::is_empty() const { return res_.empty() && plus_.empty(); }

bool IndexSet::is_all() const {
  return mod_ == 1 && res_.size() == 1 && plus_.empty() && minus_.empty();
}

bool IndexSet::is_finite() const { return res_.empty(); }

Cardinality IndexSet::cardinality() const {
  Cardinality c;
  if (is_finite()) {
    c.finite = true;
    c.count = plus_.size();
  } else {
    c.finite = false;
    c.density_num = res_.size();
    c.density_den = mod_;
  }
  return c;
}

Nat IndexSet::periodic_threshold() const {
  Nat t = 0;
  if (!plus_.empty()) t = std::max(t, plus_.back() + 1);
  if (!minus_.empty()) t = std::max(t, minus_.back() + 1);
  return t;
}

std::optional<Nat> IndexSet::min_element() const {
  std::optional<Nat> best;
  if (!plus_.empty()) best = plus_.front();
  if (!res_.empty()) {
    // smallest progression member not removed
    Nat limit = periodic_threshold() + mod_;
    for (Nat i = 0; i <= limit; ++i) {
      if (contains_sorted(res_, i % mod_) && !contains_sorted(minus_, i)) {
        if (!best || i < *best) best = i;
        break;
      }
    }
  }
  return best;
}

Nat IndexSet::count_below(Nat bound) const {
  Nat count = 0;
  for (Nat r : res_) {
    // members r, r+L, ... strictly below bound
    if (bound > r) count += (bound - 1 - r) / mod_ + 1;
  }
  for (Nat m : minus_)
    if (m < bound) --count;
  for (Nat p : plus_)
    if (p < bound) ++count;
  return count;
}

std::vector<Nat> IndexSet::elements_below(Nat bound) const {
  std::vector<Nat> out;
  for (Nat i = 0; i < bound; ++i)
    if (contains(i)) out.push_back(i);
  return out;
}

Nat IndexSet::element_at(Nat k) const {
  if (is_finite()) {
    if (k >= plus_.size()) throw std::out_of_range("element_at: set is finite");
    return plus_[k];
  }
  // binary search on count_below
  Nat lo = 0, hi = periodic_threshold() + (k + 2) * mod_;
  while (lo < hi) {
    Nat mid = lo + (hi - lo) / 2;
    if (count_below(mid + 1) >= k + 1)
      hi = mid;
    else
      lo = mid + 1;
  }
  if (!contains(lo)) throw std::logic_error("element_at: internal error");
  return lo;
}

Nat IndexSet::rank_of(Nat i) const {
  if (!contains(i)) throw std::invalid_argument("rank_of: not a member");
  return count_below(i);
}

IndexSet combine(const IndexSet& s, const IndexSet& t, SetOp op) {
  switch (op) {
    case SetOp::Union: return s.set_union(t);
    case SetOp::Intersection: return s.set_intersection(t);
    case SetOp::Difference: return s.set_difference(t);
    case SetOp::ComplementOfFirst: return s.complement();
  }
  throw std::invalid_argument("combine: unknown op");
}

namespace {

IndexSet boolean_combine(const IndexSet& s, const IndexSet& t,
                         bool (*f)(bool, bool)) {
  Nat L = lcm_capped(s.modulus(), t.modulus());
  Nat threshold = std::max(s.periodic_threshold(), t.periodic_threshold());
  std::vector<Nat> rs;
  for (Nat r = 0; r < L; ++r) {
    bool a = std::binary_search(s.residue_list().begin(), s.residue_list().end(),
                                r % s.modulus());
    bool b = std::binary_search(t.residue_list().begin(), t.residue_list().end(),
                                r % t.modulus());
    if (f(a, b)) rs.push_back(r);
  }
  std::vector<Nat> members;
  for (Nat i = 0; i < threshold; ++i)
    if (f(s.contains(i), t.contains(i))) members.push_back(i);
  return IndexSet::eventually_periodic(L, rs, threshold, members);
}

}  // namespace

IndexSet IndexSet::set_union(const IndexSet& o) const {
  return boolean_combine(*this, o, [](bool a, bool b) { return a || b; });
}

IndexSet IndexSet::set_intersection(const IndexSet& o) const {
  return boolean_combine(*this, o, [](bool a, bool b) { return a && b; });
}

IndexSet IndexSet::set_difference(const IndexSet& o) const {
  return boolean_combine(*this, o, [](bool a, bool b) { return a && !b; });
}

IndexSet IndexSet::complement() const {
  return boolean_combine(*this, IndexSet::all(),
                         [](bool a, bool) { return !a; });
}

IndexSet IndexSet::affine_image(std::int64_t a, std::int64_t b,
                                std::int64_t c) const {
  if (a < 1 || c < 1) throw std::invalid_argument("affine_image: need a,c >= 1");
  auto value_of = [&](Nat s) -> std::optional<Nat> {
    std::int64_t num = a * static_cast<std::int64_t>(s) + b;
    if (num < 0 || num % c != 0) return std::nullopt;
    return static_cast<Nat>(num / c);
  };
  if (is_finite()) {
    std::vector<Nat> vals;
    for (Nat s : plus_)
      if (auto v = value_of(s)) vals.push_back(*v);
    return IndexSet::finite(std::move(vals));
  }
  Nat Lc = mod_ * static_cast<Nat>(c);
  Nat deep = periodic_threshold() + Lc;  // all s >= deep are pure tail
  if (b < 0)  // ensure values from the tail are nonnegative
    deep = std::max(deep, static_cast<Nat>((-b + a - 1) / a));
  Nat M = static_cast<Nat>(a) * mod_;    // image gap per class
  // image values from s >= deep follow residues mod M
  std::vector<Nat> image_res;
  for (Nat rho = 0; rho < Lc; ++rho) {
    if (!contains_sorted(res_, rho % mod_)) continue;
    Nat s0 = deep + ((rho + Lc - deep % Lc) % Lc);  // first s >= deep, s == rho (mod Lc)
    auto v = value_of(s0);
    if (!v) continue;
    image_res.push_back(*v % M);
  }
  // threshold for the image: any value >= N_img comes from s >= deep
  std::int64_t num = a * static_cast<std::int64_t>(deep + Lc) + b;
  Nat N_img = num <= 0 ? 1 : static_cast<Nat>(num / c) + 1;
  std::vector<Nat> members;
  Nat s_bound = deep + 2 * Lc + 2;
  for (Nat s = 0; s < s_bound; ++s) {
    if (!contains(s)) continue;
    auto v = value_of(s);
    if (v && *v < N_img) members.push_back(*v);
  }
  return IndexSet::eventually_periodic(M, sorted_unique(image_res), N_img,
                                       sorted_unique(members));
}

bool operator<(const IndexSet& a, const IndexSet& b) {
  if (a.mod_ != b.mod_) return a.mod_ < b.mod_;
  if (a.res_ != b.res_) return a.res_ < b.res_;
  if (a.plus_ != b.plus_) return a.plus_ < b.plus_;
  return a.minus_ < b.minus_;
}

std::string IndexSet::to_string() const {
  std::ostringstream os;
  os << "{mod=" << mod_ << " res=[";
  for (size_t i = 0; i < res_.size(); ++i) os << (i ? "," : "") << res_[i];
  os << "] plus=[";
  for (size_t i = 0; i < plus_.size(); ++i) os << (i ? "," : "") << plus_[i];
  os << "] minus=[";
  for (size_t i = 0; i < minus_.size(); ++i) os << (i ? "," : "") << minus_[i];
  os << "]}";
  return os.str();
}

}  // namespace isocalc
