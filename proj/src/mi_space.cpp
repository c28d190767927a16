#include "isocalc/mi_space.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "isocalc/wold.hpp"

namespace isocalc {

namespace {

using Matrix = std::vector<std::vector<Coefficient>>;

/// Row-reduces in place; returns the rank. Exact field arithmetic.
std::size_t row_reduce(Matrix& m) {
  std::size_t rank = 0;
  if (m.empty()) return 0;
  std::size_t cols = m[0].size();
  for (std::size_t col = 0; col < cols && rank < m.size(); ++col) {
    std::size_t pivot = rank;
    while (pivot < m.size() && m[pivot][col].is_zero()) ++pivot;
    if (pivot == m.size()) continue;
    std::swap(m[rank], m[pivot]);
    Coefficient inv = Coefficient(1) / m[rank][col];
    for (auto& x : m[rank]) x *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == rank || m[r][col].is_zero()) continue;
      Coefficient f = m[r][col];
      for (std::size_t cc = 0; cc < cols; ++cc) m[r][cc] -= f * m[rank][cc];
    }
    ++rank;
  }
  return rank;
}

Coefficient determinant(Matrix m) {
  std::size_t n = m.size();
  Coefficient det(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && m[pivot][col].is_zero()) ++pivot;
    if (pivot == n) return Coefficient(0);
    if (pivot != col) {
      std::swap(m[pivot], m[col]);
      det = -det;
    }
    det *= m[col][col];
    Coefficient inv = Coefficient(1) / m[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (m[r][col].is_zero()) continue;
      Coefficient f = m[r][col] * inv;
      for (std::size_t cc = col; cc < n; ++cc) m[r][cc] -= f * m[col][cc];
    }
  }
  return det;
}

void require_exact(const Operator& a, const char* what) {
  if (a.tier() != Tier::Exact)
    throw std::invalid_argument(std::string(what) +
                                ": prefix-tier operand not supported");
}

}  // namespace

InnerProductResult inner_product(const Operator& a, const Operator& b) {
  require_exact(a, "inner_product");
  require_exact(b, "inner_product");
  ScalarVerdict v = (b.adjoint() * a).scalar_test();
  InnerProductResult r;
  r.scalar = v.is_scalar();
  if (r.scalar)
    r.value = v.lambda;
  else
    r.witness = v.witness;
  return r;
}

bool GramReport::hermitian() const {
  for (std::size_t j = 0; j < gram.size(); ++j)
    for (std::size_t k = 0; k < gram.size(); ++k)
      if (!(gram[j][k] == gram[k][j].conj())) return false;
  return true;
}

bool GramReport::psd_minors() const {
  for (std::size_t n = 1; n <= gram.size(); ++n) {
    Matrix lead(n, std::vector<Coefficient>(n));
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) lead[j][k] = gram[j][k];
    Coefficient d = determinant(std::move(lead));
    if (!d.is_real() || d.re < 0) return false;
  }
  return true;
}

GramReport check_mi_space(const std::vector<Operator>& generators) {
  GramReport rep;
  rep.generators = generators;
  std::size_t n = generators.size();
  rep.gram.assign(n, std::vector<Coefficient>(n));
  for (std::size_t k = 0; k < n && !rep.violation; ++k) {
    for (std::size_t j = 0; j < n; ++j) {
      InnerProductResult ip = inner_product(generators[j], generators[k]);
      if (!ip.scalar) {
        rep.violation = MiViolation{j, k, ip.witness};
        break;
      }
      rep.gram[j][k] = ip.value;
    }
  }
  if (!rep.violation) {
    Matrix m = rep.gram;
    rep.dimension = row_reduce(m);
  }
  return rep;
}

std::vector<Operator> orthogonalize(const GramReport& report) {
  if (!report.is_mi_space())
    throw std::invalid_argument("orthogonalize: not an MI-space presentation");
  std::vector<Operator> basis;
  std::vector<Coefficient> norms2;
  for (const Operator& g : report.generators) {
    std::vector<std::pair<Coefficient, Operator>> terms{{Coefficient(1), g}};
    for (std::size_t j = 0; j < basis.size(); ++j) {
      InnerProductResult ip = inner_product(g, basis[j]);
      if (!ip.scalar)
        throw std::logic_error("orthogonalize: span left the MI class");
      terms.push_back({-(ip.value / norms2[j]), basis[j]});
    }
    Operator v = linear_combine(terms);
    if (v.is_zero()) continue;
    InnerProductResult ip = inner_product(v, v);
    if (!ip.scalar)
      throw std::logic_error("orthogonalize: span left the MI class");
    basis.push_back(std::move(v));
    norms2.push_back(ip.value);
  }
  return basis;
}

SpanMembership span_membership(const Operator& t,
                               const std::vector<Operator>& generators) {
  require_exact(t, "span_membership");
  for (const Operator& g : generators) require_exact(g, "span_membership");
  // Sample enough columns that any nonzero combination shows itself: past
  // the common structure threshold columns repeat with the lcm period.
  Nat threshold = t.structure_threshold();
  Nat period = t.modulus_lcm();
  for (const Operator& g : generators) {
    threshold = std::max(threshold, g.structure_threshold());
    Nat g2 = std::gcd(period, g.modulus_lcm());
    period = period / g2 * g.modulus_lcm();
  }
  Nat bound = threshold + period + 1;

  std::size_t n = generators.size();
  Matrix rows;
  for (Nat i = 0; i < bound; ++i) {
    std::vector<Nat> support;
    auto collect = [&support](const std::vector<Entry>& col) {
      for (const Entry& e : col) support.push_back(e.row);
    };
    std::vector<std::vector<Entry>> cols;
    for (const Operator& g : generators) {
      cols.push_back(g.apply(i));
      collect(cols.back());
    }
    std::vector<Entry> tcol = t.apply(i);
    collect(tcol);
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());
    for (Nat row : support) {
      std::vector<Coefficient> eq(n + 1);
      for (std::size_t j = 0; j < n; ++j)
        for (const Entry& e : cols[j])
          if (e.row == row) eq[j] = e.coeff;
      for (const Entry& e : tcol)
        if (e.row == row) eq[n] = e.coeff;
      rows.push_back(std::move(eq));
    }
  }

  // Solve the sampled system; inconsistency rules membership out.
  std::size_t nrows = rows.size();
  row_reduce(rows);
  std::vector<Coefficient> sol(n);
  for (std::size_t r = 0; r < nrows; ++r) {
    std::size_t lead = n + 1;
    for (std::size_t c = 0; c <= n; ++c)
      if (!rows[r][c].is_zero()) {
        lead = c;
        break;
      }
    if (lead == n) return SpanMembership{false, {}};  // 0 = nonzero
    if (lead < n) sol[lead] = rows[r][n];
  }
  // Exact confirmation on canonical forms.
  std::vector<std::pair<Coefficient, Operator>> terms;
  for (std::size_t j = 0; j < n; ++j) terms.push_back({sol[j], generators[j]});
  if (!(linear_combine(terms) == t)) return SpanMembership{false, {}};
  return SpanMembership{true, sol};
}

Operator commutator(const Operator& a, const Operator& b) {
  return a * b - b * a;
}

namespace {

struct MiPair {
  Coefficient aa, ab, ba, bb;
};

MiPair require_mi_pair(const Operator& a, const Operator& b, const char* what) {
  auto get = [&](const Operator& x, const Operator& y) {
    InnerProductResult ip = inner_product(x, y);
    if (!ip.scalar) {
      std::ostringstream os;
      os << what << ": span{A,B} is not an MI-space (witness index "
         << ip.witness << ")";
      throw std::invalid_argument(os.str());
    }
    return ip.value;
  };
  return MiPair{get(a, a), get(a, b), get(b, a), get(b, b)};
}

}  // namespace

CommutatorIdentityResult commutator_identity_check(const Operator& a,
                                                   const Operator& b) {
  MiPair g = require_mi_pair(a, b, "commutator_identity_check");
  CommutatorIdentityResult r;
  Operator c = commutator(a, b);
  r.lhs = c.adjoint() * c;
  r.rhs_scalar =
      Coefficient(2) * (g.aa * g.bb - g.ab * g.ab.conj());
  ScalarVerdict v = r.lhs.scalar_test();
  r.holds = v.is_scalar() && v.lambda == r.rhs_scalar;
  return r;
}

CommutationResult commutation_check(const Operator& a, const Operator& b) {
  MiPair g = require_mi_pair(a, b, "commutation_check");
  CommutationResult r;
  r.commute = commutator(a, b).is_zero();
  r.dependent = g.aa * g.bb == Coefficient(g.ab.abs2());
  r.consistent = r.commute == r.dependent;
  return r;
}

AdjointMembershipResult adjoint_membership_check(const Operator& a) {
  Classification cls = a.classify();
  if (a.is_zero() || (cls.kind != OperatorClass::IsometryMultiple &&
                      cls.kind != OperatorClass::UnitaryMultiple &&
                      cls.kind != OperatorClass::ScalarMultipleOfIdentity))
    throw std::invalid_argument(
        "adjoint_membership_check: needs a nonzero isometry multiple");
  AdjointMembershipResult r;
  ScalarVerdict v = (a * a.adjoint()).scalar_test();
  r.adjoint_in_mi = v.is_nonzero_scalar();
  if (r.adjoint_in_mi)
    r.forced_unitary = cls.kind == OperatorClass::UnitaryMultiple ||
                       cls.kind == OperatorClass::ScalarMultipleOfIdentity;
  else
    r.witness = v.witness;
  return r;
}

ProductMembershipReport product_membership_check(
    const std::vector<Operator>& generators, const Operator& a,
    const Operator& b) {
  GramReport rep = check_mi_space(generators);
  if (!rep.is_mi_space())
    throw std::invalid_argument(
        "product_membership_check: generators do not span an MI-space");
  SpanMembership a_in = span_membership(a, generators);
  if (!a_in.in_span)
    throw std::invalid_argument("product_membership_check: A is not in the span");

  ProductMembershipReport r;
  Operator ab = a * b;
  SpanMembership sm = span_membership(ab, generators);
  r.ab_in_span = sm.in_span;
  r.ab_coefficients = sm.coefficients;
  ScalarVerdict bs = b.scalar_test();
  r.b_scalar = bs.is_scalar();
  if (r.b_scalar) r.b_lambda = bs.lambda;
  r.space_is_ci =
      rep.dimension <= 1 && span_membership(Operator::identity(), generators).in_span;

  r.consistent = true;
  std::ostringstream os;
  if (r.ab_in_span && !a.is_zero()) {
    // membership forces B scalar
    if (!r.b_scalar) {
      r.consistent = false;
      os << "AB in span but B is not scalar; ";
    }
    if (!r.space_is_ci) {
      SpanMembership b_in = span_membership(b, generators);
      if (b_in.in_span && !b.is_zero()) {
        r.consistent = false;
        os << "AB in span with nonzero B in a space other than CI; ";
      }
    }
  }
  if (r.b_scalar && !r.ab_in_span) {
    r.consistent = false;
    os << "B scalar but AB escaped the span; ";
  }
  if (r.consistent) os << "consistent with the multiplication no-go statements";
  r.detail = os.str();
  return r;
}

namespace {

enum class MultKind { Finite, Infinite, Unknown };

struct MultInfo {
  MultKind kind;
  Nat count = 0;
};

/// Multiplicity of the shift part of an isometry multiple. Basis maps are
/// decided by the Wold machinery; for genuine combinations an exact
/// density bound applies: if the columns touching [0,K) have asymptotic
/// density below one, the range has infinite codimension.
MultInfo shift_multiplicity(const Operator& e) {
  if (e.is_basis_map()) {
    Cardinality c = multiplicity(e);
    return c.finite ? MultInfo{MultKind::Finite, c.count}
                    : MultInfo{MultKind::Infinite};
  }
  Nat threshold = e.structure_threshold();
  Nat period = e.modulus_lcm();
  Rational touch = 0;
  for (Nat r = 0; r < period; ++r) {
    Rational best = 0;  // max of c/a over blocks alive on this tail class
    for (const Block& b : e.blocks())
      if (b.domain.contains(threshold + period + r))
        best = std::max(best, Rational(b.map.c, b.map.a));
    touch += best / period;
  }
  if (touch < 1) return MultInfo{MultKind::Infinite};
  return MultInfo{MultKind::Unknown};
}

}  // namespace

std::vector<AuditFinding> structural_audit(const GramReport& report) {
  if (!report.is_mi_space())
    throw std::invalid_argument("structural_audit: not an MI-space presentation");
  for (const Operator& g : report.generators) require_exact(g, "structural_audit");
  std::vector<AuditFinding> findings;
  std::vector<Operator> basis = orthogonalize(report);
  std::size_t dim = report.dimension;

  for (std::size_t k = 0; k < basis.size(); ++k) {
    const Operator& e = basis[k];
    Classification cls = e.classify();
    std::ostringstream os;
    os << "orthogonal basis element " << k;
    if (cls.kind == OperatorClass::IsometryMultiple ||
        cls.kind == OperatorClass::UnitaryMultiple ||
        cls.kind == OperatorClass::ScalarMultipleOfIdentity) {
      MultInfo m = shift_multiplicity(e);
      if (m.kind == MultKind::Finite) {
        bool ok = dim <= 1;
        std::ostringstream d;
        d << "orthogonal basis element " << k << " has shift multiplicity "
          << m.count << (ok ? "; dimension is 1" : " but dimension exceeds 1");
        findings.push_back({"AUDIT-P24", ok, d.str()});
      } else if (m.kind == MultKind::Infinite) {
        findings.push_back({"AUDIT-P24", true,
                            os.str() + " has infinite shift multiplicity"});
      } else {
        findings.push_back({"AUDIT-P24", true,
                            os.str() + ": multiplicity not decided (no finite "
                                       "certificate claimed)"});
      }
      if (cls.kind != OperatorClass::IsometryMultiple) {
        bool ok = dim <= 1;
        findings.push_back(
            {"AUDIT-C25A", ok,
             os.str() + std::string(" is a unitary multiple") +
                 (ok ? "; dimension is 1" : " but dimension exceeds 1")});
      }
    } else {
      findings.push_back({"AUDIT-P24", false,
                          os.str() + " is not an isometry multiple (Gram "
                                     "verdict contradicted)"});
    }
  }

  SpanMembership id_in = span_membership(Operator::identity(), report.generators);
  if (id_in.in_span) {
    bool ok = dim <= 1;
    findings.push_back({"AUDIT-C25B", ok,
                        ok ? "identity in span; space is CI"
                           : "identity in span but dimension exceeds 1"});
  }
  std::ostringstream d;
  d << "dimension " << dim << " (Gram rank)";
  findings.push_back({"DIM", true, d.str()});
  return findings;
}

}  // namespace isocalc
