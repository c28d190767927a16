#include "isocalc/json_io.hpp"

#include <algorithm>

namespace isocalc {

namespace {

using nlohmann::json;

const json& field(const json& j, const char* key, const std::string& loc) {
  if (!j.is_object()) throw JsonError(loc, "expected an object");
  auto it = j.find(key);
  if (it == j.end())
    throw JsonError(loc + "/" + key, "missing field");
  return *it;
}

bool is_nat(const json& j) {
  return j.is_number_unsigned() ||
         (j.is_number_integer() && j.get<std::int64_t>() >= 0);
}

std::vector<Nat> nat_list(const json& j, const std::string& loc) {
  if (!j.is_array()) throw JsonError(loc, "expected an array of naturals");
  std::vector<Nat> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (!is_nat(j[k]))
      throw JsonError(loc + "/" + std::to_string(k), "expected a natural");
    out.push_back(j[k].get<Nat>());
  }
  return out;
}

Rational rational_field(const json& j, const std::string& loc) {
  if (!j.is_string())
    throw JsonError(loc, "rationals travel as decimal-free strings");
  auto q = parse_rational(j.get<std::string>());
  if (!q) throw JsonError(loc, "malformed rational");
  return *q;
}

std::int64_t int_field(const json& j, const std::string& loc) {
  if (!j.is_number_integer())
    throw JsonError(loc, "expected an integer");
  return j.get<std::int64_t>();
}

}  // namespace

json to_json(const IndexSet& s) {
  return json{{"mod", s.modulus()},
              {"res", s.residue_list()},
              {"plus", s.added()},
              {"minus", s.removed()}};
}

IndexSet parse_index_set(const json& j, const std::string& loc) {
  const json& mod = field(j, "mod", loc);
  if (!is_nat(mod) || mod.get<Nat>() == 0)
    throw JsonError(loc + "/mod", "modulus must be a positive natural");
  Nat m = mod.get<Nat>();
  std::vector<Nat> res = nat_list(field(j, "res", loc), loc + "/res");
  for (Nat r : res)
    if (r >= m) throw JsonError(loc + "/res", "residue at or above modulus");
  std::vector<Nat> plus = nat_list(field(j, "plus", loc), loc + "/plus");
  std::vector<Nat> minus = nat_list(field(j, "minus", loc), loc + "/minus");
  return IndexSet::raw(m, std::move(res), std::move(plus), std::move(minus));
}

json to_json(const Coefficient& c) {
  return json{{"re", to_string(c.re)}, {"im", to_string(c.im)}};
}

Coefficient parse_coefficient(const json& j, const std::string& loc) {
  return Coefficient(rational_field(field(j, "re", loc), loc + "/re"),
                     rational_field(field(j, "im", loc), loc + "/im"));
}

json to_json(const Operator& a) {
  if (a.tier() == Tier::Prefix) {
    const PrefixEvaluator& ev = a.prefix_evaluator();
    json cols = json::array();
    for (Nat i = 0; i < ev.bound; ++i) {
      json col = json::array();
      for (const Entry& e : a.apply(i))
        col.push_back(json{{"row", e.row}, {"coeff", to_json(e.coeff)}});
      cols.push_back(std::move(col));
    }
    return json{{"tier", "prefix"},
                {"bound", ev.bound},
                {"description", ev.description},
                {"columns", std::move(cols)}};
  }
  json terms = json::array();
  // one term per (coefficient-free) map cannot reconstruct weights, so a
  // term is emitted per block; adjacent equal-coefficient blocks merge
  // into one multi-piece map for readability
  std::vector<Block> blocks = a.blocks();
  std::stable_sort(blocks.begin(), blocks.end(),
                   [](const Block& x, const Block& y) {
                     if (x.coeff != y.coeff) return x.coeff < y.coeff;
                     return x.map < y.map;
                   });
  for (std::size_t k = 0; k < blocks.size();) {
    std::size_t end = k;
    while (end < blocks.size() && blocks[end].coeff == blocks[k].coeff) ++end;
    json pieces = json::array();
    for (std::size_t t = k; t < end; ++t) {
      json p{{"domain", to_json(blocks[t].domain)},
             {"a", blocks[t].map.a},
             {"b", blocks[t].map.b}};
      if (blocks[t].map.c != 1) p["c"] = blocks[t].map.c;
      pieces.push_back(std::move(p));
    }
    terms.push_back(json{{"coeff", to_json(blocks[k].coeff)},
                         {"map", json{{"pieces", std::move(pieces)}}}});
    k = end;
  }
  return json{{"terms", std::move(terms)}};
}

Operator parse_operator(const json& j, const std::string& loc) {
  if (j.is_object() && j.contains("tier") && j["tier"] == "prefix") {
    const json& cols = field(j, "columns", loc);
    if (!cols.is_array()) throw JsonError(loc + "/columns", "expected array");
    auto table = std::make_shared<std::vector<std::vector<Entry>>>();
    for (std::size_t i = 0; i < cols.size(); ++i) {
      std::string cl = loc + "/columns/" + std::to_string(i);
      std::vector<Entry> col;
      for (std::size_t e = 0; e < cols[i].size(); ++e) {
        std::string el = cl + "/" + std::to_string(e);
        const json& row = field(cols[i][e], "row", el);
        if (!is_nat(row))
          throw JsonError(el + "/row", "expected a natural");
        col.push_back(Entry{
            row.get<Nat>(),
            parse_coefficient(field(cols[i][e], "coeff", el), el + "/coeff")});
      }
      table->push_back(std::move(col));
    }
    PrefixEvaluator ev;
    ev.bound = table->size();
    if (j.contains("description") && j["description"].is_string())
      ev.description = j["description"].get<std::string>();
    ev.column = [table](Nat i) -> std::vector<Entry> {
      if (i < table->size()) return (*table)[i];
      throw std::out_of_range("prefix operator evaluated beyond its table");
    };
    return Operator::prefix(std::move(ev));
  }
  const json& terms = field(j, "terms", loc);
  if (!terms.is_array()) throw JsonError(loc + "/terms", "expected array");
  std::vector<std::pair<Coefficient, Operator>> parts;
  for (std::size_t t = 0; t < terms.size(); ++t) {
    std::string tl = loc + "/terms/" + std::to_string(t);
    Coefficient c = parse_coefficient(field(terms[t], "coeff", tl), tl + "/coeff");
    const json& map = field(terms[t], "map", tl);
    const json& pieces = field(map, "pieces", tl + "/map");
    if (!pieces.is_array())
      throw JsonError(tl + "/map/pieces", "expected array");
    std::vector<AffinePiece> ps;
    for (std::size_t p = 0; p < pieces.size(); ++p) {
      std::string pl = tl + "/map/pieces/" + std::to_string(p);
      IndexSet dom =
          parse_index_set(field(pieces[p], "domain", pl), pl + "/domain");
      std::int64_t a = int_field(field(pieces[p], "a", pl), pl + "/a");
      std::int64_t b = int_field(field(pieces[p], "b", pl), pl + "/b");
      std::int64_t cden = 1;
      if (pieces[p].contains("c"))
        cden = int_field(pieces[p]["c"], pl + "/c");
      if (a < 1 || cden < 1)
        throw JsonError(pl, "affine piece needs a >= 1 and c >= 1");
      AffineMap m(a, b, cden);
      if (!m.valid_on(dom))
        throw JsonError(pl, "map leaves the naturals on its domain");
      ps.push_back(AffinePiece{std::move(dom), m});
    }
    auto v = PartialInjection::validate(ps);
    if (auto* viol = std::get_if<InjectionViolation>(&v))
      throw JsonError(tl + "/map", "not injective: " + viol->describe());
    parts.push_back({c, Operator::from_injection(std::get<PartialInjection>(v))});
  }
  return linear_combine(parts);
}

namespace {

json cardinality_json(const Cardinality& c) {
  if (c.finite) return json(c.count);
  return json("inf");
}

json certificate_json(Tier tier, Nat bound) {
  if (tier == Tier::Exact) return json("exact");
  return json{{"prefix", bound}};
}

}  // namespace

json to_json(const WoldResult& w) {
  return json{{"unitary", to_json(w.unitary_part)},
              {"shift", to_json(w.shift_part)},
              {"wandering", to_json(w.wandering)},
              {"multiplicity", cardinality_json(w.multiplicity)},
              {"certificate", certificate_json(w.certificate, w.prefix_bound)}};
}

json to_json(const GramReport& rep) {
  json out;
  out["verdict"] = rep.is_mi_space() ? "MI-OK" : "MI-VIOLATION";
  out["certificate"] = certificate_json(rep.certificate, 0);
  if (rep.violation) {
    out["violation"] = json{{"first", rep.violation->first},
                            {"second", rep.violation->second},
                            {"witness", rep.violation->witness}};
    return out;
  }
  json gram = json::array();
  for (const auto& row : rep.gram) {
    json r = json::array();
    for (const Coefficient& c : row) r.push_back(to_json(c));
    gram.push_back(std::move(r));
  }
  out["gram"] = std::move(gram);
  out["dimension"] = rep.dimension;
  out["pairwise_reduction"] = rep.pairwise_reduction;
  return out;
}

json to_json(const std::vector<AuditFinding>& findings) {
  json out = json::array();
  for (const AuditFinding& f : findings)
    out.push_back(json{{"code", f.code}, {"ok", f.ok}, {"detail", f.detail}});
  return out;
}

}  // namespace isocalc
