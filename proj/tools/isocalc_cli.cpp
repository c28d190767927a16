// isocalc: exact calculator for coefficient-weighted affine isometries on
// l2(N) — constructions, Wold decompositions, MI-space verdicts, and a
// floating-point cross-check. JSON in, JSON or text out.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "isocalc/constructions.hpp"
#include "isocalc/json_io.hpp"
#include "isocalc/mi_space.hpp"
#include "isocalc/numeric_oracle.hpp"
#include "isocalc/wold.hpp"

namespace {

using isocalc::Operator;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInconsistent = 3;

struct Options {
  isocalc::Nat bound = 4096;
  std::string format = "json";
  isocalc::Nat truncation = 64;
  std::string out;
};

json load_json(const std::string& arg) {
  std::string text;
  if (arg == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    text = os.str();
  } else if (!arg.empty() && (arg[0] == '{' || arg[0] == '[')) {
    text = arg;
  } else {
    std::ifstream in(arg);
    if (!in) throw isocalc::JsonError("", "cannot read " + arg);
    std::ostringstream os;
    os << in.rdbuf();
    text = os.str();
  }
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded())
    throw isocalc::JsonError("", "malformed JSON in " + (arg == "-" ? std::string("stdin") : arg));
  return j;
}

std::vector<Operator> load_operators(const std::string& arg) {
  json j = load_json(arg);
  std::vector<Operator> out;
  if (j.is_array()) {
    for (std::size_t k = 0; k < j.size(); ++k)
      out.push_back(isocalc::parse_operator(j[k], "/" + std::to_string(k)));
  } else {
    out.push_back(isocalc::parse_operator(j));
  }
  return out;
}

void emit(const Options& opt, const json& report, const std::string& text) {
  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!opt.out.empty() && opt.out != "-") {
    file.open(opt.out);
    if (!file) throw isocalc::JsonError("", "cannot write " + opt.out);
    os = &file;
  }
  if (opt.format == "json")
    *os << report.dump(2) << '\n';
  else
    *os << text;
}

std::string describe_certificate(const json& report) {
  if (!report.contains("certificate")) return "exact";
  const json& c = report["certificate"];
  if (c.is_string()) return c.get<std::string>();
  return "prefix up to " + std::to_string(c["prefix"].get<isocalc::Nat>());
}

int emit_operator(const Options& opt, const Operator& a, json provenance) {
  json report = isocalc::to_json(a);
  report["provenance"] = std::move(provenance);
  std::ostringstream text;
  text << "operator (" << (a.tier() == isocalc::Tier::Exact ? "exact" : "prefix")
       << " tier)\n"
       << a.to_string() << '\n';
  emit(opt, report, text.str());
  return kExitOk;
}

int cmd_check_mi(const Options& opt, const std::string& input, bool audit_mode) {
  std::vector<Operator> gens = load_operators(input);
  isocalc::GramReport rep = isocalc::check_mi_space(gens);
  json report = isocalc::to_json(rep);
  std::ostringstream text;
  if (!rep.is_mi_space()) {
    text << "MI-VIOLATION: pair (" << rep.violation->first << ", "
         << rep.violation->second << ") fails at basis index "
         << rep.violation->witness << '\n';
    emit(opt, report, text.str());
    return kExitNegative;
  }
  text << "MI-OK: dimension " << rep.dimension << " ("
       << describe_certificate(report) << ")\n";
  int code = kExitOk;
  if (audit_mode) {
    std::vector<isocalc::AuditFinding> findings = isocalc::structural_audit(rep);
    report["findings"] = isocalc::to_json(findings);
    for (const isocalc::AuditFinding& f : findings) {
      text << f.code << (f.ok ? " ok: " : " VIOLATED: ") << f.detail << '\n';
      if (!f.ok) code = kExitInconsistent;
    }
  }
  emit(opt, report, text.str());
  return code;
}

int cmd_wold(const Options& opt, const std::string& input) {
  std::vector<Operator> ops = load_operators(input);
  if (ops.size() != 1)
    throw isocalc::JsonError("", "wold expects exactly one operator");
  isocalc::WoldResult w = isocalc::wold_decompose(ops[0], opt.bound);
  json report = isocalc::to_json(w);
  std::ostringstream text;
  text << "unitary part:   " << w.unitary_part.to_string() << '\n'
       << "shift part:     " << w.shift_part.to_string() << '\n'
       << "wandering:      " << w.wandering.to_string() << '\n'
       << "multiplicity:   "
       << (w.multiplicity.finite ? std::to_string(w.multiplicity.count)
                                 : std::string("inf"))
       << '\n'
       << "certificate:    " << describe_certificate(report) << '\n';
  emit(opt, report, text.str());
  return kExitOk;
}

int cmd_commutator_check(const Options& opt, const std::string& input) {
  std::vector<Operator> ops = load_operators(input);
  if (ops.size() != 2)
    throw isocalc::JsonError("", "commutator-check expects two operators");
  json report;
  std::ostringstream text;
  try {
    isocalc::CommutatorIdentityResult r =
        isocalc::commutator_identity_check(ops[0], ops[1]);
    report["verdict"] = r.holds ? "CI-HOLDS" : "CI-FAIL";
    report["lhs"] = isocalc::to_json(r.lhs);
    report["rhs_scalar"] = isocalc::to_json(r.rhs_scalar);
    report["certificate"] = "exact";
    text << (r.holds ? "CI-HOLDS" : "CI-FAIL") << ": [A,B]*[A,B] vs 2(|A|^2|B|^2 - |<A,B>|^2) = "
         << isocalc::to_string(r.rhs_scalar) << '\n';
    emit(opt, report, text.str());
    // the identity is a theorem on MI pairs; failing it means the
    // implementation is inconsistent, not the input
    return r.holds ? kExitOk : kExitInconsistent;
  } catch (const std::invalid_argument& e) {
    report["verdict"] = "MI-VIOLATION";
    report["detail"] = e.what();
    text << "MI-VIOLATION: " << e.what() << '\n';
    emit(opt, report, text.str());
    return kExitNegative;
  }
}

int cmd_truncate(const Options& opt, const std::string& input) {
  std::vector<Operator> ops = load_operators(input);
  if (ops.size() != 1)
    throw isocalc::JsonError("", "truncate expects exactly one operator");
  isocalc::Truncation t = isocalc::truncate(ops[0], opt.truncation);
  double n2 = isocalc::norm2_estimate(t);
  json report{{"n", t.n},
              {"safe_columns", t.safe_columns},
              {"norm2_estimate", n2},
              {"csv", isocalc::to_csv(t)}};
  std::ostringstream text;
  text << "truncation " << t.n << "x" << t.n << ", " << t.safe_columns.size()
       << " safe columns, norm^2 ~= " << n2 << '\n'
       << isocalc::to_csv(t);
  emit(opt, report, text.str());
  return kExitOk;
}

int cmd_cross_validate(const Options& opt, const std::string& input) {
  std::vector<Operator> ops = load_operators(input);
  if (ops.size() != 2)
    throw isocalc::JsonError("", "cross-validate expects two operators");
  isocalc::CrossValidation cv =
      isocalc::cross_validate(ops[0], ops[1], opt.truncation);
  json report{{"n", cv.n},
              {"columns_compared", cv.columns_compared},
              {"max_abs_diff", cv.max_abs_diff},
              {"agreed", cv.agreed}};
  std::ostringstream text;
  text << (cv.agreed ? "agreed" : "DISAGREED") << ": " << cv.columns_compared
       << " columns at size " << cv.n << ", max |diff| = " << cv.max_abs_diff
       << '\n';
  emit(opt, report, text.str());
  return cv.agreed ? kExitOk : kExitInconsistent;
}

isocalc::UnitarySpec parse_unitary_spec(const json& j, const std::string& loc) {
  isocalc::UnitarySpec u;
  if (!j.is_object()) throw isocalc::JsonError(loc, "expected an object");
  u.carrier = isocalc::parse_index_set(j.at("carrier"), loc + "/carrier");
  if (j.contains("map")) {
    // reuse the operator piece schema for the index map
    json wrapper{{"terms",
                  json::array({json{{"coeff", json{{"re", "1"}, {"im", "0"}}},
                                    {"map", j["map"]}}})}};
    Operator op = isocalc::parse_operator(wrapper, loc);
    u.map = op.basis_map();
  } else {
    u.map = isocalc::PartialInjection::unchecked(
        {isocalc::AffinePiece{u.carrier, isocalc::AffineMap::identity()}});
  }
  if (j.contains("phases")) {
    const json& ph = j["phases"];
    for (std::size_t k = 0; k < ph.size(); ++k) {
      std::string pl = loc + "/phases/" + std::to_string(k);
      u.phases[ph[k].at("index").get<isocalc::Nat>()] =
          isocalc::parse_coefficient(ph[k].at("coeff"), pl + "/coeff");
    }
  }
  return u;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"isocalc: exact isometry calculus on l2(N)"};
  app.require_subcommand(1);

  Options opt;
  if (const char* env = std::getenv("ISOCALC_BOUND")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) opt.bound = v;
  }
  app.add_option("--bound", opt.bound, "prefix certification bound");
  app.add_option("--format", opt.format, "output format: json|text")
      ->check(CLI::IsMember({"json", "text"}));
  app.add_option("--truncation", opt.truncation, "truncation size");
  app.add_option("--out", opt.out, "output path (default stdout)");

  std::string input, spec_arg;
  int cuntz_n = 2;

  auto* make_shift = app.add_subcommand(
      "make-shift", "shift with prescribed wandering index set");
  make_shift->add_option("set", input, "IndexSet JSON, path, or -")->required();

  auto* make_range = app.add_subcommand(
      "make-range-shift", "shift with prescribed range index set");
  make_range->add_option("set", input, "IndexSet JSON, path, or -")->required();

  auto* make_iso = app.add_subcommand(
      "make-isometry", "isometry with prescribed unitary part and range");
  make_iso->add_option("spec", spec_arg, "unitary spec JSON, path, or -")
      ->required();
  make_iso->add_option("range", input, "IndexSet JSON, path, or -")->required();

  auto* make_cuntz_cmd =
      app.add_subcommand("make-cuntz", "the n Cuntz isometries i -> n*i + r");
  make_cuntz_cmd->add_option("n", cuntz_n, "number of generators")->required();

  auto* check_mi = app.add_subcommand(
      "check-mi", "verify that operators span a space of isometry multiples");
  check_mi->add_option("operators", input, "operator list JSON, path, or -")
      ->required();

  auto* gram = app.add_subcommand("gram", "exact Gram matrix of a generator list");
  gram->add_option("operators", input, "operator list JSON, path, or -")
      ->required();

  auto* wold = app.add_subcommand("wold", "Wold decomposition of an isometry");
  wold->add_option("operator", input, "operator JSON, path, or -")->required();

  auto* comm = app.add_subcommand("commutator-check",
                                  "verify the commutator identity on a pair");
  comm->add_option("operators", input, "two-operator JSON, path, or -")
      ->required();

  auto* audit = app.add_subcommand(
      "audit", "verify a space and self-check it against the structure theorems");
  audit->add_option("operators", input, "operator list JSON, path, or -")
      ->required();

  auto* trunc = app.add_subcommand("truncate", "dense corner of an operator");
  trunc->add_option("operator", input, "operator JSON, path, or -")->required();

  auto* cross = app.add_subcommand(
      "cross-validate", "float product of truncations vs truncated exact product");
  cross->add_option("operators", input, "two-operator JSON, path, or -")
      ->required();

  // global flags may follow the subcommand name
  for (CLI::App* sub : app.get_subcommands(nullptr)) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help lands here too and must stay exit 0
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (make_shift->parsed()) {
      isocalc::IndexSet m = isocalc::parse_index_set(load_json(input));
      Operator a = isocalc::make_shift_with_wandering(m, opt.bound);
      return emit_operator(opt, a,
                           json{{"command", "make-shift"},
                                {"wandering", isocalc::to_json(m)},
                                {"bound", opt.bound}});
    }
    if (make_range->parsed()) {
      isocalc::IndexSet k = isocalc::parse_index_set(load_json(input));
      Operator a = isocalc::make_shift_with_range(k, opt.bound);
      return emit_operator(opt, a,
                           json{{"command", "make-range-shift"},
                                {"range", isocalc::to_json(k)},
                                {"bound", opt.bound}});
    }
    if (make_iso->parsed()) {
      json sj = load_json(spec_arg);
      isocalc::UnitarySpec u = parse_unitary_spec(sj, "");
      isocalc::IndexSet k = isocalc::parse_index_set(load_json(input));
      Operator a = isocalc::make_isometry_with_parts(u, k, opt.bound);
      return emit_operator(opt, a,
                           json{{"command", "make-isometry"},
                                {"range", isocalc::to_json(k)},
                                {"carrier", isocalc::to_json(u.carrier)},
                                {"bound", opt.bound}});
    }
    if (make_cuntz_cmd->parsed()) {
      std::vector<Operator> fam = isocalc::make_cuntz(cuntz_n);
      json arr = json::array();
      std::ostringstream text;
      for (std::size_t r = 0; r < fam.size(); ++r) {
        json one = isocalc::to_json(fam[r]);
        one["provenance"] =
            json{{"command", "make-cuntz"}, {"n", cuntz_n}, {"r", r}};
        arr.push_back(std::move(one));
        text << "S_" << r << ": " << fam[r].to_string() << '\n';
      }
      emit(opt, arr, text.str());
      return kExitOk;
    }
    if (check_mi->parsed() || gram->parsed())
      return cmd_check_mi(opt, input, false);
    if (audit->parsed()) return cmd_check_mi(opt, input, true);
    if (wold->parsed()) return cmd_wold(opt, input);
    if (comm->parsed()) return cmd_commutator_check(opt, input);
    if (trunc->parsed()) return cmd_truncate(opt, input);
    if (cross->parsed()) return cmd_cross_validate(opt, input);
  } catch (const isocalc::JsonError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInconsistent;
  }
  return kExitUsage;
}
