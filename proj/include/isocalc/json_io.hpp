#pragma once

#include <stdexcept>
#include <string>

#include "isocalc/mi_space.hpp"
#include "isocalc/operator.hpp"
#include "isocalc/wold.hpp"
#include "json.hpp"

namespace isocalc {

/// Schema or value error while reading JSON; `location` is a JSON pointer
/// into the offending document.
struct JsonError : std::runtime_error {
  std::string location;
  JsonError(std::string loc, const std::string& what)
      : std::runtime_error(what + " (at " + loc + ")"),
        location(std::move(loc)) {}
};

nlohmann::json to_json(const IndexSet& s);
IndexSet parse_index_set(const nlohmann::json& j,
                         const std::string& location = "");

/// Operator wire format: {"terms":[{"coeff":{"re","im"},
/// "map":{"pieces":[{"domain",<IndexSet>,"a","b"(,"c")}]}}]}. Rationals
/// travel as decimal-free strings. Prefix-tier operators serialize as
/// {"tier":"prefix","bound","description","columns":[...]} — the explicit
/// table up to the certification bound, which is all that was ever known.
nlohmann::json to_json(const Operator& a);
Operator parse_operator(const nlohmann::json& j,
                        const std::string& location = "");

nlohmann::json to_json(const Coefficient& c);
Coefficient parse_coefficient(const nlohmann::json& j,
                              const std::string& location);

nlohmann::json to_json(const WoldResult& w);
nlohmann::json to_json(const GramReport& rep);
nlohmann::json to_json(const std::vector<AuditFinding>& findings);

}  // namespace isocalc
