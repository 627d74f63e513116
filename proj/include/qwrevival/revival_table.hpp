#pragma once

// Reference revival table and the structural diff of scan output against it.

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "qwrevival/revival_search.hpp"
#include "qwrevival/revival_table_data.hpp"

namespace qwr {

struct TableEntry {
  int steps = 0;
  Rational theta_over_pi;
  Rational omega_over_pi;
  bool complete = false;
  bool realized = false;  // one of the experimentally realized cases
  std::string note;

  auto key() const { return std::make_tuple(steps, theta_over_pi, omega_over_pi); }
};

struct RevivalTable {
  int version = 0;
  std::vector<TableEntry> entries;
  // Revivals absent from the published tabulation that were found by the scan
  // and confirmed at operator level.  Matching them is not counted as extra.
  std::vector<TableEntry> reviewed_additions;
};

class TableFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline Rational rational_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2) throw TableFormatError("rational must be [num, den]");
  Rational r{j[0].get<std::int64_t>(), j[1].get<std::int64_t>()};
  if (r.den <= 0) throw TableFormatError("rational denominator must be positive");
  return r;
}

inline TableEntry entry_from_json(const nlohmann::json& j) {
  TableEntry e;
  e.steps = j.at("steps").get<int>();
  e.theta_over_pi = rational_from_json(j.at("theta_over_pi"));
  e.omega_over_pi = rational_from_json(j.at("omega_over_pi"));
  e.complete = j.at("complete").get<bool>();
  e.realized = j.value("realized", false);
  e.note = j.value("note", std::string{});
  return e;
}

}  // namespace detail

inline RevivalTable parse_revival_table(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.value("format", std::string{}) != "qwrevival.revival_table") {
      throw TableFormatError("not a revival table document");
    }
    RevivalTable t;
    t.version = j.at("version").get<int>();
    for (const auto& e : j.at("entries")) t.entries.push_back(detail::entry_from_json(e));
    if (j.contains("reviewed_additions")) {
      for (const auto& e : j.at("reviewed_additions")) {
        t.reviewed_additions.push_back(detail::entry_from_json(e));
      }
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw TableFormatError(std::string("malformed revival table: ") + e.what());
  }
}

inline const RevivalTable& builtin_revival_table() {
  static const RevivalTable table = parse_revival_table(kRevivalTableJson);
  return table;
}

struct Misclassification {
  TableEntry expected;
  RevivalCandidate found;
};

struct TableDiff {
  std::vector<TableEntry> missing;
  std::vector<RevivalCandidate> extra;
  std::vector<Misclassification> misclassified;
  std::vector<TableEntry> reviewed;  // reviewed additions that were matched

  bool empty() const { return missing.empty() && extra.empty() && misclassified.empty(); }
};

// theta/pi and omega/pi are recovered with the same rationalization the scan
// uses; candidates that do not rationalize count as extra.
inline TableDiff verify_table(const std::vector<RevivalCandidate>& candidates,
                              const RevivalTable& table = builtin_revival_table(),
                              std::int64_t max_denominator = 64) {
  using Key = std::tuple<int, Rational, Rational>;
  std::map<Key, const TableEntry*> published;
  std::map<Key, const TableEntry*> additions;
  for (const auto& e : table.entries) published.emplace(e.key(), &e);
  for (const auto& e : table.reviewed_additions) additions.emplace(e.key(), &e);

  TableDiff diff;
  std::map<Key, bool> seen;
  for (const auto& c : candidates) {
    const auto theta = rationalize(c.theta, max_denominator);
    const auto omega =
        c.omega_over_pi ? c.omega_over_pi : rationalize(c.omega, max_denominator);
    if (!theta || !omega) {
      diff.extra.push_back(c);
      continue;
    }
    const Key key{c.steps, *theta, *omega};
    if (seen.contains(key)) {
      diff.extra.push_back(c);
      continue;
    }
    seen.emplace(key, true);
    const TableEntry* expected = nullptr;
    bool reviewed = false;
    if (auto it = published.find(key); it != published.end()) {
      expected = it->second;
    } else if (auto jt = additions.find(key); jt != additions.end()) {
      expected = jt->second;
      reviewed = true;
    }
    if (!expected) {
      diff.extra.push_back(c);
    } else if (expected->complete != c.complete) {
      diff.misclassified.push_back({*expected, c});
    } else if (reviewed) {
      diff.reviewed.push_back(*expected);
    }
  }
  for (const auto& e : table.entries) {
    if (!seen.contains(e.key())) diff.missing.push_back(e);
  }
  return diff;
}

}  // namespace qwr
