#pragma once

// Angle parsing and the CSV / JSON artifacts written by the qwalk tool.
//
// JSON objects use nlohmann's default std::map storage, so keys come out
// sorted; doubles are written in shortest round-trip form.

#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "qwrevival/analysis.hpp"
#include "qwrevival/evolution.hpp"
#include "qwrevival/noise.hpp"
#include "qwrevival/revival_search.hpp"
#include "qwrevival/revival_table.hpp"
#include "qwrevival/walk_state.hpp"

namespace qwr {

using Json = nlohmann::json;

// Shortest representation that parses back to the same double.
inline std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  if (res.ec != std::errc{}) throw std::runtime_error("cannot format double");
  return std::string(buf, res.ptr);
}

namespace detail {

inline double parse_number(std::string_view s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end || s.empty()) {
    throw std::invalid_argument("not a number: '" + std::string(s) + "'");
  }
  return v;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace detail

// "p/q" or a decimal, read as a multiple of pi unless `radians` is set.
inline double parse_angle(std::string_view text, bool radians = false) {
  const auto s = detail::trim(text);
  double value = 0.0;
  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    const double num = detail::parse_number(detail::trim(s.substr(0, slash)));
    const double den = detail::parse_number(detail::trim(s.substr(slash + 1)));
    if (den == 0.0) throw std::invalid_argument("zero denominator in angle '" + std::string(s) + "'");
    value = radians ? num / den : num * kPi / den;
  } else {
    const double x = detail::parse_number(s);
    value = radians ? x : x * kPi;
  }
  if (!std::isfinite(value)) throw std::invalid_argument("angle is not finite");
  return value;
}

inline std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const auto end = comma == std::string_view::npos ? s.size() : comma;
    const auto item = detail::trim(s.substr(start, end - start));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

// One full run of the walk, pure or dephased depending on the visibility.
struct WalkRecord {
  WalkSchedule schedule;
  CoinVector initial_coin;
  Lattice lattice{0, 0};
  std::vector<PositionDistribution> distributions;  // steps 1..T
  std::vector<double> p0;
  std::vector<double> d_tv;
  double polya = 0.0;
  CoinDensityMatrix final_coin;
};

inline WalkRecord run_walk(const WalkSchedule& schedule, const CoinVector& coin) {
  schedule.validate();
  WalkRecord rec;
  rec.schedule = schedule;
  rec.initial_coin = coin;
  rec.lattice = Lattice::for_walk(schedule.steps);
  const auto psi0 = initial_state(rec.lattice, coin);
  const auto delta0 = PositionDistribution::delta(rec.lattice, 0);
  if (schedule.visibility == 1.0) {
    const auto states = evolve(psi0, schedule);
    for (const auto& s : states) rec.distributions.push_back(position_distribution(s));
    rec.final_coin = reduced_coin_state(states.back());
  } else {
    const auto states = evolve_density(WalkerCoinDensityMatrix::from_pure(psi0), schedule);
    for (const auto& s : states) rec.distributions.push_back(position_distribution(s));
    rec.final_coin = reduced_coin_state(states.back());
  }
  for (const auto& d : rec.distributions) {
    rec.p0.push_back(d.at(0));
    rec.d_tv.push_back(tv_distance(d, delta0));
  }
  rec.polya = polya_number(rec.p0, schedule.steps);
  return rec;
}

inline Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Json schedule_json(const WalkSchedule& s) {
  return Json{{"theta", s.theta},
              {"omega", s.omega},
              {"steps", s.steps},
              {"convention", s.convention == StepConvention::OneBased ? "one" : "zero"},
              {"visibility", s.visibility}};
}

inline Json coin_matrix_json(const Matrix2& m) {
  return Json::array({complex_json(m(0, 0)), complex_json(m(0, 1)), complex_json(m(1, 0)),
                      complex_json(m(1, 1))});
}

inline Json coin_vector_json(const CoinVector& v) {
  return Json{{"plus", complex_json(v.plus)}, {"minus", complex_json(v.minus)}};
}

inline Json walk_json(const WalkRecord& rec) {
  Json dists = Json::array();
  for (std::size_t k = 0; k < rec.distributions.size(); ++k) {
    dists.push_back({{"step", k + 1}, {"probabilities", rec.distributions[k].probabilities()}});
  }
  std::vector<int> sites;
  for (int x = rec.lattice.min_site(); x <= rec.lattice.max_site(); ++x) sites.push_back(x);
  return Json{{"format", "qwrevival.walk"},
              {"version", 1},
              {"schedule", schedule_json(rec.schedule)},
              {"initial_coin", coin_vector_json(rec.initial_coin)},
              {"sites", sites},
              {"distributions", dists},
              {"p0", rec.p0},
              {"d_tv", rec.d_tv},
              {"polya_truncated", rec.polya},
              {"reduced_coin", coin_matrix_json(rec.final_coin.matrix)},
              {"reduced_coin_purity", purity(rec.final_coin)},
              {"coin_state", coin_vector_json(principal_coin_vector(rec.final_coin))}};
}

// step,site,probability
inline std::string walk_csv(const WalkRecord& rec) {
  std::string out = "step,site,probability\n";
  for (std::size_t k = 0; k < rec.distributions.size(); ++k) {
    const auto& d = rec.distributions[k];
    for (int x = rec.lattice.min_site(); x <= rec.lattice.max_site(); ++x) {
      out += std::to_string(k + 1);
      out += ',';
      out += std::to_string(x);
      out += ',';
      out += format_double(d.at(x));
      out += '\n';
    }
  }
  return out;
}

inline std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

inline Json rational_json(const std::optional<Rational>& r) {
  if (!r) return nullptr;
  return Json::array({r->num, r->den});
}

inline Json candidate_json(const RevivalCandidate& c) {
  return Json{{"steps", c.steps},
              {"theta", c.theta},
              {"omega", c.omega},
              {"omega_over_pi", rational_json(c.omega_over_pi)},
              {"complete", c.complete},
              {"residual", c.residual}};
}

inline Json candidates_json(const std::vector<RevivalCandidate>& cs) {
  Json arr = Json::array();
  for (const auto& c : cs) arr.push_back(candidate_json(c));
  return Json{{"format", "qwrevival.candidates"}, {"version", 1}, {"candidates", arr}};
}

class CandidateFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Accepts the document written by candidates_json, a bare array of
// candidates, or blank text (no candidates).
inline std::vector<RevivalCandidate> parse_candidates(std::string_view text) {
  if (detail::trim(text).empty()) return {};
  try {
    const auto j = Json::parse(text);
    const Json& arr = j.is_array() ? j : j.at("candidates");
    std::vector<RevivalCandidate> out;
    for (const auto& e : arr) {
      RevivalCandidate c;
      c.steps = e.at("steps").get<int>();
      c.theta = e.at("theta").get<double>();
      c.omega = e.at("omega").get<double>();
      if (e.contains("omega_over_pi") && !e.at("omega_over_pi").is_null()) {
        c.omega_over_pi = detail::rational_from_json(e.at("omega_over_pi"));
      }
      c.complete = e.at("complete").get<bool>();
      c.residual = e.value("residual", 0.0);
      out.push_back(c);
    }
    return out;
  } catch (const std::exception& e) {
    throw CandidateFormatError(std::string("malformed candidates: ") + e.what());
  }
}

inline Json table_entry_json(const TableEntry& e) {
  Json j{{"steps", e.steps},
         {"theta_over_pi", Json::array({e.theta_over_pi.num, e.theta_over_pi.den})},
         {"omega_over_pi", Json::array({e.omega_over_pi.num, e.omega_over_pi.den})},
         {"complete", e.complete}};
  return j;
}

inline Json diff_json(const TableDiff& d, const RevivalTable& table) {
  Json missing = Json::array(), extra = Json::array(), mis = Json::array(), rev = Json::array();
  for (const auto& e : d.missing) missing.push_back(table_entry_json(e));
  for (const auto& c : d.extra) extra.push_back(candidate_json(c));
  for (const auto& m : d.misclassified) {
    Json j = table_entry_json(m.expected);
    j.erase("complete");
    j["expected_complete"] = m.expected.complete;
    j["found_complete"] = m.found.complete;
    j["omega"] = m.found.omega;
    mis.push_back(j);
  }
  for (const auto& e : d.reviewed) rev.push_back(table_entry_json(e));
  return Json{{"format", "qwrevival.table_diff"},
              {"table_version", table.version},
              {"pass", d.empty()},
              {"missing", missing},
              {"extra", extra},
              {"misclassified", mis},
              {"reviewed_additions_matched", rev}};
}

inline Json noise_json(const WalkSchedule& s, const std::vector<NoisePoint>& pts,
                       const std::optional<std::pair<double, VisibilityFit>>& fit) {
  Json rows = Json::array();
  for (const auto& p : pts) {
    Json r{{"visibility", p.visibility}, {"p0", p.p0}, {"overlap_initial", p.overlap_initial}};
    r["overlap_predicted"] = p.overlap_predicted ? Json(*p.overlap_predicted) : Json(nullptr);
    rows.push_back(r);
  }
  Json j{{"format", "qwrevival.noise_sweep"},
         {"version", 1},
         {"schedule", schedule_json(s)},
         {"sweep", rows}};
  if (fit) {
    j["bisection"] = Json{{"target_p0", fit->first},
                          {"visibility", fit->second.visibility},
                          {"p0", fit->second.p0},
                          {"iterations", fit->second.iterations}};
  }
  return j;
}

// visibility,p0,overlap_initial,overlap_predicted
inline std::string noise_csv(const std::vector<NoisePoint>& pts) {
  std::string out = "visibility,p0,overlap_initial,overlap_predicted\n";
  for (const auto& p : pts) {
    out += format_double(p.visibility) + ',' + format_double(p.p0) + ',' +
           format_double(p.overlap_initial) + ',' +
           (p.overlap_predicted ? format_double(*p.overlap_predicted) : std::string{}) + '\n';
  }
  return out;
}

}  // namespace qwr
