// qwalk: command-line front end for the ramped-coin quantum walk library.
//
// Exit codes: 0 success, 1 verification mismatch, 2 usage error, 3 I/O error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qwrevival/analysis.hpp"
#include "qwrevival/io.hpp"
#include "qwrevival/noise.hpp"
#include "qwrevival/revival_search.hpp"
#include "qwrevival/revival_table.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw IoError("failed writing to standard output");
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  out.close();
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::string read_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

qwr::StepConvention parse_convention(const std::string& s) {
  if (s == "one") return qwr::StepConvention::OneBased;
  if (s == "zero") return qwr::StepConvention::ZeroBased;
  throw std::invalid_argument("convention must be 'one' or 'zero'");
}

qwr::CoinVector parse_coin(const std::string& s) {
  if (s == "symmetric") return qwr::CoinVector::symmetric();
  if (s == "H" || s == "plus") return {1.0, 0.0};
  if (s == "V" || s == "minus") return {0.0, 1.0};
  // plus_re,plus_im,minus_re,minus_im
  const auto parts = qwr::split_list(s);
  if (parts.size() != 4) {
    throw std::invalid_argument("coin must be symmetric, H, V or four comma-separated reals");
  }
  double v[4];
  for (int i = 0; i < 4; ++i) v[i] = qwr::detail::parse_number(parts[static_cast<std::size_t>(i)]);
  return qwr::CoinVector{{v[0], v[1]}, {v[2], v[3]}}.normalized();
}

struct ScheduleArgs {
  std::string theta = "0";
  std::string omega = "0";
  int steps = 8;
  std::string convention = "one";
  bool radians = false;

  void add_to(CLI::App* app, bool steps_required) {
    app->add_option("--theta", theta, "constant coin bias (multiple of pi, e.g. 1/4)");
    app->add_option("--omega", omega, "ramp frequency per step (multiple of pi, e.g. 1/8)");
    auto* opt = app->add_option("--steps,-T", steps, "number of steps T");
    if (steps_required) opt->required();
    app->add_option("--convention", convention, "step indexing: one (t=1..T) or zero (t=0..T-1)")
        ->check(CLI::IsMember({"one", "zero"}));
    app->add_flag("--radians", radians, "read angles as radians instead of multiples of pi");
  }

  qwr::WalkSchedule build(double visibility) const {
    qwr::WalkSchedule s;
    s.theta = qwr::parse_angle(theta, radians);
    s.omega = qwr::parse_angle(omega, radians);
    s.steps = steps;
    s.convention = parse_convention(convention);
    s.visibility = visibility;
    s.validate();
    return s;
  }
};

int run(int argc, char** argv) {
  CLI::App app{"Ramped-coin discrete quantum walk: revivals, effective coins and noise"};
  app.require_subcommand(1);

  // walk
  ScheduleArgs walk_args;
  double walk_visibility = 1.0;
  std::string walk_coin = "symmetric";
  std::string walk_format = "json";
  std::string walk_out;
  auto* walk = app.add_subcommand("walk", "run one walk and write per-step distributions");
  walk_args.add_to(walk, true);
  walk->add_option("--visibility,-v", walk_visibility, "per-step interference visibility");
  walk->add_option("--coin", walk_coin, "initial coin: symmetric, H, V or re,im,re,im");
  walk->add_option("--format", walk_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  walk->add_option("--out,-o", walk_out, "output file (default stdout)");

  // search
  std::string search_T = "2,4,6,8";
  std::string search_theta = "0,1/4";
  std::string search_omega_min = "0";
  std::string search_omega_max = "1/2";
  bool search_radians = false;
  std::string search_convention = "one";
  qwr::SearchConfig search_cfg;
  std::string search_out;
  auto* search = app.add_subcommand("search", "scan omega for revivals and classify them");
  search->add_option("--T", search_T, "comma-separated even step counts");
  search->add_option("--theta", search_theta, "comma-separated theta values (multiples of pi)");
  search->add_option("--omega-min", search_omega_min, "lower end of the omega scan");
  search->add_option("--omega-max", search_omega_max, "upper end of the omega scan");
  search->add_option("--grid", search_cfg.omega_count, "omega grid points");
  search->add_option("--refine-tol", search_cfg.refine_tol, "accepted residual 1 - p0(T)");
  search->add_option("--max-denominator", search_cfg.rational_max_denominator,
                     "largest denominator when rationalizing omega/pi");
  search->add_option("--complete-tol", search_cfg.completeness_tol,
                     "tolerance for C(T) = 1 up to phase");
  search->add_option("--workers", search_cfg.workers, "worker threads (0: all cores)");
  search->add_option("--convention", search_convention, "step indexing: one or zero")
      ->check(CLI::IsMember({"one", "zero"}));
  search->add_flag("--radians", search_radians, "read angles as radians");
  search->add_option("--out,-o", search_out, "candidates file (default stdout)");

  // verify-table
  std::string verify_candidates;
  std::string verify_table_path;
  std::string verify_out;
  auto* verify = app.add_subcommand("verify-table", "diff scan output against the revival table");
  verify->add_option("candidates,--candidates", verify_candidates, "candidates JSON file")
      ->required();
  verify->add_option("--table", verify_table_path, "alternative reference table JSON");
  verify->add_option("--out,-o", verify_out, "diff file (default stdout)");

  // noise-sweep
  ScheduleArgs noise_args;
  std::string noise_visibilities = "1,0.996,0.99,0.95,0.9";
  std::optional<double> noise_target;
  std::string noise_coin = "symmetric";
  std::string noise_format = "json";
  std::string noise_out;
  auto* noise = app.add_subcommand("noise-sweep", "origin probability and overlap versus visibility");
  noise_args.add_to(noise, false);
  noise->add_option("--visibility,-v", noise_visibilities, "comma-separated visibilities");
  noise->add_option("--target", noise_target, "bisect for the visibility giving this p0(T)");
  noise->add_option("--coin", noise_coin, "initial coin: symmetric, H, V or re,im,re,im");
  noise->add_option("--format", noise_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  noise->add_option("--out,-o", noise_out, "output file (default stdout)");

  // effective-coin
  ScheduleArgs coin_args;
  std::string coin_out;
  auto* eff = app.add_subcommand("effective-coin", "print C(T) by both constructions");
  coin_args.add_to(eff, false);
  eff->add_option("--out,-o", coin_out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*walk) {
      const auto schedule = walk_args.build(walk_visibility);
      const auto rec = qwr::run_walk(schedule, parse_coin(walk_coin));
      write_output(walk_out, walk_format == "csv" ? qwr::walk_csv(rec)
                                                  : qwr::dump_json(qwr::walk_json(rec)));
      return kExitOk;
    }

    if (*search) {
      search_cfg.steps_values.clear();
      for (const auto& t : qwr::split_list(search_T)) {
        search_cfg.steps_values.push_back(static_cast<int>(qwr::detail::parse_number(t)));
        if (search_cfg.steps_values.back() != qwr::detail::parse_number(t)) {
          throw std::invalid_argument("step counts must be integers");
        }
      }
      search_cfg.theta_values.clear();
      for (const auto& th : qwr::split_list(search_theta)) {
        search_cfg.theta_values.push_back(qwr::parse_angle(th, search_radians));
      }
      search_cfg.omega_min = qwr::parse_angle(search_omega_min, search_radians);
      search_cfg.omega_max = qwr::parse_angle(search_omega_max, search_radians);
      search_cfg.convention = parse_convention(search_convention);
      const auto found = qwr::scan(search_cfg);
      write_output(search_out, qwr::dump_json(qwr::candidates_json(found)));
      return kExitOk;
    }

    if (*verify) {
      std::vector<qwr::RevivalCandidate> candidates;
      qwr::RevivalTable table;
      try {
        candidates = qwr::parse_candidates(read_input(verify_candidates));
        table = verify_table_path.empty()
                    ? qwr::builtin_revival_table()
                    : qwr::parse_revival_table(read_input(verify_table_path));
      } catch (const std::exception& e) {
        std::cerr << "qwalk verify-table: " << e.what() << "\n";
        return kExitUsage;
      }
      const auto diff = qwr::verify_table(candidates, table);
      write_output(verify_out, qwr::dump_json(qwr::diff_json(diff, table)));
      if (!diff.empty()) {
        std::cerr << "qwalk verify-table: " << diff.missing.size() << " missing, "
                  << diff.extra.size() << " extra, " << diff.misclassified.size()
                  << " misclassified\n";
        return kExitMismatch;
      }
      return kExitOk;
    }

    if (*noise) {
      const auto schedule = noise_args.build(1.0);
      std::vector<double> vs;
      for (const auto& v : qwr::split_list(noise_visibilities)) {
        vs.push_back(qwr::detail::parse_number(v));
        if (!(vs.back() >= 0.0 && vs.back() <= 1.0)) {
          throw std::invalid_argument("visibilities must lie in [0, 1]");
        }
      }
      const auto coin = parse_coin(noise_coin);
      const auto pts = qwr::noise_sweep(schedule, coin, vs);
      std::optional<std::pair<double, qwr::VisibilityFit>> fit;
      if (noise_target) fit.emplace(*noise_target, qwr::fit_visibility(schedule, coin, *noise_target));
      write_output(noise_out, noise_format == "csv"
                                  ? qwr::noise_csv(pts)
                                  : qwr::dump_json(qwr::noise_json(schedule, pts, fit)));
      return kExitOk;
    }

    if (*eff) {
      const auto schedule = coin_args.build(1.0);
      const auto strings = qwr::effective_coin_balanced_strings(schedule);
      const auto block = qwr::effective_coin_from_operator(schedule);
      const double defect = qwr::revival_defect(schedule);
      const qwr::Json j{
          {"format", "qwrevival.effective_coin"},
          {"schedule", qwr::schedule_json(schedule)},
          {"balanced_strings", qwr::coin_matrix_json(strings.matrix())},
          {"from_operator", qwr::coin_matrix_json(block.matrix())},
          {"difference_max", qwr::max_abs_diff(strings, block)},
          {"unitarity_defect", strings.unitarity_defect()},
          {"revival_defect", defect},
          {"revival", defect <= 1e-8},
          {"complete", defect <= 1e-8 && qwr::equal_up_to_global_phase(
                                             block, qwr::CoinOperator::identity(), 1e-8)}};
      write_output(coin_out, qwr::dump_json(j));
      return kExitOk;
    }
  } catch (const IoError& e) {
    std::cerr << "qwalk: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "qwalk: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
