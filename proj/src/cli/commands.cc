#include "distill/cli.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>

#include "CLI11.hpp"
#include "json.hpp"

#include "distill/errors.h"
#include "distill/fidelity_analysis.h"
#include "distill/monte_carlo.h"
#include "distill/noise_model.h"
#include "distill/quantum_oracle.h"
#include "distill/table.h"
#include "distill/walk_engine.h"
#include "distill/werner.h"

namespace distill::cli {
namespace {

using json = nlohmann::ordered_json;

struct Common {
  std::string format;  // empty: json for reports, csv for tables
  std::string out_path;
  double tail = 1e-12;
  long t_max = 1'000'000;

  HaltingOptions halting() const { return {tail, t_max}; }
};

struct WalkParams {
  std::string protocol = "both";
  double epsilon = 0.0;
  std::optional<int> delta_h;
  std::optional<double> target_fidelity;

  WalkSpec spec(Protocol p) const {
    const DephasingChannel channel(epsilon);
    if (target_fidelity) return WalkSpec::for_target(channel, *target_fidelity, p);
    if (!delta_h) throw DomainError("one of --delta-h or --target-fidelity is required");
    return WalkSpec(channel, *delta_h, p);
  }

  std::vector<Protocol> protocols() const {
    if (protocol == "both") return {Protocol::kNps, Protocol::kPs};
    return {parse_protocol(protocol)};
  }
};

void add_common(CLI::App* cmd, Common& common) {
  cmd->add_option("--format", common.format, "Output format (csv or json)")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", common.out_path, "Write output to PATH instead of stdout")
      ->type_name("PATH");
  cmd->add_option("--tail", common.tail, "Truncate halting distributions below this mass")
      ->capture_default_str();
  cmd->add_option("--t-max", common.t_max, "Hard cap on rounds")->capture_default_str();
}

void add_walk_params(CLI::App* cmd, WalkParams& walk, bool allow_both) {
  auto* protocol = cmd->add_option("--protocol", walk.protocol, "Protocol");
  if (allow_both) {
    protocol->check(CLI::IsMember({"nps", "ps", "both"}))->capture_default_str();
  } else {
    walk.protocol = "nps";
    protocol->check(CLI::IsMember({"nps", "ps"}))->capture_default_str();
  }
  cmd->add_option("--epsilon", walk.epsilon, "Phase error rate of the raw pairs")->required();
  auto* dh = cmd->add_option("--delta-h", walk.delta_h, "Halting magnitude");
  auto* ft = cmd->add_option("--target-fidelity", walk.target_fidelity,
                             "Derive the halting magnitude from a target fidelity");
  dh->excludes(ft);
  ft->excludes(dh);
}

json cell_to_json(const std::string& cell) {
  if (cell == "true") return true;
  if (cell == "false") return false;
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (!cell.empty() && end == cell.c_str() + cell.size()) {
    if (std::floor(v) == v && cell.find_first_of(".eE") == std::string::npos) {
      return static_cast<long long>(v);
    }
    return v;
  }
  return cell;
}

json table_to_json(const Table& table) {
  json rows = json::array();
  for (const auto& row : table.rows) {
    json obj = json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[table.columns[i]] = cell_to_json(row[i]);
    rows.push_back(std::move(obj));
  }
  json doc = {{"rows", std::move(rows)}};
  if (!table.comments.empty()) doc["notes"] = table.comments;
  return doc;
}

Table report_to_table(const json& report, const std::string& prefix = "") {
  Table t;
  t.columns = {"key", "value"};
  std::function<void(const json&, const std::string&)> flatten = [&](const json& j,
                                                                     const std::string& key) {
    if (j.is_object()) {
      for (auto it = j.begin(); it != j.end(); ++it) {
        flatten(it.value(), key.empty() ? it.key() : key + "." + it.key());
      }
    } else if (j.is_array()) {
      for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], key + "." + std::to_string(i));
    } else if (j.is_number_float()) {
      t.add_row({key, format_number(j.get<double>())});
    } else if (j.is_string()) {
      t.add_row({key, j.get<std::string>()});
    } else {
      t.add_row({key, j.dump()});
    }
  };
  flatten(report, prefix);
  return t;
}

void emit(const Common& common, const Table* table, const json* report, std::ostream& out) {
  std::ostringstream buffer;
  const std::string format = common.format.empty() ? (report ? "json" : "csv") : common.format;
  if (format == "json") {
    buffer << (report ? *report : table_to_json(*table)).dump(2) << '\n';
  } else {
    write_csv(report ? report_to_table(*report) : *table, buffer);
  }
  if (common.out_path.empty()) {
    out << buffer.str();
    return;
  }
  std::ofstream file(common.out_path, std::ios::binary);
  if (!file) throw DomainError("cannot open output file " + common.out_path);
  file << buffer.str();
}

std::string fmt(double v) { return format_number(v); }
std::string fmt(long v) { return format_number(v); }

// --- walk / yield ---------------------------------------------------------

Table walk_table(const WalkParams& params, const Common& common) {
  std::vector<HaltingDistribution> dists;
  for (Protocol p : params.protocols()) {
    dists.push_back(halting_distribution(params.spec(p), common.halting()));
  }
  Table t;
  t.columns = {"T"};
  for (const auto& d : dists) {
    const std::string name(protocol_name(d.spec.protocol()));
    t.columns.push_back("p_halt_" + name);
    t.columns.push_back("p_cumulative_" + name);
  }
  long last = 0;
  for (const auto& d : dists) last = std::max(last, d.last_round());
  for (long round = 1; round <= last; ++round) {
    bool any = false;
    for (const auto& d : dists) any = any || d.mass_at(round) > 0.0;
    if (!any) continue;
    std::vector<std::string> row{fmt(round)};
    for (const auto& d : dists) {
      row.push_back(fmt(d.mass_at(round)));
      row.push_back(fmt(d.cumulative_at(round)));
    }
    t.add_row(std::move(row));
  }
  for (const auto& d : dists) {
    const double mean = expected_rounds(d.spec, common.halting());
    std::ostringstream c;
    c << protocol_name(d.spec.protocol()) << " delta_h=" << d.spec.delta_h()
      << " mean_rounds=" << fmt(mean) << " yield=" << fmt(1.0 / mean)
      << " tail=" << fmt(d.tail_bound);
    t.comments.push_back(c.str());
  }
  return t;
}

Table yield_table(const WalkParams& params, const Common& common) {
  Table t;
  t.columns = {"protocol",        "epsilon",           "delta_h", "mean_rounds_sum",
               "mean_rounds_solve", "yield"};
  for (Protocol p : params.protocols()) {
    const WalkSpec spec = params.spec(p);
    const RoundsEstimate both = expected_rounds_both(spec, common.halting());
    const double mean = expected_rounds(spec, common.halting());
    t.add_row({std::string(protocol_name(p)), fmt(params.epsilon), fmt(long{spec.delta_h()}),
               fmt(both.by_summation), fmt(both.by_linear_solve), fmt(1.0 / mean)});
  }
  return t;
}

// --- ef -------------------------------------------------------------------

struct EfParams {
  std::optional<double> epsilon;
  std::string grid;
  std::vector<double> etas;
  std::optional<int> delta_h;
  bool optimize = false;
  int delta_max = 64;
};

std::vector<double> parse_grid(const std::string& text) {
  // lo:hi:count, inclusive of both ends.
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() != 3) throw DomainError("--grid expects lo:hi:count");
  const double lo = std::stod(parts[0]);
  const double hi = std::stod(parts[1]);
  const int count = std::stoi(parts[2]);
  if (count < 1) throw DomainError("--grid count must be >= 1");
  std::vector<double> grid;
  for (int i = 0; i < count; ++i) {
    grid.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
  }
  return grid;
}

Table ef_table(const EfParams& params, const Common& common) {
  if (params.epsilon.has_value() == !params.grid.empty()) {
    throw DomainError("exactly one of --epsilon or --grid is required");
  }
  if (params.delta_h.has_value() == params.optimize) {
    throw DomainError("exactly one of --delta-h or --optimize is required");
  }
  const std::vector<double> epsilons =
      params.epsilon ? std::vector<double>{*params.epsilon} : parse_grid(params.grid);

  Table t;
  t.columns = {"epsilon",     "eta",        "delta_h", "expected_fidelity",
               "infidelity",  "mean_rounds", "clamp",  "window_edge"};
  auto add = [&](double eps, const OptimalHalting& best) {
    const FidelityReport& r = best.report;
    t.add_row({fmt(eps), fmt(r.eta), fmt(long{best.delta_h}), fmt(r.expected_fidelity),
               fmt(r.expected_infidelity), fmt(r.mean_rounds), r.clamp_activated ? "true" : "false",
               best.at_window_edge ? "true" : "false"});
  };
  for (double eta : params.etas) {
    const LocalErrorModel model(eta);
    if (params.optimize) {
      for (const InfidelityRow& row :
           infidelity_curve(epsilons, model, params.delta_max, common.halting())) {
        if (row.optimum) {
          add(row.epsilon, *row.optimum);
          if (row.optimum->at_window_edge) {
            t.comments.push_back("warning: optimum at delta_max for epsilon=" + fmt(row.epsilon) +
                                 " eta=" + fmt(eta));
          }
        } else {
          t.comments.push_back("error at epsilon=" + fmt(row.epsilon) + " eta=" + fmt(eta) +
                               ": " + row.error);
        }
      }
    } else {
      for (double eps : epsilons) {
        const WalkSpec spec(DephasingChannel(eps), *params.delta_h, Protocol::kNps);
        add(eps, OptimalHalting{spec.delta_h(), expected_fidelity(spec, model, common.halting()),
                                false});
      }
    }
  }
  return t;
}

// --- werner / pipeline ----------------------------------------------------

json weights_json(const BellDiagonalState& w) {
  return {{"a", w.a}, {"b", w.b}, {"c", w.c}, {"d", w.d}};
}

json werner_report(double f0, std::optional<int> rounds, std::optional<double> target_xy) {
  if (rounds.has_value() == target_xy.has_value()) {
    throw DomainError("exactly one of --rounds or --target-xy is required");
  }
  const WernerSource source(f0);
  const int n = rounds ? *rounds : rounds_for_target(source, *target_xy);
  const BellDiagonalState w = coefficients_after(source, n);
  json report = {{"f0", f0}, {"n", n}};
  if (target_xy) report["target_xy"] = *target_xy;
  report["coefficients"] = weights_json(w);
  report["normalized"] = weights_json(w.normalized_copy());
  report["residual_xy"] = residual_xy(source, n);
  report["residual_z"] = residual_z(source, n);
  return report;
}

json pipeline_report(double f0, double target_xy, int delta_max, const Common& common) {
  const PipelineReport r = full_pipeline(WernerSource(f0), target_xy, delta_max, common.halting());
  json report = {{"f0", f0},          {"target_xy", target_xy}, {"n", r.n},
                 {"epsilon", r.epsilon}, {"eta", r.eta},         {"noiseless", r.noiseless}};
  report["check_success"] = r.check_success;
  report["raw_pairs_per_dephased_pair"] = r.raw_pairs_per_dephased_pair;
  if (r.noiseless) {
    report["summary"] = "noiseless source, no distillation needed";
    return report;
  }
  const FidelityReport& f = r.optimum->report;
  report["delta_h"] = r.optimum->delta_h;
  report["expected_fidelity"] = f.expected_fidelity;
  report["expected_infidelity"] = f.expected_infidelity;
  report["mean_rounds"] = f.mean_rounds;
  report["window_edge"] = r.optimum->at_window_edge;
  report["raw_pairs_per_distilled_pair"] = r.raw_pairs_per_distilled_pair;
  return report;
}

// --- mc -------------------------------------------------------------------

struct McParams {
  std::uint64_t trials = 100'000;
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

Table mc_table(const WalkParams& walk, const McParams& mc, const Common& common) {
  const WalkSpec spec = walk.spec(parse_protocol(walk.protocol));
  const EmpiricalCurve curve =
      estimate_success_curve(spec, mc.trials, mc.seed, {common.t_max, mc.threads});
  const HaltingDistribution exact = halting_distribution(spec, common.halting());
  Table t;
  t.columns = {"T", "halt_count", "cumulative", "standard_error", "exact_cumulative"};
  for (long round = 1; round <= curve.last_round(); ++round) {
    if (curve.halt_counts[round] == 0) continue;
    t.add_row({fmt(round), std::to_string(curve.halt_counts[round]), fmt(curve.cumulative[round]),
               fmt(curve.standard_error[round]), fmt(exact.cumulative_at(round))});
  }
  t.comments.push_back("trials=" + std::to_string(mc.trials) + " seed=" + std::to_string(mc.seed) +
                       " mean_rounds=" + fmt(curve.mean_rounds) + " mean_rounds_stderr=" +
                       fmt(curve.mean_rounds_standard_error) +
                       " exact_mean_rounds=" + fmt(expected_rounds(spec, common.halting())));
  return t;
}

Table verify_table(const std::vector<VerifyResult>& results) {
  Table t;
  t.columns = {"case", "max_deviation", "tolerance", "status"};
  for (const auto& r : results) {
    t.add_row({r.name, fmt(r.max_deviation), fmt(r.tolerance), r.pass ? "pass" : "FAIL"});
  }
  return t;
}

}  // namespace

// --- verification suites --------------------------------------------------

std::vector<VerifyResult> run_verification(const VerifyOptions& options) {
  static const std::vector<std::string> kCases = {"kink", "parity-map", "werner-step",
                                                  "mc-vs-exact", "dominance"};
  if (options.which != "all" &&
      std::find(kCases.begin(), kCases.end(), options.which) == kCases.end()) {
    throw DomainError("unknown verification case '" + options.which + "'");
  }
  auto wanted = [&](const std::string& name) {
    return options.which == "all" || options.which == name;
  };
  auto epsilons = [&](std::vector<double> fallback) {
    return options.epsilon ? std::vector<double>{*options.epsilon} : fallback;
  };
  std::vector<VerifyResult> results;

  if (wanted("kink")) {
    std::vector<double> grid;
    for (int i = 1; i <= 50; ++i) grid.push_back(0.5 * i / 51.0);
    double worst = 0.0;
    for (double eps : epsilons(grid)) {
      const DephasingChannel ch(eps);
      for (int d = 0; d <= 20; ++d) {
        const double lhs = step_up_probability(ch, d) * (1.0 - step_up_probability(ch, d + 1));
        worst = std::max(worst, std::abs(lhs - kink_probability(ch)));
      }
    }
    results.push_back({"kink", worst, 1e-12, worst < 1e-12});
  }

  if (wanted("parity-map")) {
    double worst = 0.0;
    for (double eps : epsilons({0.05, 0.2, 0.4})) {
      for (int len = 1; len <= 3; ++len) {
        for (int bits = 0; bits < (1 << len); ++bits) {
          std::vector<int> seq;
          for (int i = 0; i < len; ++i) seq.push_back((bits >> i) & 1 ? -1 : +1);
          const ParityMapCheck check = verify_parity_map(eps, seq);
          worst = std::max({worst, check.trace_distance,
                            std::abs(check.sequence_probability - check.walk_probability)});
        }
      }
    }
    results.push_back({"parity-map", worst, 1e-10, worst < 1e-10});
  }

  if (wanted("werner-step")) {
    double worst = 0.0;
    for (double f0 : {0.7, 0.85}) {
      const WernerSource source(f0);
      const DensityOperator raw = werner_state(f0);
      DensityOperator target = raw;
      for (int n = 2; n <= 6; ++n) {
        target = bilateral_distill_step(raw, target).target;
        const BellDiagonalState sim = bell_weights(target);
        const BellDiagonalState closed = coefficients_after(source, n).normalized_copy();
        worst = std::max({worst, std::abs(sim.a - closed.a), std::abs(sim.b - closed.b),
                          std::abs(sim.c - closed.c), std::abs(sim.d - closed.d)});
      }
    }
    results.push_back({"werner-step", worst, 1e-10, worst < 1e-10});
  }

  if (wanted("mc-vs-exact")) {
    const double eps = options.epsilon.value_or(0.2);
    const WalkSpec spec(DephasingChannel(eps), options.delta_h.value_or(3), Protocol::kNps);
    const EmpiricalCurve curve = estimate_success_curve(spec, options.trials, options.seed);
    const HaltingDistribution exact = halting_distribution(spec);
    const double n = static_cast<double>(options.trials);
    double worst = 0.0;  // in standard errors
    for (long t = 1; t <= exact.last_round(); ++t) {
      if (exact.mass_at(t) < 10.0 / n) continue;
      const double p = exact.cumulative_at(t);
      const double sigma = std::sqrt(p * (1.0 - p) / n);
      if (sigma > 0.0) worst = std::max(worst, std::abs(curve.cumulative_at(t) - p) / sigma);
    }
    const double mean_dev = std::abs(curve.mean_rounds - expected_rounds(spec)) /
                            curve.mean_rounds_standard_error;
    worst = std::max(worst, mean_dev);
    results.push_back({"mc-vs-exact", worst, 4.0, worst <= 4.0});
  }

  if (wanted("dominance")) {
    double worst = 0.0;  // largest amount by which PS beats NPS
    for (double eps : epsilons({0.05, 0.2, 0.4})) {
      for (int h = 2; h <= 8; ++h) {
        const WalkSpec nps(DephasingChannel(eps), h, Protocol::kNps);
        const HaltingDistribution a = halting_distribution(nps);
        const HaltingDistribution b = halting_distribution(nps.with_protocol(Protocol::kPs));
        const long last = std::max(a.last_round(), b.last_round());
        for (long t = 0; t <= last; ++t) {
          worst = std::max(worst, b.cumulative_at(t) - a.cumulative_at(t));
        }
        worst = std::max(worst, protocol_yield(nps.with_protocol(Protocol::kPs)) -
                                    protocol_yield(nps));
      }
    }
    results.push_back({"dominance", worst, 1e-12, worst <= 1e-12});
  }
  return results;
}

// --- config file -------------------------------------------------------------

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

// Splices key=value defaults from --config into the argument list, right after
// the subcommand. Keys are option names without dashes; a [name] header limits
// the keys below it to one subcommand. Keys the subcommand does not know, and
// keys already given on the command line, are skipped.
std::vector<std::string> splice_config(const std::vector<std::string>& args, CLI::App& app) {
  std::vector<std::string> rest;
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 == args.size()) throw CLI::ArgumentMismatch("--config", 1, 0);
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (path.empty()) return rest;

  std::ifstream in(path);
  if (!in) throw CLI::FileError::Missing(path);
  auto sub_pos = std::find_if(rest.begin() + std::min<std::size_t>(1, rest.size()), rest.end(),
                              [&](const std::string& a) {
                                return app.get_subcommand_no_throw(a) != nullptr;
                              });
  if (sub_pos == rest.end()) return rest;
  CLI::App* sub = app.get_subcommand(*sub_pos);
  const std::vector<std::string> given(sub_pos + 1, rest.end());

  std::vector<std::string> injected;
  std::string section;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[' && line.back() == ']') {
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw CLI::ConversionError("config line without '=': " + line);
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (!section.empty() && section != sub->get_name()) continue;
    const std::string flag = "--" + key;
    const CLI::Option* opt = sub->get_option_no_throw(flag);
    if (opt == nullptr) continue;
    const bool on_command_line =
        std::any_of(given.begin(), given.end(), [&](const std::string& a) {
          return a == flag || a.rfind(flag + "=", 0) == 0;
        });
    if (on_command_line) continue;
    if (opt->get_type_size() == 0) {
      if (value == "true" || value == "1" || value.empty()) injected.push_back(flag);
    } else {
      injected.push_back(flag);
      injected.push_back(value);
    }
  }
  rest.insert(sub_pos + 1, injected.begin(), injected.end());
  return rest;
}

// --- entry point ----------------------------------------------------------

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact analysis and simulation of non-post-selecting entanglement pumping"};
  app.add_option("--config", "Read key=value defaults from a file")->type_name("PATH");
  app.require_subcommand(1);

  Common common;
  WalkParams walk;
  EfParams ef;
  McParams mc;
  VerifyOptions verify;
  double f0 = 0.0;
  std::optional<int> rounds;
  std::optional<double> target_xy;
  int delta_max = 64;

  auto* walk_cmd = app.add_subcommand("walk", "Halting-time distribution and success curve");
  add_common(walk_cmd, common);
  add_walk_params(walk_cmd, walk, true);

  auto* yield_cmd = app.add_subcommand("yield", "Expected rounds and yield");
  add_common(yield_cmd, common);
  add_walk_params(yield_cmd, walk, true);

  auto* ef_cmd = app.add_subcommand("ef", "Expected fidelity under per-round local errors");
  add_common(ef_cmd, common);
  ef_cmd->add_option("--epsilon", ef.epsilon, "Phase error rate");
  ef_cmd->add_option("--grid", ef.grid, "Epsilon grid lo:hi:count");
  ef_cmd->add_option("--eta", ef.etas, "Per-round local error rate (repeatable)")->required();
  ef_cmd->add_option("--delta-h", ef.delta_h, "Fixed halting magnitude");
  ef_cmd->add_flag("--optimize", ef.optimize, "Choose the halting magnitude maximizing E(F)");
  ef_cmd->add_option("--delta-max", ef.delta_max, "Largest halting magnitude swept")
      ->capture_default_str();

  auto* werner_cmd = app.add_subcommand("werner", "Residual noise after post-selected ZZ checks");
  add_common(werner_cmd, common);
  werner_cmd->add_option("--f0", f0, "Werner fidelity of the raw pairs")->required();
  werner_cmd->add_option("--rounds", rounds, "State label n (n = 1 is the raw pair)");
  werner_cmd->add_option("--target-xy", target_xy, "Largest acceptable X/Y residual");

  auto* pipeline_cmd = app.add_subcommand("pipeline", "Werner pre-processing then pumping");
  add_common(pipeline_cmd, common);
  pipeline_cmd->add_option("--f0", f0, "Werner fidelity of the raw pairs")->required();
  pipeline_cmd->add_option("--target-xy", target_xy, "Largest acceptable X/Y residual")
      ->required();
  pipeline_cmd->add_option("--delta-max", delta_max, "Largest halting magnitude swept")
      ->capture_default_str();

  auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo estimate of the success curve");
  add_common(mc_cmd, common);
  add_walk_params(mc_cmd, walk, false);
  mc_cmd->add_option("--trials", mc.trials, "Number of trajectories")->capture_default_str();
  mc_cmd->add_option("--seed", mc.seed, "Master seed")->capture_default_str();
  mc_cmd->add_option("--threads", mc.threads, "Worker threads (0: all cores)");

  auto* verify_cmd = app.add_subcommand("verify", "Run the invariant suites");
  add_common(verify_cmd, common);
  verify_cmd->add_option("--case", verify.which, "Suite to run")
      ->check(CLI::IsMember({"all", "kink", "parity-map", "werner-step", "mc-vs-exact",
                             "dominance"}))
      ->capture_default_str();
  verify_cmd->add_option("--epsilon", verify.epsilon, "Restrict to one epsilon");
  verify_cmd->add_option("--delta-h", verify.delta_h, "Halting magnitude for mc-vs-exact");
  verify_cmd->add_option("--trials", verify.trials, "Trials for mc-vs-exact")
      ->capture_default_str();
  verify_cmd->add_option("--seed", verify.seed, "Seed for mc-vs-exact")->capture_default_str();

  try {
    const std::vector<std::string> full = splice_config(args, app);
    std::vector<const char*> argv;
    for (const auto& a : full) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }
  try {
    if (walk_cmd->parsed()) {
      const Table t = walk_table(walk, common);
      emit(common, &t, nullptr, out);
    } else if (yield_cmd->parsed()) {
      const Table t = yield_table(walk, common);
      emit(common, &t, nullptr, out);
    } else if (ef_cmd->parsed()) {
      const Table t = ef_table(ef, common);
      for (const auto& c : t.comments) {
        if (c.rfind("warning", 0) == 0) err << c << '\n';
      }
      emit(common, &t, nullptr, out);
    } else if (werner_cmd->parsed()) {
      const json report = werner_report(f0, rounds, target_xy);
      emit(common, nullptr, &report, out);
    } else if (pipeline_cmd->parsed()) {
      const json report = pipeline_report(f0, *target_xy, delta_max, common);
      emit(common, nullptr, &report, out);
    } else if (mc_cmd->parsed()) {
      const Table t = mc_table(walk, mc, common);
      emit(common, &t, nullptr, out);
    } else if (verify_cmd->parsed()) {
      const std::vector<VerifyResult> results = run_verification(verify);
      const Table t = verify_table(results);
      emit(common, &t, nullptr, out);
      const bool ok = std::all_of(results.begin(), results.end(),
                                  [](const VerifyResult& r) { return r.pass; });
      return ok ? kSuccess : kVerificationFailed;
    }
  } catch (const NonConvergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kNonConvergence;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return kNonConvergence;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  return kSuccess;
}

}  // namespace distill::cli
