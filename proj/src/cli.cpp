#include "lcc/cli.hpp"

#include "lcc/allocation.hpp"
#include "lcc/config.hpp"
#include "lcc/delivery.hpp"
#include "lcc/env_model.hpp"
#include "lcc/error.hpp"
#include "lcc/evaluation.hpp"
#include "lcc/experiments.hpp"
#include "lcc/placement.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

namespace lcc::cli {

namespace {

struct Options {
  std::string config_path;
  std::string config_b_path;
  std::vector<std::string> settings;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<int> threads;
  std::optional<std::string> out;
  std::optional<std::string> realization;
  std::optional<double> deadline;
  std::string dump_plan;
};

CliConfig load(const std::string& path, const Options& opt) {
  CliConfig cfg = path.empty() ? CliConfig{} : load_config_file(path);
  for (const auto& s : opt.settings) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(s, "--set expects key=value");
    apply_setting(cfg, s.substr(0, eq), s.substr(eq + 1));
  }
  if (opt.seed) cfg.seed = *opt.seed;
  if (opt.trials) cfg.trials = *opt.trials;
  if (opt.threads) cfg.threads = *opt.threads;
  if (opt.out) cfg.out_dir = *opt.out;
  if (opt.realization) apply_setting(cfg, "realization", *opt.realization);
  if (opt.deadline) cfg.deadline_s = *opt.deadline;
  return cfg;
}

UserRealization realization_of(const CliConfig& cfg, int num_states) {
  if (cfg.realization.empty()) throw ConfigError("realization", "required");
  if (static_cast<int>(cfg.realization.size()) != cfg.K)
    throw ConfigError("realization", fmt::format("lists {} users but K = {}",
                                                 cfg.realization.size(), cfg.K));
  UserRealization r;
  for (int s : cfg.realization) {
    if (s < 1 || s > num_states)
      throw ConfigError("realization", fmt::format("state {} outside [1, {}]", s, num_states));
    r.states.push_back(s - 1);
  }
  return r;
}

/// Writes to <out_dir>/<name> when an output directory is configured, else to `out`.
void emit(const CliConfig& cfg, std::ostream& out, const std::string& name,
          const std::function<void(std::ostream&)>& body) {
  if (cfg.out_dir.empty()) {
    body(out);
    return;
  }
  std::filesystem::create_directories(cfg.out_dir);
  const auto path = std::filesystem::path(cfg.out_dir) / name;
  std::ofstream f(path);
  if (!f) throw ConfigError("out_dir", fmt::format("cannot write '{}'", path.string()));
  body(f);
}

MemoryAllocation<double> allocation_of(const CliConfig& cfg, const VectorXd& rates) {
  return allocate_memory(rates, require_M(cfg), cfg.K);
}

int cmd_rates(const CliConfig& cfg, std::ostream& out) {
  const auto grid = cfg.rates ? grid_from_rates(config_rates(cfg)) : build_grid(cfg.room);
  emit(cfg, out, "rates.csv", [&](std::ostream& os) { write_grid_csv(os, grid); });
  return 0;
}

int cmd_allocate(const CliConfig& cfg, std::ostream& out) {
  const auto rates = config_rates(cfg);
  const auto alloc = allocation_of(cfg, rates);
  emit(cfg, out, "allocation.csv",
       [&](std::ostream& os) { write_allocation_csv(os, rates, alloc); });
  return 0;
}

int cmd_place(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto rates = config_rates(cfg);
  const auto placement = place_cache(allocation_of(cfg, rates), cfg.K);
  for (const auto& w : placement.warnings()) err << "warning: " << w << '\n';
  emit(cfg, out, "placement.txt",
       [&](std::ostream& os) { write_placement_dump(os, placement); });
  return 0;
}

int cmd_deliver(const CliConfig& cfg, const Options& opt, std::ostream& out,
                std::ostream& err) {
  const auto rates = config_rates(cfg);
  const auto placement = place_cache(allocation_of(cfg, rates), cfg.K);
  for (const auto& w : placement.warnings()) err << "warning: " << w << '\n';
  const auto users = realization_of(cfg, static_cast<int>(rates.size()));
  const auto plan = build_delivery_plan(placement, users, rates);
  const auto report = certify_plan(placement, users, plan);

  if (!opt.dump_plan.empty()) {
    std::ofstream f(opt.dump_plan);
    if (!f) throw ConfigError("dump-plan", fmt::format("cannot write '{}'", opt.dump_plan));
    write_plan_dump(f, plan);
  } else {
    emit(cfg, out, "plan.txt", [&](std::ostream& os) { write_plan_dump(os, plan); });
  }
  out << fmt::format("t_hat={} codewords={} unicast_legs={} total_time={:.12g}\n", plan.t_hat,
                     plan.codewords.size(), plan.unicast_legs.size(), plan.total_time);
  write_certification(out, report);
  return report.passed() ? 0 : 2;
}

int cmd_evaluate(const CliConfig& cfg, std::ostream& out) {
  const auto rates = config_rates(cfg);
  const double M = require_M(cfg);
  const auto alloc = allocation_of(cfg, rates);
  const auto users = realization_of(cfg, static_cast<int>(rates.size()));
  const auto result = evaluate(rates, alloc, M, users);
  emit(cfg, out, "evaluation.csv",
       [&](std::ostream& os) { write_evaluation_csv(os, result); });
  return 0;
}

int cmd_sweep(const CliConfig& cfg, std::ostream& out) {
  const auto report = run_sweep(to_sweep_config(cfg));
  emit(cfg, out, "sweep.csv", [&](std::ostream& os) { write_sweep_csv(os, report); });
  if (!cfg.out_dir.empty()) {
    emit(cfg, out, "sweep.meta", [&](std::ostream& os) { write_sweep_metadata(os, report); });
    emit(cfg, out, "sweep_baseline.csv",
         [&](std::ostream& os) { write_baseline_sensitivity_csv(os, report); });
  }
  return 0;
}

int cmd_crossover(const CliConfig& a, const CliConfig& b, std::ostream& out) {
  const auto table = crossover_report(to_sweep_config(a), to_sweep_config(b));
  emit(a, out, "crossover.csv", [&](std::ostream& os) { write_crossover_csv(os, table); });
  return 0;
}

int cmd_maxfile(const CliConfig& cfg, std::ostream& out) {
  if (!cfg.deadline_s) throw ConfigError("deadline_s", "required");
  const double M = require_M(cfg);
  const auto r = max_file_size(*cfg.deadline_s, cfg.room, M);
  emit(cfg, out, "maxfile.csv", [&](std::ostream& os) {
    os << "deadline_s,M,S,max_file_bits,closed_form_bits,full_support\n";
    os << fmt::format("{:.12g},{:.12g},{},{:.12g},{},{}\n", *cfg.deadline_s, M,
                      cfg.room.num_states(), r.bits,
                      r.full_support ? fmt::format("{:.12g}", r.closed_form_bits) : "nan",
                      r.full_support ? 1 : 0);
  });
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Location-dependent coded caching planner and simulator", "lcc"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", opt.config_path, "key=value config file");
    sub->add_option("--set", opt.settings, "override a config key (key=value)");
    sub->add_option("--seed", opt.seed, "base seed");
    sub->add_option("--trials", opt.trials, "Monte Carlo trials per sweep point");
    sub->add_option("--threads", opt.threads, "worker threads for sweeps");
    sub->add_option("--out", opt.out, "output directory");
  };
  auto* rates = app.add_subcommand("rates", "per-state worst-case distance and rate CSV");
  auto* allocate = app.add_subcommand("allocate", "min-max memory allocation CSV");
  auto* place = app.add_subcommand("place", "cache placement dump");
  auto* deliver = app.add_subcommand("deliver", "delivery plan and certification");
  auto* evaluate_cmd = app.add_subcommand("evaluate", "T_m, T_u, T_x and bound for one realization");
  auto* sweep = app.add_subcommand("sweep", "Monte Carlo sweep over K or M");
  auto* crossover = app.add_subcommand("crossover", "proposed vs baseline over two rooms");
  auto* maxfile = app.add_subcommand("maxfile", "largest file size meeting a deadline");
  for (auto* sub : {rates, allocate, place, deliver, evaluate_cmd, sweep, crossover, maxfile})
    add_common(sub);
  for (auto* sub : {deliver, evaluate_cmd})
    sub->add_option("--realization", opt.realization, "1-based state of each user, e.g. 1,2,4,5");
  deliver->add_option("--dump-plan", opt.dump_plan, "write the plan dump to this file");
  crossover->add_option("--config-b", opt.config_b_path, "config of the second room")->required();
  maxfile->add_option("--deadline", opt.deadline, "deadline in seconds");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    const CliConfig cfg = load(opt.config_path, opt);
    if (rates->parsed()) return cmd_rates(cfg, out);
    if (allocate->parsed()) return cmd_allocate(cfg, out);
    if (place->parsed()) return cmd_place(cfg, out, err);
    if (deliver->parsed()) return cmd_deliver(cfg, opt, out, err);
    if (evaluate_cmd->parsed()) return cmd_evaluate(cfg, out);
    if (sweep->parsed()) return cmd_sweep(cfg, out);
    if (crossover->parsed()) return cmd_crossover(cfg, load(opt.config_b_path, opt), out);
    if (maxfile->parsed()) return cmd_maxfile(cfg, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  err << app.help();
  return 1;
}

}  // namespace lcc::cli
