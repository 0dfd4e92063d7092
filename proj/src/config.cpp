#include "lcc/config.hpp"

#include "lcc/error.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <sstream>

namespace lcc {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(std::string_view key, std::string_view text) {
  text = trim(text);
  double v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    throw ConfigError(std::string(key), fmt::format("'{}' is not a number", text));
  return v;
}

template <class Int>
Int parse_int(std::string_view key, std::string_view text) {
  text = trim(text);
  Int v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    throw ConfigError(std::string(key), fmt::format("'{}' is not an integer", text));
  return v;
}

template <class T, class F>
std::vector<T> parse_list(std::string_view key, std::string_view text, F&& parse_one) {
  std::vector<T> out;
  text = trim(text);
  if (text.empty()) throw ConfigError(std::string(key), "list must not be empty");
  std::size_t pos = 0;
  while (true) {
    const auto comma = text.find(',', pos);
    out.push_back(parse_one(key, text.substr(pos, comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

void apply_setting(CliConfig& cfg, std::string_view key_in, std::string_view value) {
  const std::string key(trim(key_in));
  auto& room = cfg.room;
  if (key == "width_m") room.width_m = parse_double(key, value);
  else if (key == "depth_m") room.depth_m = parse_double(key, value);
  else if (key == "tx_height_m") room.tx_height_m = parse_double(key, value);
  else if (key == "grid_side") room.grid_side = parse_int<int>(key, value);
  else if (key == "tx_power_db") room.tx_power = db_to_linear(parse_double(key, value));
  else if (key == "tx_power") room.tx_power = parse_double(key, value);
  else if (key == "noise_power") room.noise_power = parse_double(key, value);
  else if (key == "pathloss_exp") room.pathloss_exp = parse_double(key, value);
  else if (key == "bandwidth_hz") room.bandwidth_hz = parse_double(key, value);
  else if (key == "file_bits") room.file_bits = parse_double(key, value);
  else if (key == "M") cfg.M = parse_double(key, value);
  else if (key == "K") cfg.K = parse_int<int>(key, value);
  else if (key == "rates") cfg.rates = parse_list<double>(key, value, parse_double);
  else if (key == "seed") cfg.seed = parse_int<std::uint64_t>(key, value);
  else if (key == "trials") cfg.trials = parse_int<int>(key, value);
  else if (key == "threads") cfg.threads = parse_int<int>(key, value);
  else if (key == "out_dir") cfg.out_dir = std::string(trim(value));
  else if (key == "sweep_variable") {
    const auto v = trim(value);
    if (v == "K") cfg.sweep_variable = SweepVariable::K;
    else if (v == "M") cfg.sweep_variable = SweepVariable::M;
    else throw ConfigError(key, "must be K or M");
  } else if (key == "sweep_values") {
    cfg.sweep_values = parse_list<double>(key, value, parse_double);
  } else if (key == "realization") {
    cfg.realization = parse_list<int>(key, value, parse_int<int>);
  } else if (key == "deadline_s") {
    cfg.deadline_s = parse_double(key, value);
  } else {
    throw ConfigError(key, "unknown key");
  }
}

CliConfig parse_config_text(std::string_view text, CliConfig cfg) {
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(fmt::format("line {}", line_no), "expected key=value");
    apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
  }
  return cfg;
}

CliConfig load_config_file(const std::string& path, CliConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", fmt::format("cannot open '{}'", path));
  std::ostringstream body;
  body << in.rdbuf();
  return parse_config_text(body.str(), std::move(base));
}

VectorXd config_rates(const CliConfig& cfg) {
  if (cfg.rates) {
    const VectorXd r = Eigen::Map<const VectorXd>(cfg.rates->data(),
                                                  static_cast<Eigen::Index>(cfg.rates->size()));
    return grid_from_rates(r).rate;
  }
  return build_grid(cfg.room).rate;
}

double require_M(const CliConfig& cfg) {
  if (!cfg.M) throw ConfigError("M", "required");
  return *cfg.M;
}

SweepConfig to_sweep_config(const CliConfig& cfg) {
  SweepConfig s;
  s.room = cfg.room;
  if (cfg.rates)
    s.rates = Eigen::Map<const VectorXd>(cfg.rates->data(),
                                         static_cast<Eigen::Index>(cfg.rates->size()));
  if (!cfg.sweep_variable) throw ConfigError("sweep_variable", "required");
  s.variable = *cfg.sweep_variable;
  s.values = cfg.sweep_values;
  s.fixed_K = cfg.K;
  if (s.variable == SweepVariable::K) s.fixed_M = require_M(cfg);
  else s.fixed_M = cfg.M.value_or(0.0);
  s.trials = cfg.trials;
  s.base_seed = cfg.seed;
  s.threads = cfg.threads;
  validate(s);
  return s;
}

}  // namespace lcc
