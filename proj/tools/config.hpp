#ifndef LOGLAP_TOOLS_CONFIG_HPP
#define LOGLAP_TOOLS_CONFIG_HPP

// Run configuration for the loglap tool.  Each subcommand owns a table of
// keys; the same table produces the command line flags, validates JSON
// config files (unknown keys are rejected) and emits the JSON Schema.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace loglap::tool {

using json = nlohmann::ordered_json;

/// Raised for any invalid configuration; maps to exit code 1.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::string config_path;

  std::string function = "gaussian";
  std::vector<double> params;
  int dim = 1;
  std::string dims = "1";
  std::string method = "direct";
  std::string points;
  std::string out;

  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  int max_subdivisions = 2000;
  double tol = 1e-10;
  bool quadrature = false;

  double box_length = 0.0;
  int grid_n = 0;
  double compensation_sigma = 2.0;

  double t0 = 0.2;
  double t_ratio = 0.5;
  int t_count = 8;

  std::vector<double> x;
  double tmin = 1e-3;
  double tmax = 0.2;

  std::vector<double> s = {0.1, 0.05, 0.025};

  double tau = 1.5;
  double t = 1.0;
  std::vector<double> radii = {10, 100, 1000, 10000};

  std::vector<double> ball;
  int cloud = 9;

  std::vector<double> only;
  int seed = 20240607;
};

using FieldRef = std::variant<int RunConfig::*, double RunConfig::*, std::string RunConfig::*, bool RunConfig::*,
                              std::vector<double> RunConfig::*>;

struct KeySpec {
  std::string key;
  FieldRef field;
  std::string help;
  std::vector<std::string> choices{};
};

inline std::string flag_name(const std::string& key) {
  std::string f = "--";
  for (char c : key) f += c == '_' ? '-' : c;
  return f;
}

namespace keys {

inline std::vector<KeySpec> function_keys() {
  return {{"function", &RunConfig::function, "catalog field name",
           {"gaussian", "smooth_bump", "annulus_bump", "log_power", "constant", "zero"}},
          {"params", &RunConfig::params, "catalog field parameters"},
          {"dim", &RunConfig::dim, "space dimension (1, 2 or 3)"}};
}

inline std::vector<KeySpec> quadrature_keys() {
  return {{"abs_tol", &RunConfig::abs_tol, "absolute quadrature tolerance"},
          {"rel_tol", &RunConfig::rel_tol, "relative quadrature tolerance"},
          {"max_subdivisions", &RunConfig::max_subdivisions, "adaptive subdivision cap"}};
}

inline std::vector<KeySpec> grid_keys() {
  return {{"box_length", &RunConfig::box_length, "periodic box side (0: default for dim)"},
          {"grid_n", &RunConfig::grid_n, "points per axis, power of two (0: default for dim)"},
          {"compensation_sigma", &RunConfig::compensation_sigma, "width of the mass-carrying Gaussian (0: off)"}};
}

inline std::vector<KeySpec> height_keys() {
  return {{"t0", &RunConfig::t0, "first height of the extrapolation sequence"},
          {"t_ratio", &RunConfig::t_ratio, "geometric ratio of the height sequence"},
          {"t_count", &RunConfig::t_count, "number of heights"}};
}

inline std::vector<KeySpec> join(std::initializer_list<std::vector<KeySpec>> parts) {
  std::vector<KeySpec> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

}  // namespace keys

inline const std::map<std::string, std::vector<KeySpec>>& command_keys() {
  using namespace keys;
  static const std::map<std::string, std::vector<KeySpec>> table = {
      {"constants",
       {{"dim", &RunConfig::dims, "dimension N or range a..b"},
        {"quadrature", &RunConfig::quadrature, "also compute q_N, q~_N by quadrature"},
        {"tol", &RunConfig::tol, "quadrature tolerance for q_N, q~_N"},
        {"out", &RunConfig::out, "output CSV path"}}},
      {"eval", join({function_keys(),
                     {{"method", &RunConfig::method, "evaluation route", {"direct", "spectral", "extension"}},
                      {"points", &RunConfig::points, "JSON file with evaluation points"},
                      {"out", &RunConfig::out, "output CSV path"}},
                     quadrature_keys(), grid_keys(), height_keys()})},
      {"crosscheck", join({function_keys(),
                           {{"points", &RunConfig::points, "JSON file with points (default: nine built-in points)"},
                            {"out", &RunConfig::out, "output JSON path"}},
                           quadrature_keys(), grid_keys(), height_keys()})},
      {"extension", join({function_keys(),
                          {{"x", &RunConfig::x, "base point"},
                           {"tmin", &RunConfig::tmin, "smallest height"},
                           {"tmax", &RunConfig::tmax, "largest height"},
                           {"out", &RunConfig::out, "output CSV path"}},
                          quadrature_keys(), height_keys()})},
      {"smalls", join({function_keys(),
                       {{"s", &RunConfig::s, "decreasing orders s"}, {"out", &RunConfig::out, "output CSV path"}},
                       grid_keys()})},
      {"energy", join({function_keys(), {{"out", &RunConfig::out, "output JSON path"}}, quadrature_keys(),
                       height_keys()})},
      {"counterexample",
       join({{{"tau", &RunConfig::tau, "log-power exponent in (1,2)"},
              {"dim", &RunConfig::dim, "space dimension (1, 2 or 3)"},
              {"t", &RunConfig::t, "extension height"},
              {"radii", &RunConfig::radii, "increasing radii > 1"},
              {"out", &RunConfig::out, "output CSV path"}},
             quadrature_keys()})},
      {"ucp-probe", join({function_keys(),
                          {{"ball", &RunConfig::ball, "ball center coordinates followed by its radius"},
                           {"cloud", &RunConfig::cloud, "number of probe points"},
                           {"out", &RunConfig::out, "output JSON path"}},
                          quadrature_keys()})},
      {"acceptance", {{"out", &RunConfig::out, "output directory"},
                      {"only", &RunConfig::only, "criterion ids to run (default: all)"},
                      {"seed", &RunConfig::seed, "seed for the sampled harmonicity points"}}},
  };
  return table;
}

/// Registers the flags of `cmd` on `sub`, bound to `cfg`.
inline void add_options(CLI::App& sub, const std::string& cmd, RunConfig& cfg) {
  for (const KeySpec& k : command_keys().at(cmd)) {
    std::visit(
        [&](auto member) {
          using T = std::remove_reference_t<decltype(cfg.*member)>;
          if constexpr (std::is_same_v<T, bool>) {
            sub.add_flag(flag_name(k.key), cfg.*member, k.help);
          } else if constexpr (std::is_same_v<T, std::vector<double>>) {
            sub.add_option(flag_name(k.key), cfg.*member, k.help)->delimiter(',')->expected(0, -1);
          } else {
            auto* opt = sub.add_option(flag_name(k.key), cfg.*member, k.help);
            if (!k.choices.empty()) opt->check(CLI::IsMember(k.choices));
          }
        },
        k.field);
  }
  sub.add_option("--config", cfg.config_path, "JSON configuration file (validated, unknown keys rejected)");
}

namespace detail {

inline void assign(RunConfig& cfg, const KeySpec& k, const json& v) {
  const std::string& key = k.key;
  std::visit(
      [&](auto member) {
        using T = std::remove_reference_t<decltype(cfg.*member)>;
        if constexpr (std::is_same_v<T, bool>) {
          if (!v.is_boolean()) throw ConfigError("config key '" + key + "' must be a boolean");
          cfg.*member = v.get<bool>();
        } else if constexpr (std::is_same_v<T, int>) {
          if (!v.is_number_integer()) throw ConfigError("config key '" + key + "' must be an integer");
          cfg.*member = v.get<int>();
        } else if constexpr (std::is_same_v<T, double>) {
          if (!v.is_number()) throw ConfigError("config key '" + key + "' must be a number");
          cfg.*member = v.get<double>();
        } else if constexpr (std::is_same_v<T, std::string>) {
          if (!v.is_string()) throw ConfigError("config key '" + key + "' must be a string");
          const std::string s = v.get<std::string>();
          if (!k.choices.empty() && std::find(k.choices.begin(), k.choices.end(), s) == k.choices.end())
            throw ConfigError("config key '" + key + "' has unsupported value '" + s + "'");
          cfg.*member = s;
        } else {
          if (!v.is_array()) throw ConfigError("config key '" + key + "' must be an array of numbers");
          T out;
          for (const auto& e : v) {
            if (!e.is_number()) throw ConfigError("config key '" + key + "' must be an array of numbers");
            out.push_back(e.get<double>());
          }
          cfg.*member = out;
        }
      },
      k.field);
}

inline json value_of(const RunConfig& cfg, const KeySpec& k) {
  return std::visit([&](auto member) { return json(cfg.*member); }, k.field);
}

}  // namespace detail

/// Applies a JSON config file: every key must belong to the command, and
/// flags given on the command line take precedence.
inline void apply_config_file(RunConfig& cfg, const CLI::App& sub) {
  if (cfg.config_path.empty()) return;
  std::ifstream in(cfg.config_path);
  if (!in) throw ConfigError("cannot read config file '" + cfg.config_path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config file must hold a JSON object");
  if (!doc.contains("command")) throw ConfigError("config file must name its 'command'");
  const auto& table = command_keys().at(cfg.command);
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (it.key() == "command") {
      if (!it.value().is_string() || it.value().get<std::string>() != cfg.command)
        throw ConfigError("config key 'command' does not match subcommand '" + cfg.command + "'");
      continue;
    }
    auto spec = std::find_if(table.begin(), table.end(), [&](const KeySpec& k) { return k.key == it.key(); });
    if (spec == table.end()) throw ConfigError("unknown config key '" + it.key() + "' for command '" + cfg.command + "'");
    if (sub.count(flag_name(spec->key)) > 0) continue;
    detail::assign(cfg, *spec, it.value());
  }
}

/// The fully resolved configuration of a run, in table order.
inline json resolved_config(const RunConfig& cfg) {
  json j;
  j["command"] = cfg.command;
  for (const KeySpec& k : command_keys().at(cfg.command)) j[k.key] = detail::value_of(cfg, k);
  return j;
}

/// JSON Schema (draft 2020-12) for config files of every command.
inline json config_schema() {
  json schema;
  schema["$schema"] = "https://json-schema.org/draft/2020-12/schema";
  schema["title"] = "loglap run configuration";
  json variants = json::array();
  for (const auto& [cmd, table] : command_keys()) {
    json v;
    v["type"] = "object";
    v["additionalProperties"] = false;
    json props;
    props["command"] = {{"const", cmd}};
    for (const KeySpec& k : table) {
      json p;
      std::visit(
          [&](auto member) {
            using T = std::remove_reference_t<decltype(RunConfig{}.*member)>;
            if constexpr (std::is_same_v<T, bool>) p["type"] = "boolean";
            else if constexpr (std::is_same_v<T, int>) p["type"] = "integer";
            else if constexpr (std::is_same_v<T, double>) p["type"] = "number";
            else if constexpr (std::is_same_v<T, std::string>) p["type"] = "string";
            else {
              p["type"] = "array";
              p["items"] = {{"type", "number"}};
            }
          },
          k.field);
      if (!k.choices.empty()) p["enum"] = k.choices;
      p["description"] = k.help;
      props[k.key] = p;
    }
    v["properties"] = props;
    v["required"] = json::array({"command"});
    variants.push_back(v);
  }
  schema["oneOf"] = variants;
  return schema;
}

}  // namespace loglap::tool

#endif  // LOGLAP_TOOLS_CONFIG_HPP
