#include "ftlab/spinbath/config_json.hpp"

#include <fstream>
#include <set>

#include "ftlab/error.hpp"

namespace ftlab::spinbath {
namespace {

template <typename T>
void read(const nlohmann::json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("spin-bath config: '") + key + "' has the wrong type");
  }
}

}  // namespace

SpinBathConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("spin-bath config must be a JSON object");
  static const std::set<std::string> kKeys{"lambda", "beta", "n_env", "j_scale", "k_magnitude",
                                           "k_distribution", "seed", "n_thermal_samples", "tol"};
  for (const auto& [key, value] : j.items()) {
    if (!kKeys.contains(key)) throw ConfigError("spin-bath config: unknown key '" + key + "'");
  }
  SpinBathConfig cfg;
  read(j, "lambda", cfg.lambda);
  read(j, "beta", cfg.beta);
  read(j, "n_env", cfg.n_env);
  read(j, "j_scale", cfg.j_scale);
  read(j, "k_magnitude", cfg.k_magnitude);
  read(j, "seed", cfg.seed);
  read(j, "n_thermal_samples", cfg.n_thermal_samples);
  read(j, "tol", cfg.tol);
  std::string kd = "fixed";
  read(j, "k_distribution", kd);
  if (kd == "fixed") {
    cfg.k_distribution = KDistribution::FixedMagnitude;
  } else if (kd == "uniform") {
    cfg.k_distribution = KDistribution::UniformMagnitude;
  } else {
    throw ConfigError("spin-bath config: k_distribution must be \"fixed\" or \"uniform\"");
  }
  cfg.validate();
  return cfg;
}

nlohmann::json config_to_json(const SpinBathConfig& cfg) {
  return {
      {"lambda", cfg.lambda},
      {"beta", cfg.beta},
      {"n_env", cfg.n_env},
      {"j_scale", cfg.j_scale},
      {"k_magnitude", cfg.k_magnitude},
      {"k_distribution", cfg.k_distribution == KDistribution::FixedMagnitude ? "fixed" : "uniform"},
      {"seed", cfg.seed},
      {"n_thermal_samples", cfg.thermal_samples()},
      {"tol", cfg.tol},
  };
}

SpinBathConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

}  // namespace ftlab::spinbath
