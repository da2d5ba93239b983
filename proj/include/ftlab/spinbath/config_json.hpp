#pragma once

#include <filesystem>
#include <json.hpp>

#include "ftlab/spinbath/model.hpp"

namespace ftlab::spinbath {

/// Keys: lambda, beta, n_env, j_scale, k_magnitude, k_distribution
/// ("fixed" | "uniform"), seed, n_thermal_samples, tol. Missing keys keep
/// their defaults; unknown keys or wrong types throw ConfigError.
SpinBathConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const SpinBathConfig& cfg);
SpinBathConfig load_config(const std::filesystem::path& path);

}  // namespace ftlab::spinbath
