#ifndef CHEAPBOOT_CONFIG_IO_HPP
#define CHEAPBOOT_CONFIG_IO_HPP

#include <filesystem>

#include <json.hpp>

#include "cheapboot/harness.hpp"
#include "cheapboot/netsim.hpp"

namespace cheapboot {

// JSON mirrors of the config structs. from_json overloads accept partial
// documents: missing fields keep their defaults (or the preset's values,
// when a "preset" key is given). to_json emits every resolved field, which
// is what the reproducibility sidecars carry.

nlohmann::json network_config_to_json(const NetworkConfig& config);
NetworkConfig network_config_from_json(const nlohmann::json& j);

nlohmann::json experiment_config_to_json(const ExperimentConfig& config);
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);

nlohmann::json load_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace cheapboot

#endif
