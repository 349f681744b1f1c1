#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace loopy::io {

std::string sha256_file(const std::string& path);

/// Writes <out_dir>/manifest.json: config echo, tool/generator identity,
/// timestamp, and the checksum inventory of every produced file.
void write_manifest(const std::string& out_dir, const std::string& command,
                    const nlohmann::json& config_echo,
                    const std::vector<std::string>& output_files);

}  // namespace loopy::io
