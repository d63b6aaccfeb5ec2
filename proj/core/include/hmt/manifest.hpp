#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace hmt {

// Flat configuration view; std::map keeps keys sorted so the hash is
// stable under field reordering.
using ConfigMap = std::map<std::string, std::string>;

// 16 hex digits over the sorted "key=value" lines
std::string config_hash(const ConfigMap& config);

// key=value per line, '#' comments and blank lines ignored
ConfigMap parse_config_text(const std::string& text);
ConfigMap load_config_file(const std::string& path);

struct RunManifest {
  std::string command;
  ConfigMap config;
  std::uint64_t seed = 0;
  std::string code_version;
  std::string started;
  std::string finished;
  std::vector<std::string> outputs;
};

std::string to_json_string(const RunManifest& m);
void write_manifest(const std::string& path, const RunManifest& m);

std::string now_iso8601();

}  // namespace hmt
