#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace topcap::cli {

using Json = nlohmann::ordered_json;

struct InputHash {
  std::string path;
  std::string fnv1a64;
};

// Written next to every command's outputs. Holds no timestamps, so two runs
// with the same arguments and inputs produce the same bytes.
struct RunManifest {
  std::string command;
  std::vector<std::string> argv;  // without the program name
  Json params = Json::object();
  std::uint64_t seed = 0;
  std::vector<InputHash> inputs;
};

InputHash hash_input(const std::filesystem::path& path);

std::string format_manifest_json(const RunManifest& manifest);
RunManifest parse_manifest_json(const std::string& text);

void write_manifest(const std::filesystem::path& out_dir, const RunManifest& manifest);

}  // namespace topcap::cli
