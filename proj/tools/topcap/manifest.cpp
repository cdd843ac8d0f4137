#include "manifest.hpp"

#include "topcap/error.hpp"
#include "topcap/text_util.hpp"

#ifndef TOPCAP_VERSION
#define TOPCAP_VERSION "unknown"
#endif

namespace topcap::cli {

InputHash hash_input(const std::filesystem::path& path) {
  return {path.generic_string(), hex64(fnv1a64(read_file(path)))};
}

std::string format_manifest_json(const RunManifest& manifest) {
  Json j;
  j["tool"] = "topcap";
  j["version"] = TOPCAP_VERSION;
  j["command"] = manifest.command;
  j["argv"] = manifest.argv;
  j["seed"] = manifest.seed;
  j["params"] = manifest.params;
  Json inputs = Json::array();
  for (const auto& in : manifest.inputs) inputs.push_back({{"path", in.path}, {"fnv1a64", in.fnv1a64}});
  j["inputs"] = std::move(inputs);
  return j.dump(2) + "\n";
}

RunManifest parse_manifest_json(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InvalidArgument(std::string("manifest: ") + e.what());
  }
  if (!j.is_object() || !j.contains("command") || !j.contains("argv"))
    throw InvalidArgument("manifest: missing command or argv");
  RunManifest m;
  try {
    m.command = j.at("command").get<std::string>();
    m.argv = j.at("argv").get<std::vector<std::string>>();
    m.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("params")) m.params = j.at("params");
    if (j.contains("inputs"))
      for (const auto& in : j.at("inputs"))
        m.inputs.push_back({in.at("path").get<std::string>(), in.at("fnv1a64").get<std::string>()});
  } catch (const Json::exception& e) {
    throw InvalidArgument(std::string("manifest: ") + e.what());
  }
  return m;
}

void write_manifest(const std::filesystem::path& out_dir, const RunManifest& manifest) {
  write_file_atomic(out_dir / "manifest.json", format_manifest_json(manifest));
}

}  // namespace topcap::cli
