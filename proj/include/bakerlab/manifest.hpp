#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace bakerlab {

inline constexpr const char* kToolVersion = "0.3.0";
inline constexpr const char* kManifestName = "manifest.json";

struct JobRecord {
  std::string name;
  bool ok = true;
  std::string error;
  std::vector<std::string> warnings;
  std::vector<std::string> files;  ///< relative to the output directory
  double seconds = 0.0;
};

struct RunManifest {
  std::string command;
  std::string tool_version = kToolVersion;
  std::map<std::string, std::string> config;
  std::vector<JobRecord> jobs;
  double seconds = 0.0;

  bool all_ok() const;
  /// Union of the jobs' file lists, sorted.
  std::vector<std::string> files() const;
};

nlohmann::json to_json(const RunManifest& m);
RunManifest manifest_from_json(const nlohmann::json& j);

/// Writes `manifest.json` into `dir` (the manifest does not list itself).
std::filesystem::path write_manifest(const std::filesystem::path& dir, const RunManifest& m);
RunManifest read_manifest(const std::filesystem::path& dir);

struct ManifestCheck {
  std::vector<std::string> missing;   ///< listed but absent on disk
  std::vector<std::string> unlisted;  ///< on disk but not listed
  std::vector<std::string> duplicates;
  bool ok() const { return missing.empty() && unlisted.empty() && duplicates.empty(); }
};

/// Compares the manifest's file list against the regular files under `dir`.
ManifestCheck verify_manifest(const std::filesystem::path& dir);

/// Pretty-printed JSON with a trailing newline.
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace bakerlab
