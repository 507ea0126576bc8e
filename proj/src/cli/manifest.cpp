#include "bakerlab/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "bakerlab/config.hpp"

namespace bakerlab {

bool RunManifest::all_ok() const {
  return std::all_of(jobs.begin(), jobs.end(), [](const JobRecord& j) { return j.ok; });
}

std::vector<std::string> RunManifest::files() const {
  std::vector<std::string> out;
  for (const auto& j : jobs) out.insert(out.end(), j.files.begin(), j.files.end());
  std::sort(out.begin(), out.end());
  return out;
}

nlohmann::json to_json(const RunManifest& m) {
  nlohmann::json j;
  j["command"] = m.command;
  j["tool_version"] = m.tool_version;
  j["config"] = m.config;
  j["seconds"] = m.seconds;
  j["status"] = m.all_ok() ? "ok" : "partial-failure";
  auto& jobs = j["jobs"] = nlohmann::json::array();
  for (const auto& r : m.jobs) {
    nlohmann::json e{{"name", r.name}, {"ok", r.ok}, {"seconds", r.seconds}, {"files", r.files}};
    if (!r.ok) e["error"] = r.error;
    if (!r.warnings.empty()) e["warnings"] = r.warnings;
    jobs.push_back(std::move(e));
  }
  j["files"] = m.files();
  return j;
}

RunManifest manifest_from_json(const nlohmann::json& j) {
  RunManifest m;
  m.command = j.at("command").get<std::string>();
  m.tool_version = j.at("tool_version").get<std::string>();
  m.config = j.at("config").get<std::map<std::string, std::string>>();
  m.seconds = j.at("seconds").get<double>();
  for (const auto& e : j.at("jobs")) {
    JobRecord r;
    r.name = e.at("name").get<std::string>();
    r.ok = e.at("ok").get<bool>();
    r.seconds = e.at("seconds").get<double>();
    r.files = e.at("files").get<std::vector<std::string>>();
    if (e.contains("error")) r.error = e["error"].get<std::string>();
    if (e.contains("warnings")) r.warnings = e["warnings"].get<std::vector<std::string>>();
    m.jobs.push_back(std::move(r));
  }
  return m;
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

std::filesystem::path write_manifest(const std::filesystem::path& dir, const RunManifest& m) {
  std::filesystem::create_directories(dir);
  const auto path = dir / kManifestName;
  write_json_file(path, to_json(m));
  return path;
}

RunManifest read_manifest(const std::filesystem::path& dir) {
  std::ifstream in(dir / kManifestName);
  if (!in) throw ConfigError("no " + std::string(kManifestName) + " in " + dir.string());
  try {
    return manifest_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed manifest: ") + e.what());
  }
}

ManifestCheck verify_manifest(const std::filesystem::path& dir) {
  const auto m = read_manifest(dir);
  ManifestCheck check;
  std::set<std::string> listed;
  for (const auto& f : m.files()) {
    if (!listed.insert(f).second) check.duplicates.push_back(f);
    if (!std::filesystem::is_regular_file(dir / f)) check.missing.push_back(f);
  }
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto rel = std::filesystem::relative(entry.path(), dir).generic_string();
    if (rel == kManifestName) continue;
    if (!listed.count(rel)) check.unlisted.push_back(rel);
  }
  std::sort(check.unlisted.begin(), check.unlisted.end());
  return check;
}

}  // namespace bakerlab
