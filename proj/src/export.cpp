#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>

#include "magsq/errors.hpp"
#include "magsq/scenarios.hpp"

namespace magsq {

namespace {

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 computation failed");
  }
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < length; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i) out += ',';
    out += table.header[i];
  }
  out += '\n';
  char buf[40];
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      // Adding +0.0 folds -0 into 0.
      std::snprintf(buf, sizeof buf, "%.12g", row[i] + 0.0);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

std::vector<ManifestEntry> export_result(const ScenarioResult& result,
                                         const std::filesystem::path& directory) {
  std::filesystem::create_directories(directory);

  std::vector<std::pair<std::string, std::string>> files;
  for (const auto& table : result.tables) files.emplace_back(table.name + ".csv", to_csv(table));
  for (const auto& figure : result.figures) files.emplace_back(figure.name + ".svg", figure.svg);
  std::sort(files.begin(), files.end());

  std::vector<ManifestEntry> entries;
  nlohmann::ordered_json listing = nlohmann::ordered_json::array();
  for (const auto& [name, bytes] : files) {
    write_file(directory / name, bytes);
    ManifestEntry entry{name, sha256_hex(bytes), bytes.size()};
    listing.push_back({{"file", entry.file}, {"sha256", entry.sha256}, {"bytes", entry.bytes}});
    entries.push_back(std::move(entry));
  }

  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
  for (const auto& [key, value] : result.summary) summary[key] = value;
  nlohmann::ordered_json manifest = {{"scenario", result.name},
                                     {"files", listing},
                                     {"summary", summary},
                                     {"warnings", result.warnings}};
  write_file(directory / "manifest.json", manifest.dump(2) + "\n");
  return entries;
}

}  // namespace magsq
