#include "reuseflow/catalog.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace reuseflow {

namespace fs = std::filesystem;
using nlohmann::json;

void sync_path(const fs::path& path) {
  int fd = ::open(path.c_str(), O_RDONLY);
  if (fd < 0) throw std::runtime_error("cannot open " + path.string() + " for sync");
  int rc = ::fsync(fd);
  ::close(fd);
  if (rc != 0) throw std::runtime_error("fsync failed for " + path.string());
}

void write_file_atomically(const fs::path& path, const std::string& text) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
    if (!out.flush()) throw std::runtime_error("write failed for " + tmp.string());
  }
  sync_path(tmp);
  fs::rename(tmp, path);
}

MaterializationCatalog MaterializationCatalog::open(const fs::path& root) {
  MaterializationCatalog cat(root);
  fs::create_directories(cat.objects_dir());
  fs::create_directories(cat.history_dir());
  fs::path index = root / "catalog.json";
  if (!fs::exists(index)) return cat;

  std::ifstream in(index, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    json doc = json::parse(buf.str());
    if (doc.at("hash").get<std::string>() != Signature::kHashName)
      throw IntegrityError("catalog uses unsupported hash " + doc.at("hash").get<std::string>());
    for (const auto& e : doc.at("entries")) {
      CatalogEntry entry;
      entry.signature = Signature::from_hex(e.at("signature").get<std::string>());
      entry.node_id = e.at("node_id").get<std::string>();
      entry.size_bytes = e.at("size_bytes").get<std::int64_t>();
      entry.load_ms = e.at("load_ms").get<Millis>();
      entry.created_iteration = e.at("created_iteration").get<int>();
      if (entry.size_bytes < 0 || entry.load_ms < 0) throw IntegrityError("negative size or load time in catalog");
      cat.entries_.emplace(entry.signature, entry);
    }
  } catch (const IntegrityError&) {
    throw;
  } catch (const std::exception& ex) {
    throw IntegrityError("corrupt catalog " + index.string() + ": " + ex.what());
  }
  return cat;
}

fs::path MaterializationCatalog::artifact_path(const Signature& sig) const {
  return objects_dir() / sig.hex();
}

const CatalogEntry* MaterializationCatalog::find(const Signature& sig) const {
  auto it = entries_.find(sig);
  return it == entries_.end() ? nullptr : &it->second;
}

bool MaterializationCatalog::artifact_intact(const CatalogEntry& entry) const {
  std::error_code ec;
  auto size = fs::file_size(artifact_path(entry.signature), ec);
  return !ec && static_cast<std::int64_t>(size) == entry.size_bytes;
}

std::int64_t MaterializationCatalog::used_bytes() const {
  std::int64_t used = 0;
  for (const auto& [_, e] : entries_) used += e.size_bytes;
  return used;
}

void MaterializationCatalog::insert(const CatalogEntry& entry) {
  entries_[entry.signature] = entry;
  save();
}

bool MaterializationCatalog::erase(const Signature& sig) {
  if (entries_.erase(sig) == 0) return true;
  save();
  std::error_code ec;
  fs::remove(artifact_path(sig), ec);
  return !ec;
}

void MaterializationCatalog::save() const {
  json entries = json::array();
  for (const auto& [sig, e] : entries_) {
    entries.push_back({{"signature", sig.hex()},
                       {"node_id", e.node_id},
                       {"size_bytes", e.size_bytes},
                       {"load_ms", e.load_ms},
                       {"created_iteration", e.created_iteration}});
  }
  json doc = {{"hash", Signature::kHashName}, {"version", 1}, {"entries", entries}};
  write_file_atomically(root_ / "catalog.json", doc.dump(2) + "\n");
}

std::vector<fs::path> MaterializationCatalog::collect_garbage() const {
  std::vector<fs::path> removed;
  for (const auto& file : fs::directory_iterator(objects_dir())) {
    const auto name = file.path().filename().string();
    bool referenced = false;
    try {
      referenced = entries_.contains(Signature::from_hex(name));
    } catch (const std::invalid_argument&) {
    }
    if (!referenced) removed.push_back(file.path());
  }
  std::sort(removed.begin(), removed.end());
  for (const auto& p : removed) fs::remove(p);
  return removed;
}

}  // namespace reuseflow
