#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "reuseflow/dag.hpp"
#include "reuseflow/signature.hpp"

namespace reuseflow {

class IntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CatalogEntry {
  Signature signature;
  NodeId node_id;
  std::int64_t size_bytes = 0;
  Millis load_ms = 0;
  int created_iteration = 0;
};

/// Content-addressed store of materialized node outputs.
///
/// Layout under the root directory:
///   catalog.json            index, rewritten atomically (write-new-then-rename)
///   objects/<hex-signature> artifact files
///   history/<t>.json        iteration records (written by the engine)
class MaterializationCatalog {
 public:
  /// Opens (creating directories if needed) the store at `root`. A missing
  /// catalog.json is an empty catalog; an unreadable one throws IntegrityError.
  static MaterializationCatalog open(const std::filesystem::path& root);

  const std::filesystem::path& root() const { return root_; }
  std::filesystem::path objects_dir() const { return root_ / "objects"; }
  std::filesystem::path history_dir() const { return root_ / "history"; }
  std::filesystem::path artifact_path(const Signature& sig) const;

  const std::map<Signature, CatalogEntry>& entries() const { return entries_; }
  const CatalogEntry* find(const Signature& sig) const;
  /// True when the artifact file exists and its size matches the entry.
  bool artifact_intact(const CatalogEntry& entry) const;
  std::int64_t used_bytes() const;

  /// Records an entry whose artifact has already been written and synced,
  /// then persists the index.
  void insert(const CatalogEntry& entry);
  /// Removes the entry and its artifact, then persists the index. Returns
  /// false when the artifact file could not be deleted.
  bool erase(const Signature& sig);

  void save() const;
  /// Deletes files under objects/ that the index does not reference.
  std::vector<std::filesystem::path> collect_garbage() const;

 private:
  explicit MaterializationCatalog(std::filesystem::path root) : root_(std::move(root)) {}

  std::filesystem::path root_;
  std::map<Signature, CatalogEntry> entries_;
};

/// fsyncs a file (or directory) by path. Throws std::runtime_error on failure.
void sync_path(const std::filesystem::path& path);

/// Writes `text` to `path` via a temporary sibling and rename.
void write_file_atomically(const std::filesystem::path& path, const std::string& text);

}  // namespace reuseflow
