#pragma once

// Persistent k -> (N_k, D_k) store.
//
// File layout (LF line endings):
//   moser-ladder-cache v1
//   k<TAB>N_k<TAB>D_k          one line per record, ascending k
//   <sha256 hex>               digest of the record lines, each with its LF
//
// A zero-length file loads as an empty cache.

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

#include "moser/bernoulli.hpp"

namespace moser {

class CacheError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CacheStore {
 public:
  static constexpr const char* kHeader = "moser-ladder-cache v1";
  static constexpr int kFormatVersion = 1;

  CacheStore() = default;
  explicit CacheStore(std::filesystem::path path) : path_(std::move(path)) {}

  /// Throws CacheError if gcd(|n|, d) != 1 or d < 1.
  void put(Index k, Integer n, Integer d);
  [[nodiscard]] const std::pair<Integer, Integer>* find(Index k) const;
  [[nodiscard]] const std::map<Index, std::pair<Integer, Integer>>& entries() const { return entries_; }
  [[nodiscard]] std::size_t size() const { return entries_.size(); }
  [[nodiscard]] bool empty() const { return entries_.empty(); }

  [[nodiscard]] const std::filesystem::path& path() const { return path_; }

  /// Serialized file contents.
  [[nodiscard]] std::string serialize() const;
  /// Throws CacheError on any malformed, truncated or tampered input.
  static CacheStore parse(const std::string& text);

  friend bool operator==(const CacheStore& a, const CacheStore& b) { return a.entries_ == b.entries_; }

 private:
  std::filesystem::path path_;
  std::map<Index, std::pair<Integer, Integer>> entries_;
};

/// Missing file loads as an empty cache bound to `path`.
CacheStore cache_load(const std::filesystem::path& path);
/// Writes atomically (temp file + rename).
void cache_store(const CacheStore& cache, const std::filesystem::path& path);

/// Lowercase hex SHA-256.
std::string sha256_hex(const std::string& data);

}  // namespace moser
