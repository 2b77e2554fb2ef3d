#include "moser/cache.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>
#include <vector>

namespace moser {

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    auto nl = text.find('\n');
    if (nl == std::string_view::npos) throw CacheError("cache: final line is not LF-terminated (truncated file?)");
    lines.push_back(text.substr(0, nl));
    text.remove_prefix(nl + 1);
  }
  return lines;
}

bool is_hex_digest(std::string_view s) {
  if (s.size() != 64) return false;
  for (char c : s) {
    if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
  }
  return true;
}

}  // namespace

std::string sha256_hex(const std::string& data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1) {
    throw CacheError("sha256: digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned i = 0; i < length; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

void CacheStore::put(Index k, Integer n, Integer d) {
  if (d < 1) throw CacheError("cache: denominator must be positive at k=" + std::to_string(k));
  Integer g;
  mpz_gcd(g.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
  if (g != 1) throw CacheError("cache: record k=" + std::to_string(k) + " is not in lowest terms");
  entries_[k] = {std::move(n), std::move(d)};
}

const std::pair<Integer, Integer>* CacheStore::find(Index k) const {
  auto it = entries_.find(k);
  return it == entries_.end() ? nullptr : &it->second;
}

std::string CacheStore::serialize() const {
  std::string payload;
  for (const auto& [k, nd] : entries_) {
    payload += std::to_string(k);
    payload += '\t';
    payload += nd.first.get_str();
    payload += '\t';
    payload += nd.second.get_str();
    payload += '\n';
  }
  return std::string(kHeader) + "\n" + payload + sha256_hex(payload) + "\n";
}

CacheStore CacheStore::parse(const std::string& text) {
  CacheStore out;
  if (text.empty()) return out;
  auto lines = split_lines(text);
  if (lines.empty() || lines.front() != kHeader) {
    if (!lines.empty() && lines.front().starts_with("moser-ladder-cache ")) {
      throw CacheError("cache: unsupported format version '" + std::string(lines.front()) + "'");
    }
    throw CacheError("cache: missing header line");
  }
  if (lines.size() < 2 || !is_hex_digest(lines.back())) throw CacheError("cache: missing checksum line");

  std::string payload;
  for (std::size_t i = 1; i + 1 < lines.size(); ++i) {
    payload += lines[i];
    payload += '\n';
  }
  if (sha256_hex(payload) != lines.back()) throw CacheError("cache: checksum mismatch");

  long previous = -1;
  for (std::size_t i = 1; i + 1 < lines.size(); ++i) {
    std::string_view line = lines[i];
    auto t1 = line.find('\t');
    auto t2 = t1 == std::string_view::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string_view::npos || line.find('\t', t2 + 1) != std::string_view::npos) {
      throw CacheError("cache: malformed record on line " + std::to_string(i + 1));
    }
    try {
      Integer kz = parse_integer(line.substr(0, t1));
      if (kz < 0 || !kz.fits_uint_p()) throw CacheError("cache: index out of range");
      auto k = static_cast<Index>(kz.get_ui());
      if (static_cast<long>(k) <= previous) throw CacheError("cache: records not in ascending order");
      previous = static_cast<long>(k);
      out.put(k, parse_integer(line.substr(t1 + 1, t2 - t1 - 1)), parse_integer(line.substr(t2 + 1)));
    } catch (const std::invalid_argument& e) {
      throw CacheError("cache: malformed record on line " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return out;
}

CacheStore cache_load(const std::filesystem::path& path) {
  CacheStore out(path);
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) return out;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CacheError("cache: cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  CacheStore parsed = CacheStore::parse(buffer.str());
  for (const auto& [k, nd] : parsed.entries()) out.put(k, nd.first, nd.second);
  return out;
}

void cache_store(const CacheStore& cache, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CacheError("cache: cannot write " + tmp.string());
    out << cache.serialize();
    if (!out.flush()) throw CacheError("cache: write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw CacheError("cache: cannot replace " + path.string() + ": " + ec.message());
}

}  // namespace moser
