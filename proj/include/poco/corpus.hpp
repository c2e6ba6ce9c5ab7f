#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "poco/interp.hpp"

namespace poco {

// FNV-1a 64-bit; the manifest content hash, stable across implementations.
inline std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, std::string_view data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
}

// Seeds are files; ids are filename stems, sorted lexicographically.
inline Corpus ingest_corpus(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw std::runtime_error("not a directory: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file()) files.push_back(e.path());
  }
  Corpus corpus;
  std::set<std::string> stems;
  std::sort(files.begin(), files.end(),
            [](const auto& a, const auto& b) { return a.stem().string() < b.stem().string(); });
  for (const auto& f : files) {
    std::string stem = f.stem().string();
    if (!stems.insert(stem).second) {
      throw std::runtime_error("duplicate seed id '" + stem + "' in " + dir.string());
    }
    corpus.push_back(Seed{stem, read_file(f)});
  }
  if (corpus.empty()) throw std::runtime_error("empty corpus");
  return corpus;
}

// Manifest: one line per seed, `id<TAB>size<TAB>fnv1a64`.
inline std::string manifest_text(const Corpus& seeds) {
  std::string out;
  for (const auto& s : seeds) {
    out += s.id + "\t" + std::to_string(s.size()) + "\t" + hex64(fnv1a64(s.bytes)) + "\n";
  }
  return out;
}

inline void write_manifest(const Corpus& seeds, const std::filesystem::path& path) {
  write_file(path, manifest_text(seeds));
}

inline std::vector<std::string> read_manifest_ids(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read manifest: " + path.string());
  std::vector<std::string> ids;
  std::string line;
  while (std::getline(in, line)) {
    auto tab = line.find('\t');
    if (tab != std::string::npos) ids.push_back(line.substr(0, tab));
  }
  return ids;
}

}  // namespace poco
