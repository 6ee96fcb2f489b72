// Content hashing of corpus trees.
#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace atlas {

// Lowercase hex SHA-256 of `data`.
std::string sha256_hex(std::string_view data);

// Digest over sorted (relative path, content hash) pairs. Keys are
// corpus-relative generic paths.
std::string tree_digest(const std::map<std::string, std::string>& files);

// Reads every regular file below `root` (skipping dot-entries) and returns
// tree_digest() of the result. Throws lint::IoError on read failure.
std::string corpus_digest(const std::filesystem::path& root);

}  // namespace atlas
