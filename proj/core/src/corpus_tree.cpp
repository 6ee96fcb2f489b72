#include "corpus_tree.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "atlas/validator.hpp"

namespace atlas::detail {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw lint::IoError(path, "cannot open file");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) {
    throw lint::IoError(path, "read failed");
  }
  return ss.str();
}

}  // namespace

CorpusTree read_corpus_tree(const fs::path& root) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw lint::IoError(root, "corpus root is not a readable directory");
  }
  CorpusTree tree;
  fs::recursive_directory_iterator it(root, fs::directory_options::none, ec);
  if (ec) {
    throw lint::IoError(root, ec.message());
  }
  for (; it != fs::recursive_directory_iterator(); it.increment(ec)) {
    if (ec) {
      throw lint::IoError(root, ec.message());
    }
    const auto& entry = *it;
    if (entry.path().filename().string().starts_with('.')) {
      if (entry.is_directory()) {
        it.disable_recursion_pending();
      }
      continue;
    }
    const std::string rel = entry.path().lexically_relative(root).generic_string();
    if (entry.is_directory()) {
      tree.directories.push_back(rel);
    } else if (entry.is_regular_file()) {
      tree.files.emplace(rel, read_file(entry.path()));
    }
  }
  if (ec) {
    throw lint::IoError(root, ec.message());
  }
  std::sort(tree.directories.begin(), tree.directories.end());
  return tree;
}

}  // namespace atlas::detail
