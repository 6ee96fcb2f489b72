// In-memory image of a corpus directory, shared by digesting and scanning.
#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace atlas::detail {

struct CorpusTree {
  // Corpus-relative generic paths, sorted. Dot-entries are skipped.
  std::vector<std::string> directories;
  std::map<std::string, std::string> files;
};

// Throws lint::IoError when root is missing or an entry cannot be read.
CorpusTree read_corpus_tree(const std::filesystem::path& root);

}  // namespace atlas::detail
