#include "atlas/validator.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "atlas/digest.hpp"
#include "corpus_tree.hpp"

namespace atlas::lint {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kManifestFile = "network.md";
constexpr std::string_view kProblemsDir = "problems";
constexpr std::string_view kReductionsDir = "reductions";

std::vector<std::string> split_path(const std::string& rel) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto slash = rel.find('/', start);
    parts.push_back(rel.substr(start, slash == std::string::npos ? std::string::npos : slash - start));
    if (slash == std::string::npos) {
      return parts;
    }
    start = slash + 1;
  }
}

bool has_md_extension(const std::string& name) {
  const auto dot = name.rfind('.');
  if (dot == std::string::npos) {
    return false;
  }
  std::string ext = name.substr(dot);
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".md";
}

class FindingSink {
 public:
  void error(std::string_view code, std::string path, int line, std::string message) {
    findings_.push_back(Finding{Severity::kError, std::string(code), std::move(message), {std::move(path), line}});
  }
  void warning(std::string_view code, std::string path, int line, std::string message) {
    findings_.push_back(Finding{Severity::kWarning, std::string(code), std::move(message), {std::move(path), line}});
  }

  void add_issues(const codec::FormatError& e, const std::string& path) {
    for (const auto& issue : e.issues()) {
      error(codec::to_token(issue.code), path, issue.line, issue.message);
    }
  }

  void add_unknown(const std::vector<codec::UnknownField>& unknown, const std::string& path) {
    for (const auto& field : unknown) {
      warning(codes::kUnknownField, path, field.line, "unknown field '" + field.key + "' is ignored");
    }
  }

  std::vector<Finding> take() { return std::move(findings_); }

 private:
  std::vector<Finding> findings_;
};

// Line of `token` inside list field `key`; falls back to the heading line.
int item_line(const codec::FieldMap& fields, std::string_view key, std::string_view token) {
  const auto* entry = fields.find(key);
  if (entry == nullptr) {
    return 1;
  }
  int line = entry->value_line;
  std::istringstream in(entry->value);
  for (std::string raw; std::getline(in, raw); ++line) {
    const auto first = raw.find_first_not_of(" \t");
    const auto last = raw.find_last_not_of(" \t");
    if (first != std::string::npos && raw.substr(first, last - first + 1) == token) {
      return line;
    }
  }
  return entry->line;
}

template <typename T>
struct ParsedFile {
  std::string path;
  T value;
  codec::FieldMap fields;
};

struct NetworkDir {
  const std::string* manifest = nullptr;
  std::vector<std::string> problem_files;
  std::vector<std::string> reduction_files;
};

template <typename T, typename ParseFn>
std::vector<ParsedFile<T>> parse_kind(const std::vector<std::string>& files, const detail::CorpusTree& tree,
                                      FindingSink& sink, std::set<Slug>& slugs, ParseFn&& parse) {
  std::vector<ParsedFile<T>> parsed;
  for (const auto& path : files) {
    std::optional<Slug> slug;
    try {
      slug = slug_from_filename(path);
    } catch (const ModelError& e) {
      sink.error(codes::kInvalidSlug, path, 1,
                 "file name '" + fs::path(path).filename().string() + "' is not a kebab-case slug");
    }
    bool duplicate = false;
    if (slug && !slugs.insert(*slug).second) {
      sink.error(codes::kDuplicateSlug, path, 1, "slug '" + slug->str() + "' is already used by another file");
      duplicate = true;
    }
    try {
      auto fields = codec::parse_document(tree.files.at(path));
      auto result = parse(fields, slug.value_or(Slug("invalid")));
      sink.add_unknown(result.unknown_fields, path);
      if (slug && !duplicate) {
        parsed.push_back(ParsedFile<T>{path, std::move(result.value), std::move(fields)});
      }
    } catch (const codec::FormatError& e) {
      sink.add_issues(e, path);
    }
  }
  return parsed;
}

void check_network(const NetworkId& id, const std::string& dir, const NetworkDir& net,
                   const detail::CorpusTree& tree, FindingSink& sink, ScannedNetwork& out) {
  const std::string manifest_path = dir + "/" + std::string(kManifestFile);
  if (net.manifest != nullptr) {
    try {
      auto fields = codec::parse_document(*net.manifest);
      auto result = codec::parse_manifest(fields, id);
      sink.add_unknown(result.unknown_fields, manifest_path);
      out.manifest = std::move(result.value);
    } catch (const codec::FormatError& e) {
      sink.add_issues(e, manifest_path);
    }
  } else {
    sink.error(codes::kBadDirectory, dir, 1, "network directory '" + dir + "' has no " + std::string(kManifestFile));
  }

  std::set<Slug> problem_slugs;
  auto problems = parse_kind<Problem>(net.problem_files, tree, sink, problem_slugs,
                                      [&](const codec::FieldMap& f, const Slug& s) { return codec::parse_problem(f, s, id); });
  std::set<Slug> reduction_slugs;
  auto reductions = parse_kind<Reduction>(net.reduction_files, tree, sink, reduction_slugs,
                                          [&](const codec::FieldMap& f, const Slug& s) { return codec::parse_reduction(f, s, id); });

  for (const auto& r : reductions) {
    for (const auto& [key, endpoint] : {std::pair{"from", &r.value.from_problem()}, std::pair{"to", &r.value.to_problem()}}) {
      if (!problem_slugs.contains(*endpoint)) {
        const auto* entry = r.fields.find(key);
        sink.error(codes::kDanglingEndpoint, r.path, entry ? entry->value_line : 1,
                   "'" + std::string(key) + "' names problem '" + endpoint->str() + "' which does not exist in network '" +
                       id.str() + "'");
      }
    }
  }

  if (out.manifest) {
    for (const auto& p : problems) {
      for (const auto& tag : p.value.completeness()) {
        if (!out.manifest->problem_tags.contains(tag)) {
          sink.error(codes::kUnknownTag, p.path, item_line(p.fields, "complexity", tag.str()),
                     "problem tag '" + tag.str() + "' is not declared in " + manifest_path);
        }
      }
    }
    for (const auto& r : reductions) {
      for (const auto& tag : r.value.properties()) {
        if (!out.manifest->reduction_tags.contains(tag)) {
          sink.error(codes::kUnknownTag, r.path, item_line(r.fields, "properties", tag.str()),
                     "reduction tag '" + tag.str() + "' is not declared in " + manifest_path);
        }
      }
    }
    if (net.problem_files.empty()) {
      sink.warning(codes::kEmptyNetwork, manifest_path, 1, "network '" + id.str() + "' has no problems");
    }
  }

  auto by_slug = [](const auto& a, const auto& b) { return a.slug() < b.slug(); };
  for (auto& p : problems) out.problems.push_back(std::move(p.value));
  for (auto& r : reductions) out.reductions.push_back(std::move(r.value));
  std::sort(out.problems.begin(), out.problems.end(), by_slug);
  std::sort(out.reductions.begin(), out.reductions.end(), by_slug);
}

std::string read_single_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError(path, "cannot open file");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string_view to_token(Severity severity) noexcept {
  return severity == Severity::kError ? "error" : "warning";
}

ValidationReport::ValidationReport(std::vector<Finding> findings) : findings_(std::move(findings)) {
  std::sort(findings_.begin(), findings_.end(), [](const Finding& a, const Finding& b) {
    return std::tie(a.location.path, a.location.line, a.code, a.message, a.severity) <
           std::tie(b.location.path, b.location.line, b.code, b.message, b.severity);
  });
  for (const auto& f : findings_) {
    (f.severity == Severity::kError ? errors_ : warnings_) += 1;
  }
}

std::string to_json(const ValidationReport& report) {
  auto findings = nlohmann::json::array();
  for (const auto& f : report.findings()) {
    findings.push_back({{"severity", to_token(f.severity)},
                        {"code", f.code},
                        {"message", f.message},
                        {"path", f.location.path},
                        {"line", f.location.line}});
  }
  nlohmann::json doc{{"findings", std::move(findings)}, {"errors", report.errors()}, {"warnings", report.warnings()}};
  return doc.dump();
}

std::string to_human(const ValidationReport& report) {
  std::ostringstream out;
  for (const auto& f : report.findings()) {
    out << f.location.path << ':' << f.location.line << ": " << to_token(f.severity) << ": " << f.message << " ["
        << f.code << "]\n";
  }
  out << report.errors() << (report.errors() == 1 ? " error, " : " errors, ") << report.warnings()
      << (report.warnings() == 1 ? " warning\n" : " warnings\n");
  return out.str();
}

int exit_code(const ValidationReport& report) noexcept {
  if (report.errors() > 0) return 2;
  if (report.warnings() > 0) return 1;
  return 0;
}

CorpusScan scan_corpus(const fs::path& root) {
  const detail::CorpusTree tree = detail::read_corpus_tree(root);
  FindingSink sink;

  // Directories with an invalid name or an unexpected role; everything
  // below them has already been reported once.
  std::set<std::string> rejected;
  std::map<std::string, NetworkDir> networks;

  for (const auto& dir : tree.directories) {
    const auto parts = split_path(dir);
    if (parts.size() == 1) {
      if (is_kebab_token(parts[0])) {
        networks[parts[0]];
      } else {
        sink.error(codes::kBadDirectory, dir, 1, "network directory name '" + parts[0] + "' is not kebab-case");
        rejected.insert(dir);
      }
    } else if (parts.size() == 2) {
      if (rejected.contains(parts[0])) continue;
      if (parts[1] != kProblemsDir && parts[1] != kReductionsDir) {
        sink.error(codes::kBadDirectory, dir, 1, "unexpected directory '" + parts[1] + "' in network '" + parts[0] + "'");
        rejected.insert(dir);
      }
    } else if (parts.size() == 3) {
      if (rejected.contains(parts[0]) || rejected.contains(parts[0] + "/" + parts[1])) continue;
      sink.warning(codes::kBadDirectory, dir, 1, "subdirectory '" + parts[2] + "' is ignored");
    }
  }

  for (const auto& [path, content] : tree.files) {
    const auto parts = split_path(path);
    if (parts.size() == 1) {
      sink.error(codes::kBadDirectory, path, 1, "unexpected file '" + parts[0] + "' at corpus root");
    } else if (parts.size() == 2) {
      if (rejected.contains(parts[0])) continue;
      if (parts[1] == kManifestFile) {
        networks[parts[0]].manifest = &content;
      } else {
        sink.error(codes::kBadDirectory, path, 1, "unexpected file '" + parts[1] + "' in network '" + parts[0] + "'");
      }
    } else if (parts.size() == 3) {
      const std::string parent = parts[0] + "/" + parts[1];
      if (rejected.contains(parts[0]) || rejected.contains(parent)) continue;
      if (!has_md_extension(parts[2])) {
        sink.warning(codes::kBadDirectory, path, 1, "non-Markdown file '" + parts[2] + "' is ignored");
      } else if (parts[1] == kProblemsDir) {
        networks[parts[0]].problem_files.push_back(path);
      } else {
        networks[parts[0]].reduction_files.push_back(path);
      }
    }
  }

  CorpusScan scan;
  for (const auto& [name, net] : networks) {
    ScannedNetwork out{NetworkId(name), std::nullopt, {}, {}};
    check_network(out.id, name, net, tree, sink, out);
    scan.networks.push_back(std::move(out));
  }
  scan.report = ValidationReport(sink.take());
  scan.digest = tree_digest(tree.files);
  return scan;
}

ValidationReport validate_corpus(const fs::path& root) { return scan_corpus(root).report; }

ValidationReport validate_file(const fs::path& path, FileKind kind, const fs::path& display_root) {
  const std::string text = read_single_file(path);
  std::string shown = path.generic_string();
  if (!display_root.empty()) {
    const auto rel = path.lexically_relative(display_root);
    if (!rel.empty() && *rel.begin() != "..") {
      shown = rel.generic_string();
    }
  }

  FindingSink sink;
  auto token_or = [](const fs::path& p, const char* fallback) {
    const auto name = p.filename().string();
    return is_kebab_token(name) ? name : std::string(fallback);
  };

  try {
    const auto fields = codec::parse_document(text);
    if (kind == FileKind::kManifest) {
      const NetworkId network(token_or(path.parent_path(), "unknown"));
      sink.add_unknown(codec::parse_manifest(fields, network).unknown_fields, shown);
    } else {
      const NetworkId network(token_or(path.parent_path().parent_path(), "unknown"));
      std::optional<Slug> slug;
      try {
        slug = slug_from_filename(path);
      } catch (const ModelError&) {
        sink.error(codes::kInvalidSlug, shown, 1,
                   "file name '" + path.filename().string() + "' is not a kebab-case slug");
      }
      const Slug id = slug.value_or(Slug("invalid"));
      if (kind == FileKind::kProblem) {
        sink.add_unknown(codec::parse_problem(fields, id, network).unknown_fields, shown);
      } else {
        sink.add_unknown(codec::parse_reduction(fields, id, network).unknown_fields, shown);
      }
    }
  } catch (const codec::FormatError& e) {
    sink.add_issues(e, shown);
  }
  return ValidationReport(sink.take());
}

}  // namespace atlas::lint
