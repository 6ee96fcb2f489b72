// Corpus lint: layout, format and cross-file integrity checks.
//
// Expected layout:
//
//   <root>/<network>/network.md
//   <root>/<network>/problems/<slug>.md
//   <root>/<network>/reductions/<slug>.md
//
// Entries whose name starts with '.' are ignored at every level.
#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "atlas/codec.hpp"
#include "atlas/model.hpp"

namespace atlas::lint {

class IoError : public std::runtime_error {
 public:
  IoError(std::filesystem::path path, const std::string& reason)
      : std::runtime_error(path.string() + ": " + reason), path_(std::move(path)) {}

  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
};

enum class Severity { kError, kWarning };

std::string_view to_token(Severity severity) noexcept;

// Finding codes. Parse issues use the codec tokens (missing-field,
// duplicate-field, empty-field, malformed-tag, malformed-heading,
// preamble-content, invalid-encoding, self-loop, invalid-value); the rest
// come from cross-file checks.
namespace codes {
inline constexpr std::string_view kBadDirectory = "bad-directory";
inline constexpr std::string_view kInvalidSlug = "invalid-slug";
inline constexpr std::string_view kDuplicateSlug = "duplicate-slug";
inline constexpr std::string_view kDanglingEndpoint = "dangling-endpoint";
inline constexpr std::string_view kUnknownTag = "unknown-tag";
inline constexpr std::string_view kUnknownField = "unknown-field";
inline constexpr std::string_view kEmptyNetwork = "empty-network";
}  // namespace codes

struct Finding {
  Severity severity;
  std::string code;
  std::string message;
  codec::SourceLocation location;

  friend bool operator==(const Finding&, const Finding&) = default;
};

// Findings sorted by (path, line, code, message).
class ValidationReport {
 public:
  ValidationReport() = default;
  explicit ValidationReport(std::vector<Finding> findings);

  const std::vector<Finding>& findings() const noexcept { return findings_; }
  std::size_t errors() const noexcept { return errors_; }
  std::size_t warnings() const noexcept { return warnings_; }
  bool publishable() const noexcept { return errors_ == 0; }

 private:
  std::vector<Finding> findings_;
  std::size_t errors_ = 0;
  std::size_t warnings_ = 0;
};

// {"findings":[{"severity","code","message","path","line"}],"errors":N,"warnings":N}
std::string to_json(const ValidationReport& report);

// One "path:line: severity: message [code]" line per finding plus a summary.
std::string to_human(const ValidationReport& report);

// 0 = clean, 1 = warnings only, 2 = errors.
int exit_code(const ValidationReport& report) noexcept;

struct ScannedNetwork {
  NetworkId id;
  std::optional<NetworkManifest> manifest;
  std::vector<Problem> problems;      // slug-sorted, only files that parsed
  std::vector<Reduction> reductions;  // slug-sorted, only files that parsed
};

// Everything read during one validation pass.
struct CorpusScan {
  ValidationReport report;
  std::vector<ScannedNetwork> networks;  // id-sorted
  std::string digest;
};

// Full pass over a corpus directory. Never stops at the first finding.
// Throws IoError when the root or a file cannot be read.
CorpusScan scan_corpus(const std::filesystem::path& root);

ValidationReport validate_corpus(const std::filesystem::path& root);

enum class FileKind { kProblem, kReduction, kManifest };

// Single-file checks: parsing, unknown fields and tag lexing. Cross-file
// checks are skipped. Finding paths are made relative to `display_root`
// when the file lies below it.
ValidationReport validate_file(const std::filesystem::path& path, FileKind kind,
                               const std::filesystem::path& display_root = {});

}  // namespace atlas::lint
