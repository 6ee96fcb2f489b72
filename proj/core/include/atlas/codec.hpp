// Field-heading Markdown format used by corpus files.
//
// A document is a sequence of fields. A line starting with `# ` at column 0
// opens a field whose key is the rest of the line, trimmed and lowercased;
// every following line up to the next such heading is the field's value.
// Deeper headings (`##`, `###`, ...) are ordinary value content.
//
//   # name
//   Vertex Cover
//
//   # abbreviation
//   VC
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "atlas/model.hpp"

namespace atlas::codec {

// Corpus-relative path plus 1-based line number.
struct SourceLocation {
  std::string path;
  int line = 1;

  friend bool operator==(const SourceLocation&, const SourceLocation&) = default;
};

enum class IssueCode {
  kDuplicateField,
  kPreambleContent,
  kInvalidEncoding,
  kMalformedHeading,
  kMissingField,
  kEmptyField,
  kMalformedTag,
  kSelfLoop,
  kInvalidValue,
};

// Stable kebab-case token for an issue code, e.g. "missing-field".
std::string_view to_token(IssueCode code) noexcept;

struct Issue {
  IssueCode code;
  std::string subject;  // field key, tag token or slug the issue is about
  int line = 1;
  std::string message;
};

// Thrown by the parse functions. Carries every issue found in the input,
// in line order; what() describes the first one.
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(std::vector<Issue> issues);

  const std::vector<Issue>& issues() const noexcept { return issues_; }
  IssueCode code() const noexcept { return issues_.front().code; }

 private:
  std::vector<Issue> issues_;
};

struct FieldEntry {
  std::string key;
  std::string value;
  int line = 1;        // line of the `# key` heading
  int value_line = 1;  // line of the first value line (heading line when the value is empty)

  friend bool operator==(const FieldEntry&, const FieldEntry&) = default;
};

// Ordered fields of one document; keys are unique.
class FieldMap {
 public:
  FieldMap() = default;
  explicit FieldMap(std::vector<FieldEntry> entries);

  const FieldEntry* find(std::string_view key) const noexcept;
  const std::vector<FieldEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  auto begin() const noexcept { return entries_.begin(); }
  auto end() const noexcept { return entries_.end(); }

  friend bool operator==(const FieldMap&, const FieldMap&) = default;

 private:
  std::vector<FieldEntry> entries_;
};

// Builds a FieldMap from (key, value) pairs with synthetic line numbers.
// Convenient for constructing inputs to the parse_* functions directly.
FieldMap make_fields(std::initializer_list<std::pair<std::string, std::string>> pairs);

bool is_valid_utf8(std::string_view text) noexcept;

// Splits a document into fields. CRLF and bare CR line endings are read as
// LF. Throws FormatError (duplicate-field, preamble-content,
// malformed-heading, invalid-encoding).
FieldMap parse_document(std::string_view text);

struct UnknownField {
  std::string key;
  int line = 1;
};

template <typename T>
struct Parsed {
  T value;
  std::vector<UnknownField> unknown_fields;
};

// Throw FormatError listing every missing/empty/malformed field. Unknown
// keys are not errors; they come back in Parsed::unknown_fields.
Parsed<Problem> parse_problem(const FieldMap& fields, const Slug& slug, const NetworkId& network);
Parsed<Reduction> parse_reduction(const FieldMap& fields, const Slug& slug, const NetworkId& network);
Parsed<NetworkManifest> parse_manifest(const FieldMap& fields, const NetworkId& network);

// Canonical text: fixed field order, empty optional fields omitted, tag
// sets in lexicographic order, one blank line between fields.
std::string serialize_problem(const Problem& problem);
std::string serialize_reduction(const Reduction& reduction);
std::string serialize_manifest(const NetworkManifest& manifest);

}  // namespace atlas::codec
