// Domain types shared by the codec, validator, store and API layers.
//
// Every type validates its invariants on construction and throws
// ModelError naming the offending field. Values are immutable once built
// and can be shared freely across threads.
#pragma once

#include <compare>
#include <filesystem>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace atlas {

class ModelError : public std::invalid_argument {
 public:
  ModelError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// True for non-empty kebab-case tokens: [a-z0-9]+(-[a-z0-9]+)*
bool is_kebab_token(std::string_view text) noexcept;

// Lowercase kebab-case identifier. The Kind parameter keeps slugs, network
// ids and the two tag vocabularies from being mixed up.
template <typename Kind>
class Token {
 public:
  explicit Token(std::string value) : value_(std::move(value)) {
    if (!is_kebab_token(value_)) {
      throw ModelError(Kind::field_name, "'" + value_ + "' is not a lowercase kebab-case token");
    }
  }

  const std::string& str() const noexcept { return value_; }

  friend auto operator<=>(const Token&, const Token&) = default;
  friend bool operator==(const Token&, const Token&) = default;

 private:
  std::string value_;
};

struct SlugKind {
  static constexpr const char* field_name = "slug";
};
struct NetworkKind {
  static constexpr const char* field_name = "network";
};
struct ProblemTagKind {
  static constexpr const char* field_name = "problem-tag";
};
struct ReductionTagKind {
  static constexpr const char* field_name = "reduction-tag";
};

using Slug = Token<SlugKind>;
using NetworkId = Token<NetworkKind>;
using ProblemTag = Token<ProblemTagKind>;
using ReductionTag = Token<ReductionTagKind>;

using ProblemTagSet = std::set<ProblemTag>;
using ReductionTagSet = std::set<ReductionTag>;

// Slug for a corpus file: the filename with its `.md` extension removed
// (extension matched case-insensitively). Throws ModelError when the stem
// is not a valid slug or the extension is missing.
Slug slug_from_filename(const std::filesystem::path& file);

// Single-line, trimmed, non-empty display text (names, abbreviations) that
// does not itself look like a `# ` heading.
void check_label(std::string_view field, std::string_view text);

// Multi-line text block as stored in a field body: no carriage returns, no
// line opening a `# ` heading, and no blank first or last line. Empty is
// allowed.
void check_block(std::string_view field, std::string_view text);

struct ProblemFields {
  Slug slug;
  NetworkId network;
  std::string name;
  std::string abbreviation;
  std::vector<std::string> alternative_names;
  std::string description;
  ProblemTagSet completeness;
  std::string references;

  friend bool operator==(const ProblemFields&, const ProblemFields&) = default;
};

class Problem {
 public:
  explicit Problem(ProblemFields fields);

  const Slug& slug() const noexcept { return f_.slug; }
  const NetworkId& network() const noexcept { return f_.network; }
  const std::string& name() const noexcept { return f_.name; }
  const std::string& abbreviation() const noexcept { return f_.abbreviation; }
  const std::vector<std::string>& alternative_names() const noexcept { return f_.alternative_names; }
  const std::string& description() const noexcept { return f_.description; }
  const ProblemTagSet& completeness() const noexcept { return f_.completeness; }
  const std::string& references() const noexcept { return f_.references; }

  const ProblemFields& fields() const noexcept { return f_; }

  friend bool operator==(const Problem& a, const Problem& b) { return a.f_ == b.f_; }

 private:
  ProblemFields f_;
};

struct ReductionFields {
  Slug slug;
  NetworkId network;
  Slug from_problem;
  Slug to_problem;
  std::string description;
  ReductionTagSet properties;
  std::string references;

  friend bool operator==(const ReductionFields&, const ReductionFields&) = default;
};

class Reduction {
 public:
  explicit Reduction(ReductionFields fields);

  const Slug& slug() const noexcept { return f_.slug; }
  const NetworkId& network() const noexcept { return f_.network; }
  const Slug& from_problem() const noexcept { return f_.from_problem; }
  const Slug& to_problem() const noexcept { return f_.to_problem; }
  const std::string& description() const noexcept { return f_.description; }
  const ReductionTagSet& properties() const noexcept { return f_.properties; }
  const std::string& references() const noexcept { return f_.references; }

  const ReductionFields& fields() const noexcept { return f_; }

  friend bool operator==(const Reduction& a, const Reduction& b) { return a.f_ == b.f_; }

 private:
  ReductionFields f_;
};

// Per-network metadata read from `network.md`.
struct NetworkManifest {
  NetworkId network;
  std::string display_name;
  ProblemTagSet problem_tags;
  ReductionTagSet reduction_tags;

  friend bool operator==(const NetworkManifest&, const NetworkManifest&) = default;
};

// Empty sets on both sides mean "no filtering".
struct FilterSpec {
  ProblemTagSet problem_tags;
  ReductionTagSet reduction_tags;

  bool empty() const noexcept { return problem_tags.empty() && reduction_tags.empty(); }

  friend bool operator==(const FilterSpec&, const FilterSpec&) = default;
};

}  // namespace atlas
