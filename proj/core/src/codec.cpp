#include "atlas/codec.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace atlas::codec {

namespace {

constexpr std::string_view kWhitespace = " \t\f\v\r\n";

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(kWhitespace);
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(kWhitespace);
  return s.substr(first, last - first + 1);
}

bool is_blank(std::string_view s) { return trim(s).empty(); }

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    if (end == std::string_view::npos) {
      if (start < text.size()) {
        lines.push_back(text.substr(start));
      }
      break;
    }
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

std::string normalize_newlines(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\r') {
      out.push_back('\n');
      if (i + 1 < text.size() && text[i + 1] == '\n') {
        ++i;
      }
    } else {
      out.push_back(text[i]);
    }
  }
  return out;
}

bool sort_by_line(const Issue& a, const Issue& b) { return a.line < b.line; }

[[noreturn]] void raise(std::vector<Issue> issues) {
  std::stable_sort(issues.begin(), issues.end(), sort_by_line);
  throw FormatError(std::move(issues));
}

// Field readers for the typed parse functions. Each accumulates issues
// instead of throwing so one pass reports every defect of a file.
class FieldReader {
 public:
  FieldReader(const FieldMap& fields, std::initializer_list<std::string_view> known)
      : fields_(fields), known_(known.begin(), known.end()) {}

  std::optional<std::string> label(std::string_view key, bool required) {
    const FieldEntry* entry = fields_.find(key);
    if (entry == nullptr) {
      if (required) {
        add(IssueCode::kMissingField, key, 1, "required field '" + std::string(key) + "' is missing");
      }
      return std::nullopt;
    }
    const auto text = trim(entry->value);
    if (text.empty()) {
      if (required) {
        add(IssueCode::kEmptyField, key, entry->line, "required field '" + std::string(key) + "' is empty");
      }
      return std::nullopt;
    }
    if (text.find('\n') != std::string_view::npos) {
      add(IssueCode::kInvalidValue, key, entry->value_line,
          "field '" + std::string(key) + "' must be a single line");
      return std::nullopt;
    }
    return std::string(text);
  }

  std::optional<Slug> slug(std::string_view key) {
    auto text = label(key, true);
    if (!text) {
      return std::nullopt;
    }
    if (!is_kebab_token(*text)) {
      add(IssueCode::kInvalidValue, key, fields_.find(key)->value_line,
          "'" + *text + "' is not a valid slug");
      return std::nullopt;
    }
    return Slug(*text);
  }

  std::string block(std::string_view key) const {
    const FieldEntry* entry = fields_.find(key);
    return entry == nullptr ? std::string() : entry->value;
  }

  // Non-blank lines of a list field, trimmed, with their line numbers.
  std::vector<std::pair<std::string, int>> list(std::string_view key) const {
    std::vector<std::pair<std::string, int>> items;
    const FieldEntry* entry = fields_.find(key);
    if (entry == nullptr) {
      return items;
    }
    int line = entry->value_line;
    for (auto raw : split_lines(entry->value)) {
      const auto item = trim(raw);
      if (!item.empty()) {
        items.emplace_back(std::string(item), line);
      }
      ++line;
    }
    return items;
  }

  template <typename TagT>
  std::set<TagT> tags(std::string_view key) {
    std::set<TagT> out;
    for (auto& [token, line] : list(key)) {
      if (!is_kebab_token(token)) {
        add(IssueCode::kMalformedTag, token, line, "tag '" + token + "' is not a lowercase kebab-case token");
        continue;
      }
      out.emplace(std::move(token));
    }
    return out;
  }

  void add(IssueCode code, std::string_view subject, int line, std::string message) {
    issues_.push_back(Issue{code, std::string(subject), line, std::move(message)});
  }

  std::vector<UnknownField> unknown_fields() const {
    std::vector<UnknownField> out;
    for (const auto& entry : fields_) {
      if (!known_.contains(entry.key)) {
        out.push_back(UnknownField{entry.key, entry.line});
      }
    }
    return out;
  }

  bool ok() const noexcept { return issues_.empty(); }
  std::vector<Issue> take_issues() { return std::move(issues_); }

 private:
  const FieldMap& fields_;
  std::set<std::string_view, std::less<>> known_;
  std::vector<Issue> issues_;
};

template <typename T, typename Build>
Parsed<T> finish(FieldReader& reader, int fallback_line, Build&& build) {
  if (reader.ok()) {
    try {
      return Parsed<T>{build(), reader.unknown_fields()};
    } catch (const ModelError& e) {
      reader.add(IssueCode::kInvalidValue, e.field(), fallback_line, e.what());
    }
  }
  raise(reader.take_issues());
}

void emit_field(std::string& out, std::string_view key, std::string_view value) {
  if (value.empty()) {
    return;
  }
  if (!out.empty()) {
    out += '\n';
  }
  out += "# ";
  out += key;
  out += '\n';
  out += value;
  out += '\n';
}

template <typename Set>
std::string join_tags(const Set& tags) {
  std::string out;
  for (const auto& tag : tags) {
    if (!out.empty()) {
      out += '\n';
    }
    out += tag.str();
  }
  return out;
}

std::string join_lines(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& item : items) {
    if (!out.empty()) {
      out += '\n';
    }
    out += item;
  }
  return out;
}

int line_of(const FieldMap& fields, std::string_view key) {
  const FieldEntry* entry = fields.find(key);
  return entry == nullptr ? 1 : entry->value_line;
}

}  // namespace

std::string_view to_token(IssueCode code) noexcept {
  switch (code) {
    case IssueCode::kDuplicateField: return "duplicate-field";
    case IssueCode::kPreambleContent: return "preamble-content";
    case IssueCode::kInvalidEncoding: return "invalid-encoding";
    case IssueCode::kMalformedHeading: return "malformed-heading";
    case IssueCode::kMissingField: return "missing-field";
    case IssueCode::kEmptyField: return "empty-field";
    case IssueCode::kMalformedTag: return "malformed-tag";
    case IssueCode::kSelfLoop: return "self-loop";
    case IssueCode::kInvalidValue: return "invalid-value";
  }
  return "unknown";
}

FormatError::FormatError(std::vector<Issue> issues)
    : std::runtime_error(issues.empty() ? std::string("format error") : issues.front().message),
      issues_(std::move(issues)) {
  if (issues_.empty()) {
    issues_.push_back(Issue{IssueCode::kInvalidValue, {}, 1, "format error"});
  }
}

FieldMap::FieldMap(std::vector<FieldEntry> entries) : entries_(std::move(entries)) {
  std::set<std::string_view> keys;
  for (const auto& entry : entries_) {
    if (!keys.insert(entry.key).second) {
      throw FormatError({Issue{IssueCode::kDuplicateField, entry.key, entry.line,
                               "field '" + entry.key + "' appears more than once"}});
    }
  }
}

const FieldEntry* FieldMap::find(std::string_view key) const noexcept {
  for (const auto& entry : entries_) {
    if (entry.key == key) {
      return &entry;
    }
  }
  return nullptr;
}

FieldMap make_fields(std::initializer_list<std::pair<std::string, std::string>> pairs) {
  std::vector<FieldEntry> entries;
  int line = 1;
  for (const auto& [key, value] : pairs) {
    const auto value_lines = static_cast<int>(std::count(value.begin(), value.end(), '\n')) + 1;
    entries.push_back(FieldEntry{key, value, line, line + 1});
    line += value_lines + 2;
  }
  return FieldMap(std::move(entries));
}

bool is_valid_utf8(std::string_view text) noexcept {
  std::size_t i = 0;
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    std::size_t len = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + len > text.size()) {
      return false;
    }
    for (std::size_t k = 1; k < len; ++k) {
      const auto cc = static_cast<unsigned char>(text[i + k]);
      if ((cc & 0xC0) != 0x80) {
        return false;
      }
      cp = (cp << 6) | (cc & 0x3F);
    }
    // Reject overlong forms, surrogates and out-of-range code points.
    if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) ||
        (cp >= 0xD800 && cp <= 0xDFFF) || cp > 0x10FFFF) {
      return false;
    }
    i += len;
  }
  return true;
}

FieldMap parse_document(std::string_view text) {
  if (!is_valid_utf8(text)) {
    throw FormatError({Issue{IssueCode::kInvalidEncoding, {}, 1, "input is not valid UTF-8"}});
  }
  const std::string normalized = normalize_newlines(text);
  const auto lines = split_lines(normalized);

  std::vector<Issue> issues;
  std::vector<FieldEntry> entries;
  std::set<std::string> keys;

  struct Open {
    std::string key;
    int line;
    std::size_t first;  // index of first value line
    bool keep;
  };
  std::optional<Open> open;
  bool preamble_reported = false;

  auto close = [&](std::size_t end) {
    if (!open || !open->keep) {
      return;
    }
    std::size_t lo = open->first;
    std::size_t hi = end;
    while (lo < hi && is_blank(lines[lo])) ++lo;
    while (hi > lo && is_blank(lines[hi - 1])) --hi;
    std::string value;
    for (std::size_t i = lo; i < hi; ++i) {
      if (i > lo) value += '\n';
      value += lines[i];
    }
    const int value_line = lo < hi ? static_cast<int>(lo) + 1 : open->line;
    entries.push_back(FieldEntry{open->key, std::move(value), open->line, value_line});
  };

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto line = lines[i];
    const int number = static_cast<int>(i) + 1;
    if (!line.starts_with("# ")) {
      if (!open && !preamble_reported && !is_blank(line)) {
        issues.push_back(Issue{IssueCode::kPreambleContent, {}, number, "content before the first field heading"});
        preamble_reported = true;
      }
      continue;
    }
    close(i);
    std::string key = to_lower(trim(line.substr(2)));
    bool keep = true;
    if (!is_kebab_token(key)) {
      issues.push_back(Issue{IssueCode::kMalformedHeading, key, number,
                             "heading '" + std::string(line) + "' is not a lowercase kebab-case key"});
      keep = false;
    } else if (!keys.insert(key).second) {
      issues.push_back(Issue{IssueCode::kDuplicateField, key, number, "field '" + key + "' appears more than once"});
      keep = false;
    }
    open = Open{std::move(key), number, i + 1, keep};
  }
  close(lines.size());

  if (!issues.empty()) {
    raise(std::move(issues));
  }
  return FieldMap(std::move(entries));
}

Parsed<Problem> parse_problem(const FieldMap& fields, const Slug& slug, const NetworkId& network) {
  FieldReader reader(fields, {"name", "abbreviation", "alternative-names", "description", "complexity", "references"});
  auto name = reader.label("name", true);
  auto abbreviation = reader.label("abbreviation", true);

  std::vector<std::string> alternatives;
  std::set<std::string> seen;
  for (auto& [alt, line] : reader.list("alternative-names")) {
    if (name && alt == *name) {
      reader.add(IssueCode::kInvalidValue, "alternative-names", line, "alternative name '" + alt + "' repeats the main name");
    } else if (!seen.insert(alt).second) {
      reader.add(IssueCode::kInvalidValue, "alternative-names", line, "alternative name '" + alt + "' is listed twice");
    } else {
      alternatives.push_back(std::move(alt));
    }
  }
  auto completeness = reader.tags<ProblemTag>("complexity");

  return finish<Problem>(reader, line_of(fields, "name"), [&] {
    return Problem(ProblemFields{slug, network, std::move(*name), std::move(*abbreviation), std::move(alternatives),
                                 reader.block("description"), std::move(completeness), reader.block("references")});
  });
}

Parsed<Reduction> parse_reduction(const FieldMap& fields, const Slug& slug, const NetworkId& network) {
  FieldReader reader(fields, {"from", "to", "description", "properties", "references"});
  auto from = reader.slug("from");
  auto to = reader.slug("to");
  if (from && to && *from == *to) {
    reader.add(IssueCode::kSelfLoop, slug.str(), line_of(fields, "to"),
               "reduction '" + slug.str() + "' goes from '" + from->str() + "' to itself");
  }
  auto properties = reader.tags<ReductionTag>("properties");

  return finish<Reduction>(reader, line_of(fields, "from"), [&] {
    return Reduction(ReductionFields{slug, network, std::move(*from), std::move(*to), reader.block("description"),
                                     std::move(properties), reader.block("references")});
  });
}

Parsed<NetworkManifest> parse_manifest(const FieldMap& fields, const NetworkId& network) {
  FieldReader reader(fields, {"display-name", "problem-tags", "reduction-tags"});
  auto display_name = reader.label("display-name", true);
  auto problem_tags = reader.tags<ProblemTag>("problem-tags");
  auto reduction_tags = reader.tags<ReductionTag>("reduction-tags");

  return finish<NetworkManifest>(reader, line_of(fields, "display-name"), [&] {
    return NetworkManifest{network, std::move(*display_name), std::move(problem_tags), std::move(reduction_tags)};
  });
}

std::string serialize_problem(const Problem& problem) {
  std::string out;
  emit_field(out, "name", problem.name());
  emit_field(out, "abbreviation", problem.abbreviation());
  emit_field(out, "alternative-names", join_lines(problem.alternative_names()));
  emit_field(out, "description", problem.description());
  emit_field(out, "complexity", join_tags(problem.completeness()));
  emit_field(out, "references", problem.references());
  return out;
}

std::string serialize_reduction(const Reduction& reduction) {
  std::string out;
  emit_field(out, "from", reduction.from_problem().str());
  emit_field(out, "to", reduction.to_problem().str());
  emit_field(out, "description", reduction.description());
  emit_field(out, "properties", join_tags(reduction.properties()));
  emit_field(out, "references", reduction.references());
  return out;
}

std::string serialize_manifest(const NetworkManifest& manifest) {
  std::string out;
  emit_field(out, "display-name", manifest.display_name);
  emit_field(out, "problem-tags", join_tags(manifest.problem_tags));
  emit_field(out, "reduction-tags", join_tags(manifest.reduction_tags));
  return out;
}

}  // namespace atlas::codec
