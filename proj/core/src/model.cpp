#include "atlas/model.hpp"

#include <algorithm>
#include <cctype>

namespace atlas {

namespace {

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

bool is_lower_alnum(char c) { return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'); }

}  // namespace

bool is_kebab_token(std::string_view text) noexcept {
  if (text.empty() || text.front() == '-' || text.back() == '-') {
    return false;
  }
  char prev = '\0';
  for (char c : text) {
    if (c == '-') {
      if (prev == '-') {
        return false;
      }
    } else if (!is_lower_alnum(c)) {
      return false;
    }
    prev = c;
  }
  return true;
}

Slug slug_from_filename(const std::filesystem::path& file) {
  const std::string ext = file.extension().string();
  std::string lowered(ext.size(), '\0');
  std::transform(ext.begin(), ext.end(), lowered.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lowered != ".md") {
    throw ModelError("slug", "'" + file.filename().string() + "' does not have a .md extension");
  }
  return Slug(file.stem().string());
}

void check_label(std::string_view field, std::string_view text) {
  const std::string name(field);
  if (text.empty() || is_blank(text)) {
    throw ModelError(name, "must not be empty");
  }
  if (text.find_first_of("\r\n") != std::string_view::npos) {
    throw ModelError(name, "must be a single line");
  }
  if (std::isspace(static_cast<unsigned char>(text.front())) ||
      std::isspace(static_cast<unsigned char>(text.back()))) {
    throw ModelError(name, "must not have leading or trailing whitespace");
  }
  if (text.starts_with("# ")) {
    throw ModelError(name, "must not start with a field heading marker");
  }
}

void check_block(std::string_view field, std::string_view text) {
  if (text.empty()) {
    return;
  }
  const std::string name(field);
  if (text.find('\r') != std::string_view::npos) {
    throw ModelError(name, "must not contain carriage returns");
  }
  std::size_t start = 0;
  bool first = true;
  while (true) {
    const std::size_t end = text.find('\n', start);
    const std::string_view line = text.substr(start, end == std::string_view::npos ? text.npos : end - start);
    if (line.starts_with("# ")) {
      throw ModelError(name, "line '" + std::string(line) + "' would open a new field");
    }
    const bool last = end == std::string_view::npos;
    if ((first || last) && is_blank(line)) {
      throw ModelError(name, "must not start or end with a blank line");
    }
    if (last) {
      break;
    }
    first = false;
    start = end + 1;
  }
}

Problem::Problem(ProblemFields fields) : f_(std::move(fields)) {
  check_label("name", f_.name);
  check_label("abbreviation", f_.abbreviation);
  std::set<std::string_view> seen;
  for (const auto& alt : f_.alternative_names) {
    check_label("alternative-names", alt);
    if (alt == f_.name) {
      throw ModelError("alternative-names", "'" + alt + "' repeats the main name");
    }
    if (!seen.insert(alt).second) {
      throw ModelError("alternative-names", "'" + alt + "' is listed twice");
    }
  }
  check_block("description", f_.description);
  check_block("references", f_.references);
}

Reduction::Reduction(ReductionFields fields) : f_(std::move(fields)) {
  if (f_.from_problem == f_.to_problem) {
    throw ModelError("to", "reduction from '" + f_.from_problem.str() + "' to itself");
  }
  check_block("description", f_.description);
  check_block("references", f_.references);
}

}  // namespace atlas
