// redlint: corpus format and integrity checker.
//
//   redlint <root> [--format human|json]
//   redlint [<root>] --kind problem|reduction|manifest <file> [--format human|json]
//
// Exit status: 0 clean, 1 warnings only, 2 errors, 3 I/O failure or usage error.

#include <CLI11.hpp>

#include <iostream>
#include <map>

#include "atlas/validator.hpp"

namespace {

constexpr int kIoFailure = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Check a reduction corpus for format and integrity problems"};
  app.set_version_flag("--version", "redlint 0.1.0");

  std::string root;
  std::string format = "human";
  std::vector<std::string> kind_args;

  app.add_option("root", root, "Corpus root directory");
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"human", "json"}));
  app.add_option("--kind", kind_args, "Check a single file: --kind problem|reduction|manifest <file>")
      ->expected(2)
      ->type_name("KIND FILE");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kIoFailure;
  }

  static const std::map<std::string, atlas::lint::FileKind> kinds{
      {"problem", atlas::lint::FileKind::kProblem},
      {"reduction", atlas::lint::FileKind::kReduction},
      {"manifest", atlas::lint::FileKind::kManifest},
  };

  if (kind_args.empty() && root.empty()) {
    std::cerr << "redlint: a corpus root or --kind <kind> <file> is required\n" << app.help();
    return kIoFailure;
  }

  try {
    atlas::lint::ValidationReport report;
    if (!kind_args.empty()) {
      auto kind = kinds.find(kind_args[0]);
      if (kind == kinds.end()) {
        std::cerr << "redlint: unknown kind '" << kind_args[0] << "' (expected problem, reduction or manifest)\n";
        return kIoFailure;
      }
      report = atlas::lint::validate_file(kind_args[1], kind->second, root);
    } else {
      report = atlas::lint::validate_corpus(root);
    }
    std::cout << (format == "json" ? atlas::lint::to_json(report) + "\n" : atlas::lint::to_human(report));
    return atlas::lint::exit_code(report);
  } catch (const atlas::lint::IoError& e) {
    std::cerr << "redlint: " << e.what() << '\n';
    return kIoFailure;
  }
}
