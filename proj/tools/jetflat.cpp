#include <iostream>

#include <CLI11.hpp>

#include "jetflat/cli.hpp"

using namespace jetflat;

namespace {

int emit(const cli::Outcome& out, const std::string& format) {
  if (format == "json") {
    std::cout << out.report.dump(2) << "\n";
  } else {
    std::cout << out.text;
  }
  return out.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flatness checker for second-order PDE systems y_{x_i x_j} = f_ij(x, y, z)"};
  app.require_subcommand(1);
  std::string format = "text";
  std::uint64_t seed = 42;
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"text", "json"}));

  std::string path;
  auto* check = app.add_subcommand("check", "Decide flatness of f11, f12, f22");
  check->add_option("file", path, "key = value document")->required();

  auto* dual = app.add_subcommand("dual", "Dual system of a solution family h");
  dual->add_option("file", path, "key = value document")->required();

  std::string level;
  auto* structure = app.add_subcommand("verify-structure", "Check the structure equations at one level");
  structure->add_option("--level", level, "9, 10, 11 or e")->required()->check(CLI::IsMember({"9", "10", "11", "e"}));
  structure->add_option("file", path, "key = value document")->required();

  std::string group;
  auto* fibration = app.add_subcommand("fibration", "Dimension table and sampled probes for a group");
  fibration->add_option("--group", group, "sl4, scale or compact")
      ->required()
      ->check(CLI::IsMember({"sl4", "scale", "compact"}));
  fibration->add_option("--seed", seed, "Random seed");

  auto* selftest = app.add_subcommand("selftest", "Run the acceptance suite");
  selftest->add_option("--seed", seed, "Random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kUsage;
  }

  try {
    if (*check) return emit(cli::run_check(cli::Document::load(path)), format);
    if (*dual) return emit(cli::run_dual(cli::Document::load(path)), format);
    if (*structure) {
      return emit(cli::run_verify_structure(cli::Document::load(path), curv::level_from_string(level)), format);
    }
    if (*fibration) return emit(cli::run_fibration(group, seed), format);
    if (*selftest) return emit(cli::run_selftest(seed), format);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kInputError;
  }
  return cli::kUsage;
}
