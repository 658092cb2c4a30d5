#pragma once

// Command implementations behind the jetflat executable. Each command turns an
// input document into a JSON report, a text rendering and an exit code.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "jetflat/curvature.hpp"

namespace jetflat::cli {

using Json = nlohmann::ordered_json;

/// Exit codes. Verdict codes coincide with the check command's verdicts.
enum ExitCode : int { kFlat = 0, kNotFlat = 1, kNotIntegrable = 2, kUsage = 3, kInputError = 4 };

/// Malformed input document; the message names the line.
class InputError : public Error {
public:
  using Error::Error;
};

/// Flat `key = value` document. Blank lines and lines starting with '#' are
/// skipped; keys may not repeat.
class Document {
public:
  static Document parse(std::string_view text);
  static Document load(const std::filesystem::path& path);

  std::optional<std::string> get(const std::string& key) const;
  /// Throws InputError when the key is missing.
  const std::string& require(const std::string& key) const;
  /// Throws InputError naming the first key outside `allowed`.
  void restrict_keys(const std::vector<std::string>& allowed) const;

private:
  std::map<std::string, std::string> entries_;
  std::map<std::string, int> lines_;
};

struct Outcome {
  int exit_code;
  Json report;
  std::string text;
};

/// Verdict, A, B, curvatures, witnesses and the fast-path agreement for
/// z-free systems. Reads keys f11, f12, f22.
Outcome run_check(const Document& doc);
/// Reads h and optionally inverse.x1, inverse.x2; checks the dual system when
/// x can be eliminated.
Outcome run_dual(const Document& doc);
Outcome run_verify_structure(const Document& doc, curv::Level level);
Outcome run_fibration(const std::string& group, std::uint64_t seed);

struct Criterion {
  int id;
  std::string title;
  bool passed;
  std::string detail;
  double seconds;
};

/// The acceptance suite, one entry per criterion, deterministic in the seed.
std::vector<Criterion> run_acceptance(std::uint64_t seed);
Outcome run_selftest(std::uint64_t seed);

Json to_json(const curv::CurvatureReport& report);
Json to_json(const curv::StructureCheck& check);

}  // namespace jetflat::cli
