#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace cloneforge {

enum class Status { Pass, Fail, Inconclusive, NoSamples };

std::string_view status_name(Status status);

/// Result of one verification check. Counters keep insertion order so the
/// serialized form is stable.
struct Report {
  std::string check;
  Status status = Status::Pass;
  std::optional<std::uint64_t> seed;
  nlohmann::ordered_json counters = nlohmann::ordered_json::object();
  nlohmann::ordered_json expected;
  nlohmann::ordered_json actual;
  std::vector<nlohmann::ordered_json> failures;
  std::int64_t elapsed_ms = 0;

  /// Records a failure and downgrades the status to Fail.
  void fail(nlohmann::ordered_json entry);
  bool passed() const noexcept { return status == Status::Pass; }

  /// Elapsed time is wall-clock and therefore left out unless asked for.
  nlohmann::ordered_json to_json(bool with_timing = false) const;
  std::string to_text(bool with_timing = false) const;
};

/// Exit code convention of the command-line front end.
int exit_code(Status status);

/// Worst status among the given reports: Fail > Inconclusive > NoSamples > Pass.
Status combine(std::span<const Report> reports);

}  // namespace cloneforge
