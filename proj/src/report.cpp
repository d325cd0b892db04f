#include "cloneforge/report.hpp"

#include <cctype>
#include <sstream>

namespace cloneforge {

std::string_view status_name(Status status) {
  switch (status) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Inconclusive: return "inconclusive";
    case Status::NoSamples: return "no-samples";
  }
  return "fail";
}

void Report::fail(nlohmann::ordered_json entry) {
  failures.push_back(std::move(entry));
  status = Status::Fail;
}

nlohmann::ordered_json Report::to_json(bool with_timing) const {
  nlohmann::ordered_json j;
  j["check"] = check;
  j["status"] = status_name(status);
  j["seed"] = seed ? nlohmann::ordered_json(*seed) : nlohmann::ordered_json(nullptr);
  j["counters"] = counters;
  if (!expected.is_null()) j["expected"] = expected;
  if (!actual.is_null()) j["actual"] = actual;
  j["failures"] = nlohmann::ordered_json::array();
  for (const auto& f : failures) j["failures"].push_back(f);
  if (with_timing) j["elapsed_ms"] = elapsed_ms;
  return j;
}

std::string Report::to_text(bool with_timing) const {
  std::ostringstream os;
  std::string tag(status_name(status));
  for (auto& c : tag) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  os << '[' << tag << "] " << check;
  if (seed) os << " (seed " << *seed << ')';
  if (with_timing) os << " in " << elapsed_ms << " ms";
  os << '\n';
  for (const auto& [key, value] : counters.items()) os << "    " << key << ": " << value.dump() << '\n';
  if (!expected.is_null()) os << "    expected: " << expected.dump() << '\n';
  if (!actual.is_null()) os << "    actual:   " << actual.dump() << '\n';
  for (const auto& f : failures) os << "    failure: " << f.dump() << '\n';
  return os.str();
}

int exit_code(Status status) {
  switch (status) {
    case Status::Pass: return 0;
    case Status::Fail: return 1;
    case Status::Inconclusive:
    case Status::NoSamples: return 2;
  }
  return 1;
}

Status combine(std::span<const Report> reports) {
  bool inconclusive = false, no_samples = false;
  for (const auto& r : reports) {
    if (r.status == Status::Fail) return Status::Fail;
    inconclusive |= r.status == Status::Inconclusive;
    no_samples |= r.status == Status::NoSamples;
  }
  if (inconclusive) return Status::Inconclusive;
  return no_samples ? Status::NoSamples : Status::Pass;
}

}  // namespace cloneforge
