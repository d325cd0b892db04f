// Acceptance run: one PASS/FAIL line per criterion.

#include <algorithm>
#include <array>
#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cloneforge/catalog.hpp"
#include "cloneforge/cli.hpp"
#include "cloneforge/term.hpp"
#include "cloneforge/verifier.hpp"

using namespace cloneforge;
using nlohmann::ordered_json;

namespace {

struct Outcome {
  bool ok = true;
  std::string note;

  void require(bool condition, const std::string& what) {
    if (condition) return;
    ok = false;
    note += (note.empty() ? "" : "; ") + what;
  }
};

struct Criterion {
  int id;
  std::string title;
  double limit_s;
  std::function<Outcome()> body;
};

Outcome from_report(const Report& r) {
  Outcome o;
  o.require(r.passed(), r.check + " status " + std::string(status_name(r.status)));
  if (!r.failures.empty()) o.require(false, "first failure " + r.failures.front().dump());
  return o;
}

Outcome c1() {
  const Report r = sweep_three_element({});
  Outcome o = from_report(r);
  const auto& c = r.counters;
  o.require(c["candidates"] == 729, "729 candidates");
  o.require(c["inconclusive"] == 0, "no inconclusive verdicts");
  o.require(c["oracle_agreement"] == 729, "oracle agreement 729/729");
  o.require(c["minimal"] == c["minimal_by_type"]["m1"].get<int>() + c["minimal_by_type"]["m2"].get<int>() +
                                c["minimal_by_type"]["m3"].get<int>(),
            "every minimal operation classified");
  o.note = o.ok ? "minimal " + c["minimal"].dump() + ", clones " + c["clones_by_type"].dump() : o.note;
  return o;
}

Outcome c2() {
  const Report r = reproduce_tables({});
  Outcome o = from_report(r);
  const ordered_json expected{{"m1", 1}, {"m2", 3}, {"m3", 8}, {"M1", 1}, {"M2", 3}, {"M3", 8}};
  o.require(r.counters == expected, "counts 1,3,8,1,3,8");
  for (auto name : kTableNames) {
    auto printed = printed_members(name);
    std::sort(printed.begin(), printed.end());
    o.require(majority_members(*named_table(name)) == printed, std::string(name) + " members equal the table");
  }
  return o;
}

Outcome c3() {
  const Report r = verify_generators_minimal({});
  Outcome o = from_report(r);
  const std::array<std::size_t, 3> sizes{4, 6, 11};
  for (int i = 1; i <= 3; ++i) {
    o.require(is_minimal_majority(M_table(i)).minimal(), "M" + std::to_string(i) + " Minimal");
    o.require(ternary_closure(M_table(i)).size() == sizes[static_cast<std::size_t>(i - 1)],
              "M" + std::to_string(i) + " fragment size");
  }
  return o;
}

Outcome c4() {
  const Report r = classify_S({});
  Outcome o = from_report(r);
  const auto& c = r.counters;
  o.require(c["candidates"] == 390625, "390625 candidates");
  o.require(c["star_identity"] == 390625, "all satisfy the identity");
  o.require(c["inconclusive"] == 0, "no inconclusive verdicts");
  o.require(c["nonconservative_types"] == ordered_json::array({"M1", "M3"}), "types M1 and M3 only");
  if (o.ok) o.note = "minimal members " + c["minimal_members"].dump() + ", nonconservative by form " +
                     c["nonconservative_members_by_form"].dump();
  return o;
}

Outcome c5() {
  const Report r = verify_lemma_3_1();
  Outcome o = from_report(r);
  o.require(r.counters["cases"] == 6144, "6144 cases");
  o.require(r.counters["mismatches"] == 0, "0 mismatches");
  return o;
}

Outcome c6() {
  const Report r = verify_star_properties({});
  Outcome o = from_report(r);
  o.require(r.counters["samples"] == 500, "500 samples");
  o.require(r.counters["failures"] == 0, "0 failures");
  return o;
}

Outcome c7() {
  const Report r = restriction_correspondence({});
  Outcome o = from_report(r);
  for (int i = 1; i <= 3; ++i) {
    const auto& e = r.counters["M" + std::to_string(i)];
    o.require(e["injective"] == true, "injective for M" + std::to_string(i));
    o.require(!e["bijection"].is_null(), "bijection for M" + std::to_string(i));
  }
  return o;
}

Outcome c8() {
  const Report r = spot_check_claims({});
  Outcome o = from_report(r);
  for (const auto& claim : claim_checks()) {
    const auto& e = r.counters[claim.id];
    o.require(e["kept"] == 200, claim.id + " kept 200");
    o.require(e["inconclusive"] == 0, claim.id + " decided");
    if (!claim.companion) o.require(e["minimal"] == 0, claim.id + " no minimal sample");
    else o.require(e["minimal"] == e["minimal_equal_to_M2"], claim.id + " minimal samples equal M2");
  }
  return o;
}

Outcome c9() {
  auto verify_all = [](const std::string& threads) {
    std::ostringstream out, err;
    const int code = cli::run({"cloneforge", "verify", "all", "--format", "json", "--seed", "42", "--threads", threads},
                              out, err);
    return std::make_pair(code, out.str());
  };
  const auto a = verify_all("1");
  const auto b = verify_all("4");
  Outcome o;
  o.require(a.first == 0 && b.first == 0, "verify all exits 0");
  o.require(!a.second.empty() && a.second == b.second, "byte-identical reports");
  if (o.ok) o.note = std::to_string(a.second.size()) + " bytes";
  return o;
}

Outcome c10() {
  const Report r = verify_roundtrip({});
  Outcome o = from_report(r);
  o.require(r.counters["cases"] == 12, "6 tables x 2 formats");
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "three-element sweep", 60, c1},
      {2, "table reproduction", 10, c2},
      {3, "generators minimal, fragments 4/6/11", 10, c3},
      {4, "S classification", 1800, c4},
      {5, "f_zy case chain, 6144 cases", 5, c5},
      {6, "star-operator properties", 60, c6},
      {7, "restriction correspondence", 5, c7},
      {8, "claim spot checks", 600, c8},
      {9, "determinism across thread counts", 0, c9},
      {10, "file-format round trip", 0, c10},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_s > 0) o.require(seconds < c.limit_s, "runtime limit " + std::to_string(static_cast<int>(c.limit_s)) + " s");
    failed += !o.ok;
    std::ostringstream line;
    line.precision(2);
    line << std::fixed << (o.ok ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << " (" << seconds << " s)";
    if (!o.note.empty()) line << " - " << o.note;
    std::cout << line.str() << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
