#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cloneforge/catalog.hpp"
#include "cloneforge/cli.hpp"
#include "cloneforge/operation_io.hpp"
#include "json.hpp"

using namespace cloneforge;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "cloneforge");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("cloneforge_test_" + name);
  std::ofstream(path) << text;
  return path.string();
}

std::string table_file(const std::string& name) {
  return write_temp(name + ".txt", serialize(*named_table(name), TextFormat::Majority));
}

}  // namespace

TEST_CASE("oracle: minimal M2 exits 0") {
  const auto r = run({"minimal", table_file("M2")});
  CHECK(r.code == 0);
  CHECK(r.out == "Minimal\n");
}

TEST_CASE("oracle: M1 and M2 are not isomorphic") {
  const auto r = run({"iso", table_file("M1"), table_file("M2")});
  CHECK(r.code == 1);
  CHECK(r.out == "not isomorphic\n");
}

TEST_CASE("oracle: verify tables reports 1,3,8 twice") {
  const auto r = run({"verify", "tables", "--format", "json"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["check"] == "tables");
  CHECK(j["status"] == "pass");
  CHECK(j["counters"]["m1"] == 1);
  CHECK(j["counters"]["m2"] == 3);
  CHECK(j["counters"]["m3"] == 8);
  CHECK(j["counters"]["M1"] == 1);
  CHECK(j["counters"]["M2"] == 3);
  CHECK(j["counters"]["M3"] == 8);
  CHECK_FALSE(j.contains("elapsed_ms"));
  CHECK(nlohmann::json::parse(run({"verify", "tables", "--format", "json", "--timing"}).out).contains("elapsed_ms"));
}

TEST_CASE("a not-minimal verdict exits 1 with a witness") {
  // f is 1 on distinct triples except f(1,3,2) = 2. Then
  // f(f(x,y,z), f(y,z,x), f(z,x,y)) is 1 on every distinct triple, a member
  // whose range misses 2, so f is not in its clone.
  const Operation f = majority_from(3, [](int a, int b, int c) { return a == 1 && b == 3 && c == 2 ? 2 : 1; });
  const auto r = run({"minimal", write_temp("nm.txt", serialize(f, TextFormat::Majority)), "--format", "json"});
  CHECK(r.code == 1);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["verdict"] == "NotMinimal");
  CHECK(j.contains("witness"));
}

TEST_CASE("cap overflow is inconclusive") {
  CHECK(run({"minimal", table_file("M3"), "--cap", "5"}).code == 2);
  CHECK(run({"members", table_file("M3"), "--cap", "5"}).code == 2);
}

TEST_CASE("input errors exit 3") {
  CHECK(run({"minimal", "/nonexistent/file"}).code == 3);
  const auto bad = run({"minimal", write_temp("bad.txt", "MAJORITY size=3\n1 2 3 -> 7\n")});
  CHECK(bad.code == 3);
  CHECK(bad.err.find("line 2") != std::string::npos);
  CHECK(run({"verify", "tables", "--bogus"}).code == 3);
  CHECK(run({"verify", "no-such-check"}).code == 3);
  CHECK(run({"table", "m7"}).code == 3);
  CHECK(run({"verify", "tables", "--format", "xml"}).code == 3);
  CHECK(run({"superpose", table_file("m2"), "f(x,y"}).code == 3);
  CHECK(run({"relation-check", table_file("m2"), "{(1,9)}"}).code == 3);
  CHECK(run({}).code == 3);
}

TEST_CASE("check predicates") {
  const auto all = run({"check", table_file("M2")});
  CHECK(all.code == 0);
  CHECK(all.out.find("majority: true") != std::string::npos);
  CHECK(all.out.find("cyclically-commutative: false") != std::string::npos);
  CHECK(run({"check", table_file("M2"), "--predicate", "majority"}).code == 0);
  CHECK(run({"check", table_file("M2"), "--predicate", "conservative"}).code == 1);
  CHECK(run({"check", table_file("M2"), "--predicate", "nonsense"}).code == 3);
}

TEST_CASE("table, hat, members, superpose, relation-check") {
  const auto t = run({"table", "m3"});
  CHECK(t.code == 0);
  CHECK(parse_operation(t.out) == m_table(3));
  CHECK(parse_operation(run({"table", "M1", "--as", "full"}).out) == M_table(1));

  const auto h = run({"hat", table_file("M3")});
  CHECK(h.code == 0);
  CHECK(parse_operation(h.out) == M_table(3));

  const auto m = nlohmann::json::parse(run({"members", table_file("M3"), "--format", "json"}).out);
  CHECK(m["count"] == 8);

  const auto s = run({"superpose", table_file("M2"), "f(y,x,z)"});
  CHECK(s.code == 0);
  CHECK(parse_operation(s.out)({1, 2, 3}) == 2);

  CHECK(run({"relation-check", table_file("M1"), "{(1,1),(1,4),(4,1),(4,4),(2,2),(3,3)}"}).code == 0);
  const auto no = run({"relation-check", table_file("M1"), "{1,2,3}"});
  CHECK(no.code == 1);
  CHECK(no.out == "does not preserve\n");
}

TEST_CASE("output file") {
  const auto path = (std::filesystem::temp_directory_path() / "cloneforge_test_out.json").string();
  const auto r = run({"verify", "roundtrip", "--format", "json", "--output", path});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  const auto j = nlohmann::json::parse(in);
  CHECK(j["counters"]["cases"] == 12);
}

TEST_CASE("thread count does not change report bytes") {
  const auto a = run({"verify", "claims", "--samples", "10", "--threads", "1", "--format", "json"});
  const auto b = run({"verify", "claims", "--samples", "10", "--threads", "3", "--format", "json"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
}
