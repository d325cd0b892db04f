#include "cloneforge/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <thread>

#include "cloneforge/catalog.hpp"
#include "cloneforge/clone.hpp"
#include "cloneforge/error.hpp"
#include "cloneforge/operation_io.hpp"
#include "cloneforge/relation.hpp"
#include "cloneforge/term.hpp"
#include "cloneforge/verifier.hpp"

namespace cloneforge::cli {

using nlohmann::ordered_json;

namespace {

/// Input that cannot be used: unreadable file, bad syntax, violated precondition.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Settings {
  std::size_t cap = kDefaultCap;
  std::optional<std::uint64_t> seed;
  std::optional<int> samples;
  std::string format = "text";
  std::string output;
  unsigned threads = std::max(1U, std::thread::hardware_concurrency());
  bool timing = false;

  bool json() const { return format == "json"; }
};

Operation load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_operation(text.str());
  } catch (const ParseError& e) {
    throw InputError(path + ": " + e.what());
  }
}

TextFormat natural_format(const Operation& f) {
  return f.arity() == 3 && is_majority(f) ? TextFormat::Majority : TextFormat::Full;
}

/// What a subcommand produced: the text to print and the exit code.
struct Outcome {
  std::string text;
  int code = 0;
};

Outcome emit(const Settings& s, const ordered_json& json, std::string text, int code) {
  if (s.json()) return {json.dump(2) + "\n", code};
  return {std::move(text), code};
}

Outcome cmd_check(const Settings& s, const std::string& file, const std::string& predicate) {
  const Operation f = load(file);
  const std::vector<std::pair<std::string, std::function<bool(const Operation&)>>> predicates{
      {"projection", [](const Operation& g) { return is_projection(g).has_value(); }},
      {"idempotent", is_idempotent},
      {"majority", is_majority},
      {"near-unanimity", is_near_unanimity},
      {"semiprojection", is_semiprojection},
      {"cyclically-commutative", is_cyclically_commutative},
      {"conservative", is_conservative},
      {"boolean-minority", is_boolean_minority},
  };
  auto applies = [&](const std::string& name) {
    if ((name == "majority" || name == "cyclically-commutative") && f.arity() != 3) return false;
    if (name == "boolean-minority" && (f.arity() != 3 || (f.size() & (f.size() - 1)) != 0)) return false;
    return true;
  };
  ordered_json json{{"file", file}, {"arity", f.arity()}, {"size", f.size()}};
  std::string text;
  if (!predicate.empty()) {
    auto it = std::find_if(predicates.begin(), predicates.end(), [&](const auto& p) { return p.first == predicate; });
    if (it == predicates.end()) throw InputError("unknown predicate '" + predicate + "'");
    if (!applies(predicate)) throw InputError("predicate " + predicate + " does not apply to this operation");
    const bool value = it->second(f);
    json[predicate] = value;
    return emit(s, json, predicate + ": " + (value ? "true" : "false") + "\n", value ? 0 : 1);
  }
  for (const auto& [name, fn] : predicates) {
    if (!applies(name)) continue;
    const bool value = fn(f);
    json[name] = value;
    text += name + ": " + (value ? "true" : "false") + "\n";
  }
  return emit(s, json, text, 0);
}

Outcome cmd_table(const Settings& s, const std::string& name, const std::string& as) {
  const auto f = named_table(name);
  if (!f) throw InputError("unknown table '" + name + "' (expected m1, m2, m3, M1, M2 or M3)");
  const TextFormat format = as == "full" ? TextFormat::Full : TextFormat::Majority;
  const std::string text = serialize(*f, format);
  return emit(s, {{"table", name}, {"format", format_name(format)}, {"text", text}}, text, 0);
}

Outcome cmd_hat(const Settings& s, const std::string& file) {
  const Operation f = load(file);
  if (f.arity() != 3) throw InputError("hat needs a ternary operation");
  const auto cycle = star_cycle(f);
  const Operation h = iterate_star(f, cycle.exponent);
  const std::string body = serialize(h, natural_format(h));
  ordered_json json{{"tail", cycle.tail}, {"period", cycle.period}, {"exponent", cycle.exponent},
                    {"satisfies_star", satisfies_star(h)}, {"hat", body}};
  return emit(s, json, "# hat = f^(" + std::to_string(cycle.exponent) + ")\n" + body, 0);
}

Outcome cmd_members(const Settings& s, const std::string& file) {
  const Operation f = load(file);
  const auto members = majority_members(f, s.cap);
  ordered_json list = ordered_json::array();
  std::string text = "# " + std::to_string(members.size()) + " majority members\n";
  for (const auto& g : members) {
    const std::string body = serialize(g, TextFormat::Majority);
    list.push_back(body);
    text += "\n" + body;
  }
  return emit(s, {{"count", members.size()}, {"members", list}}, text, 0);
}

Outcome cmd_minimal(const Settings& s, const std::string& file) {
  const Operation f = load(file);
  const auto v = is_minimal_majority(f, s.cap);
  ordered_json json{{"verdict", verdict_name(v.kind)}, {"members_seen", v.members_seen}};
  std::string text(verdict_name(v.kind));
  if (v.kind == MinimalityVerdict::Kind::NotMinimal) {
    json["reason"] = reason_name(v.reason);
    json["detail"] = v.detail;
    if (v.witness) json["witness"] = serialize(*v.witness, natural_format(*v.witness));
    text += "\nreason: " + std::string(reason_name(v.reason)) + "\ndetail: " + v.detail;
    if (v.witness) text += "\nwitness:\n" + serialize(*v.witness, natural_format(*v.witness));
  } else if (v.kind == MinimalityVerdict::Kind::Inconclusive) {
    json["detail"] = v.detail;
    text += "\ndetail: " + v.detail;
  }
  if (text.back() != '\n') text += '\n';
  const int code = v.minimal() ? 0 : v.kind == MinimalityVerdict::Kind::NotMinimal ? 1 : 2;
  return emit(s, json, text, code);
}

Outcome cmd_iso(const Settings& s, const std::string& a, const std::string& b) {
  const Operation f = load(a), g = load(b);
  const auto phi = find_isomorphism(f, g);
  if (!phi) return emit(s, {{"isomorphic", false}}, "not isomorphic\n", 1);
  return emit(s, {{"isomorphic", true}, {"bijection", to_string(*phi)}}, "isomorphic via " + to_string(*phi) + "\n", 0);
}

Outcome cmd_superpose(const Settings& s, const std::string& file, const std::string& term_text) {
  const Operation f = load(file);
  const Term t = parse_term(term_text);
  const Operation g = eval_term(t, f);
  const std::string body = serialize(g, natural_format(g));
  return emit(s, {{"term", t.to_string()}, {"result", body}}, body, 0);
}

Outcome cmd_relation(const Settings& s, const std::string& file, const std::string& relation_text) {
  const Operation f = load(file);
  const Relation rho = parse_relation(relation_text, f.size());
  const bool ok = preserves(f, rho);
  return emit(s, {{"relation", rho.to_string()}, {"preserves", ok}}, ok ? "preserves\n" : "does not preserve\n", ok ? 0 : 1);
}

Outcome cmd_verify(const Settings& s, const std::string& target) {
  VerifyOptions options;
  options.cap = s.cap;
  options.seed = s.seed;
  options.samples = s.samples;
  options.threads = s.threads;
  std::vector<Report> reports;
  if (target == "all") {
    reports = run_all(options);
  } else {
    const bool known = target == "conservative" ||
                       std::find(kVerifyTargets.begin(), kVerifyTargets.end(), target) != kVerifyTargets.end();
    if (!known) throw InputError("unknown verify target '" + target + "'");
    reports.push_back(run_check(target, options));
  }
  const int code = exit_code(combine(reports));
  if (s.json()) {
    if (reports.size() == 1) return {reports.front().to_json(s.timing).dump(2) + "\n", code};
    ordered_json all = ordered_json::array();
    for (const auto& r : reports) all.push_back(r.to_json(s.timing));
    return {all.dump(2) + "\n", code};
  }
  std::string text;
  for (const auto& r : reports) text += r.to_text(s.timing);
  return {text, code};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite-algebra workbench for majority clones", "cloneforge"};
  app.require_subcommand(1);
  app.fallthrough();
  Settings s;
  app.add_option("--cap", s.cap, "Member cap for clone closures")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--seed", s.seed, "Seed for sampled checks (default: per check)");
  app.add_option("--samples", s.samples, "Samples for sampled checks (default: per check)")->check(CLI::PositiveNumber);
  app.add_option("--format", s.format, "Output format")->capture_default_str()->check(CLI::IsMember({"text", "json"}));
  app.add_option("--output", s.output, "Write the result to this file");
  app.add_option("--threads", s.threads, "Worker threads for verify")->check(CLI::PositiveNumber);
  app.add_flag("--timing", s.timing, "Include elapsed_ms in verify reports");

  std::function<Outcome()> action;
  std::string file, file2, text, predicate, as = "majority", name;

  auto* check = app.add_subcommand("check", "Report structural predicates of an operation");
  check->add_option("FILE", file)->required();
  check->add_option("--predicate", predicate, "Test one predicate; exit 0 if true, 1 if false");
  check->callback([&] { action = [&] { return cmd_check(s, file, predicate); }; });

  auto* table = app.add_subcommand("table", "Print an embedded table (m1..m3, M1..M3)");
  table->add_option("NAME", name)->required();
  table->add_option("--as", as, "Text encoding")->check(CLI::IsMember({"majority", "full"}))->capture_default_str();
  table->callback([&] { action = [&] { return cmd_table(s, name, as); }; });

  auto* hat_cmd = app.add_subcommand("hat", "Print the idempotent f^(k) of the star sequence");
  hat_cmd->add_option("FILE", file)->required();
  hat_cmd->callback([&] { action = [&] { return cmd_hat(s, file); }; });

  auto* members = app.add_subcommand("members", "List the majority members of the clone of f");
  members->add_option("FILE", file)->required();
  members->callback([&] { action = [&] { return cmd_members(s, file); }; });

  auto* minimal = app.add_subcommand("minimal", "Decide whether a majority operation generates a minimal clone");
  minimal->add_option("FILE", file)->required();
  minimal->callback([&] { action = [&] { return cmd_minimal(s, file); }; });

  auto* iso = app.add_subcommand("iso", "Search for an isomorphism between two operations");
  iso->add_option("FILE1", file)->required();
  iso->add_option("FILE2", file2)->required();
  iso->callback([&] { action = [&] { return cmd_iso(s, file, file2); }; });

  auto* superpose = app.add_subcommand("superpose", "Evaluate a term such as f(z,y,f(x,y,z))");
  superpose->add_option("FILE", file)->required();
  superpose->add_option("TERM", text)->required();
  superpose->callback([&] { action = [&] { return cmd_superpose(s, file, text); }; });

  auto* relation = app.add_subcommand("relation-check", "Test whether f preserves a relation");
  relation->add_option("FILE", file)->required();
  relation->add_option("RELATION", text)->required();
  relation->callback([&] { action = [&] { return cmd_relation(s, file, text); }; });

  auto* verify = app.add_subcommand("verify", "Run a verification check, or all of them");
  verify->add_option("TARGET", name, "tables, three-element, minimality, s-classify, lemma31, star-properties, "
                                     "restriction, claims, roundtrip, conservative or all")
      ->required();
  verify->callback([&] { action = [&] { return cmd_verify(s, name); }; });

  std::vector<std::string> rest(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rest);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 3;
  }

  Outcome result;
  try {
    result = action();
  } catch (const CapExceeded& e) {
    err << "inconclusive: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const AlgebraError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }

  if (s.output.empty()) {
    out << result.text << std::flush;
  } else {
    std::ofstream file_out(s.output, std::ios::binary);
    if (!(file_out << result.text)) {
      err << "error: cannot write " << s.output << "\n";
      return 3;
    }
  }
  return result.code;
}

}  // namespace cloneforge::cli
