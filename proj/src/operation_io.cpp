#include "cloneforge/operation_io.hpp"

#include <charconv>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include "cloneforge/error.hpp"

namespace cloneforge {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::optional<int> to_int(std::string_view s) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

int keyed_int(std::string_view token, std::string_view key, int line) {
  if (token.substr(0, key.size()) != key || token.size() == key.size())
    throw ParseError(line, "expected '" + std::string(key) + "<n>', got '" + std::string(token) + "'");
  auto v = to_int(token.substr(key.size()));
  if (!v) throw ParseError(line, "malformed number in '" + std::string(token) + "'");
  return *v;
}

std::string tuple_text(std::span<const int> t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + std::to_string(t[i]);
  return s + ")";
}

bool pairwise_distinct(std::span<const int> t) {
  for (std::size_t i = 0; i < t.size(); ++i)
    for (std::size_t j = i + 1; j < t.size(); ++j)
      if (t[i] == t[j]) return false;
  return true;
}

}  // namespace

std::string_view format_name(TextFormat format) {
  return format == TextFormat::Full ? "full" : "majority";
}

std::string serialize(const Operation& f, TextFormat format) {
  std::ostringstream os;
  if (format == TextFormat::Majority) {
    if (!is_majority(f)) throw AlgebraError("MAJORITY format requires a ternary majority operation");
    os << "MAJORITY size=" << f.size() << '\n';
  } else {
    os << "OPERATION arity=" << f.arity() << " size=" << f.size() << '\n';
  }
  for (std::size_t idx = 0; idx < f.table_size(); ++idx) {
    const auto t = index_tuple(f.size(), f.arity(), idx);
    if (format == TextFormat::Majority && !pairwise_distinct(t)) continue;
    for (std::size_t i = 0; i < t.size(); ++i) os << (i ? " " : "") << t[i];
    os << " -> " << int{f.code_at(idx)} + 1 << '\n';
  }
  return os.str();
}

Operation parse_operation(std::string_view text) {
  std::optional<TextFormat> format;
  int arity = 0, size = 0;
  std::map<std::size_t, std::pair<int, int>> seen;  // tuple index -> (value, line)
  int line_no = 0;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (!format) {
      const auto tokens = split_ws(line);
      if (tokens.size() == 3 && tokens[0] == "OPERATION") {
        format = TextFormat::Full;
        arity = keyed_int(tokens[1], "arity=", line_no);
        size = keyed_int(tokens[2], "size=", line_no);
      } else if (tokens.size() == 2 && tokens[0] == "MAJORITY") {
        format = TextFormat::Majority;
        arity = 3;
        size = keyed_int(tokens[1], "size=", line_no);
      } else {
        throw ParseError(line_no, "expected header 'OPERATION arity=<n> size=<k>' or 'MAJORITY size=<k>'");
      }
      if (arity < 1 || arity > kMaxArity) throw ParseError(line_no, "arity out of range");
      if (size < 2 || size > kMaxSize) throw ParseError(line_no, "size out of range");
      continue;
    }

    const auto arrow = line.find("->");
    if (arrow == std::string_view::npos) throw ParseError(line_no, "malformed line, expected 'a1 ... an -> v'");
    const auto lhs = split_ws(trim(line.substr(0, arrow)));
    const auto rhs = split_ws(trim(line.substr(arrow + 2)));
    if (static_cast<int>(lhs.size()) != arity || rhs.size() != 1)
      throw ParseError(line_no, "malformed line, expected " + std::to_string(arity) + " arguments and one value");

    std::vector<int> tuple;
    for (auto tok : lhs) {
      auto v = to_int(tok);
      if (!v) throw ParseError(line_no, "malformed element '" + std::string(tok) + "'");
      if (*v < 1 || *v > size) throw ParseError(line_no, "element " + std::to_string(*v) + " out of range");
      tuple.push_back(*v);
    }
    auto value = to_int(rhs[0]);
    if (!value) throw ParseError(line_no, "malformed value '" + std::string(rhs[0]) + "'");
    if (*value < 1 || *value > size) throw ParseError(line_no, "value " + std::to_string(*value) + " out of range");
    if (*format == TextFormat::Majority && !pairwise_distinct(tuple))
      throw ParseError(line_no, "tuple " + tuple_text(tuple) + " is not pairwise distinct");

    const auto index = tuple_index(size, tuple);
    if (auto it = seen.find(index); it != seen.end())
      throw ParseError(line_no, "duplicate tuple " + tuple_text(tuple) + " (first given on line " +
                                    std::to_string(it->second.second) + ")");
    seen.emplace(index, std::pair{*value, line_no});
  }

  if (!format) throw ParseError(0, "empty input: missing header");

  const std::size_t n = table_length(arity, size);
  std::vector<int> table(n, 0);
  for (std::size_t idx = 0; idx < n; ++idx) {
    const auto t = index_tuple(size, arity, idx);
    if (auto it = seen.find(idx); it != seen.end()) {
      table[idx] = it->second.first;
    } else if (*format == TextFormat::Majority && !pairwise_distinct(t)) {
      table[idx] = *majority_value(t[0], t[1], t[2]);
    } else {
      throw ParseError(0, "end of input: missing tuple " + tuple_text(t));
    }
  }
  return make_operation(arity, size, table);
}

}  // namespace cloneforge
