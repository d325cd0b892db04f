#pragma once

#include <string>
#include <string_view>

#include "cloneforge/operation.hpp"

namespace cloneforge {

/// Two text encodings of an operation.
///
/// Full:
///     OPERATION arity=<n> size=<k>
///     a1 a2 ... an -> v          (size^arity lines, any order, each tuple once)
///
/// Majority shorthand (ternary majority operations only):
///     MAJORITY size=<k>
///     a b c -> v                 (one line per pairwise-distinct triple)
///
/// `#` starts a comment. Non-distinct triples of the shorthand follow the
/// majority rule.
enum class TextFormat { Full, Majority };

/// Tuples are written in table order, one per line, '\n'-terminated.
std::string serialize(const Operation& f, TextFormat format);

/// Accepts either format; throws ParseError with the offending line number.
Operation parse_operation(std::string_view text);

std::string_view format_name(TextFormat format);

}  // namespace cloneforge
