#pragma once

#include <string>

#include "crn/network.hpp"

namespace crn {

struct ParseError : CrnError {
  ParseError(std::size_t line, std::size_t col, const std::string& what)
      : CrnError("line " + std::to_string(line) + ", col " + std::to_string(col) +
                 ": " + what),
        line(line),
        col(col) {}
  std::size_t line;
  std::size_t col;
};

/// Text DSL:
///   line     := comment | param | reaction
///   reaction := side arrow side '@' rate [',' rate]
///   side     := '0' | term ('+' term)*
///   term     := [integer] ident           ("2 S1" or "2S1")
///   arrow    := '->' | '<->'              (reversible: forward, reverse)
///   param    := 'param' ident '=' rational
///   comment  := '#' to end of line
/// Species are collected in first-appearance order.
ReactionNetwork parse_network(const std::string& text);

/// One '->' line per reaction with literal p/q rates; parse(format(net))
/// reproduces net for any parser-produced network.
std::string format_network(const ReactionNetwork& net);

}  // namespace crn
