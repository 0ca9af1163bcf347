#pragma once

#include <string>
#include <variant>

#include "automps/automaton.hpp"
#include "automps/grid2d.hpp"

namespace automps {

using ParsedSpec = std::variant<WeightedAutomaton, SignalingAgent>;

/// Parses the line-oriented spec grammar:
///
///   kind: state|operator|agent
///   dim: <int>
///   symbol <name> ket <c> <c> ...
///   symbol <name> matrix <c> <c> ; <c> <c>
///   state <name>            (automaton; order defines indices)
///   signal <name>           (agent)
///   initial <name> [<c>]    final <name> [<c>]
///   edge <from> <to> <symbol> [<c>]
///   trans <up> <left> <symbol> <right> <down> [<c>]
///
/// `#` starts a comment; complex literals are `a`, `a+bi` or `a-bi` with no
/// embedded whitespace. Failures throw SpecError with line and column.
ParsedSpec parse_spec(const std::string& text);

WeightedAutomaton parse_automaton_spec(const std::string& text);
SignalingAgent parse_agent_spec(const std::string& text);

/// Serializes back to spec text; reparsing yields an automaton with
/// identical outputs.
std::string to_spec_text(const WeightedAutomaton& a);
std::string to_spec_text(const SignalingAgent& a);

}  // namespace automps
