#ifndef POLYTERM_FORMAT_HPP
#define POLYTERM_FORMAT_HPP

#include <optional>
#include <string>
#include <vector>

#include "polyterm/checker.hpp"
#include "polyterm/interp.hpp"
#include "polyterm/rewrite.hpp"

namespace polyterm {

struct ParseError : std::runtime_error {
  unsigned line;
  unsigned column;
  ParseError(const std::string& message, unsigned line, unsigned column)
      : std::runtime_error(std::to_string(line) + ":" +
                           std::to_string(column) + ": " + message),
        line(line),
        column(column) {}
};

/// Parsed .poly file: a signature, optional rules, an optional (then total)
/// interpretation and an optional minimum-current directive. Every entry may
/// carry a bracketed provenance tag which round-trips through render().
struct PolyFile {
  Signature signature;
  std::vector<std::string> generator_tags;  // aligned with the signature
  std::vector<Rule> rules;
  std::vector<std::string> rule_tags;  // aligned with rules
  InterpretationAssignment interpretation;
  std::vector<GenId> interpreted;  // declaration order
  std::vector<std::string> interp_tags;  // aligned with interpreted
  std::optional<Nat> currents_min;
  std::string currents_tag;
  std::vector<std::string> warnings;

  bool has_interpretation() const { return !interpreted.empty(); }
  Polygraph polygraph() const;
};

bool poly_equal(const PolyFile& a, const PolyFile& b);

/// Parses a complete .poly document; errors carry line and column.
PolyFile parse_poly(const std::string& text);

/// Renders back to text; parse(render(f)) equals f.
std::string render_poly(const PolyFile& file);

/// Parses one circuit term ("(mu * id:1) ; mu") against a signature.
Circuit parse_term(const Signature& sig, const std::string& text);

/// Renders a circuit as a parseable term.
std::string render_term(const Signature& sig, const Circuit& c);

/// Graphviz dump of a circuit.
std::string render_dot(const Signature& sig, const Circuit& c);

}  // namespace polyterm

#endif
