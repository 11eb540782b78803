#ifndef POLYTERM_REWRITE_HPP
#define POLYTERM_REWRITE_HPP

#include <optional>
#include <string>
#include <vector>

#include "polyterm/circuit.hpp"

namespace polyterm {

struct RewriteError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A 3-cell: an oriented pair of parallel circuits. The left side is never
/// an identity (identity patterns match everywhere and loop forever).
struct Rule {
  std::string name;
  Circuit lhs;
  Circuit rhs;
};

/// Throws unless lhs and rhs are parallel, well formed and lhs non-identity.
void validate_rule(const Signature& sig, const Rule& r);

struct Polygraph {
  Signature signature;
  std::vector<Rule> rules;

  const Rule* find_rule(std::string_view name) const;
};

/// A decomposition f = above ; (id(left_wires) * lhs * id(right_wires)) ; below.
struct Occurrence {
  Circuit above;         // h
  Circuit below;         // k
  unsigned left_wires;   // p
  unsigned right_wires;  // q
  // Which slices of f's canonical word form the matched block; the first one
  // is the anchor for the deterministic topmost-first report order.
  std::vector<std::size_t> pieces;

  std::size_t anchor() const { return pieces.empty() ? 0 : pieces.front(); }

  bool operator==(const Occurrence&) const = default;
};

/// All occurrences of r.lhs in f, one per isotopy class of decompositions,
/// ordered topmost-then-leftmost. Complete for exchange-generated isotopy.
std::vector<Occurrence> find_matches(const Signature& sig, const Circuit& f,
                                     const Rule& r);

/// Replaces the matched block by r.rhs. Throws RewriteError when the
/// occurrence does not reconstruct f (a stale occurrence).
Circuit apply_at(const Signature& sig, const Circuit& f, const Occurrence& occ,
                 const Rule& r);

/// Reconstructs the circuit an occurrence of `inner` decomposes.
Circuit reconstruct(const Signature& sig, const Occurrence& occ,
                    const Circuit& inner);

struct ReductionStep {
  std::string rule;
  Occurrence occurrence;
  Circuit result;
};

struct ReductionTrace {
  Circuit start;
  std::vector<ReductionStep> steps;
  enum class Status { Normalized, BudgetExhausted } status =
      Status::Normalized;

  const Circuit& final_circuit() const {
    return steps.empty() ? start : steps.back().result;
  }
};

/// First rule (in rule order) with a match, applied at its first occurrence.
/// Empty when f is a normal form.
std::optional<ReductionStep> rewrite_once(const Polygraph& p, const Circuit& f);

/// Iterates rewrite_once for at most `budget` steps.
ReductionTrace normalize(const Polygraph& p, const Circuit& f,
                         std::size_t budget);

}  // namespace polyterm

#endif
