#ifndef POLYTERM_CHECKER_HPP
#define POLYTERM_CHECKER_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "polyterm/interp.hpp"
#include "polyterm/rewrite.hpp"

namespace polyterm {

/// Exhaustive check of the rule inequalities on the finite grid
/// {min .. min+bound}^(inputs+outputs).
struct BoundedGrid {
  unsigned bound = 1;
};

/// Universal decision of the current-map inequalities for max-free (affine)
/// assignments by coefficient-and-constant comparison of the symbolically
/// composed maps. Heat strictness has no exact procedure here and still uses
/// a grid; the verdict records the mixture.
struct AffineExact {
  unsigned heat_grid_bound = 5;
};

using VerificationMode = std::variant<BoundedGrid, AffineExact>;

struct Counterexample {
  std::vector<Nat> xs;
  std::vector<Nat> ys;
  std::string inequality;  // "down", "up" or "heat"
};

struct RuleVerdict {
  std::string rule;
  bool down_ok = false;
  bool up_ok = false;
  bool heat_strict = false;
  std::string mode;  // e.g. "grid:4", "affine+grid:5(heat)"
  std::optional<Counterexample> counterexample;

  bool pass() const { return down_ok && up_ok && heat_strict; }
};

struct VerificationReport {
  enum class Overall { Certified, CertifiedUpToBound, Refuted };
  std::vector<RuleVerdict> verdicts;
  Overall overall = Overall::Certified;
  unsigned bound = 0;            // for CertifiedUpToBound
  std::string refuted_rule;      // for Refuted

  bool ok() const { return overall != Overall::Refuted; }
};

/// Decides the rule inequalities f_* >= g_*, f^* >= g^* and [f] > [g] in the
/// requested regime. `jobs` > 1 splits the grid across threads; the reported
/// counterexample is the lexicographically least failing point either way.
RuleVerdict check_rule(const Signature& sig, const Rule& r,
                       const InterpretationAssignment& a,
                       const VerificationMode& mode, unsigned jobs = 1);

/// Runs check_rule over every rule. An empty rule set is vacuously certified.
VerificationReport check_polygraph(const Polygraph& p,
                                   const InterpretationAssignment& a,
                                   const VerificationMode& mode,
                                   unsigned jobs = 1);

/// True when the heat strictly decreases along every step of the trace at
/// the given boundary currents.
bool audit_heat_descent(const Signature& sig,
                        const InterpretationAssignment& a,
                        const ReductionTrace& trace, std::span<const Nat> xs,
                        std::span<const Nat> ys);

/// Human-readable report, one line per rule plus an overall line.
std::string render_report(const VerificationReport& report);

/// Machine-readable report: one JSON record per line, one per rule, then an
/// overall record.
std::string render_report_records(const VerificationReport& report);

}  // namespace polyterm

#endif
