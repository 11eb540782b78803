#ifndef POLYTERM_INTERP_HPP
#define POLYTERM_INTERP_HPP

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polyterm/circuit.hpp"
#include "polyterm/multiset.hpp"

namespace polyterm {

struct InterpError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Expression over the descending inputs x1..xm and ascending inputs y1..yn
/// of a generator. Every combinator is monotone, so every expression denotes
/// a monotone map by construction. There is deliberately no subtraction,
/// division or conditional.
class CurrentExpr {
 public:
  enum class Kind { XVar, YVar, Const, Add, Max, Scale };

  static CurrentExpr xvar(unsigned index);  // 1-based
  static CurrentExpr yvar(unsigned index);  // 1-based
  static CurrentExpr constant(Nat value);
  static CurrentExpr add(CurrentExpr lhs, CurrentExpr rhs);
  static CurrentExpr max(CurrentExpr lhs, CurrentExpr rhs);
  static CurrentExpr scale(Nat factor, CurrentExpr arg);

  Kind kind() const { return node_->kind; }
  unsigned index() const { return node_->index; }
  Nat value() const { return node_->value; }
  const CurrentExpr& lhs() const { return node_->children[0]; }
  const CurrentExpr& rhs() const { return node_->children[1]; }
  const CurrentExpr& arg() const { return node_->children[0]; }

  Nat eval(std::span<const Nat> xs, std::span<const Nat> ys) const;

  /// Largest variable indices used (x, y); 0 when unused.
  void var_bounds(unsigned& max_x, unsigned& max_y) const;
  bool uses_max() const;

  std::string str() const;

 private:
  struct Node {
    Kind kind;
    unsigned index = 0;  // for variables
    Nat value = 0;       // for constants and scale factors
    std::vector<CurrentExpr> children;
  };
  explicit CurrentExpr(std::shared_ptr<const Node> node)
      : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Heat contribution of a generator: a formal sum of atoms, each atom turning
/// a current value into a generator of the heat monoid.
struct HeatExpr {
  std::vector<CurrentExpr> atoms;  // empty sum allowed

  Multiset eval(std::span<const Nat> xs, std::span<const Nat> ys) const;
  std::string str() const;
};

/// The triple interpreting one generator m -> n: how it transmits descending
/// currents (n expressions over x1..xm), ascending currents (m expressions
/// over y1..yn), and how much heat it produces.
struct GeneratorInterpretation {
  std::vector<CurrentExpr> down;
  std::vector<CurrentExpr> up;
  HeatExpr heat;
};

/// Total assignment of interpretations for a signature, with the least
/// current value fed into the grids (some interpretations are only strict on
/// positive currents).
class InterpretationAssignment {
 public:
  InterpretationAssignment() = default;
  explicit InterpretationAssignment(Nat min_current)
      : x_min_(min_current), y_min_(min_current) {}

  void set(GenId id, GeneratorInterpretation gi) { table_[id] = std::move(gi); }
  const GeneratorInterpretation& at(GenId id) const;
  bool total_on(const Signature& sig) const;

  /// Checks arities of every assigned triple against the signature.
  void validate(const Signature& sig) const;

  Nat x_min() const { return x_min_; }
  Nat y_min() const { return y_min_; }
  void set_minimum(Nat m) { x_min_ = m; y_min_ = m; }

 private:
  std::map<GenId, GeneratorInterpretation> table_;
  Nat x_min_ = 0;
  Nat y_min_ = 0;
};

/// Descending pass (the _* interpretation): length(xs) must equal f.inputs.
std::vector<Nat> eval_down(const Signature& sig,
                           const InterpretationAssignment& a, const Circuit& f,
                           std::span<const Nat> xs);

/// Ascending pass (the ^* interpretation): length(ys) must equal f.outputs.
std::vector<Nat> eval_up(const Signature& sig,
                         const InterpretationAssignment& a, const Circuit& f,
                         std::span<const Nat> ys);

/// Heat of a circuit at boundary currents: one forward pass, one backward
/// pass, then per-slice heat collection.
Multiset eval_heat(const Signature& sig, const InterpretationAssignment& a,
                   const Circuit& f, std::span<const Nat> xs,
                   std::span<const Nat> ys);

/// Affine view of a current expression: coeffs over the enclosing circuit's
/// boundary variables plus a constant. Built only for max-free expressions.
struct AffineForm {
  std::vector<Nat> coeffs;
  Nat constant = 0;

  Nat eval_at(std::span<const Nat> point) const;
};

/// Symbolically composes the descending maps of f into affine forms over
/// f.inputs variables. Throws InterpError when a max is encountered.
std::vector<AffineForm> affine_down(const Signature& sig,
                                    const InterpretationAssignment& a,
                                    const Circuit& f);

/// Same for the ascending maps, over f.outputs variables.
std::vector<AffineForm> affine_up(const Signature& sig,
                                  const InterpretationAssignment& a,
                                  const Circuit& f);

/// Decides lhs(v) >= rhs(v) for every v >= (min,...,min) coordinatewise.
/// For natural coefficients this holds iff it holds on coefficients and at
/// the all-min point. When false, *witness is set to a concrete refuting
/// point.
bool affine_dominates(const AffineForm& lhs, const AffineForm& rhs, Nat min,
                      std::vector<Nat>* witness);

}  // namespace polyterm

#endif
