#ifndef POLYTERM_CIRCUIT_HPP
#define POLYTERM_CIRCUIT_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace polyterm {

struct CircuitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using GenId = std::uint32_t;

struct GeneratorDecl {
  std::string name;
  unsigned arity_in = 0;   // input wires, read top to bottom
  unsigned arity_out = 0;  // output wires
};

/// One-sorted signature: an ordered set of named generators.
class Signature {
 public:
  GenId add(GeneratorDecl decl);
  const GeneratorDecl& at(GenId id) const;
  std::optional<GenId> find(std::string_view name) const;
  std::size_t size() const { return generators_.size(); }
  const std::vector<GeneratorDecl>& generators() const { return generators_; }

 private:
  std::vector<GeneratorDecl> generators_;
  std::map<std::string, GenId, std::less<>> by_name_;
};

/// One level of a circuit: a single generator occurrence with `pad` identity
/// wires to its left. The right padding is derived from the level width.
struct Slice {
  unsigned pad = 0;
  GenId gen = 0;
  bool operator==(const Slice&) const = default;
};

/// A circuit in slice form. Public constructors and operations keep circuits
/// in exchange-canonical form, so isotopic circuits compare equal with ==.
struct Circuit {
  unsigned inputs = 0;
  unsigned outputs = 0;
  std::vector<Slice> slices;

  bool is_identity() const { return slices.empty(); }
  bool operator==(const Circuit&) const = default;
};

struct Interface {
  unsigned inputs = 0;
  unsigned outputs = 0;
  bool operator==(const Interface&) const = default;
};

inline Interface interface_of(const Circuit& c) { return {c.inputs, c.outputs}; }

/// The circuit of n parallel wires.
Circuit identity(unsigned n);

/// The one-slice circuit of a single generator.
Circuit from_generator(const Signature& sig, GenId id);
Circuit from_generator(const Signature& sig, std::string_view name);

/// Horizontal juxtaposition: f placed to the left of g. Always defined.
Circuit hcomp(const Signature& sig, const Circuit& f, const Circuit& g);

/// Vertical plugging: f above g; requires f.outputs == g.inputs.
Circuit vcomp(const Signature& sig, const Circuit& f, const Circuit& g);

/// Widths of the wire levels of a raw slice word, inputs first. Throws
/// CircuitError when the width bookkeeping is violated.
std::vector<unsigned> level_widths(const Signature& sig, unsigned inputs,
                                   const std::vector<Slice>& slices);

/// Exchange-normal form: repeatedly swaps adjacent independent slices so the
/// one acting further left comes first, until no swap applies. Two raw words
/// denote isotopic circuits exactly when their canonical forms coincide.
Circuit canonicalize(const Signature& sig, unsigned inputs, unsigned outputs,
                     std::vector<Slice> slices);

/// Equality modulo isotopy: same interface, identical canonical slices.
bool equals(const Circuit& f, const Circuit& g);

/// Checks width bookkeeping and generator ids against the signature.
bool well_formed(const Signature& sig, const Circuit& c);

/// True when adjacent slices k, k+1 of a word act on disjoint wire intervals.
bool slices_independent(const Signature& sig, unsigned inputs,
                        const std::vector<Slice>& slices, std::size_t k);

/// Swaps adjacent independent slices k, k+1 in place, adjusting pads.
/// Throws CircuitError when they are not independent.
void exchange_slices(const Signature& sig, unsigned inputs,
                     std::vector<Slice>& slices, std::size_t k);

}  // namespace polyterm

#endif
