#include "polyterm/circuit.hpp"

#include <algorithm>

namespace polyterm {

GenId Signature::add(GeneratorDecl decl) {
  if (by_name_.contains(decl.name)) {
    throw CircuitError("duplicate generator name: " + decl.name);
  }
  GenId id = static_cast<GenId>(generators_.size());
  by_name_.emplace(decl.name, id);
  generators_.push_back(std::move(decl));
  return id;
}

const GeneratorDecl& Signature::at(GenId id) const {
  if (id >= generators_.size()) throw CircuitError("generator id out of range");
  return generators_[id];
}

std::optional<GenId> Signature::find(std::string_view name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

Circuit identity(unsigned n) { return Circuit{n, n, {}}; }

Circuit from_generator(const Signature& sig, GenId id) {
  const GeneratorDecl& g = sig.at(id);
  return Circuit{g.arity_in, g.arity_out, {Slice{0, id}}};
}

Circuit from_generator(const Signature& sig, std::string_view name) {
  auto id = sig.find(name);
  if (!id) throw CircuitError("unknown generator: " + std::string(name));
  return from_generator(sig, *id);
}

std::vector<unsigned> level_widths(const Signature& sig, unsigned inputs,
                                   const std::vector<Slice>& slices) {
  std::vector<unsigned> widths;
  widths.reserve(slices.size() + 1);
  unsigned w = inputs;
  widths.push_back(w);
  for (const Slice& s : slices) {
    const GeneratorDecl& g = sig.at(s.gen);
    if (s.pad + g.arity_in > w) {
      throw CircuitError("slice exceeds level width (pad " +
                         std::to_string(s.pad) + ", generator " + g.name +
                         ", width " + std::to_string(w) + ")");
    }
    w = w - g.arity_in + g.arity_out;
    widths.push_back(w);
  }
  return widths;
}

bool slices_independent(const Signature& sig, unsigned /*inputs*/,
                        const std::vector<Slice>& slices, std::size_t k) {
  if (k + 1 >= slices.size()) return false;
  const GeneratorDecl& a = sig.at(slices[k].gen);
  const GeneratorDecl& b = sig.at(slices[k + 1].gen);
  unsigned p = slices[k].pad;
  unsigned q = slices[k + 1].pad;
  // The first slice occupies [p, p+a_out) at the level between the two; the
  // second consumes [q, q+b_in) there. Disjoint intervals commute. A 0-input
  // second slice is an insertion point, clear of [p, p+a_out) iff q <= p or
  // q >= p + a_out.
  if (b.arity_in == 0) return q <= p || q >= p + a.arity_out;
  return q + b.arity_in <= p || q >= p + a.arity_out;
}

namespace {

// True when, among an independent adjacent pair, the later slice should be
// pulled up: it lies to the left, with coincident insertion points broken
// deterministically so the bubble pass cannot cycle.
bool later_is_left(const Signature& sig, const std::vector<Slice>& slices,
                   std::size_t k) {
  const Slice& sa = slices[k];
  const Slice& sb = slices[k + 1];
  const GeneratorDecl& a = sig.at(sa.gen);
  const GeneratorDecl& b = sig.at(sb.gen);
  if (b.arity_in > 0) return sb.pad + b.arity_in <= sa.pad;
  if (sb.pad != sa.pad) return sb.pad < sa.pad;
  // Coincident insertion points. A floating 0->0 piece stays below an
  // insertion that produces wires; two floating pieces order by generator.
  if (b.arity_out == 0 && a.arity_in == 0) {
    if (a.arity_out == 0) return sb.gen < sa.gen;
    return false;
  }
  return true;
}

}  // namespace

void exchange_slices(const Signature& sig, unsigned inputs,
                     std::vector<Slice>& slices, std::size_t k) {
  if (!slices_independent(sig, inputs, slices, k)) {
    throw CircuitError("exchange on overlapping slices");
  }
  const Slice a = slices[k];
  const Slice b = slices[k + 1];
  const GeneratorDecl& ga = sig.at(a.gen);
  const GeneratorDecl& gb = sig.at(b.gen);
  if (later_is_left(sig, slices, k)) {
    // b fires first at its own pad; a shifts by b's width change.
    slices[k] = Slice{b.pad, b.gen};
    slices[k + 1] = Slice{a.pad + gb.arity_out - gb.arity_in, a.gen};
  } else {
    // b lies right of a's outputs; fired first it shifts back by a's width
    // change, while a keeps its pad.
    slices[k] = Slice{b.pad + ga.arity_in - ga.arity_out, b.gen};
    slices[k + 1] = Slice{a.pad, a.gen};
  }
}

Circuit canonicalize(const Signature& sig, unsigned inputs, unsigned outputs,
                     std::vector<Slice> slices) {
  std::vector<unsigned> widths = level_widths(sig, inputs, slices);
  if (widths.back() != outputs) {
    throw CircuitError("declared outputs " + std::to_string(outputs) +
                       " do not match final width " +
                       std::to_string(widths.back()));
  }
  // Bubble pass: pull every slice as early as possible. Terminates because
  // each swap moves a strictly-lefter piece up and pieces never cross back.
  const std::size_t n = slices.size();
  const std::size_t max_sweeps = n * n + 2;
  std::size_t sweeps = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      if (slices_independent(sig, inputs, slices, k) &&
          later_is_left(sig, slices, k)) {
        exchange_slices(sig, inputs, slices, k);
        changed = true;
      }
    }
    if (++sweeps > max_sweeps) {
      throw CircuitError("canonicalization failed to converge");
    }
  }
  return Circuit{inputs, outputs, std::move(slices)};
}

Circuit hcomp(const Signature& sig, const Circuit& f, const Circuit& g) {
  std::vector<Slice> slices = f.slices;
  slices.reserve(f.slices.size() + g.slices.size());
  // g's slices run to the right of f's final width.
  for (const Slice& s : g.slices) {
    slices.push_back(Slice{s.pad + f.outputs, s.gen});
  }
  return canonicalize(sig, f.inputs + g.inputs, f.outputs + g.outputs,
                      std::move(slices));
}

Circuit vcomp(const Signature& sig, const Circuit& f, const Circuit& g) {
  if (f.outputs != g.inputs) {
    throw CircuitError("interface mismatch in vertical composition: " +
                       std::to_string(f.outputs) + " vs " +
                       std::to_string(g.inputs));
  }
  std::vector<Slice> slices = f.slices;
  slices.insert(slices.end(), g.slices.begin(), g.slices.end());
  return canonicalize(sig, f.inputs, g.outputs, std::move(slices));
}

bool equals(const Circuit& f, const Circuit& g) { return f == g; }

bool well_formed(const Signature& sig, const Circuit& c) {
  try {
    std::vector<unsigned> widths = level_widths(sig, c.inputs, c.slices);
    return widths.back() == c.outputs;
  } catch (const CircuitError&) {
    return false;
  }
}

}  // namespace polyterm
