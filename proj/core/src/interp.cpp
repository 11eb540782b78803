#include "polyterm/interp.hpp"

#include <algorithm>

namespace polyterm {

CurrentExpr CurrentExpr::xvar(unsigned index) {
  if (index == 0) throw InterpError("variable indices are 1-based");
  auto n = std::make_shared<Node>();
  n->kind = Kind::XVar;
  n->index = index;
  return CurrentExpr(std::move(n));
}

CurrentExpr CurrentExpr::yvar(unsigned index) {
  if (index == 0) throw InterpError("variable indices are 1-based");
  auto n = std::make_shared<Node>();
  n->kind = Kind::YVar;
  n->index = index;
  return CurrentExpr(std::move(n));
}

CurrentExpr CurrentExpr::constant(Nat value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Const;
  n->value = value;
  return CurrentExpr(std::move(n));
}

CurrentExpr CurrentExpr::add(CurrentExpr lhs, CurrentExpr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Add;
  n->children = {std::move(lhs), std::move(rhs)};
  return CurrentExpr(std::move(n));
}

CurrentExpr CurrentExpr::max(CurrentExpr lhs, CurrentExpr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Max;
  n->children = {std::move(lhs), std::move(rhs)};
  return CurrentExpr(std::move(n));
}

CurrentExpr CurrentExpr::scale(Nat factor, CurrentExpr arg) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Scale;
  n->value = factor;
  n->children = {std::move(arg)};
  return CurrentExpr(std::move(n));
}

Nat CurrentExpr::eval(std::span<const Nat> xs, std::span<const Nat> ys) const {
  switch (kind()) {
    case Kind::XVar:
      if (index() > xs.size()) throw InterpError("x variable out of range");
      return xs[index() - 1];
    case Kind::YVar:
      if (index() > ys.size()) throw InterpError("y variable out of range");
      return ys[index() - 1];
    case Kind::Const:
      return value();
    case Kind::Add:
      return lhs().eval(xs, ys) + rhs().eval(xs, ys);
    case Kind::Max:
      return std::max(lhs().eval(xs, ys), rhs().eval(xs, ys));
    case Kind::Scale:
      return value() * arg().eval(xs, ys);
  }
  throw InterpError("corrupt expression");
}

void CurrentExpr::var_bounds(unsigned& max_x, unsigned& max_y) const {
  switch (kind()) {
    case Kind::XVar:
      max_x = std::max(max_x, index());
      return;
    case Kind::YVar:
      max_y = std::max(max_y, index());
      return;
    case Kind::Const:
      return;
    case Kind::Add:
    case Kind::Max:
      lhs().var_bounds(max_x, max_y);
      rhs().var_bounds(max_x, max_y);
      return;
    case Kind::Scale:
      arg().var_bounds(max_x, max_y);
      return;
  }
}

bool CurrentExpr::uses_max() const {
  switch (kind()) {
    case Kind::Max:
      return true;
    case Kind::Add:
      return lhs().uses_max() || rhs().uses_max();
    case Kind::Scale:
      return arg().uses_max();
    default:
      return false;
  }
}

std::string CurrentExpr::str() const {
  switch (kind()) {
    case Kind::XVar:
      return "x" + std::to_string(index());
    case Kind::YVar:
      return "y" + std::to_string(index());
    case Kind::Const:
      return std::to_string(value());
    case Kind::Add:
      return lhs().str() + " + " + rhs().str();
    case Kind::Max:
      return "max(" + lhs().str() + ", " + rhs().str() + ")";
    case Kind::Scale: {
      std::string inner = arg().str();
      if (arg().kind() == Kind::Add || arg().kind() == Kind::Scale) {
        inner = "(" + inner + ")";
      }
      return std::to_string(value()) + "*" + inner;
    }
  }
  return "?";
}

Multiset HeatExpr::eval(std::span<const Nat> xs, std::span<const Nat> ys) const {
  Multiset out;
  for (const CurrentExpr& atom : atoms) out.add(atom.eval(xs, ys));
  return out;
}

std::string HeatExpr::str() const {
  if (atoms.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (i) out += " + ";
    out += "<" + atoms[i].str() + ">";
  }
  return out;
}

const GeneratorInterpretation& InterpretationAssignment::at(GenId id) const {
  auto it = table_.find(id);
  if (it == table_.end()) {
    throw InterpError("no interpretation for generator id " +
                      std::to_string(id));
  }
  return it->second;
}

bool InterpretationAssignment::total_on(const Signature& sig) const {
  for (GenId id = 0; id < sig.size(); ++id) {
    if (!table_.contains(id)) return false;
  }
  return true;
}

void InterpretationAssignment::validate(const Signature& sig) const {
  for (const auto& [id, gi] : table_) {
    const GeneratorDecl& g = sig.at(id);
    if (gi.down.size() != g.arity_out) {
      throw InterpError("interpretation of " + g.name + " needs " +
                        std::to_string(g.arity_out) + " descending expressions");
    }
    if (gi.up.size() != g.arity_in) {
      throw InterpError("interpretation of " + g.name + " needs " +
                        std::to_string(g.arity_in) + " ascending expressions");
    }
    auto check = [&](const CurrentExpr& e, bool allow_x, bool allow_y,
                     const char* where) {
      unsigned mx = 0, my = 0;
      e.var_bounds(mx, my);
      if ((!allow_x && mx > 0) || mx > g.arity_in) {
        throw InterpError("bad x variable in " + g.name + " " + where);
      }
      if ((!allow_y && my > 0) || my > g.arity_out) {
        throw InterpError("bad y variable in " + g.name + " " + where);
      }
    };
    for (const CurrentExpr& e : gi.down) check(e, true, false, "down");
    for (const CurrentExpr& e : gi.up) check(e, false, true, "up");
    for (const CurrentExpr& e : gi.heat.atoms) check(e, true, true, "heat");
  }
}

namespace {

// Applies one slice to a descending level vector.
void step_down(const Signature& sig, const InterpretationAssignment& a,
               const Slice& s, std::vector<Nat>& level) {
  const GeneratorDecl& g = sig.at(s.gen);
  const GeneratorInterpretation& gi = a.at(s.gen);
  std::span<const Nat> seg(level.data() + s.pad, g.arity_in);
  std::vector<Nat> out;
  out.reserve(g.arity_out);
  for (const CurrentExpr& e : gi.down) out.push_back(e.eval(seg, {}));
  level.erase(level.begin() + s.pad, level.begin() + s.pad + g.arity_in);
  level.insert(level.begin() + s.pad, out.begin(), out.end());
}

// Applies one slice, met from below, to an ascending level vector.
void step_up(const Signature& sig, const InterpretationAssignment& a,
             const Slice& s, std::vector<Nat>& level) {
  const GeneratorDecl& g = sig.at(s.gen);
  const GeneratorInterpretation& gi = a.at(s.gen);
  std::span<const Nat> seg(level.data() + s.pad, g.arity_out);
  std::vector<Nat> out;
  out.reserve(g.arity_in);
  for (const CurrentExpr& e : gi.up) out.push_back(e.eval({}, seg));
  level.erase(level.begin() + s.pad, level.begin() + s.pad + g.arity_out);
  level.insert(level.begin() + s.pad, out.begin(), out.end());
}

}  // namespace

std::vector<Nat> eval_down(const Signature& sig,
                           const InterpretationAssignment& a, const Circuit& f,
                           std::span<const Nat> xs) {
  if (xs.size() != f.inputs) {
    throw InterpError("descending currents: expected " +
                      std::to_string(f.inputs) + " values, got " +
                      std::to_string(xs.size()));
  }
  std::vector<Nat> level(xs.begin(), xs.end());
  for (const Slice& s : f.slices) step_down(sig, a, s, level);
  return level;
}

std::vector<Nat> eval_up(const Signature& sig,
                         const InterpretationAssignment& a, const Circuit& f,
                         std::span<const Nat> ys) {
  if (ys.size() != f.outputs) {
    throw InterpError("ascending currents: expected " +
                      std::to_string(f.outputs) + " values, got " +
                      std::to_string(ys.size()));
  }
  std::vector<Nat> level(ys.begin(), ys.end());
  for (auto it = f.slices.rbegin(); it != f.slices.rend(); ++it) {
    step_up(sig, a, *it, level);
  }
  return level;
}

Multiset eval_heat(const Signature& sig, const InterpretationAssignment& a,
                   const Circuit& f, std::span<const Nat> xs,
                   std::span<const Nat> ys) {
  if (xs.size() != f.inputs || ys.size() != f.outputs) {
    throw InterpError("heat evaluation: boundary currents do not match "
                      "the interface");
  }
  const std::size_t n = f.slices.size();
  // Descending currents at every cut, top to bottom.
  std::vector<std::vector<Nat>> down_levels;
  down_levels.reserve(n + 1);
  down_levels.emplace_back(xs.begin(), xs.end());
  for (const Slice& s : f.slices) {
    down_levels.push_back(down_levels.back());
    step_down(sig, a, s, down_levels.back());
  }
  // Ascending currents at every cut, bottom to top.
  std::vector<std::vector<Nat>> up_levels(n + 1);
  up_levels[n].assign(ys.begin(), ys.end());
  for (std::size_t k = n; k-- > 0;) {
    up_levels[k] = up_levels[k + 1];
    step_up(sig, a, f.slices[k], up_levels[k]);
  }
  Multiset total;
  for (std::size_t k = 0; k < n; ++k) {
    const Slice& s = f.slices[k];
    const GeneratorDecl& g = sig.at(s.gen);
    const GeneratorInterpretation& gi = a.at(s.gen);
    std::span<const Nat> dx(down_levels[k].data() + s.pad, g.arity_in);
    std::span<const Nat> ay(up_levels[k + 1].data() + s.pad, g.arity_out);
    total = msum(total, gi.heat.eval(dx, ay));
  }
  return total;
}

Nat AffineForm::eval_at(std::span<const Nat> point) const {
  Nat v = constant;
  for (std::size_t i = 0; i < coeffs.size(); ++i) v += coeffs[i] * point[i];
  return v;
}

namespace {

AffineForm affine_eval(const CurrentExpr& e,
                       const std::vector<AffineForm>& env, std::size_t vars) {
  switch (e.kind()) {
    case CurrentExpr::Kind::XVar:
    case CurrentExpr::Kind::YVar:
      if (e.index() > env.size()) throw InterpError("variable out of range");
      return env[e.index() - 1];
    case CurrentExpr::Kind::Const: {
      AffineForm f;
      f.coeffs.assign(vars, 0);
      f.constant = e.value();
      return f;
    }
    case CurrentExpr::Kind::Add: {
      AffineForm l = affine_eval(e.lhs(), env, vars);
      AffineForm r = affine_eval(e.rhs(), env, vars);
      for (std::size_t i = 0; i < vars; ++i) l.coeffs[i] += r.coeffs[i];
      l.constant += r.constant;
      return l;
    }
    case CurrentExpr::Kind::Scale: {
      AffineForm f = affine_eval(e.arg(), env, vars);
      for (Nat& c : f.coeffs) c *= e.value();
      f.constant *= e.value();
      return f;
    }
    case CurrentExpr::Kind::Max:
      throw InterpError("expression uses max and is not affine");
  }
  throw InterpError("corrupt expression");
}

}  // namespace

std::vector<AffineForm> affine_down(const Signature& sig,
                                    const InterpretationAssignment& a,
                                    const Circuit& f) {
  const std::size_t vars = f.inputs;
  std::vector<AffineForm> level(vars);
  for (std::size_t i = 0; i < vars; ++i) {
    level[i].coeffs.assign(vars, 0);
    level[i].coeffs[i] = 1;
  }
  for (const Slice& s : f.slices) {
    const GeneratorDecl& g = sig.at(s.gen);
    const GeneratorInterpretation& gi = a.at(s.gen);
    std::vector<AffineForm> seg(level.begin() + s.pad,
                                level.begin() + s.pad + g.arity_in);
    std::vector<AffineForm> out;
    out.reserve(g.arity_out);
    for (const CurrentExpr& e : gi.down) out.push_back(affine_eval(e, seg, vars));
    level.erase(level.begin() + s.pad, level.begin() + s.pad + g.arity_in);
    level.insert(level.begin() + s.pad, out.begin(), out.end());
  }
  return level;
}

std::vector<AffineForm> affine_up(const Signature& sig,
                                  const InterpretationAssignment& a,
                                  const Circuit& f) {
  const std::size_t vars = f.outputs;
  std::vector<AffineForm> level(vars);
  for (std::size_t i = 0; i < vars; ++i) {
    level[i].coeffs.assign(vars, 0);
    level[i].coeffs[i] = 1;
  }
  for (auto it = f.slices.rbegin(); it != f.slices.rend(); ++it) {
    const Slice& s = *it;
    const GeneratorDecl& g = sig.at(s.gen);
    const GeneratorInterpretation& gi = a.at(s.gen);
    std::vector<AffineForm> seg(level.begin() + s.pad,
                                level.begin() + s.pad + g.arity_out);
    std::vector<AffineForm> out;
    out.reserve(g.arity_in);
    for (const CurrentExpr& e : gi.up) out.push_back(affine_eval(e, seg, vars));
    level.erase(level.begin() + s.pad, level.begin() + s.pad + g.arity_out);
    level.insert(level.begin() + s.pad, out.begin(), out.end());
  }
  return level;
}

bool affine_dominates(const AffineForm& lhs, const AffineForm& rhs, Nat min,
                      std::vector<Nat>* witness) {
  const std::size_t vars = lhs.coeffs.size();
  std::vector<Nat> min_point(vars, min);
  const Nat lhs_min = lhs.eval_at(min_point);
  const Nat rhs_min = rhs.eval_at(min_point);
  if (lhs_min < rhs_min) {
    if (witness) *witness = min_point;
    return false;
  }
  for (std::size_t i = 0; i < vars; ++i) {
    if (lhs.coeffs[i] < rhs.coeffs[i]) {
      // Push coordinate i far enough that the coefficient gap overtakes the
      // head start at the minimum point.
      if (witness) {
        std::vector<Nat> point = min_point;
        point[i] = min + (lhs_min - rhs_min) + 1;
        *witness = point;
      }
      return false;
    }
  }
  return true;
}

}  // namespace polyterm
