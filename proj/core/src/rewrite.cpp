#include "polyterm/rewrite.hpp"

#include <algorithm>
#include <limits>

namespace polyterm {

void validate_rule(const Signature& sig, const Rule& r) {
  if (!well_formed(sig, r.lhs) || !well_formed(sig, r.rhs)) {
    throw RewriteError("rule " + r.name + ": side not well formed");
  }
  if (interface_of(r.lhs) != interface_of(r.rhs)) {
    throw RewriteError("rule " + r.name + ": sides not parallel");
  }
  if (r.lhs.is_identity()) {
    throw RewriteError("rule " + r.name + ": identity left-hand side");
  }
}

const Rule* Polygraph::find_rule(std::string_view name) const {
  for (const Rule& r : rules) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

namespace {

// Wire-segment view of a circuit. Segments are numbered in creation order;
// `pos` orders them left to right globally (dead segments keep a position, so
// pieces that never coexist still compare). Pieces with no wires at all get a
// phantom anchor segment carrying only a position.
struct PieceView {
  GenId gen = 0;
  std::vector<int> ins;
  std::vector<int> outs;
  int anchor = -1;  // phantom segment for 0->0 pieces
};

struct SegmentGraph {
  std::vector<PieceView> pieces;  // in canonical word order
  std::vector<int> input_segs;
  std::vector<int> output_segs;
  std::vector<int> pos;  // segment -> global left-to-right rank
  std::vector<std::pair<int, int>> span;  // piece -> [min,max] position hull
  std::vector<std::vector<bool>> before;  // strict heap order, transitively closed
};

SegmentGraph build_segment_graph(const Signature& sig, const Circuit& c) {
  SegmentGraph sg;
  std::vector<int> order;  // global order of all segments, dead ones included
  std::vector<int> level;  // live segments, left to right
  int next = 0;
  for (unsigned i = 0; i < c.inputs; ++i) {
    order.push_back(next);
    level.push_back(next);
    ++next;
  }
  sg.input_segs = level;

  auto order_index = [&order](int seg) {
    return static_cast<int>(std::find(order.begin(), order.end(), seg) -
                            order.begin());
  };

  for (const Slice& s : c.slices) {
    const GeneratorDecl& g = sig.at(s.gen);
    PieceView piece;
    piece.gen = s.gen;
    piece.ins.assign(level.begin() + s.pad, level.begin() + s.pad + g.arity_in);

    // Where the fresh segments go in the global order: after the first
    // consumed segment, or between the live neighbours of the insertion point.
    int insert_after;
    if (g.arity_in > 0) {
      insert_after = order_index(piece.ins.front());
    } else if (s.pad > 0) {
      insert_after = order_index(level[s.pad - 1]);
    } else {
      insert_after = -1;  // before everything
    }

    // 0-output pieces get one phantom segment so they keep a column.
    std::vector<int> created;
    unsigned count = g.arity_out > 0 ? g.arity_out : 1;
    for (unsigned j = 0; j < count; ++j) created.push_back(next++);
    order.insert(order.begin() + insert_after + 1, created.begin(),
                 created.end());
    if (g.arity_out > 0) {
      piece.outs = created;
    } else {
      piece.anchor = created.front();  // phantom, never enters the level
    }

    level.erase(level.begin() + s.pad, level.begin() + s.pad + g.arity_in);
    if (g.arity_out > 0) {
      level.insert(level.begin() + s.pad, piece.outs.begin(), piece.outs.end());
    }
    sg.pieces.push_back(std::move(piece));
  }
  sg.output_segs = level;

  sg.pos.assign(next, 0);
  for (std::size_t i = 0; i < order.size(); ++i) sg.pos[order[i]] = static_cast<int>(i);

  const std::size_t n = sg.pieces.size();
  sg.span.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    int lo = std::numeric_limits<int>::max();
    int hi = std::numeric_limits<int>::min();
    auto widen = [&](int seg) {
      lo = std::min(lo, sg.pos[seg]);
      hi = std::max(hi, sg.pos[seg]);
    };
    for (int seg : sg.pieces[i].ins) widen(seg);
    for (int seg : sg.pieces[i].outs) widen(seg);
    if (sg.pieces[i].anchor >= 0) widen(sg.pieces[i].anchor);
    sg.span[i] = {lo, hi};
  }

  // Heap order: earlier pieces with overlapping horizontal spans come first;
  // close transitively.
  sg.before.assign(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      bool overlap = sg.span[i].first <= sg.span[j].second &&
                     sg.span[j].first <= sg.span[i].second;
      if (overlap) sg.before[i][j] = true;
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!sg.before[i][k]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (sg.before[k][j]) sg.before[i][j] = true;
      }
    }
  }
  return sg;
}

// Replays a subset of pieces against a live level, collecting the slice word.
// Returns false when the replay is geometrically impossible (a foreign wire
// sits inside a consumed run, or a needed segment is missing).
struct Replay {
  const SegmentGraph& sg;
  const Signature& sig;
  std::vector<int> level;

  bool fire(std::size_t piece_index, std::vector<Slice>& word) {
    const PieceView& piece = sg.pieces[piece_index];
    const GeneratorDecl& g = sig.at(piece.gen);
    unsigned pad;
    if (!piece.ins.empty()) {
      auto it = std::find(level.begin(), level.end(), piece.ins.front());
      if (it == level.end()) return false;
      pad = static_cast<unsigned>(it - level.begin());
      if (pad + piece.ins.size() > level.size()) return false;
      for (std::size_t j = 0; j < piece.ins.size(); ++j) {
        if (level[pad + j] != piece.ins[j]) return false;
      }
    } else {
      // Insertion point: count live segments left of the piece's column.
      int column = piece.outs.empty() ? sg.pos[piece.anchor]
                                      : sg.pos[piece.outs.front()];
      pad = 0;
      while (pad < level.size() && sg.pos[level[pad]] < column) ++pad;
    }
    level.erase(level.begin() + pad, level.begin() + pad + piece.ins.size());
    level.insert(level.begin() + pad, piece.outs.begin(), piece.outs.end());
    word.push_back(Slice{pad, piece.gen});
    return true;
  }
};

}  // namespace

Circuit reconstruct(const Signature& sig, const Occurrence& occ,
                    const Circuit& inner) {
  Circuit mid = hcomp(sig, identity(occ.left_wires),
                      hcomp(sig, inner, identity(occ.right_wires)));
  return vcomp(sig, occ.above, vcomp(sig, mid, occ.below));
}

std::vector<Occurrence> find_matches(const Signature& sig, const Circuit& f,
                                     const Rule& r) {
  if (r.lhs.is_identity()) {
    throw RewriteError("matching against an identity left-hand side");
  }
  if (!well_formed(sig, f)) throw RewriteError("circuit not well formed");

  const SegmentGraph fg = build_segment_graph(sig, f);
  const SegmentGraph lg = build_segment_graph(sig, r.lhs);
  const std::size_t big = fg.pieces.size();
  const std::size_t small = lg.pieces.size();
  std::vector<Occurrence> results;
  if (small > big) return results;

  // Map from lhs piece index to f piece index, built in word order. The
  // canonical order of an embedded block agrees with the block's own
  // canonical order, so images are strictly increasing.
  std::vector<std::size_t> image(small);
  std::vector<bool> taken(big, false);

  // seg-level correspondence for port-exact matching
  std::vector<int> lhs_producer(lg.pos.size(), -1), lhs_out_port(lg.pos.size(), 0);
  for (std::size_t i = 0; i < small; ++i) {
    for (std::size_t t = 0; t < lg.pieces[i].outs.size(); ++t) {
      lhs_producer[lg.pieces[i].outs[t]] = static_cast<int>(i);
      lhs_out_port[lg.pieces[i].outs[t]] = static_cast<int>(t);
    }
  }
  std::vector<int> f_producer(fg.pos.size(), -1), f_out_port(fg.pos.size(), 0);
  for (std::size_t i = 0; i < big; ++i) {
    for (std::size_t t = 0; t < fg.pieces[i].outs.size(); ++t) {
      f_producer[fg.pieces[i].outs[t]] = static_cast<int>(i);
      f_out_port[fg.pieces[i].outs[t]] = static_cast<int>(t);
    }
  }

  auto try_emit = [&]() {
    std::vector<bool> in_m(big, false);
    for (std::size_t i : image) in_m[i] = true;

    // lhs boundary outputs must not be consumed inside the image.
    for (std::size_t i = 0; i < small; ++i) {
      const PieceView& lp = lg.pieces[i];
      const PieceView& fp = fg.pieces[image[i]];
      for (std::size_t t = 0; t < lp.outs.size(); ++t) {
        bool lhs_internal = false;
        for (std::size_t j = 0; j < small; ++j) {
          const auto& ins = lg.pieces[j].ins;
          if (std::find(ins.begin(), ins.end(), lp.outs[t]) != ins.end()) {
            lhs_internal = true;
            break;
          }
        }
        if (lhs_internal) continue;
        for (std::size_t j = 0; j < big; ++j) {
          if (!in_m[j]) continue;
          const auto& ins = fg.pieces[j].ins;
          if (std::find(ins.begin(), ins.end(), fp.outs[t]) != ins.end()) {
            return;  // extra internal connection
          }
        }
      }
    }

    // Convexity: nothing outside the image sits between two image pieces.
    for (std::size_t z = 0; z < big; ++z) {
      if (in_m[z]) continue;
      bool above_some = false, below_some = false;
      for (std::size_t i : image) {
        if (fg.before[i][z]) below_some = true;
        if (fg.before[z][i]) above_some = true;
      }
      if (above_some && below_some) return;
    }

    // Split the rest: forced-above, forced-below, free pieces go above.
    std::vector<std::size_t> h_pieces, m_pieces, k_pieces;
    for (std::size_t z = 0; z < big; ++z) {
      if (in_m[z]) {
        m_pieces.push_back(z);
        continue;
      }
      bool below_m = false;
      for (std::size_t i : image) {
        if (fg.before[i][z]) {
          below_m = true;
          break;
        }
      }
      (below_m ? k_pieces : h_pieces).push_back(z);
    }

    Replay replay{fg, sig, fg.input_segs};
    std::vector<Slice> h_word, m_word, k_word;
    for (std::size_t z : h_pieces) {
      if (!replay.fire(z, h_word)) return;
    }
    const std::vector<int> cut = replay.level;
    for (std::size_t z : m_pieces) {
      if (!replay.fire(z, m_word)) return;
    }
    for (std::size_t z : k_pieces) {
      if (!replay.fire(z, k_word)) return;
    }
    if (replay.level != fg.output_segs) return;

    // Whisker width: the matched block starts after `p` pass-through wires.
    unsigned p;
    if (m_word.empty()) return;  // lhs is never an identity
    unsigned min_pad = std::numeric_limits<unsigned>::max();
    if (r.lhs.inputs > 0) {
      // first cut segment consumed by the image
      std::vector<bool> consumed(cut.size(), false);
      for (std::size_t i : image) {
        for (int seg : fg.pieces[i].ins) {
          auto it = std::find(cut.begin(), cut.end(), seg);
          if (it != cut.end()) consumed[it - cut.begin()] = true;
        }
      }
      unsigned first = 0;
      while (first < cut.size() && !consumed[first]) ++first;
      unsigned count = 0;
      for (unsigned i = first; i < cut.size() && consumed[i]; ++i) ++count;
      unsigned total = 0;
      for (bool b : consumed) total += b;
      if (count != total || total != r.lhs.inputs) return;  // split footprint
      p = first;
    } else {
      p = m_word.front().pad;
    }
    for (const Slice& s : m_word) min_pad = std::min(min_pad, s.pad);
    if (min_pad < p) return;
    if (static_cast<unsigned>(cut.size()) < p + r.lhs.inputs) return;
    unsigned q = static_cast<unsigned>(cut.size()) - p - r.lhs.inputs;

    // The matched block, re-based to its own inputs, must be the lhs.
    std::vector<Slice> rebased = m_word;
    for (Slice& s : rebased) s.pad -= p;
    Circuit block;
    try {
      block = canonicalize(sig, r.lhs.inputs, r.lhs.outputs, std::move(rebased));
    } catch (const CircuitError&) {
      return;
    }
    if (!equals(block, r.lhs)) return;

    Occurrence occ;
    try {
      occ.above = canonicalize(sig, f.inputs, static_cast<unsigned>(cut.size()),
                               h_word);
      unsigned mid_out = static_cast<unsigned>(cut.size()) - r.lhs.inputs +
                         r.lhs.outputs;
      occ.below = canonicalize(sig, mid_out, f.outputs, k_word);
    } catch (const CircuitError&) {
      return;
    }
    occ.left_wires = p;
    occ.right_wires = q;
    occ.pieces.assign(image.begin(), image.end());
    std::sort(occ.pieces.begin(), occ.pieces.end());
    if (!equals(reconstruct(sig, occ, r.lhs), f)) return;
    for (const Occurrence& seen : results) {
      if (seen == occ) return;
    }
    results.push_back(std::move(occ));
  };

  // Depth-first assignment with port-exact pruning.
  auto dfs = [&](auto&& self, std::size_t i, std::size_t from) -> void {
    if (i == small) {
      try_emit();
      return;
    }
    const PieceView& lp = lg.pieces[i];
    for (std::size_t cand = from; cand < big; ++cand) {
      if (taken[cand]) continue;
      const PieceView& fp = fg.pieces[cand];
      if (fp.gen != lp.gen) continue;
      bool ok = true;
      for (std::size_t t = 0; t < lp.ins.size() && ok; ++t) {
        int lsrc = lhs_producer[lp.ins[t]];
        int fsrc = f_producer[fp.ins[t]];
        if (lsrc >= 0) {
          // internal wire: must come from the matching piece, same port
          ok = fsrc >= 0 && taken[fsrc] &&
               image[static_cast<std::size_t>(lsrc)] ==
                   static_cast<std::size_t>(fsrc) &&
               lhs_out_port[lp.ins[t]] == f_out_port[fp.ins[t]];
        } else {
          // boundary wire: must not come from inside the image
          ok = fsrc < 0 || !taken[fsrc];
        }
      }
      if (!ok) continue;
      // heap order of the chosen prefix must match the lhs exactly
      for (std::size_t j = 0; j < i && ok; ++j) {
        if (lg.before[j][i] != fg.before[image[j]][cand]) ok = false;
        if (lg.before[i][j] != fg.before[cand][image[j]]) ok = false;
      }
      if (!ok) continue;
      image[i] = cand;
      taken[cand] = true;
      self(self, i + 1, cand + 1);
      taken[cand] = false;
    }
  };
  dfs(dfs, 0, 0);

  std::sort(results.begin(), results.end(),
            [](const Occurrence& a, const Occurrence& b) {
              if (a.anchor() != b.anchor()) return a.anchor() < b.anchor();
              return a.left_wires < b.left_wires;
            });
  return results;
}

Circuit apply_at(const Signature& sig, const Circuit& f, const Occurrence& occ,
                 const Rule& r) {
  if (!equals(reconstruct(sig, occ, r.lhs), f)) {
    throw RewriteError("stale occurrence: reconstruction does not match");
  }
  return reconstruct(sig, occ, r.rhs);
}

std::optional<ReductionStep> rewrite_once(const Polygraph& p, const Circuit& f) {
  for (const Rule& r : p.rules) {
    std::vector<Occurrence> occs = find_matches(p.signature, f, r);
    if (!occs.empty()) {
      ReductionStep step;
      step.rule = r.name;
      step.occurrence = occs.front();
      step.result = reconstruct(p.signature, occs.front(), r.rhs);
      return step;
    }
  }
  return std::nullopt;
}

ReductionTrace normalize(const Polygraph& p, const Circuit& f,
                         std::size_t budget) {
  ReductionTrace trace;
  trace.start = f;
  Circuit current = f;
  for (std::size_t i = 0; i < budget; ++i) {
    std::optional<ReductionStep> step = rewrite_once(p, current);
    if (!step) {
      trace.status = ReductionTrace::Status::Normalized;
      return trace;
    }
    current = step->result;
    trace.steps.push_back(std::move(*step));
  }
  trace.status = rewrite_once(p, current)
                     ? ReductionTrace::Status::BudgetExhausted
                     : ReductionTrace::Status::Normalized;
  return trace;
}

}  // namespace polyterm
