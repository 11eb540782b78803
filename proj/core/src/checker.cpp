#include "polyterm/checker.hpp"

#include <algorithm>
#include <thread>

#include <json.hpp>

namespace polyterm {

namespace {

constexpr std::uint64_t kNoFailure = std::numeric_limits<std::uint64_t>::max();

struct GridShape {
  unsigned m = 0;
  unsigned n = 0;
  unsigned values = 1;  // values per coordinate
  Nat x_min = 0;
  Nat y_min = 0;

  std::uint64_t total() const {
    std::uint64_t t = 1;
    for (unsigned i = 0; i < m + n; ++i) t *= values;
    return t;
  }

  // Decodes a grid index into boundary currents; x coordinates are the most
  // significant digits, so index order is lexicographic order of (x, y).
  void decode(std::uint64_t index, std::vector<Nat>& xs,
              std::vector<Nat>& ys) const {
    xs.assign(m, 0);
    ys.assign(n, 0);
    for (unsigned i = m + n; i-- > 0;) {
      Nat digit = index % values;
      index /= values;
      if (i < m) {
        xs[i] = x_min + digit;
      } else {
        ys[i - m] = y_min + digit;
      }
    }
  }
};

struct SweepResult {
  std::uint64_t first_down = kNoFailure;
  std::uint64_t first_up = kNoFailure;
  std::uint64_t first_heat = kNoFailure;

  void merge(const SweepResult& other) {
    first_down = std::min(first_down, other.first_down);
    first_up = std::min(first_up, other.first_up);
    first_heat = std::min(first_heat, other.first_heat);
  }
};

bool pointwise_ge(const std::vector<Nat>& a, const std::vector<Nat>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return false;
  }
  return true;
}

SweepResult sweep_range(const Signature& sig, const Rule& r,
                        const InterpretationAssignment& a,
                        const GridShape& shape, std::uint64_t begin,
                        std::uint64_t end, bool check_currents,
                        bool check_heat) {
  SweepResult res;
  std::vector<Nat> xs, ys;
  for (std::uint64_t idx = begin; idx < end; ++idx) {
    shape.decode(idx, xs, ys);
    if (check_currents && res.first_down == kNoFailure) {
      if (!pointwise_ge(eval_down(sig, a, r.lhs, xs),
                        eval_down(sig, a, r.rhs, xs))) {
        res.first_down = idx;
      }
    }
    if (check_currents && res.first_up == kNoFailure) {
      if (!pointwise_ge(eval_up(sig, a, r.lhs, ys),
                        eval_up(sig, a, r.rhs, ys))) {
        res.first_up = idx;
      }
    }
    if (check_heat && res.first_heat == kNoFailure) {
      if (mcompare(eval_heat(sig, a, r.lhs, xs, ys),
                   eval_heat(sig, a, r.rhs, xs, ys)) != OrderResult::Greater) {
        res.first_heat = idx;
      }
    }
    bool done = (!check_currents || (res.first_down != kNoFailure &&
                                     res.first_up != kNoFailure)) &&
                (!check_heat || res.first_heat != kNoFailure);
    if (done) break;
  }
  return res;
}

SweepResult sweep(const Signature& sig, const Rule& r,
                  const InterpretationAssignment& a, const GridShape& shape,
                  bool check_currents, bool check_heat, unsigned jobs) {
  const std::uint64_t total = shape.total();
  if (jobs <= 1 || total < 1024) {
    return sweep_range(sig, r, a, shape, 0, total, check_currents, check_heat);
  }
  std::vector<SweepResult> parts(jobs);
  std::vector<std::thread> workers;
  const std::uint64_t chunk = (total + jobs - 1) / jobs;
  for (unsigned t = 0; t < jobs; ++t) {
    const std::uint64_t begin = std::min<std::uint64_t>(t * chunk, total);
    const std::uint64_t end = std::min<std::uint64_t>(begin + chunk, total);
    workers.emplace_back([&, t, begin, end] {
      parts[t] = sweep_range(sig, r, a, shape, begin, end, check_currents,
                             check_heat);
    });
  }
  for (std::thread& w : workers) w.join();
  SweepResult res;
  for (const SweepResult& part : parts) res.merge(part);
  return res;
}

void fill_counterexample(RuleVerdict& v, const GridShape& shape,
                         const SweepResult& res) {
  std::uint64_t least =
      std::min({res.first_down, res.first_up, res.first_heat});
  if (least == kNoFailure) return;
  Counterexample cex;
  shape.decode(least, cex.xs, cex.ys);
  if (res.first_down == least) {
    cex.inequality = "down";
  } else if (res.first_up == least) {
    cex.inequality = "up";
  } else {
    cex.inequality = "heat";
  }
  v.counterexample = std::move(cex);
}

}  // namespace

RuleVerdict check_rule(const Signature& sig, const Rule& r,
                       const InterpretationAssignment& a,
                       const VerificationMode& mode, unsigned jobs) {
  if (!a.total_on(sig)) {
    throw InterpError("interpretation assignment not total on the signature");
  }
  validate_rule(sig, r);
  RuleVerdict verdict;
  verdict.rule = r.name;

  GridShape shape;
  shape.m = r.lhs.inputs;
  shape.n = r.lhs.outputs;
  shape.x_min = a.x_min();
  shape.y_min = a.y_min();

  if (const BoundedGrid* grid = std::get_if<BoundedGrid>(&mode)) {
    shape.values = grid->bound + 1;
    verdict.mode = "grid:" + std::to_string(grid->bound);
    SweepResult res = sweep(sig, r, a, shape, true, true, jobs);
    verdict.down_ok = res.first_down == kNoFailure;
    verdict.up_ok = res.first_up == kNoFailure;
    verdict.heat_strict = res.first_heat == kNoFailure;
    fill_counterexample(verdict, shape, res);
    return verdict;
  }

  const AffineExact& affine = std::get<AffineExact>(mode);
  verdict.mode = "affine+grid:" + std::to_string(affine.heat_grid_bound) +
                 "(heat)";

  // Universal current-map comparison of the composed affine forms.
  std::vector<AffineForm> lhs_down = affine_down(sig, a, r.lhs);
  std::vector<AffineForm> rhs_down = affine_down(sig, a, r.rhs);
  std::vector<AffineForm> lhs_up = affine_up(sig, a, r.lhs);
  std::vector<AffineForm> rhs_up = affine_up(sig, a, r.rhs);

  verdict.down_ok = true;
  verdict.up_ok = true;
  std::vector<Nat> witness;
  for (std::size_t i = 0; i < lhs_down.size() && verdict.down_ok; ++i) {
    if (!affine_dominates(lhs_down[i], rhs_down[i], a.x_min(), &witness)) {
      verdict.down_ok = false;
      Counterexample cex;
      cex.xs = witness;
      cex.ys.assign(r.lhs.outputs, a.y_min());
      cex.inequality = "down";
      verdict.counterexample = std::move(cex);
    }
  }
  for (std::size_t i = 0; i < lhs_up.size() && verdict.up_ok; ++i) {
    if (!affine_dominates(lhs_up[i], rhs_up[i], a.y_min(), &witness)) {
      verdict.up_ok = false;
      if (!verdict.counterexample) {
        Counterexample cex;
        cex.xs.assign(r.lhs.inputs, a.x_min());
        cex.ys = witness;
        cex.inequality = "up";
        verdict.counterexample = std::move(cex);
      }
    }
  }

  shape.values = affine.heat_grid_bound + 1;
  SweepResult res = sweep(sig, r, a, shape, false, true, jobs);
  verdict.heat_strict = res.first_heat == kNoFailure;
  if (!verdict.counterexample) fill_counterexample(verdict, shape, res);
  return verdict;
}

VerificationReport check_polygraph(const Polygraph& p,
                                   const InterpretationAssignment& a,
                                   const VerificationMode& mode,
                                   unsigned jobs) {
  VerificationReport report;
  for (const Rule& r : p.rules) {
    report.verdicts.push_back(check_rule(p.signature, r, a, mode, jobs));
  }
  const RuleVerdict* failed = nullptr;
  for (const RuleVerdict& v : report.verdicts) {
    if (!v.pass()) {
      failed = &v;
      break;
    }
  }
  if (failed) {
    report.overall = VerificationReport::Overall::Refuted;
    report.refuted_rule = failed->rule;
  } else if (p.rules.empty() || std::holds_alternative<AffineExact>(mode)) {
    report.overall = VerificationReport::Overall::Certified;
  } else {
    report.overall = VerificationReport::Overall::CertifiedUpToBound;
    report.bound = std::get<BoundedGrid>(mode).bound;
  }
  return report;
}

bool audit_heat_descent(const Signature& sig,
                        const InterpretationAssignment& a,
                        const ReductionTrace& trace, std::span<const Nat> xs,
                        std::span<const Nat> ys) {
  const Circuit* prev = &trace.start;
  Multiset prev_heat = eval_heat(sig, a, *prev, xs, ys);
  for (const ReductionStep& step : trace.steps) {
    Multiset next_heat = eval_heat(sig, a, step.result, xs, ys);
    if (mcompare(prev_heat, next_heat) != OrderResult::Greater) return false;
    prev_heat = std::move(next_heat);
  }
  return true;
}

namespace {

std::string render_point(const std::vector<Nat>& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(v[i]);
  }
  out += ")";
  return out;
}

}  // namespace

std::string render_report(const VerificationReport& report) {
  std::string out;
  for (const RuleVerdict& v : report.verdicts) {
    out += "rule " + v.rule + ": down " + (v.down_ok ? "ok" : "FAIL") +
           ", up " + (v.up_ok ? "ok" : "FAIL") + ", heat " +
           (v.heat_strict ? "strict" : "FAIL") + " [" + v.mode + "] " +
           (v.pass() ? "PASS" : "FAIL");
    if (v.counterexample) {
      out += " counterexample x=" + render_point(v.counterexample->xs) +
             " y=" + render_point(v.counterexample->ys) + " on " +
             v.counterexample->inequality;
    }
    out += "\n";
  }
  switch (report.overall) {
    case VerificationReport::Overall::Certified:
      out += "overall: certified\n";
      break;
    case VerificationReport::Overall::CertifiedUpToBound:
      out += "overall: certified up to bound " + std::to_string(report.bound) +
             "\n";
      break;
    case VerificationReport::Overall::Refuted:
      out += "overall: refuted by rule " + report.refuted_rule + "\n";
      break;
  }
  return out;
}

std::string render_report_records(const VerificationReport& report) {
  std::string out;
  for (const RuleVerdict& v : report.verdicts) {
    nlohmann::json rec;
    rec["rule"] = v.rule;
    rec["down_ok"] = v.down_ok;
    rec["up_ok"] = v.up_ok;
    rec["heat_strict"] = v.heat_strict;
    rec["mode"] = v.mode;
    if (v.counterexample) {
      rec["counterexample"] = {{"x", v.counterexample->xs},
                               {"y", v.counterexample->ys},
                               {"inequality", v.counterexample->inequality}};
    } else {
      rec["counterexample"] = nullptr;
    }
    out += rec.dump() + "\n";
  }
  nlohmann::json overall;
  switch (report.overall) {
    case VerificationReport::Overall::Certified:
      overall["overall"] = "certified";
      break;
    case VerificationReport::Overall::CertifiedUpToBound:
      overall["overall"] = "certified-up-to-bound";
      overall["bound"] = report.bound;
      break;
    case VerificationReport::Overall::Refuted:
      overall["overall"] = "refuted";
      overall["rule"] = report.refuted_rule;
      break;
  }
  out += overall.dump() + "\n";
  return out;
}

}  // namespace polyterm
