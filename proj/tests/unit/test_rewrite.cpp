#include <doctest.h>

#include "oracles.hpp"

using namespace polyterm;
using namespace polyterm::testing;

namespace {

struct AssocWorld {
  Signature sig;
  GenId mu;
  Rule assoc;
  Polygraph poly;

  AssocWorld() {
    mu = sig.add({"mu", 2, 1});
    Circuit m = from_generator(sig, mu);
    assoc.name = "assoc";
    assoc.lhs = vcomp(sig, hcomp(sig, m, identity(1)), m);
    assoc.rhs = vcomp(sig, hcomp(sig, identity(1), m), m);
    poly = Polygraph{sig, {assoc}};
  }

  Circuit left_comb(unsigned occurrences) const {
    Circuit m = from_generator(sig, mu);
    Circuit acc = m;
    for (unsigned i = 1; i < occurrences; ++i) {
      acc = vcomp(sig, hcomp(sig, acc, identity(1)), m);
    }
    return acc;
  }

  Circuit right_comb(unsigned occurrences) const {
    Circuit m = from_generator(sig, mu);
    Circuit acc = m;
    for (unsigned i = 1; i < occurrences; ++i) {
      acc = vcomp(sig, hcomp(sig, identity(1), acc), m);
    }
    return acc;
  }
};

}  // namespace

TEST_CASE("rule validation") {
  AssocWorld w;
  validate_rule(w.sig, w.assoc);
  Rule ident{"bad", identity(2), identity(2)};
  CHECK_THROWS_AS(validate_rule(w.sig, ident), RewriteError);
  Rule skew{"skew", w.assoc.lhs, identity(3)};
  CHECK_THROWS_AS(validate_rule(w.sig, skew), RewriteError);
}

TEST_CASE("self match is the trivial occurrence") {
  AssocWorld w;
  std::vector<Occurrence> occs = find_matches(w.sig, w.assoc.lhs, w.assoc);
  REQUIRE(!occs.empty());
  const Occurrence& top = occs.front();
  CHECK(equals(top.above, identity(3)));
  CHECK(equals(top.below, identity(1)));
  CHECK(top.left_wires == 0);
  CHECK(top.right_wires == 0);
}

TEST_CASE("identities contain no generators") {
  AssocWorld w;
  CHECK(find_matches(w.sig, identity(5), w.assoc).empty());
}

TEST_CASE("single-generator pattern occurs twice in the two-level comb") {
  AssocWorld w;
  Rule unit_rule{"collapse", from_generator(w.sig, w.mu), identity(2)};
  // not a sensible rewrite, but a legal pattern: mu itself is 2->1
  Rule pattern{"pat", from_generator(w.sig, w.mu),
               from_generator(w.sig, w.mu)};
  Circuit comb = w.assoc.lhs;  // (mu * id:1) ; mu
  std::vector<Occurrence> occs = find_matches(w.sig, comb, pattern);
  CHECK(occs.size() == 2);
  CHECK(keys_of(occs) == brute_force_matches(w.sig, comb, pattern));
}

TEST_CASE("apply at the trivial occurrence yields the right-hand side") {
  AssocWorld w;
  std::vector<Occurrence> occs = find_matches(w.sig, w.assoc.lhs, w.assoc);
  REQUIRE(!occs.empty());
  Circuit out = apply_at(w.sig, w.assoc.lhs, occs.front(), w.assoc);
  CHECK(equals(out, w.assoc.rhs));
}

TEST_CASE("rewriting inside a whisker") {
  AssocWorld w;
  Circuit host = hcomp(w.sig, w.assoc.lhs, identity(1));
  std::vector<Occurrence> occs = find_matches(w.sig, host, w.assoc);
  REQUIRE(occs.size() == 1);
  CHECK(occs.front().right_wires == 1);
  Circuit out = apply_at(w.sig, host, occs.front(), w.assoc);
  CHECK(equals(out, hcomp(w.sig, w.assoc.rhs, identity(1))));
  CHECK(interface_of(out) == interface_of(host));
}

TEST_CASE("stale occurrences are rejected") {
  AssocWorld w;
  std::vector<Occurrence> occs = find_matches(w.sig, w.assoc.lhs, w.assoc);
  REQUIRE(!occs.empty());
  Occurrence stale = occs.front();
  stale.left_wires += 1;  // no longer reconstructs
  CHECK_THROWS_AS((void)apply_at(w.sig, w.assoc.lhs, stale, w.assoc),
                  RewriteError);
}

TEST_CASE("rewrite_once basics") {
  AssocWorld w;
  CHECK(!rewrite_once(w.poly, w.assoc.rhs).has_value());  // a normal form
  std::optional<ReductionStep> step = rewrite_once(w.poly, w.assoc.lhs);
  REQUIRE(step.has_value());
  CHECK(equals(step->result, w.assoc.rhs));
  std::optional<ReductionStep> again = rewrite_once(w.poly, w.assoc.lhs);
  CHECK(step->result == again->result);
  CHECK(step->rule == again->rule);
}

TEST_CASE("normalize examples") {
  AssocWorld w;
  ReductionTrace t0 = normalize(w.poly, w.right_comb(3), 10);
  CHECK(t0.steps.empty());
  CHECK(t0.status == ReductionTrace::Status::Normalized);

  ReductionTrace t1 = normalize(w.poly, w.assoc.lhs, 10);
  CHECK(t1.steps.size() == 1);
  CHECK(t1.status == ReductionTrace::Status::Normalized);
  CHECK(equals(t1.final_circuit(), w.assoc.rhs));

  // Left comb with three occurrences reaches the right comb within 3 steps.
  ReductionTrace t3 = normalize(w.poly, w.left_comb(3), 3);
  CHECK(t3.status == ReductionTrace::Status::Normalized);
  CHECK(equals(t3.final_circuit(), w.right_comb(3)));

  ReductionTrace starved = normalize(w.poly, w.left_comb(3), 1);
  CHECK(starved.status == ReductionTrace::Status::BudgetExhausted);
  CHECK(starved.steps.size() == 1);
}

TEST_CASE("matching is complete against the brute-force oracle") {
  Rng rng(307);
  Signature sig;
  sig.add({"mu", 2, 1});
  sig.add({"delta", 1, 2});
  sig.add({"eps", 1, 0});
  Circuit mu = from_generator(sig, "mu");
  Circuit delta = from_generator(sig, "delta");
  std::vector<Rule> patterns;
  patterns.push_back(Rule{"p_mu", mu, mu});
  patterns.push_back(Rule{"p_delta", delta, delta});
  patterns.push_back(
      Rule{"p_comb", vcomp(sig, hcomp(sig, mu, identity(1)), mu),
           vcomp(sig, hcomp(sig, identity(1), mu), mu)});
  patterns.push_back(Rule{"p_dm", vcomp(sig, delta, mu), identity(1)});
  for (int i = 0; i < 120; ++i) {
    Circuit raw = random_word(rng, sig, 1 + (i % 4), 5);
    Circuit f = canonicalize(sig, raw.inputs, raw.outputs, raw.slices);
    for (const Rule& r : patterns) {
      auto got = keys_of(find_matches(sig, f, r));
      auto want = brute_force_matches(sig, f, r);
      CHECK(got == want);
    }
  }
}

TEST_CASE("matching soundness: every occurrence reconstructs") {
  Rng rng(311);
  for (int i = 0; i < 100; ++i) {
    Signature sig = random_signature(rng, 3, 3);
    Circuit raw = random_word(rng, sig, 2, 5);
    Circuit f = canonicalize(sig, raw.inputs, raw.outputs, raw.slices);
    Circuit lhs_raw = random_word(rng, sig, 2, 2);
    if (lhs_raw.slices.empty()) continue;
    Circuit lhs = canonicalize(sig, lhs_raw.inputs, lhs_raw.outputs,
                               lhs_raw.slices);
    Rule r{"probe", lhs, lhs};
    for (const Occurrence& occ : find_matches(sig, f, r)) {
      CHECK(equals(reconstruct(sig, occ, r.lhs), f));
      CHECK(interface_of(reconstruct(sig, occ, r.rhs)) == interface_of(f));
    }
  }
}

TEST_CASE("reduction preserves interfaces and well-formedness") {
  AssocWorld w;
  Rng rng(313);
  for (int i = 0; i < 60; ++i) {
    Circuit raw = random_word(rng, w.sig, 2 + (i % 5), 6);
    Circuit f = canonicalize(w.sig, raw.inputs, raw.outputs, raw.slices);
    ReductionTrace trace = normalize(w.poly, f, 64);
    const Circuit* prev = &trace.start;
    for (const ReductionStep& step : trace.steps) {
      CHECK(interface_of(step.result) == interface_of(*prev));
      CHECK(well_formed(w.sig, step.result));
      prev = &step.result;
    }
  }
}
