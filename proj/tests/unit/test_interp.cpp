#include <doctest.h>

#include "oracles.hpp"

using namespace polyterm;
using namespace polyterm::testing;

namespace {

// mu interpreted as in the worked examples: mu_*(i,j) = i+j, mu^*(k) = (k,k),
// heat one atom x1+x2.
struct MuWorld {
  Signature sig;
  GenId mu;
  InterpretationAssignment assign;
  Circuit comb;  // (mu * id:1) ; mu

  MuWorld() {
    mu = sig.add({"mu", 2, 1});
    GeneratorInterpretation gi;
    gi.down.push_back(
        CurrentExpr::add(CurrentExpr::xvar(1), CurrentExpr::xvar(2)));
    gi.up.push_back(CurrentExpr::yvar(1));
    gi.up.push_back(CurrentExpr::yvar(1));
    gi.heat.atoms.push_back(
        CurrentExpr::add(CurrentExpr::xvar(1), CurrentExpr::xvar(2)));
    assign.set(mu, std::move(gi));
    assign.validate(sig);
    Circuit m = from_generator(sig, mu);
    comb = vcomp(sig, hcomp(sig, m, identity(1)), m);
  }
};

Multiset of(std::initializer_list<Nat> elems) {
  Multiset m;
  for (Nat e : elems) m.add(e);
  return m;
}

}  // namespace

TEST_CASE("descending pass") {
  MuWorld w;
  InterpretationAssignment empty;
  std::vector<Nat> xs{5, 0, 2};
  CHECK(eval_down(w.sig, empty, identity(3), xs) ==
        std::vector<Nat>{5, 0, 2});
  std::vector<Nat> in{1, 2, 3};
  CHECK(eval_down(w.sig, w.assign, w.comb, in) == std::vector<Nat>{6});
  CHECK_THROWS_AS((void)eval_down(w.sig, w.assign, w.comb,
                                  std::vector<Nat>{1, 2}),
                  InterpError);
}

TEST_CASE("ascending pass") {
  MuWorld w;
  InterpretationAssignment empty;
  std::vector<Nat> ys{4, 4};
  CHECK(eval_up(w.sig, empty, identity(2), ys) == std::vector<Nat>{4, 4});
  std::vector<Nat> y{5};
  CHECK(eval_up(w.sig, w.assign, w.comb, y) == std::vector<Nat>{5, 5, 5});
  CHECK_THROWS_AS((void)eval_up(w.sig, w.assign, w.comb,
                                std::vector<Nat>{5, 5}),
                  InterpError);
}

TEST_CASE("heat pass") {
  MuWorld w;
  InterpretationAssignment empty;
  std::vector<Nat> xs{7, 7};
  std::vector<Nat> ys{7, 7};
  CHECK(eval_heat(w.sig, empty, identity(2), xs, ys) == Multiset{});
  std::vector<Nat> in{1, 2, 3};
  std::vector<Nat> out{5};
  CHECK(eval_heat(w.sig, w.assign, w.comb, in, out) == of({3, 6}));
}

TEST_CASE("horizontal juxtaposition splits all three evaluations") {
  Rng rng(211);
  for (int i = 0; i < 150; ++i) {
    Signature sig = random_signature(rng, 4, 3);
    InterpretationAssignment a = random_assignment(rng, sig, 0, false);
    Circuit f = random_word(rng, sig, 2, 4);
    Circuit g = random_word(rng, sig, 2, 4);
    Circuit fg = hcomp(sig, f, g);
    std::vector<Nat> xf = random_currents(rng, f.inputs, 0, 4);
    std::vector<Nat> xg = random_currents(rng, g.inputs, 0, 4);
    std::vector<Nat> yf = random_currents(rng, f.outputs, 0, 4);
    std::vector<Nat> yg = random_currents(rng, g.outputs, 0, 4);
    std::vector<Nat> xs = xf;
    xs.insert(xs.end(), xg.begin(), xg.end());
    std::vector<Nat> ys = yf;
    ys.insert(ys.end(), yg.begin(), yg.end());

    std::vector<Nat> down = eval_down(sig, a, f, xf);
    std::vector<Nat> down_g = eval_down(sig, a, g, xg);
    down.insert(down.end(), down_g.begin(), down_g.end());
    CHECK(eval_down(sig, a, fg, xs) == down);

    std::vector<Nat> up = eval_up(sig, a, f, yf);
    std::vector<Nat> up_g = eval_up(sig, a, g, yg);
    up.insert(up.end(), up_g.begin(), up_g.end());
    CHECK(eval_up(sig, a, fg, ys) == up);

    CHECK(eval_heat(sig, a, fg, xs, ys) ==
          msum(eval_heat(sig, a, f, xf, yf), eval_heat(sig, a, g, xg, yg)));
  }
}

TEST_CASE("vertical plugging composes the passes") {
  Rng rng(223);
  for (int i = 0; i < 150; ++i) {
    Signature sig = random_signature(rng, 4, 3);
    InterpretationAssignment a = random_assignment(rng, sig, 0, false);
    Circuit f = random_word(rng, sig, 3, 4);
    Circuit g = random_word(rng, sig, f.outputs, 4);
    Circuit fg = vcomp(sig, f, g);
    std::vector<Nat> ys = random_currents(rng, g.outputs, 0, 4);
    CHECK(eval_up(sig, a, fg, ys) ==
          eval_up(sig, a, f, eval_up(sig, a, g, ys)));
    std::vector<Nat> xs = random_currents(rng, f.inputs, 0, 4);
    CHECK(eval_down(sig, a, fg, xs) ==
          eval_down(sig, a, g, eval_down(sig, a, f, xs)));
  }
}

TEST_CASE("slice passes equal the structural recursion") {
  Rng rng(227);
  for (int i = 0; i < 400; ++i) {
    Signature sig = random_signature(rng, 4, 3);
    InterpretationAssignment a = random_assignment(rng, sig, 0, false);
    auto expr = random_expr(rng, sig, 1 + (i % 4), 4);
    Circuit raw = flatten(sig, *expr);
    std::vector<Nat> xs = random_currents(rng, raw.inputs, 0, 4);
    std::vector<Nat> ys = random_currents(rng, raw.outputs, 0, 4);
    CHECK(eval_down(sig, a, raw, xs) == rec_down(sig, a, *expr, xs));
    CHECK(eval_up(sig, a, raw, ys) == rec_up(sig, a, *expr, ys));
    CHECK(eval_heat(sig, a, raw, xs, ys) == rec_heat(sig, a, *expr, xs, ys));
    // and the canonical form evaluates identically
    Circuit canon = canonicalize(sig, raw.inputs, raw.outputs, raw.slices);
    CHECK(eval_down(sig, a, canon, xs) == rec_down(sig, a, *expr, xs));
    CHECK(eval_up(sig, a, canon, ys) == rec_up(sig, a, *expr, ys));
    CHECK(eval_heat(sig, a, canon, xs, ys) == rec_heat(sig, a, *expr, xs, ys));
  }
}

TEST_CASE("isotopy invariance of the evaluators") {
  Rng rng(229);
  for (int i = 0; i < 200; ++i) {
    Signature sig = random_signature(rng, 3, 3);
    InterpretationAssignment a = random_assignment(rng, sig, 0, false);
    Circuit raw = random_word(rng, sig, 3, 6);
    std::vector<Nat> xs = random_currents(rng, raw.inputs, 0, 4);
    std::vector<Nat> ys = random_currents(rng, raw.outputs, 0, 4);
    std::vector<Nat> down = eval_down(sig, a, raw, xs);
    std::vector<Nat> up = eval_up(sig, a, raw, ys);
    Multiset heat = eval_heat(sig, a, raw, xs, ys);
    std::vector<Slice> word = raw.slices;
    for (int wals = 0; wals < 5; ++wals) {
      random_exchange_walk(rng, sig, raw.inputs, word, 3);
      Circuit moved{raw.inputs, raw.outputs, word};
      CHECK(eval_down(sig, a, moved, xs) == down);
      CHECK(eval_up(sig, a, moved, ys) == up);
      CHECK(eval_heat(sig, a, moved, xs, ys) == heat);
    }
  }
}

TEST_CASE("monotonicity in the currents") {
  Rng rng(233);
  for (int i = 0; i < 200; ++i) {
    Signature sig = random_signature(rng, 3, 3);
    InterpretationAssignment a = random_assignment(rng, sig, 0, false);
    Circuit f = random_word(rng, sig, 3, 5);
    std::vector<Nat> xs = random_currents(rng, f.inputs, 0, 3);
    std::vector<Nat> ys = random_currents(rng, f.outputs, 0, 3);
    std::vector<Nat> xs2 = xs;
    std::vector<Nat> ys2 = ys;
    for (Nat& v : xs2) v += rng() % 3;
    for (Nat& v : ys2) v += rng() % 3;
    std::vector<Nat> d1 = eval_down(sig, a, f, xs);
    std::vector<Nat> d2 = eval_down(sig, a, f, xs2);
    for (std::size_t k = 0; k < d1.size(); ++k) CHECK(d1[k] <= d2[k]);
    std::vector<Nat> u1 = eval_up(sig, a, f, ys);
    std::vector<Nat> u2 = eval_up(sig, a, f, ys2);
    for (std::size_t k = 0; k < u1.size(); ++k) CHECK(u1[k] <= u2[k]);
    OrderResult r = mcompare(eval_heat(sig, a, f, xs2, ys2),
                             eval_heat(sig, a, f, xs, ys));
    CHECK(r != OrderResult::Less);
  }
}

TEST_CASE("assignment validation") {
  Signature sig;
  GenId mu = sig.add({"mu", 2, 1});
  InterpretationAssignment a;
  GeneratorInterpretation bad;
  bad.down.push_back(CurrentExpr::yvar(1));  // y inside a descending map
  bad.up.push_back(CurrentExpr::yvar(1));
  bad.up.push_back(CurrentExpr::yvar(1));
  a.set(mu, std::move(bad));
  CHECK_THROWS_AS(a.validate(sig), InterpError);

  InterpretationAssignment partial;
  CHECK_FALSE(partial.total_on(sig));
}

TEST_CASE("affine composition matches pointwise evaluation") {
  Rng rng(239);
  for (int i = 0; i < 200; ++i) {
    Signature sig = random_signature(rng, 3, 3);
    InterpretationAssignment a = random_assignment(rng, sig, 0, true);
    Circuit f = random_word(rng, sig, 3, 5);
    std::vector<AffineForm> down = affine_down(sig, a, f);
    std::vector<AffineForm> up = affine_up(sig, a, f);
    for (int pt = 0; pt < 5; ++pt) {
      std::vector<Nat> xs = random_currents(rng, f.inputs, 0, 4);
      std::vector<Nat> ys = random_currents(rng, f.outputs, 0, 4);
      std::vector<Nat> expect = eval_down(sig, a, f, xs);
      for (std::size_t k = 0; k < down.size(); ++k) {
        CHECK(down[k].eval_at(xs) == expect[k]);
      }
      std::vector<Nat> expect_up = eval_up(sig, a, f, ys);
      for (std::size_t k = 0; k < up.size(); ++k) {
        CHECK(up[k].eval_at(ys) == expect_up[k]);
      }
    }
  }
}

TEST_CASE("affine_dominates decides the coordinatewise order") {
  Rng rng(241);
  std::uniform_int_distribution<Nat> coeff(0, 3);
  for (int i = 0; i < 500; ++i) {
    unsigned vars = 1 + (i % 3);
    AffineForm f, g;
    for (unsigned v = 0; v < vars; ++v) {
      f.coeffs.push_back(coeff(rng));
      g.coeffs.push_back(coeff(rng));
    }
    f.constant = coeff(rng);
    g.constant = coeff(rng);
    for (Nat min : {Nat{0}, Nat{1}}) {
      std::vector<Nat> witness;
      bool dominated = affine_dominates(f, g, min, &witness);
      if (!dominated) {
        REQUIRE(witness.size() == vars);
        for (Nat w : witness) CHECK(w >= min);
        CHECK(f.eval_at(witness) < g.eval_at(witness));
      } else {
        // exhaustive scan over a small box
        std::vector<Nat> point(vars, min);
        bool all = true;
        for (int probe = 0; probe < 200; ++probe) {
          std::vector<Nat> pt = random_currents(rng, vars, min, min + 6);
          if (f.eval_at(pt) < g.eval_at(pt)) all = false;
        }
        CHECK(all);
      }
    }
  }
}

TEST_CASE("max is rejected by the affine view") {
  Signature sig;
  GenId g = sig.add({"j", 2, 1});
  InterpretationAssignment a;
  GeneratorInterpretation gi;
  gi.down.push_back(CurrentExpr::max(CurrentExpr::xvar(1), CurrentExpr::xvar(2)));
  gi.up.push_back(CurrentExpr::yvar(1));
  gi.up.push_back(CurrentExpr::yvar(1));
  a.set(g, std::move(gi));
  Circuit c = from_generator(sig, g);
  CHECK_THROWS_AS((void)affine_down(sig, a, c), InterpError);
}
