#include <doctest.h>

#include <map>
#include <random>
#include <tuple>

#include "cas/psh.hpp"

using namespace cas;
using namespace cas::psh;

namespace {

constexpr Variant kBoth[] = {Variant::B, Variant::Ord};

// Counts sieves on c (stages <= level) by propagation search over the
// factorization preorder: a member forces its restrictions, a non-member
// forces out everything restricting to it.
std::size_t count_sieves(int c, Variant var, int level) {
  std::vector<Mor> ms;
  for (int d = level; d >= 0; --d)
    for (const Mor& s : cube::homs(d, c, var)) ms.push_back(s);
  std::map<Mor, std::size_t> idx;
  for (std::size_t i = 0; i < ms.size(); ++i) idx[ms[i]] = i;
  std::vector<std::vector<std::size_t>> down(ms.size()), up(ms.size());
  for (std::size_t i = 0; i < ms.size(); ++i)
    for (int d = 0; d <= level; ++d)
      for (const Mor& t : cube::homs(d, ms[i].src, var)) {
        std::size_t j = idx.at(cube::compose(ms[i], t));
        down[i].push_back(j);
        up[j].push_back(i);
      }
  std::size_t count = 0;
  std::vector<int> state(ms.size(), -1);
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    while (i < ms.size() && state[i] != -1) ++i;
    if (i == ms.size()) {
      ++count;
      return;
    }
    for (int choice : {1, 0}) {
      std::vector<int> saved = state;
      std::vector<std::pair<std::size_t, int>> todo{{i, choice}};
      bool ok = true;
      while (!todo.empty() && ok) {
        auto [k, v] = todo.back();
        todo.pop_back();
        if (state[k] == v) continue;
        if (state[k] != -1) {
          ok = false;
          break;
        }
        state[k] = v;
        for (std::size_t j : v ? down[k] : up[k]) todo.push_back({j, v});
      }
      if (ok) go(i + 1);
      state = saved;
    }
  };
  go(0);
  return count;
}

Sieve random_sieve(std::mt19937_64& rng, int c, Variant var, int level) {
  static std::map<std::tuple<int, Variant, int>, std::vector<Sieve>> cache;
  auto key = std::make_tuple(c, var, level);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, all_sieves(c, var, level)).first;
  return it->second[rng() % it->second.size()];
}

SliceFunctor tagged(int c) {
  SliceFunctor b;
  b.c = c;
  b.carrier = [](const Mor& s) {
    return std::vector<Val>{Val::pair(Val::integer(s.at(0)), Val::integer(0)),
                            Val::pair(Val::integer(s.at(0)), Val::integer(1))};
  };
  b.act = [](const Mor& s, const Mor& t, const Val& x) {
    return Val::pair(Val::integer(cube::compose(s, t).at(0)), x[1]);
  };
  return b;
}

SliceFunctor plain(int c) {
  SliceFunctor a;
  a.c = c;
  a.carrier = [](const Mor&) { return std::vector<Val>{Val::sym("p"), Val::sym("q")}; };
  a.act = [](const Mor&, const Mor&, const Val& x) { return x; };
  return a;
}

// p -> tag 1, q -> tag 0: a swap against the tagged carrier.
IsoOver swap_iso() {
  IsoOver f;
  f.fwd = [](const Mor& s, const Val& x) {
    return Val::pair(Val::integer(s.at(0)), Val::integer(x.as_sym() == "p" ? 1 : 0));
  };
  f.bwd = [](const Mor&, const Val& y) { return Val::sym(y[1].as_int() == 1 ? "p" : "q"); };
  return f;
}

template <class F>
bool every_slice_object(int c, int level, F f) {
  for (int d = 0; d <= level; ++d)
    for (const Mor& s : cube::homs(d, c, Variant::Ord))
      if (!f(s)) return false;
  return true;
}

}  // namespace

TEST_CASE("representables") {
  auto i = interval(Variant::Ord);
  CHECK(i->at(0).size() == 2);
  CHECK(i->at(1).size() == 3);
  CHECK(interval(Variant::B)->at(1).size() == 4);
  for (int c = 0; c <= 3; ++c) CHECK(terminal(Variant::Ord)->at(c).size() == 1);
  for (Variant var : kBoth)
    for (int c = 0; c <= 2; ++c) CHECK(check_functorial(*yoneda(c, var), 2).ok);
}

TEST_CASE("sieve counts match the propagation oracle") {
  CHECK(all_sieves(0, Variant::Ord, 0).size() == 2);
  CHECK(all_sieves(1, Variant::Ord, 1).size() == 5);
  CHECK(all_sieves(2, Variant::Ord, 2).size() == 84);
  for (Variant var : kBoth)
    for (int c = 0; c <= 1; ++c)
      for (int level = c; level <= 2; ++level)
        CHECK(all_sieves(c, var, level).size() == count_sieves(c, var, level));
  CHECK(all_sieves(2, Variant::Ord, 2).size() == count_sieves(2, Variant::Ord, 2));
}

TEST_CASE("sieve operations") {
  const int level = 2;
  for (Variant var : kBoth) {
    Sieve phi = Sieve::eq(cube::identity(1, var), 0);
    CHECK(sieve_equal(Sieve::disj(Sieve::bot(1, var), phi), phi, level));
    CHECK(sieve_equal(Sieve::conj(Sieve::top(1, var), phi), phi, level));
    CHECK(is_top(Sieve::eq(cube::endpoint(0, var), 0), level));
    CHECK(is_bot(Sieve::eq(cube::endpoint(0, var), 1), level));
    CHECK(is_top(Sieve::forall(Sieve::top(2, var)), level));
    CHECK(is_bot(Sieve::forall(Sieve::eq(cube::coordinate(2, 1, var), 0)), level));
    CHECK(check_sieve(Sieve::forall(Sieve::eq(cube::coordinate(2, 1, var), 0)), level).ok);
  }
  // A downward-open set of maps is rejected with a witness.
  Sieve bad = Sieve::fn(1, Variant::Ord, [](const Mor& s) { return s.src == 1; }, "bad");
  auto chk = check_sieve(bad, level);
  CHECK_FALSE(chk.ok);
  CHECK(chk.witness.has_value());
}

TEST_CASE("property: sieve operations return sieves") {
  std::mt19937_64 rng(8);
  const int level = 2;
  for (int k = 0; k < 300; ++k) {
    Variant var = rng() % 2 ? Variant::B : Variant::Ord;
    int c = rng() % 2;
    Sieve a = random_sieve(rng, c, var, level), b = random_sieve(rng, c, var, level);
    CHECK(check_sieve(Sieve::conj(a, b), level).ok);
    CHECK(check_sieve(Sieve::disj(a, b), level).ok);
    CHECK(check_sieve(Sieve::eq(cube::coordinate(c + 1, c, var), rng() % 2).pull(cube::face(c, 1, var)), level).ok);
    Sieve wide = random_sieve(rng, c + 1, var, level);
    CHECK(check_sieve(Sieve::forall(wide), level - 1).ok);
    const auto& hs = cube::homs(rng() % 2, c, var);
    CHECK(check_sieve(a.pull(hs[rng() % hs.size()]), level).ok);
    // Equal decision tables give equal values.
    CHECK((a.to_val(level) == Sieve::disj(a, a).to_val(level)));
    CHECK(sieve_equal(Sieve::from_val(c, var, level, a.to_val(level)), a, level));
  }
}

TEST_CASE("systems") {
  const int level = 2;
  Variant var = Variant::Ord;
  Partial whole(Sieve::top(1, var), [](const Mor& s) { return Val::integer(s.src); });
  auto one = system({whole}, level);
  REQUIRE(one.ok);
  for (const Mor& s : Sieve::top(1, var).members(level)) CHECK(one.joined(s) == whole(s));

  Sieve at0 = Sieve::eq(cube::identity(1, var), 0), at1 = Sieve::eq(cube::identity(1, var), 1);
  Partial p0(at0, [](const Mor&) { return Val::sym("zero"); });
  Partial p1(at1, [](const Mor&) { return Val::sym("one"); });
  auto two = system({p0, p1}, level);
  REQUIRE(two.ok);
  for (const Mor& s : at0.members(level)) CHECK(two.joined(s) == Val::sym("zero"));
  for (const Mor& s : at1.members(level)) CHECK(two.joined(s) == Val::sym("one"));
  CHECK(sieve_equal(two.joined.sieve(), Sieve::disj(at0, at1), level));

  Partial clash(Sieve::top(1, var), [](const Mor&) { return Val::sym("one"); });
  auto bad = system({p0, clash}, level);
  CHECK_FALSE(bad.ok);
  REQUIRE(bad.conflict.has_value());
  CHECK(at0.contains(*bad.conflict));
}

TEST_CASE("context extension") {
  for (Variant var : kBoth) {
    Psh g = interval(var);
    Psh s1 = sigma(const_family(g, terminal(var)));
    Psh two = constant({Val::sym("a"), Val::sym("b")}, var);
    Psh s2 = sigma(const_family(g, two));
    for (int c = 0; c <= 2; ++c) {
      CHECK(s1->at(c).size() == g->at(c).size());
      CHECK(s2->at(c).size() == 2 * g->at(c).size());
    }
    CHECK(check_functorial(*s2, 2).ok);
    Fam n = nabla(g, [](const Val& p) {
      return p.as_mor().at(0) ? std::vector<Val>{Val::integer(1)} : std::vector<Val>{Val::integer(0), Val::integer(2)};
    });
    std::size_t expected = 0;
    for (const Val& p : g->at(1)) expected += n->fiber(1, p).size();
    CHECK(sigma(n)->at(1).size() == expected);
    CHECK(check_functorial(*sigma(n), 2).ok);
  }
}

TEST_CASE("dependent products") {
  Variant var = Variant::Ord;
  Psh one = terminal(var);
  Fam a = const_family(one, constant({Val::sym("a"), Val::sym("b")}, var));
  Fam single = const_family(sigma(a), terminal(var));
  Fam three = const_family(sigma(a), constant({Val::integer(0), Val::integer(1), Val::integer(2)}, var));
  for (int level = 0; level <= 2; ++level) {
    auto p1 = pi_family(a, single, level);
    CHECK(p1->fiber(0, one->at(0)[0]).size() == 1);
    // Trivial actions: a natural family is a function {a, b} -> {0, 1, 2}.
    auto p3 = pi_family(a, three, level);
    CHECK(p3->fiber(0, one->at(0)[0]).size() == 9);
  }
  auto p = pi_family(a, three, 1);
  CHECK(check_functorial(*p, 1).ok);

  // Over the interval: functions out of the interval into itself, natural.
  Psh iv = interval(var);
  Fam i = const_family(one, iv);
  Fam ii = const_family(sigma(i), iv);
  auto endo = pi_family(i, ii, 1);
  const Val& pt = one->at(0)[0];
  for (const Val& f : endo->fiber(0, pt)) {
    const auto& lay = endo->layout(0, pt);
    for (const auto& [s, x] : lay.keys)
      for (int d = 0; d <= 1; ++d)
        for (const Mor& t : cube::homs(d, s.src, var)) {
          Val lhs = iv->act(t, endo->value(0, pt, f, s, x));
          Val rhs = endo->value(0, pt, f, cube::compose(s, t), iv->act(t, x));
          CHECK(lhs == rhs);
        }
  }
  // Natural endomaps of y1 truncated at level 1 are the three maps 1 -> 1.
  CHECK(endo->fiber(0, pt).size() == 3);
}

TEST_CASE("path and identity types") {
  Variant var = Variant::Ord;
  Psh one = terminal(var);
  Psh iv = interval(var);
  Fam a = const_family(one, iv);
  Fam path = path_family(a);
  Psh ctx = ctx_aa(a);
  for (int c = 0; c <= 1; ++c)
    for (const Val& g : ctx->at(c)) {
      std::size_t brute = 0;
      for (const Val& y : iv->at(c + 1))
        if (iv->act(cube::face(c, 0, var), y) == g[0][1] &&
            iv->act(cube::face(c, 1, var), y) == g[1])
          ++brute;
      CHECK(path->fiber(c, g).size() == brute);
      for (const Val& y : path->fiber(c, g)) {
        CHECK(iv->act(cube::face(c, 0, var), y) == g[0][1]);
        CHECK(iv->act(cube::face(c, 1, var), y) == g[1]);
      }
      if (g[0][1] == g[1]) CHECK(path->in_fiber(c, g, refl_path(a, c, g[0][0], g[1])));
    }
  CHECK(check_functorial(*path, 1).ok);

  Fam id = id_family(a, 1);
  for (const Val& g : ctx->at(0)) {
    if (g[0][1] != g[1]) continue;
    Val refl = Val::pair(refl_path(a, 0, g[0][0], g[1]), Sieve::top(0, var).to_val(1));
    CHECK(id->in_fiber(0, g, refl));
  }
  // The generic path from 0 to 1 is never constant, so only the empty sieve rides along.
  for (const Val& g : ctx->at(0))
    if (g[0][1] != g[1])
      for (const Val& x : id->fiber(0, g)) CHECK(is_bot(Sieve::from_val(0, var, 1, x[1]), 1));
}

TEST_CASE("discreteness and connectedness") {
  for (Variant var : kBoth) {
    CHECK(is_discrete(*constant({Val::integer(0), Val::integer(1), Val::integer(2)}, var), 2));
    CHECK(is_discrete(*terminal(var), 2));
    CHECK_FALSE(is_discrete(*interval(var), 2));
    CHECK(check_connected(*interval(var), 2).ok);
    CHECK_FALSE(check_connected(*coproduct(terminal(var), terminal(var)), 2).ok);

    // Brute force: natural maps from the interval to a two-element constant presheaf.
    Psh i = interval(var);
    const int top = var == Variant::Ord ? 2 : 1;
    std::vector<std::pair<int, Val>> elems;
    for (int c = 0; c <= top; ++c)
      for (const Val& x : i->at(c)) elems.emplace_back(c, x);
    std::size_t natural = 0;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << elems.size()); ++bits) {
      std::map<std::pair<int, Val>, int> val;
      for (std::size_t k = 0; k < elems.size(); ++k) val[elems[k]] = (bits >> k) & 1;
      bool ok = true;
      for (const auto& [c, x] : elems)
        for (int d = 0; d <= c && ok; ++d)
          for (const Mor& s : cube::homs(d, c, var))
            if (val[{d, i->act(s, x)}] != val[{c, x}]) {
              ok = false;
              break;
            }
      natural += ok;
    }
    CHECK(natural == 2);
  }
}

TEST_CASE("constant and codiscrete presheaves") {
  Variant var = Variant::Ord;
  Psh d1 = constant({Val::sym("x")}, var);
  for (int c = 0; c <= 2; ++c) CHECK(d1->at(c).size() == 1);
  Psh base = constant({Val::integer(0), Val::integer(1)}, var);
  auto points = [](const Val& g) {
    std::vector<Val> out;
    for (long long k = 0; k <= g.as_int() + 1; ++k) out.push_back(Val::integer(k));
    return out;
  };
  Fam n = nabla(base, points);
  for (const Val& g : base->at(0)) {
    std::size_t a = points(g).size();
    CHECK(n->fiber(0, g).size() == a);
    CHECK(n->fiber(1, g).size() == a * a);
    CHECK(n->fiber(2, g).size() == a * a * a * a);
    for (const Val& x : n->fiber(0, g)) CHECK(x[0].as_int() <= g.as_int() + 1);
  }
  CHECK(check_functorial(*n, 2).ok);
}

TEST_CASE("exponentials by representables") {
  for (Variant var : kBoth) {
    CHECK(check_exponential_iso(interval(var), 1, 0, 1).ok);
    CHECK(check_exponential_iso(interval(var), 1, 1, 1).ok);
    CHECK(check_exponential_iso(constant({Val::integer(0), Val::integer(1)}, var), 1, 1, 1).ok);
  }
  CHECK(check_exponential_iso(interval(Variant::Ord), 1, 2, 1).ok);
}

TEST_CASE("iso extension") {
  const int c = 1, level = 2;
  SliceFunctor a = plain(c), b = tagged(c);
  IsoOver f = swap_iso();
  REQUIRE(check_slice_functor(a, level).ok);
  REQUIRE(check_slice_functor(b, level).ok);

  auto bot = lift_iea(Sieve::bot(c, Variant::Ord), a, b, f);
  CHECK(every_slice_object(c, level, [&](const Mor& s) {
    if (bot.d.carrier(s) != b.carrier(s)) return false;
    for (const Val& x : bot.d.carrier(s))
      if (bot.g.fwd(s, x) != x) return false;
    return true;
  }));

  auto top = lift_iea(Sieve::top(c, Variant::Ord), a, b, f);
  CHECK(every_slice_object(c, level, [&](const Mor& s) {
    if (top.d.carrier(s) != a.carrier(s)) return false;
    for (const Val& x : top.d.carrier(s))
      if (top.g.fwd(s, x) != f.fwd(s, x)) return false;
    return true;
  }));

  Sieve mixed = Sieve::eq(cube::identity(1, Variant::Ord), 1);
  auto m = lift_iea(mixed, a, b, f);
  CHECK(check_slice_functor(m.d, level).ok);
  CHECK(check_iso_natural(m.d, b, m.g, level).ok);
  CHECK(every_slice_object(c, level, [&](const Mor& s) {
    bool on = mixed.contains(s);
    return m.d.carrier(s) == (on ? a.carrier(s) : b.carrier(s));
  }));
}

TEST_CASE("lifted universe") {
  UniverseSample u;
  u.types.push_back({"one", {Val::integer(0)}});
  u.types.push_back({"two", {Val::integer(0), Val::integer(1)}});
  auto univ = hs_lift(u, Variant::Ord, 1);
  // Over 0 at level 1: a retraction one -> two (two ways), an automorphism of two (two ways), or all one.
  CHECK(univ->at(0).size() == 5);
  CHECK(check_functorial(*univ, 1).ok);
  for (const Val& x : univ->at(1)) {
    SliceFunctor f = univ->decode(1, x);
    CHECK(check_slice_functor(f, 1).ok);
  }
}
