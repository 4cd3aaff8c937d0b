#include <doctest.h>

#include <random>
#include <set>

#include "cas/cube.hpp"

using namespace cas::cube;

namespace {

constexpr Variant kBoth[] = {Variant::B, Variant::Ord};

// Brute-force count of all (or pointwise-monotone) vertex tables m -> n.
std::size_t count_tables(int m, int n, bool monotone) {
  const unsigned rows = 1u << m, cols = 1u << n;
  std::size_t total = 0;
  std::vector<unsigned> t(rows, 0);
  for (;;) {
    bool ok = true;
    if (monotone)
      for (unsigned u = 0; u < rows && ok; ++u)
        for (unsigned v = 0; v < rows && ok; ++v)
          if ((u & v) == u && (t[u] & t[v]) != t[u]) ok = false;
    total += ok;
    unsigned i = 0;
    while (i < rows && ++t[i] == cols) t[i++] = 0;
    if (i == rows) break;
  }
  return total;
}

Mor random_mor(std::mt19937_64& rng, int m, int n, Variant var) {
  const auto& hs = homs(m, n, var);
  return hs[rng() % hs.size()];
}

}  // namespace

TEST_CASE("hom counts match brute force") {
  CHECK(hom_count(0, 1, Variant::B) == 2);
  CHECK(hom_count(1, 1, Variant::Ord) == 3);
  CHECK(hom_count(1, 1, Variant::B) == 4);
  for (int m = 0; m <= 2; ++m)
    for (int n = 0; n <= 3; ++n) {
      CHECK(hom_count(m, n, Variant::B) == count_tables(m, n, false));
      CHECK(hom_count(m, n, Variant::Ord) == count_tables(m, n, true));
      CHECK(homs(m, n, Variant::Ord).size() == hom_count(m, n, Variant::Ord));
    }
}

TEST_CASE("enumeration is duplicate-free, sorted and indexed") {
  for (Variant var : kBoth)
    for (int m = 0; m <= 2; ++m)
      for (int n = 0; n <= 2; ++n) {
        const auto& hs = homs(m, n, var);
        for (std::size_t i = 0; i < hs.size(); ++i) {
          CHECK(hom_index(hs[i]) == i);
          if (i > 0) CHECK(hs[i - 1] < hs[i]);
          if (var == Variant::Ord) CHECK(is_monotone(hs[i]));
        }
      }
  CHECK_THROWS_AS(homs(4, 4, Variant::B), CapExceeded);
}

TEST_CASE("connection laws") {
  for (Variant var : kBoth) {
    Mor i1 = identity(1, var);
    CHECK(compose(i1, endpoint(0, var)) == endpoint(0, var));
    for (int e = 0; e <= 1; ++e) {
      Mor mu = connection(e, var);
      Mor same = const_point(1, e, var);
      CHECK(compose(mu, pair(same, i1)) == same);
      CHECK(compose(mu, pair(i1, same)) == same);
      Mor other = const_point(1, 1 - e, var);
      CHECK(compose(mu, pair(other, i1)) == i1);
      CHECK(compose(mu, pair(i1, other)) == i1);
    }
    auto v = check_path_connection_algebra(var);
    CHECK(v.pass);
    CHECK(v.failures.empty());
  }
}

TEST_CASE("corrupted connection is caught") {
  for (Variant var : kBoth) {
    auto v = check_path_connection_algebra(var, connection(1, var), connection(1, var));
    CHECK_FALSE(v.pass);
    REQUIRE_FALSE(v.failures.empty());
    CHECK(v.failures[0].find("mu") != std::string::npos);
  }
  Mor bad = make(2, 1, {0, 1, 1, 0}, Variant::B);
  CHECK_FALSE(check_path_connection_algebra(Variant::B, bad, connection(1, Variant::B)).pass);
}

TEST_CASE("global points of the interval") {
  for (Variant var : kBoth) {
    auto pts = global_points_of_interval(var);
    REQUIRE(pts.size() == 2);
    CHECK(pts[0] == endpoint(0, var));
    CHECK(pts[1] == endpoint(1, var));
    for (int e = 0; e <= 1; ++e) CHECK(pts[e] == compose(endpoint(e, var), bang(0, var)));
  }
}

TEST_CASE("end-points stay apart at every object") {
  for (Variant var : kBoth)
    for (int c = 0; c <= 3; ++c) CHECK_FALSE(equal(const_point(c, 0, var), const_point(c, 1, var)));
}

TEST_CASE("category laws exhaustively for dims <= 1") {
  for (Variant var : kBoth)
    for (int a = 0; a <= 1; ++a)
      for (int b = 0; b <= 1; ++b)
        for (int c = 0; c <= 1; ++c)
          for (int d = 0; d <= 1; ++d)
            for (const Mor& f : homs(a, b, var))
              for (const Mor& g : homs(b, c, var)) {
                Mor gf = compose(g, f);
                for (unsigned v = 0; v < f.rows(); ++v) CHECK(gf.at(v) == g.at(f.at(v)));
                CHECK(compose(identity(c, var), g) == g);
                CHECK(compose(g, identity(b, var)) == g);
                for (const Mor& h : homs(c, d, var)) CHECK(compose(h, gf) == compose(compose(h, g), f));
              }
}

TEST_CASE("property: associativity and monotone closure on random dims <= 2") {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 2000; ++k) {
    Variant var = rng() % 2 ? Variant::B : Variant::Ord;
    int a = rng() % 3, b = rng() % 3, c = rng() % 3, d = rng() % 3;
    Mor f = random_mor(rng, a, b, var), g = random_mor(rng, b, c, var), h = random_mor(rng, c, d, var);
    CHECK(compose(h, compose(g, f)) == compose(compose(h, g), f));
    if (var == Variant::Ord) {
      CHECK(is_monotone(compose(g, f)));
      if (b + c <= kMaxDim) CHECK(is_monotone(pair(f, random_mor(rng, a, c, var))));
    }
  }
  CHECK_THROWS_AS(compose(identity(1, Variant::B), identity(2, Variant::B)), Mismatch);
  CHECK_THROWS_AS(compose(identity(1, Variant::B), identity(1, Variant::Ord)), Mismatch);
  CHECK_THROWS(make(1, 1, {1, 0}, Variant::Ord));
}

TEST_CASE("binary products") {
  for (Variant var : kBoth) {
    for (int n = 0; n <= 2; ++n) {
      CHECK(proj2(0, n, var) == identity(n, var));
      CHECK(proj1(n, 0, var) == identity(n, var));
    }
    // Universal property: each k -> m + n is the pairing of its projections, uniquely.
    for (int k = 0; k <= 1; ++k)
      for (int m = 0; m <= 1; ++m)
        for (int n = 0; n <= 1; ++n) {
          std::set<std::pair<std::size_t, std::size_t>> seen;
          for (const Mor& h : homs(k, m + n, var)) {
            Mor f = compose(proj1(m, n, var), h), g = compose(proj2(m, n, var), h);
            CHECK(pair(f, g) == h);
            CHECK(seen.insert({hom_index(f), hom_index(g)}).second);
          }
          CHECK(seen.size() == homs(k, m, var).size() * homs(k, n, var).size());
          for (const Mor& f : homs(k, m, var))
            for (const Mor& g : homs(k, n, var)) {
              CHECK(compose(proj1(m, n, var), pair(f, g)) == f);
              CHECK(compose(proj2(m, n, var), pair(f, g)) == g);
            }
        }
  }
}

TEST_CASE("named morphisms") {
  Variant var = Variant::Ord;
  CHECK(compose(drop_last(2, var), face(2, 1, var)) == identity(2, var));
  CHECK(extend(identity(1, var)) == identity(2, var));
  CHECK(compose(coordinate(2, 0, var), face(1, 1, var)) == identity(1, var));
  CHECK(compose(coordinate(2, 1, var), face(1, 1, var)) == const_point(1, 1, var));
  CHECK(connection(0, var) == make(2, 1, {0, 0, 0, 1}, var));
  CHECK(connection(1, var) == make(2, 1, {0, 1, 1, 1}, var));
}

TEST_CASE("text form") {
  Mor mu = connection(0, Variant::Ord);
  CHECK(to_string(mu) == "mor B_ord 2->1 [00↦0 01↦0 10↦0 11↦1]");
  CHECK(parse_mor(to_string(mu)) == mu);
  CHECK(parse_mor("mor B 1->1 [0|->1 1|->0]") == make(1, 1, {1, 0}, Variant::B));
  for (Variant var : kBoth)
    for (int m = 0; m <= 2; ++m)
      for (int n = 0; n <= 2; ++n)
        for (const Mor& f : homs(m, n, var)) {
          CHECK(parse_mor(to_string(f)) == f);
          CHECK(parse_table(table_string(f), var) == f);
        }
  CHECK_THROWS(parse_mor("mor B_ord 1->1 [0↦1 1↦0]"));
  CHECK_THROWS(parse_mor("mor B 1->1 [0↦1]"));
}
