#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>

#include "asm_gen.hpp"
#include "cas/asm.hpp"

using namespace cas::assembly;
using cas::pca::ap;
using cas::pca::Code;
using cas::pca::K;
using cas::pca::numeral;
using cas::pca::S;
using gen::random_modest;
using gen::random_uniform;

namespace {

constexpr std::uint64_t kBudget = 10000;

std::vector<std::size_t> constant_map(std::size_t n, std::size_t k) { return std::vector<std::size_t>(n, k); }

// A section f exists on m <= bound iff, for each n, every e(m) with n < m and
// e(m) != n names one value, and that value exceeds n.
bool section_exists(const std::vector<std::uint64_t>& e, std::uint64_t bound) {
  for (std::uint64_t n = 0; n < bound; ++n) {
    std::set<std::uint64_t> need;
    for (std::uint64_t m = n + 1; m <= bound; ++m)
      if (e[m] != n) need.insert(e[m]);
    if (need.size() > 1) return false;
    if (need.size() == 1 && *need.begin() <= n) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("check_tracks examples") {
  Assembly a = Assembly::make({{"p", {1, 2}}, {"q", {3}}});
  TrackedMap id{&a, &a, {0, 1}, cas::pca::identity_code()};
  CHECK(check_tracks(id).ok);

  Assembly b = Assembly::make({{"u", {4}}, {"v", {6}}});
  TrackedMap c{&a, &b, constant_map(2, 1), ap(K(), numeral(6))};
  CHECK(check_tracks(c).ok);
  c.tracker = ap(K(), numeral(4));
  auto bad = check_tracks(c);
  CHECK_FALSE(bad.ok);
  CHECK_FALSE(bad.cause.empty());

  Assembly x = Assembly::make({{"x0", {5}}, {"x1", {5}}});
  Assembly y = Assembly::make({{"y0", {1}}, {"y1", {2}}});
  std::vector<std::size_t> f{0, 1};
  auto obs = tracking_obstruction(x, y, f);
  REQUIRE(obs.has_value());
  CHECK(obs->realizer == 5u);
  std::size_t checked = 0;
  cas::pca::for_each_code(3, [&](const Code& e) {
    ++checked;
    CHECK_FALSE(tracks(e, x, y, f, 200));
    return true;
  });
  CHECK(checked == cas::pca::count_codes(3));
  CHECK_FALSE(find_tracker(x, y, f, 3, 200).has_value());
}

TEST_CASE("find_tracker examples") {
  Assembly one = Assembly::make({{"*", {3}}});
  auto id = find_tracker(one, one, {0}, 3, kBudget);
  REQUIRE(id.has_value());
  CHECK(id->size() <= 3);
  CHECK(tracks(*id, one, one, {0}, kBudget));

  Assembly src = Assembly::make({{"a", {1}}, {"b", {2}}});
  Assembly zero = Assembly::make({{"z", {0}}});
  auto k = find_tracker(src, zero, {0, 0}, 3, kBudget);
  REQUIRE(k.has_value());
  CHECK(k->size() <= 2);
}

TEST_CASE("modesty and PERs") {
  CHECK(is_modest(Assembly::make({{"*", {4}}})));
  CHECK_FALSE(is_modest(Assembly::make({{"a", {7}}, {"b", {1, 7}}})));

  auto m1 = modest_of_per(PER::make({{0, 0}}));
  REQUIRE(m1.size() == 1);
  CHECK(m1.realizers[0] == Realizers{0});
  auto m2 = modest_of_per(PER::make({{0, 0}, {1, 1}}));
  CHECK(m2.size() == 2);
  CHECK(is_modest(m2));

  CHECK_THROWS_AS(PER::make({{0, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(PER::make({{0, 1}, {1, 0}, {1, 2}, {2, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(per_of_modest(Assembly::make({{"a", {7}}, {"b", {7}}})), std::invalid_argument);
  CHECK_THROWS(Assembly::make({{"a", {}}}));
}

TEST_CASE("property: modest_of_per is modest and round-trips") {
  std::mt19937_64 rng(21);
  for (int k = 0; k < 200; ++k) {
    // Random partition of a random subset of 0..9.
    std::map<std::uint64_t, int> block;
    for (std::uint64_t x = 0; x < 10; ++x)
      if (rng() % 3) block[x] = static_cast<int>(rng() % 4);
    std::set<std::pair<std::uint64_t, std::uint64_t>> pairs;
    for (auto [x, bx] : block)
      for (auto [y, by] : block)
        if (bx == by) pairs.insert({x, y});
    PER r = PER::make(pairs);
    Assembly m = modest_of_per(r);
    CHECK(is_modest(m));
    for (const auto& rs : m.realizers)
      for (auto x : rs)
        for (auto y : rs) CHECK(r.related(x, y));

    Assembly a = random_modest(rng, 1 + rng() % 3);
    Assembly back = modest_of_per(per_of_modest(a));
    REQUIRE(back.size() == a.size());
    // Explicit iso: match elements by realizer set, then find trackers both ways.
    std::vector<std::size_t> to(a.size()), from(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < back.size(); ++j)
        if (a.realizers[i] == back.realizers[j]) {
          to[i] = j;
          from[j] = i;
        }
    CHECK(find_tracker(a, back, to, 3, kBudget).has_value());
    CHECK(find_tracker(back, a, from, 3, kBudget).has_value());
  }
}

TEST_CASE("uniformity") {
  CHECK(is_uniform(Assembly::make({{"*", {9}}})).uniform);
  auto v = is_uniform(Assembly::make({{"a", {1, 2}}, {"b", {2, 3}}}));
  CHECK(v.uniform);
  CHECK(v.common == 2u);

  std::mt19937_64 rng(5);
  for (int k = 0; k < 100; ++k) {
    Assembly m = random_modest(rng, 2 + rng() % 3);
    auto u = is_uniform(m);
    CHECK_FALSE(u.uniform);
    CHECK(u.refuting_pair.has_value());
  }

  auto d = counterexample_data();
  for (std::uint64_t n = 0; n < 20; ++n) CHECK(is_uniform_with(d.fiber(n), n, 60));
  CHECK_FALSE(is_uniform_with(d.fiber(3), 4, 60));
}

TEST_CASE("counterexample data") {
  auto d = counterexample_data();
  CHECK(d.gamma.realizes(3, 4));
  CHECK(d.gamma.realizes(3, 5));
  CHECK(d.gamma.realizes(3, 6));
  CHECK_FALSE(d.gamma.realizes(3, 3));
  auto a3 = d.fiber(3);
  for (std::uint64_t k = 0; k < 10; ++k) CHECK(a3.realizes(5, k) == (k == 3 || k == 5));
  CHECK_FALSE(a3.member(3));
  CHECK(a3.member(4));
}

TEST_CASE("well-supported families and truncation") {
  auto d = counterexample_data();
  CHECK(is_well_supported(d, cas::pca::identity_code(), 30, 40, kBudget).ok);
  CHECK_FALSE(is_well_supported(d, ap(K(), numeral(0)), 30, 40, kBudget).ok);

  FamilyOfAssemblies empty{Assembly::make({{"g", {1}}}), {Assembly{}}};
  auto e = is_well_supported(empty, cas::pca::identity_code(), kBudget);
  CHECK_FALSE(e.ok);
  CHECK(e.reason.find("empty") != std::string::npos);

  FamilyOfAssemblies constant{Assembly::make({{"g", {1}}, {"h", {2, 3}}}),
                              {Assembly::make({{"z", {0}}}), Assembly::make({{"z", {0}}})}};
  CHECK(is_well_supported(constant, ap(K(), numeral(0)), kBudget).ok);

  FamilyOfAssemblies ab{Assembly::make({{"g", {1}}}), {Assembly::make({{"a", {1}}, {"b", {2}}})}};
  auto t = trunc(ab);
  REQUIRE(t.fibers[0].size() == 1);
  CHECK(t.fibers[0].realizers[0] == Realizers{1, 2});
  CHECK(trunc(empty).fibers[0].size() == 0);
}

TEST_CASE("property: trunc is idempotent and keeps well-supportedness") {
  std::mt19937_64 rng(17);
  for (int k = 0; k < 200; ++k) {
    FamilyOfAssemblies f;
    f.base = random_modest(rng, 1 + rng() % 3);
    for (std::size_t g = 0; g < f.base.size(); ++g)
      f.fibers.push_back(rng() % 5 == 0 ? Assembly{} : random_uniform(rng, 1 + rng() % 3));
    auto t = trunc(f);
    auto tt = trunc(t);
    CHECK(to_text(t) == to_text(tt));
    bool inhabited = std::all_of(f.fibers.begin(), f.fibers.end(), [](const Assembly& a) { return a.size() > 0; });
    // Every inhabited fiber here is uniform, so K of the common realizer supports it.
    if (inhabited && f.fibers.size() == 1) {
      auto c = is_uniform(f.fibers[0]).common;
      REQUIRE(c.has_value());
      CHECK(is_well_supported(f, ap(K(), numeral(*c)), kBudget).ok);
      CHECK(is_well_supported(t, ap(K(), numeral(*c)), kBudget).ok);
    }
    for (const auto& fib : t.fibers) CHECK(fib.size() <= 1);
    if (inhabited)
      for (const auto& fib : t.fibers) CHECK(fib.size() == 1);
  }
}

TEST_CASE("refute_section examples") {
  auto id = refute_section(cas::pca::identity_code(), 16, kBudget);
  REQUIRE(id.refuted);
  CHECK(id.witness->kind == Witness::Kind::Conflict);
  CHECK(id.witness->n == 0u);
  CHECK(id.chain.has_value());

  auto k5 = refute_section(ap(K(), numeral(5)), 16, kBudget);
  REQUIRE(k5.refuted);
  CHECK(k5.witness->n > 0u);
  CHECK_FALSE(k5.witness->describe().empty());

  Code omega = ap(S(), cas::pca::identity_code(), cas::pca::identity_code());
  Code diverge = ap(S(), ap(K(), omega), ap(K(), omega));
  auto dv = refute_section(diverge, 16, 500);
  REQUIRE(dv.refuted);
  CHECK(dv.witness->kind == Witness::Kind::EvalFailure);
  CHECK(dv.witness->detail == "diverged");
}

TEST_CASE("property: refute_section agrees with the existence oracle") {
  const std::uint64_t bound = 16;
  std::size_t seen = 0;
  cas::pca::for_each_code(3, [&](const Code& c) {
    ++seen;
    auto r = refute_section(c, bound, 2000);
    std::vector<std::uint64_t> e(bound + 1);
    bool total = true;
    for (std::uint64_t m = 1; m <= bound && total; ++m) {
      auto v = cas::pca::apply_nat(c, m, 2000);
      if (!v) total = false;
      else e[m] = *v;
    }
    bool exists = total && section_exists(e, bound);
    CHECK(r.refuted == !exists);
    // No code of size <= 3 is a section.
    CHECK(r.refuted);
    return true;
  });
  CHECK(seen == cas::pca::count_codes(3));
}

TEST_CASE("orthogonality examples") {
  Assembly one = Assembly::make({{"*", {2}}});
  Assembly x = Assembly::make({{"x", {1}}, {"y", {3, 4}}});
  auto v1 = orthogonality_check(one, x, 3, kBudget);
  CHECK(v1.pass);

  Assembly a = Assembly::make({{"a", {7}}, {"b", {7}}});
  auto v2 = orthogonality_check(a, x, 3, kBudget);
  CHECK(v2.pass);
  CHECK(v2.functions == 4u);
  CHECK(v2.tracked == 2u);
  CHECK(v2.refuted == 2u);

  // Non-modest X: a non-constant map is tracked by K 1, so the exponential is too big.
  Assembly shared = Assembly::make({{"x", {1}}, {"y", {1}}});
  auto v3 = orthogonality_check(a, shared, 3, kBudget);
  CHECK_FALSE(v3.pass);
  CHECK_FALSE(v3.lambda_bijective);
  CHECK(tracks(ap(K(), numeral(1)), a, shared, {0, 1}, kBudget));
}

TEST_CASE("property: orthogonality for uniform A and modest X") {
  std::mt19937_64 rng(99);
  for (int k = 0; k < 150; ++k) {
    Assembly a = random_uniform(rng, 1 + rng() % 4);
    Assembly x = random_modest(rng, 1 + rng() % 4);
    REQUIRE(is_uniform(a).uniform);
    REQUIRE(is_modest(x));
    FamilyOfAssemblies fa{Assembly::make({{"*", {0}}}), {a}};
    REQUIRE(is_well_supported(fa, ap(K(), numeral(*is_uniform(a).common)), kBudget).ok);
    auto v = orthogonality_check(a, x, 3, kBudget);
    CHECK_MESSAGE(v.pass, to_text(a) << "vs\n" << to_text(x) << v.detail);
  }
}

TEST_CASE("text form round-trips") {
  Assembly a = Assembly::make({{"p", {1, 2}}, {"q", {3}}});
  CHECK(to_text(a) == "element p realizers 1 2\nelement q realizers 3\n");
  Assembly b = parse_assembly(to_text(a));
  CHECK(to_text(b) == to_text(a));
  CHECK_THROWS(parse_assembly("elem p realizers 1\n"));
  CHECK_THROWS(parse_assembly("element p realizers x\n"));
  FamilyOfAssemblies f{a, {Assembly::make({{"u", {0}}}), Assembly{}}};
  CHECK(to_text(f).find("fiber p {") != std::string::npos);
}
