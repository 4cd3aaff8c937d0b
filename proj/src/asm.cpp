#include "cas/asm.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace cas::assembly {

Assembly Assembly::make(std::vector<std::pair<std::string, Realizers>> elems) {
  Assembly a;
  for (auto& [id, rs] : elems) {
    if (rs.empty()) throw std::invalid_argument("element " + id + " has no realizer");
    if (a.index_of(id)) throw std::invalid_argument("duplicate element " + id);
    a.ids.push_back(id);
    a.realizers.push_back(std::move(rs));
  }
  return a;
}

std::optional<std::size_t> Assembly::index_of(const std::string& id) const {
  auto it = std::find(ids.begin(), ids.end(), id);
  if (it == ids.end()) return std::nullopt;
  return std::size_t(it - ids.begin());
}

TrackVerdict check_tracks(const TrackedMap& f) {
  const Assembly& src = *f.source;
  const Assembly& dst = *f.target;
  if (f.function.size() != src.size()) throw std::invalid_argument("function is not total on the source");
  for (std::size_t a = 0; a < src.size(); ++a) {
    for (std::uint64_t n : src.realizers[a]) {
      pca::EvalResult r;
      auto m = pca::apply_nat(f.tracker, n, f.budget, &r);
      TrackVerdict v{false, a, n, {}};
      if (r.kind == pca::EvalResult::Kind::Diverged) {
        v.cause = "diverged";
        return v;
      }
      if (r.kind == pca::EvalResult::Kind::Stuck) {
        v.cause = "stuck: " + r.reason;
        return v;
      }
      if (!m) {
        v.cause = "result " + pca::to_string(r.value) + " is not a numeral";
        return v;
      }
      if (!dst.realizers[f.function[a]].count(*m)) {
        v.cause = std::to_string(*m) + " does not realize " + dst.ids[f.function[a]];
        return v;
      }
    }
  }
  return {};
}

bool tracks(const pca::Code& e, const Assembly& src, const Assembly& dst, const std::vector<std::size_t>& f,
            std::uint64_t budget) {
  TrackedMap t{&src, &dst, f, e, budget};
  return check_tracks(t).ok;
}

std::optional<Obstruction> tracking_obstruction(const Assembly& src, const Assembly& dst,
                                                const std::vector<std::size_t>& f) {
  for (std::size_t a = 0; a < src.size(); ++a)
    for (std::size_t b = a + 1; b < src.size(); ++b) {
      const auto& ra = dst.realizers[f[a]];
      const auto& rb = dst.realizers[f[b]];
      bool disjoint = std::none_of(ra.begin(), ra.end(), [&](std::uint64_t k) { return rb.count(k) > 0; });
      if (!disjoint) continue;
      for (std::uint64_t n : src.realizers[a])
        if (src.realizers[b].count(n)) return Obstruction{a, b, n};
    }
  return std::nullopt;
}

std::optional<pca::Code> find_tracker(const Assembly& src, const Assembly& dst, const std::vector<std::size_t>& f,
                                      std::size_t size_bound, std::uint64_t budget) {
  if (tracking_obstruction(src, dst, f)) return std::nullopt;
  std::optional<pca::Code> found;
  pca::for_each_code(size_bound, [&](const pca::Code& c) {
    if (tracks(c, src, dst, f, budget)) {
      found = c;
      return false;
    }
    return true;
  });
  return found;
}

bool is_modest(const Assembly& a) {
  std::set<std::uint64_t> seen;
  for (const auto& rs : a.realizers)
    for (std::uint64_t n : rs)
      if (!seen.insert(n).second) return false;
  return true;
}

PER PER::make(std::set<std::pair<std::uint64_t, std::uint64_t>> pairs) {
  for (auto [a, b] : pairs)
    if (!pairs.count({b, a}))
      throw std::invalid_argument("not symmetric at (" + std::to_string(a) + "," + std::to_string(b) + ")");
  for (auto [a, b] : pairs)
    for (auto it = pairs.lower_bound({b, 0}); it != pairs.end() && it->first == b; ++it)
      if (!pairs.count({a, it->second}))
        throw std::invalid_argument("not transitive at (" + std::to_string(a) + "," + std::to_string(b) + "," +
                                    std::to_string(it->second) + ")");
  PER r;
  r.pairs = std::move(pairs);
  return r;
}

Assembly modest_of_per(const PER& r) {
  std::vector<std::pair<std::string, Realizers>> elems;
  std::set<std::uint64_t> done;
  for (auto [a, b] : r.pairs) {
    if (a != b || done.count(a)) continue;
    Realizers cls;
    for (auto it = r.pairs.lower_bound({a, 0}); it != r.pairs.end() && it->first == a; ++it) cls.insert(it->second);
    done.insert(cls.begin(), cls.end());
    elems.emplace_back("[" + std::to_string(*cls.begin()) + "]", std::move(cls));
  }
  return Assembly::make(std::move(elems));
}

PER per_of_modest(const Assembly& a) {
  if (!is_modest(a)) throw std::invalid_argument("assembly is not modest");
  std::set<std::pair<std::uint64_t, std::uint64_t>> pairs;
  for (const auto& rs : a.realizers)
    for (std::uint64_t x : rs)
      for (std::uint64_t y : rs) pairs.insert({x, y});
  return PER::make(std::move(pairs));
}

UniformVerdict is_uniform(const Assembly& a) {
  UniformVerdict v;
  if (a.size() == 0) {
    v.uniform = true;
    return v;
  }
  Realizers common = a.realizers[0];
  for (std::size_t i = 1; i < a.size(); ++i) {
    Realizers next;
    std::set_intersection(common.begin(), common.end(), a.realizers[i].begin(), a.realizers[i].end(),
                          std::inserter(next, next.end()));
    common = std::move(next);
  }
  if (!common.empty()) {
    v.uniform = true;
    v.common = *common.begin();
    return v;
  }
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      const auto& ri = a.realizers[i];
      const auto& rj = a.realizers[j];
      if (std::none_of(ri.begin(), ri.end(), [&](std::uint64_t k) { return rj.count(k) > 0; })) {
        v.refuting_pair = std::make_pair(i, j);
        return v;
      }
    }
  return v;
}

bool is_uniform_with(const EnumAssembly& a, std::uint64_t candidate, std::uint64_t elem_bound) {
  for (std::uint64_t x = 0; x <= elem_bound; ++x)
    if (a.member(x) && !a.realizes(x, candidate)) return false;
  return true;
}

SupportVerdict is_well_supported(const FamilyOfAssemblies& f, const pca::Code& e, std::uint64_t budget) {
  for (std::size_t g = 0; g < f.base.size(); ++g) {
    const Assembly& fib = f.fibers.at(g);
    if (fib.size() == 0) return {false, "fiber over " + f.base.ids[g] + " is empty"};
    for (std::uint64_t n : f.base.realizers[g]) {
      auto k = pca::apply_nat(e, n, budget);
      if (!k) return {false, "code fails on realizer " + std::to_string(n) + " of " + f.base.ids[g]};
      bool hit = std::any_of(fib.realizers.begin(), fib.realizers.end(),
                             [&](const Realizers& rs) { return rs.count(*k) > 0; });
      if (!hit)
        return {false, std::to_string(*k) + " realizes nothing over " + f.base.ids[g]};
    }
  }
  return {true, {}};
}

FamilyOfAssemblies trunc(const FamilyOfAssemblies& f) {
  FamilyOfAssemblies out{f.base, {}};
  for (const auto& fib : f.fibers) {
    if (fib.size() == 0) {
      out.fibers.push_back(Assembly{});
      continue;
    }
    Realizers all;
    for (const auto& rs : fib.realizers) all.insert(rs.begin(), rs.end());
    out.fibers.push_back(Assembly::make({{"*", all}}));
  }
  return out;
}

CounterexampleData counterexample_data() {
  CounterexampleData d;
  d.gamma = EnumAssembly{"Gamma", [](std::uint64_t) { return true; },
                         [](std::uint64_t x, std::uint64_t n) { return n > x; },
                         [](std::uint64_t x) { return x + 1; }};
  d.fiber = [](std::uint64_t n) {
    return EnumAssembly{"A(" + std::to_string(n) + ")", [n](std::uint64_t m) { return m > n; },
                        [n](std::uint64_t m, std::uint64_t k) { return m > n && (k == n || k == m); },
                        [n](std::uint64_t) { return n; }};
  };
  return d;
}

SupportVerdict is_well_supported(const CounterexampleData& d, const pca::Code& e, std::uint64_t base_bound,
                                 std::uint64_t realizer_bound, std::uint64_t budget) {
  for (std::uint64_t g = 0; g <= base_bound; ++g) {
    EnumAssembly fib = d.fiber(g);
    for (std::uint64_t n = 0; n <= realizer_bound; ++n) {
      if (!d.gamma.realizes(g, n)) continue;
      auto k = pca::apply_nat(e, n, budget);
      if (!k) return {false, "code fails on realizer " + std::to_string(n) + " of " + std::to_string(g)};
      bool hit = fib.realizes(g + 1, *k) || (fib.member(*k) && fib.realizes(*k, *k));
      if (!hit) return {false, std::to_string(*k) + " realizes nothing in " + fib.name};
    }
  }
  return {true, {}};
}

std::string Witness::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Conflict:
      os << "f(" << n << ") forced to both " << other << " and " << value << " (m=" << m << ")";
      break;
    case Kind::ValueTooSmall:
      os << "e(" << m << ")=" << value << " must be " << n << " or f(" << n << ")>" << n;
      break;
    case Kind::EvalFailure:
      os << "e(" << m << ") " << detail;
      break;
    case Kind::Chain:
      os << "f(0)=" << other << " but e(" << m << ")=" << value << " must lie in {0," << other << "} and be >= "
         << (m - 1);
      break;
  }
  return os.str();
}

SectionRefutation refute_section(const pca::Code& candidate, std::uint64_t n_bound, std::uint64_t budget) {
  SectionRefutation out;
  std::map<std::uint64_t, std::uint64_t> values;
  std::optional<Witness> failure;
  auto e = [&](std::uint64_t m) -> std::optional<std::uint64_t> {
    auto it = values.find(m);
    if (it != values.end()) return it->second;
    pca::EvalResult r;
    auto v = pca::apply_nat(candidate, m, budget, &r);
    if (!v) {
      Witness w;
      w.kind = Witness::Kind::EvalFailure;
      w.m = m;
      w.detail = r.kind == pca::EvalResult::Kind::Diverged ? "diverged"
                 : r.kind == pca::EvalResult::Kind::Stuck  ? "stuck: " + r.reason
                                                           : "is not a numeral: " + pca::to_string(r.value);
      failure = w;
      return std::nullopt;
    }
    values.emplace(m, *v);
    return v;
  };

  std::map<std::uint64_t, std::uint64_t> forced;
  for (std::uint64_t m = 1; m <= n_bound && !out.witness; ++m) {
    auto v = e(m);
    if (!v) {
      out.witness = failure;
      break;
    }
    for (std::uint64_t n = 0; n < m; ++n) {
      if (*v == n) continue;
      Witness w;
      w.n = n;
      w.m = m;
      w.value = *v;
      if (*v < n) {
        w.kind = Witness::Kind::ValueTooSmall;
        out.witness = w;
        break;
      }
      auto [it, fresh] = forced.emplace(n, *v);
      if (!fresh && it->second != *v) {
        w.kind = Witness::Kind::Conflict;
        w.other = it->second;
        out.witness = w;
        break;
      }
    }
  }

  // e(m+1) lies in {m, f(m)}, so it is at least m, and in {0, f(0)}.
  auto f0 = forced.find(0);
  if (f0 != forced.end() && f0->second + 2 <= n_bound) {
    std::uint64_t m = f0->second + 2;
    if (auto v = e(m)) {
      Witness w;
      w.kind = Witness::Kind::Chain;
      w.m = m;
      w.value = *v;
      w.other = f0->second;
      out.chain = w;
    }
  }
  out.refuted = out.witness.has_value();
  return out;
}

OrthogonalityVerdict orthogonality_check(const Assembly& a, const Assembly& x, std::size_t size_bound,
                                         std::uint64_t budget) {
  OrthogonalityVerdict v;
  std::ostringstream detail;
  const std::size_t na = a.size(), nx = x.size();
  if (na == 0) throw std::invalid_argument("source assembly must be inhabited");
  std::vector<std::vector<std::size_t>> tracked;
  std::vector<std::size_t> f(na, 0);
  for (;;) {
    ++v.functions;
    if (tracking_obstruction(a, x, f)) {
      ++v.refuted;
    } else if (find_tracker(a, x, f, size_bound, budget)) {
      ++v.tracked;
      tracked.push_back(f);
    } else {
      ++v.unresolved;
      detail << "no tracker found for map #" << v.functions << "; ";
    }
    std::size_t i = 0;
    while (i < na && ++f[i] == nx) f[i++] = 0;
    if (i == na || nx == 0) break;
  }
  v.inconclusive = v.unresolved > 0;

  // lambda x a. x: injective because A is inhabited; surjective iff every tracked map is constant.
  std::set<std::vector<std::size_t>> constants;
  for (std::size_t k = 0; k < nx; ++k) constants.insert(std::vector<std::size_t>(na, k));
  std::set<std::vector<std::size_t>> tracked_set(tracked.begin(), tracked.end());
  bool all_constants_tracked =
      std::all_of(constants.begin(), constants.end(), [&](const auto& c) { return tracked_set.count(c) > 0; });
  v.lambda_bijective = all_constants_tracked && tracked_set == constants;

  // The realizer K sends a realizer of x to a tracker of the constant map at x.
  bool lambda_tracked = true;
  for (std::size_t k = 0; k < nx && lambda_tracked; ++k)
    for (std::uint64_t n : x.realizers[k]) {
      auto r = pca::apply(pca::K(), pca::numeral(n), budget);
      if (!r.ok() || !tracks(r.value, a, x, std::vector<std::size_t>(na, k), budget)) {
        lambda_tracked = false;
        break;
      }
    }
  v.lambda_bijective = v.lambda_bijective && lambda_tracked;

  // Precomposition with A -> ||A||: maps out of the one-element truncation are points of X.
  Realizers all;
  for (const auto& rs : a.realizers) all.insert(rs.begin(), rs.end());
  Assembly ta = Assembly::make({{"*", all}});
  std::set<std::vector<std::size_t>> image;
  bool trunc_ok = true;
  for (std::size_t k = 0; k < nx; ++k) {
    std::vector<std::size_t> g{k};
    if (!find_tracker(ta, x, g, size_bound, budget)) {
      trunc_ok = false;
      continue;
    }
    image.insert(std::vector<std::size_t>(na, k));
  }
  v.istar_bijective = trunc_ok && image == tracked_set && image.size() == nx;

  detail << "functions=" << v.functions << " tracked=" << v.tracked << " refuted=" << v.refuted;
  v.detail = detail.str();
  v.pass = !v.inconclusive && v.lambda_bijective && v.istar_bijective;
  return v;
}

std::string to_text(const Assembly& a) {
  std::ostringstream os;
  for (std::size_t i = 0; i < a.size(); ++i) {
    os << "element " << a.ids[i] << " realizers";
    for (auto n : a.realizers[i]) os << ' ' << n;
    os << '\n';
  }
  return os.str();
}

std::string to_text(const FamilyOfAssemblies& f) {
  std::ostringstream os;
  os << to_text(f.base);
  for (std::size_t g = 0; g < f.base.size(); ++g) {
    os << "fiber " << f.base.ids[g] << " {\n";
    std::istringstream body(to_text(f.fibers.at(g)));
    for (std::string line; std::getline(body, line);) os << "  " << line << '\n';
    os << "}\n";
  }
  return os.str();
}

Assembly parse_assembly(const std::string& text) {
  std::vector<std::pair<std::string, Realizers>> elems;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string kw, id, rk;
    if (!(ls >> kw)) continue;
    if (kw != "element" || !(ls >> id >> rk) || rk != "realizers")
      throw std::invalid_argument("line " + std::to_string(lineno) + ": expected 'element <id> realizers ...'");
    Realizers rs;
    for (std::uint64_t n; ls >> n;) rs.insert(n);
    if (!ls.eof()) throw std::invalid_argument("line " + std::to_string(lineno) + ": bad realizer");
    elems.emplace_back(id, std::move(rs));
  }
  return Assembly::make(std::move(elems));
}

}  // namespace cas::assembly
