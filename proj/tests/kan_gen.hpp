#pragma once

// Hand-rolled generators for composition problems, shared by the kan unit
// tests and the acceptance binary.

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "cas/kan.hpp"

namespace gen {

using namespace cas;
using namespace cas::kan;
using cube::Variant;

constexpr Variant kVar = Variant::Ord;

inline std::vector<Val> ints(int n) {
  std::vector<Val> out;
  for (int i = 0; i < n; ++i) out.push_back(Val::integer(i));
  return out;
}

inline Psh unit() { return psh::terminal(kVar); }
inline Psh line() { return psh::interval(kVar); }

inline Fib discrete(Psh base, int n) { return discrete_fib(psh::const_family(base, psh::constant(ints(n), kVar))); }

inline Fib nabla_const(Psh base, int n) {
  auto pts = ints(n);
  return nabla_fib(psh::nabla(base, [pts](const Val&) { return pts; }, "N" + std::to_string(n)));
}

// Vertex values tagged with the vertex's base point; transport relabels the tag.
inline Fib nabla_tagged(Psh base, int n) {
  Fam a = psh::nabla(
      base,
      [n](const Val& g) {
        std::vector<Val> out;
        for (int i = 0; i < n; ++i) out.push_back(Val::pair(g, Val::integer(i)));
        return out;
      },
      "NT" + std::to_string(n));
  return nabla_fib(a, [](const Val&, const Val& g1, const Val& x) { return Val::pair(g1, x[1]); });
}

// Label: value of the base point at vertex 0 when it is an interval element.
inline Fib labelled(Psh base, int n) {
  auto label = [](int, const Val& g) -> Val {
    if (g.kind() != Val::Kind::Mor) return Val::integer(0);
    const Mor& m = g.as_mor();
    return Val::integer(m.at(0));
  };
  return labelled_fib(labelled_family(base, label, ints(n), "L" + std::to_string(n)), label);
}

inline bool is_const_one(int c, const Val& g) {
  return g.kind() == Val::Kind::Mor && cube::equal(g.as_mor(), cube::const_point(c, 1, kVar));
}

// Glue over the interval on phi = (i = 1) with vertexwise maps between codiscrete types.
inline GlueData nabla_glue(int na, int nb, bool iso, int level) {
  Psh base = line();
  Fib a = nabla_const(base, na);
  Fib b = nabla_const(base, nb);
  FamMap fwd = [nb, iso, na](int, const Val&, const Val& x) {
    std::vector<Val> out;
    for (const Val& v : x.items())
      out.push_back(Val::integer(iso ? (v.as_int() + 1) % na : v.as_int() % nb));
    return Val::tuple(std::move(out));
  };
  FamMap bwd = [na](int, const Val&, const Val& y) {
    std::vector<Val> out;
    for (const Val& v : y.items()) out.push_back(Val::integer((v.as_int() + na - 1) % na));
    return Val::tuple(std::move(out));
  };
  GlueData g;
  g.gamma = base;
  g.phi = is_const_one;
  g.a = a;
  g.b = b;
  g.fwd = fwd;
  g.bwd = iso ? bwd : FamMap{};
  g.level = level;
  if (iso) {
    g.equiv = iso_equiv(b, fwd, bwd);
  } else {
    g.equiv = nabla_equiv(a.fam, fwd, [](const Val&, const Val& bx) { return bx; });
  }
  return g;
}

struct Instance {
  std::string kind;
  Fib fib;
};

inline std::vector<Instance> catalog(int level) {
  std::vector<Instance> out;
  out.push_back({"discrete", discrete(unit(), 3)});
  out.push_back({"discrete", discrete(line(), 2)});
  out.push_back({"nabla", nabla_const(line(), 2)});
  out.push_back({"nabla", nabla_tagged(line(), 2)});
  out.push_back({"nabla", labelled(line(), 3)});
  {
    Fib a = nabla_tagged(line(), 2);
    Fib b = discrete(psh::sigma(a.fam), 2);
    out.push_back({"sigma", fib_sigma(a, b)});
  }
  {
    Fib a = nabla_const(line(), 2);
    Fib b = nabla_const(psh::sigma(a.fam), 3);
    out.push_back({"sigma", fib_sigma(a, b)});
  }
  out.push_back({"path", fib_path(nabla_const(unit(), 2))});
  out.push_back({"path", fib_path(nabla_tagged(line(), 2))});
  {
    Fib a = discrete(unit(), 2);
    Fib b = nabla_const(psh::sigma(a.fam), 2);
    out.push_back({"pi", fib_pi(a, b, level)});
  }
  {
    Fib a = discrete(line(), 2);
    Fib b = discrete(psh::sigma(a.fam), 3);
    out.push_back({"pi", fib_pi(a, b, level)});
  }
  out.push_back({"id", fib_id(discrete(unit(), 3), level)});
  out.push_back({"id", fib_id(nabla_const(unit(), 2), level)});
  out.push_back({"glue", glue_fib(nabla_glue(3, 2, false, level))});
  out.push_back({"glue", glue_fib(nabla_glue(3, 3, true, level))});
  out.push_back({"glue", sglue(nabla_glue(2, 2, true, level)).fib});
  return out;
}

template <class Rng>
std::size_t pick(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

// A well-formed problem: a random total element x over a random p, with
// f(s) = x (s x 1) on a random sieve and a = x d_e.
template <class Rng>
bool random_problem(const Fib& fib, int c, int level, Rng& rng, CompProblem& out) {
  const Fam& A = fib.fam;
  const Psh& G = A->base();
  const auto& ps = G->at(c + 1);
  if (ps.empty()) return false;
  Val p = ps[pick(rng, ps.size())];
  const auto& xs = A->fiber(c + 1, p);
  if (xs.empty()) return false;
  Val x = xs[pick(rng, xs.size())];
  int e = static_cast<int>(pick(rng, 2));
  auto sieves = psh::all_sieves(c, kVar, level);
  Sieve phi = sieves[pick(rng, sieves.size())];
  Partial f(phi, [A, p, x](const Mor& s) { return A->act(cube::extend(s), p, x); });
  out = CompProblem{c, p, e, f, A->act(iota(c, e, kVar), p, x)};
  return true;
}

// Restriction-closed predicates on interval points.
inline bool is_const_zero(int c, const Val& g) {
  return g.kind() == Val::Kind::Mor && cube::equal(g.as_mor(), cube::const_point(c, 0, kVar));
}
inline bool is_const(int c, const Val& g) { return is_const_zero(c, g) || is_const_one(c, g); }
inline bool always(int, const Val&) { return true; }

struct GlueConfig {
  int na, nb;
  bool iso;
};

// Sizes with na >= nb so the vertexwise map is onto; isos only when na == nb.
inline std::vector<GlueConfig> glue_configs() {
  std::vector<GlueConfig> out;
  for (int na = 1; na <= 3; ++na)
    for (int nb = 1; nb <= na; ++nb) {
      if (na == nb) out.push_back({na, nb, true});
      out.push_back({na, nb, false});
    }
  return out;
}

inline GlueData glue_with(GlueConfig cfg, std::function<bool(int, const Val&)> phi, int level) {
  GlueData g = nabla_glue(cfg.na, cfg.nb, cfg.iso, level);
  g.phi = std::move(phi);
  return g;
}

// Comp in Glue read through Glue -> A against comp in A, on a problem over
// a point where phi holds throughout. Empty string on agreement.
inline std::string glue_preservation(const GlueData& g, const Fib& glue, const CompProblem& P) {
  const Psh& G = g.gamma;
  Partial fa(P.f.sieve(), [g, G, P](const Mor& s) {
    return glue_to_a(g, s.src + 1, G->act(cube::extend(s), P.p), P.f(s));
  });
  Val pe = face_point(G, P.p, P.c, P.e), pb = face_point(G, P.p, P.c, 1 - P.e);
  CompProblem Q{P.c, P.p, P.e, fa, glue_to_a(g, P.c, pe, P.a)};
  Val via_glue = glue_to_a(g, P.c, pb, glue.solve(P));
  Val in_a = g.a.solve(Q);
  if (via_glue != in_a) return "glue gives " + via_glue.to_string() + ", A gives " + in_a.to_string();
  return {};
}

// SGlue equals A on phi and is isomorphic to Glue off it.
inline std::string sglue_strictness(const GlueData& g, const SGlue& s, int c, const Val& gp) {
  const auto& fib = s.fam->fiber(c, gp);
  if (g.phi(c, gp)) {
    if (fib != g.a.fam->fiber(c, gp)) return "carrier differs from A";
    for (const Val& x : fib)
      if (sglue_to_glue(g, c, gp, x) != glue_from_a(g, c, gp, x)) return "iso is not the glue iso on phi";
    return {};
  }
  const auto& gl = s.glue->fiber(c, gp);
  if (gl.size() != fib.size()) return "sizes differ from Glue";
  for (const Val& x : fib) {
    Val y = sglue_to_glue(g, c, gp, x);
    if (!s.glue->in_fiber(c, gp, y) || glue_to_sglue(g, c, gp, y) != x) return "not an iso onto Glue";
  }
  return {};
}

// A line of codiscrete codes over y(c + 1) whose fibers depend on the point.
inline Fib universe_line(int c, int n) { return nabla_tagged(psh::yoneda(c + 1, kVar), n); }

// The universe code restricted to phi has the carriers of the line's far end.
inline std::string universe_strictness(const UniverseResult& r, const Fib& line, int c, int e, const Sieve& phi,
                                       int level) {
  for (int d = 0; d <= level; ++d)
    for (const Mor& s : cube::homs(d, c, kVar)) {
      if (!phi.contains(s)) continue;
      Val at = Val::mor(cube::compose(iota(c, 1 - e, kVar), s));
      if (r.code.fam->fiber(d, Val::mor(s)) != line.fam->fiber(d, at))
        return "carrier differs on " + cube::table_string(s);
    }
  return {};
}

// C codiscrete over the Id or Path telescope; the term is x0 itself read as
// a tuple of vertex values, so the vertex sets of A and C must agree.
inline ElimData elim_data(const Fib& a, Fam over, int n, int level) {
  ElimData d;
  d.a = a;
  d.over = over;
  d.c = nabla_const(psh::sigma(over), n);
  d.term = [n](int, const Val&, const Val& x0) {
    std::vector<Val> out;
    for (const Val& v : x0.items()) out.push_back(Val::integer(v.as_int() % n));
    return Val::tuple(std::move(out));
  };
  d.level = level;
  return d;
}

}  // namespace gen
