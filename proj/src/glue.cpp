#include <algorithm>

#include "cas/kan.hpp"

namespace cas::kan {

using cube::compose;

namespace {

// Sieve members of phi at (c, g) up to stage max(level, c), stage descending.
struct Members {
  std::vector<Mor> ms;
  std::map<Mor, std::size_t> index;
};

Members members(const GlueData& G, int c, const Val& g) {
  const Variant var = G.gamma->variant();
  Members out;
  for (int d = std::max(G.level, c); d >= 0; --d)
    for (const Mor& s : cube::homs(d, c, var))
      if (G.phi(d, G.gamma->act(s, g))) {
        out.index.emplace(s, out.ms.size());
        out.ms.push_back(s);
      }
  return out;
}

}  // namespace

GlueFamily::GlueFamily(GlueData g) : Family(g.gamma), g_(std::move(g)) {}

std::vector<Val> GlueFamily::compute(int c, const Val& g) const {
  const Fam& A = g_.a.fam;
  const Fam& B = g_.b.fam;
  const Psh& G = g_.gamma;
  const Variant var = variant();
  Members mem = members(g_, c, g);
  std::vector<Val> out;
  for (const Val& b : B->fiber(c, g)) {
    std::vector<std::vector<Val>> cands(mem.ms.size());
    for (std::size_t k = 0; k < mem.ms.size(); ++k) {
      const Mor& s = mem.ms[k];
      Val gs = G->act(s, g);
      Val bs = B->act(s, g, b);
      for (const Val& x : A->fiber(s.src, gs))
        if (g_.fwd(s.src, gs, x) == bs) cands[k].push_back(x);
    }
    psh::NatProblem prob;
    prob.keys = mem.ms.size();
    prob.candidates = [&](std::size_t k) -> const std::vector<Val>& { return cands[k]; };
    prob.consequences = [&](std::size_t k, const Val& v, std::vector<std::pair<std::size_t, Val>>& cons) {
      const Mor& s = mem.ms[k];
      Val gs = G->act(s, g);
      for (int d = 0; d <= std::max(g_.level, c); ++d)
        for (const Mor& t : cube::homs(d, s.src, var)) cons.emplace_back(mem.index.at(compose(s, t)), A->act(t, gs, v));
    };
    psh::enumerate_nat(prob, [&](const std::vector<Val>& vals) {
      out.push_back(Val::pair(Val::tuple(vals), b));
      return true;
    });
  }
  std::sort(out.begin(), out.end());
  return out;
}

Val GlueFamily::act(const Mor& r, const Val& g, const Val& x) const {
  Members big = members(g_, r.dst, g);
  Val gr = g_.gamma->act(r, g);
  Members small = members(g_, r.src, gr);
  std::vector<Val> vals;
  for (const Mor& s : small.ms) {
    auto it = big.index.find(compose(r, s));
    if (it == big.index.end()) throw psh::LevelExceeded("Glue restriction needs a member beyond the level");
    vals.push_back(x[0][it->second]);
  }
  return Val::pair(Val::tuple(std::move(vals)), g_.b.fam->act(r, g, x[1]));
}

std::shared_ptr<const GlueFamily> glue_type(const GlueData& g) { return std::make_shared<GlueFamily>(g); }

Val glue_to_a(const GlueData& G, int c, const Val& gp, const Val& x) {
  Members mem = members(G, c, gp);
  auto it = mem.index.find(cube::identity(c, G.gamma->variant()));
  if (it == mem.index.end()) throw std::logic_error("glue_to_a outside phi");
  return x[0][it->second];
}

Val glue_from_a(const GlueData& G, int c, const Val& gp, const Val& x) {
  Members mem = members(G, c, gp);
  std::vector<Val> vals;
  for (const Mor& s : mem.ms) vals.push_back(G.a.fam->act(s, gp, x));
  return Val::pair(Val::tuple(std::move(vals)), G.fwd(c, gp, x));
}

Sieve phi_sieve(const GlueData& G, int c, const Val& gp) {
  auto phi = G.phi;
  Psh gamma = G.gamma;
  return Sieve::fn(
      c, gamma->variant(), [phi, gamma, gp](const Mor& s) { return phi(s.src, gamma->act(s, gp)); }, "phi");
}

Fib glue_fib(const GlueData& G) {
  auto fam = glue_type(G);
  Solver solve = [G, fam](const CompProblem& P) {
    const Psh& Gm = G.gamma;
    const Fam& B = G.b.fam;
    const Variant var = Gm->variant();
    const int c = P.c, e = P.e, eb = 1 - P.e;
    Val pe = face_point(Gm, P.p, c, e);
    Val pb = face_point(Gm, P.p, c, eb);
    const Sieve psi = P.f.sieve();

    Partial fb(psi, [P](const Mor& s) { return P.f(s)[1]; });
    Val b1 = G.b.solve(CompProblem{c, P.p, e, fb, P.a[1]});

    Sieve delta = Sieve::fn(
        c, var, [G, P](const Mor& s) { return G.phi(s.src + 1, G.gamma->act(cube::extend(s), P.p)); }, "delta");
    auto problem_a = [G, P, fam, pe, psi](const Mor& s) {
      Val ps = G.gamma->act(cube::extend(s), P.p);
      Partial fa(psi.pull(s), [G, P, s](const Mor& tau) {
        Mor st = compose(s, tau);
        return glue_to_a(G, tau.src + 1, G.gamma->act(cube::extend(st), P.p), P.f(st));
      });
      Val pes = G.gamma->act(s, pe);
      Val base = glue_to_a(G, s.src, pes, fam->act(s, pe, P.a));
      return CompProblem{s.src, ps, P.e, fa, base};
    };
    Partial aq(delta, [G, problem_a](const Mor& s) {
      CompProblem Q = problem_a(s);
      return Val::pair(G.a.solve(Q), pres(G.a, G.b, G.fwd, Q));
    });

    Sieve phib = phi_sieve(G, c, pb);
    Partial eqs(phib, [G, P, fam, B, pb, b1, delta, psi, aq, eb, var](const Mor& s) {
      const Psh& Gm = G.gamma;
      Sieve dom = Sieve::disj(delta.pull(s), psi.pull(s));
      Partial part(dom, [G, P, fam, B, pb, b1, delta, aq, eb, var, s](const Mor& tau) {
        Mor st = compose(s, tau);
        if (delta.contains(st)) return aq(st);
        const int d2 = tau.src;
        Val pst = G.gamma->act(cube::extend(st), P.p);
        Val v = fam->act(iota(d2, eb, var), pst, P.f(st));
        Val gst = G.gamma->act(st, pb);
        return Val::pair(glue_to_a(G, d2, gst, v), B->act(pi(d2, var), gst, B->act(st, pb, b1)));
      });
      return G.equiv(EquivProblem{s.src, Gm->act(s, pb), part, B->act(s, pb, b1)});
    });

    Partial fin(Sieve::disj(phib, psi), [G, P, fam, B, pb, phib, eqs, eb, var](const Mor& s) {
      if (phib.contains(s)) return eqs(s)[1];
      const int d = s.src;
      Val pst = G.gamma->act(cube::extend(s), P.p);
      Val v = fam->act(iota(d, eb, var), pst, P.f(s));
      return B->act(pi(d, var), G.gamma->act(s, pb), v[1]);
    });
    Val bbar = G.b.solve(CompProblem{c, Gm->act(pi(c, var), pb), 0, fin, b1});
    std::vector<Val> avals;
    for (const Mor& m : members(G, c, pb).ms) avals.push_back(eqs(m)[0]);
    return Val::pair(Val::tuple(std::move(avals)), bbar);
  };
  return Fib{fam, solve, "Glue"};
}

Val sglue_to_glue(const GlueData& G, int c, const Val& gp, const Val& x) {
  return G.phi(c, gp) ? glue_from_a(G, c, gp, x) : x;
}

Val glue_to_sglue(const GlueData& G, int c, const Val& gp, const Val& x) {
  return G.phi(c, gp) ? glue_to_a(G, c, gp, x) : x;
}

namespace {

class SGlueFamily : public psh::Family {
 public:
  SGlueFamily(GlueData g, std::shared_ptr<const GlueFamily> glue)
      : Family(g.gamma), g_(std::move(g)), glue_(std::move(glue)) {}
  Val act(const Mor& s, const Val& g, const Val& x) const override {
    Val gs = base()->act(s, g);
    if (g_.phi(s.dst, g)) return g_.a.fam->act(s, g, x);
    return glue_to_sglue(g_, s.src, gs, glue_->act(s, g, x));
  }
  std::string name() const override { return "SGlue"; }

 protected:
  std::vector<Val> compute(int c, const Val& g) const override {
    return g_.phi(c, g) ? g_.a.fam->fiber(c, g) : glue_->fiber(c, g);
  }

 private:
  GlueData g_;
  std::shared_ptr<const GlueFamily> glue_;
};

}  // namespace

SGlue sglue(const GlueData& G) {
  Fib gf = glue_fib(G);
  auto glue = std::static_pointer_cast<const GlueFamily>(gf.fam);
  Fam fam = std::make_shared<SGlueFamily>(G, glue);
  Solver solve = [G, gf](const CompProblem& P) {
    const Psh& Gm = G.gamma;
    const Variant var = Gm->variant();
    Partial f(P.f.sieve(), [G, P](const Mor& s) {
      return sglue_to_glue(G, s.src + 1, G.gamma->act(cube::extend(s), P.p), P.f(s));
    });
    Val pe = face_point(Gm, P.p, P.c, P.e);
    Val pb = face_point(Gm, P.p, P.c, 1 - P.e);
    Val r = gf.solve(CompProblem{P.c, P.p, P.e, f, sglue_to_glue(G, P.c, pe, P.a)});
    (void)var;
    return glue_to_sglue(G, P.c, pb, r);
  };
  return SGlue{fam, Fib{fam, solve, "SGlue"}, glue};
}

UniverseResult universe_comp(int c, int e, const Sieve& phi, const Fib& line, int level) {
  const Variant var = line.fam->variant();
  const int eb = 1 - e;
  Psh gamma = psh::yoneda(c, var);
  auto along = [var, c](int face) {
    return [var, c, face](int, const Val& s) { return Val::mor(compose(iota(c, face, var), s.as_mor())); };
  };
  Fib apart = reindex_fib(line, gamma, along(eb));
  Fib bpart = reindex_fib(line, gamma, along(e));
  FamMap fwd = [line, e, eb](int d, const Val& s, const Val& x) {
    return tp(line, d, Val::mor(cube::extend(s.as_mor())), eb, x);
  };
  FamMap bwd = [line, e](int d, const Val& s, const Val& y) {
    return tp(line, d, Val::mor(cube::extend(s.as_mor())), e, y);
  };
  GlueData data;
  data.gamma = gamma;
  data.phi = [phi](int, const Val& s) { return phi.contains(s.as_mor()); };
  data.a = apart;
  data.b = bpart;
  data.fwd = fwd;
  data.bwd = bwd;
  data.equiv = iso_equiv(bpart, fwd, bwd);
  data.level = level;
  return UniverseResult{sglue(data), data};
}

}  // namespace cas::kan
