#include "cas/kan.hpp"

#include <algorithm>

namespace cas::kan {

using cube::compose;

Mor pi(int c, Variant var) { return cube::drop_last(c, var); }
Mor iota(int c, int e, Variant var) { return cube::face(c, e, var); }
Mor last(int c, Variant var) { return cube::coordinate(c, c - 1, var); }

Val face_point(const Psh& gamma, const Val& p, int c, int e) { return gamma->act(iota(c, e, gamma->variant()), p); }

Partial empty_partial(int c, Variant var) {
  return Partial(Sieve::bot(c, var), [](const Mor&) -> Val { throw std::logic_error("empty partial"); });
}

CompProblem restrict(const Fam& a, const CompProblem& P, const Mor& s) {
  const Psh& g = a->base();
  Val pe = face_point(g, P.p, P.c, P.e);
  return CompProblem{s.src, g->act(cube::extend(s), P.p), P.e, P.f.pull(s), a->act(s, pe, P.a)};
}

namespace {

bool is_const(const Mor& t, int e) { return cube::equal(t, cube::const_point(t.src, e, t.var)); }

// Postcondition of r against the partial over stages <= level - 1.
CheckResult postcondition(const Fam& a, const CompProblem& P, const Val& r, int level) {
  const Psh& g = a->base();
  const Variant var = a->variant();
  const int eb = 1 - P.e;
  Val pb = face_point(g, P.p, P.c, eb);
  for (int d = 0; d <= std::min(level - 1, P.c); ++d)
    for (const Mor& s : cube::homs(d, P.c, var)) {
      if (!P.f.defined(s)) continue;
      Val want = a->act(iota(d, eb, var), g->act(cube::extend(s), P.p), P.f(s));
      if (a->act(s, pb, r) != want) return {false, "result disagrees with the partial at " + cube::table_string(s)};
    }
  return {};
}

}  // namespace

CheckResult check_adherence(const Fam& a, const CompProblem& P, int level) {
  const Psh& g = a->base();
  const Variant var = a->variant();
  Val pe = face_point(g, P.p, P.c, P.e);
  if (!a->in_fiber(P.c, pe, P.a)) return {false, "base element outside its fiber"};
  for (int d = 0; d <= std::min(level - 1, P.c); ++d)
    for (const Mor& s : cube::homs(d, P.c, var)) {
      if (!P.f.defined(s)) continue;
      Val ps = g->act(cube::extend(s), P.p);
      Val fs = P.f(s);
      if (!a->in_fiber(d + 1, ps, fs)) return {false, "partial value outside its fiber at " + cube::table_string(s)};
      if (a->act(iota(d, P.e, var), ps, fs) != a->act(s, pe, P.a))
        return {false, "partial does not adhere to the base at " + cube::table_string(s)};
    }
  return {};
}

std::vector<Val> admissible(const Fam& a, const CompProblem& P, int level) {
  std::vector<Val> out;
  Val pb = face_point(a->base(), P.p, P.c, 1 - P.e);
  for (const Val& r : a->fiber(P.c, pb))
    if (postcondition(a, P, r, level).ok) out.push_back(r);
  return out;
}

CheckResult check_comp(const Fam& a, const CompProblem& P, const Val& result, int level, bool enumerate) {
  Val pb = face_point(a->base(), P.p, P.c, 1 - P.e);
  if (!a->in_fiber(P.c, pb, result)) return {false, "result outside the fiber over the target face"};
  CheckResult r = postcondition(a, P, result, level);
  if (!r.ok) return r;
  if (enumerate) {
    auto adm = admissible(a, P, level);
    if (std::find(adm.begin(), adm.end(), result) == adm.end()) return {false, "result not among admissible fillers"};
  }
  return {};
}

Fib discrete_fib(Fam a) {
  std::string name = "discrete " + a->name();
  return Fib{std::move(a), [](const CompProblem& P) { return P.a; }, std::move(name)};
}

Fib nabla_fib(Fam a, Relabel relabel) {
  Fam fam = a;
  Solver solve = [fam, relabel](const CompProblem& P) {
    const Psh& g = fam->base();
    const Variant var = fam->variant();
    Val pe = face_point(g, P.p, P.c, P.e);
    Val pb = face_point(g, P.p, P.c, 1 - P.e);
    std::vector<Val> out;
    for (unsigned v = 0; v < (1u << P.c); ++v) {
      Mor pt = cube::make(0, P.c, {v}, var);
      if (P.f.defined(pt)) {
        out.push_back(P.f(pt)[static_cast<std::size_t>(1 - P.e)]);
      } else if (relabel) {
        out.push_back(relabel(g->act(pt, pe), g->act(pt, pb), P.a[v]));
      } else {
        out.push_back(P.a[v]);
      }
    }
    return Val::tuple(std::move(out));
  };
  std::string name = "nabla " + a->name();
  return Fib{std::move(a), std::move(solve), std::move(name)};
}

namespace {

class Labelled : public psh::Family {
 public:
  Labelled(Psh base, std::function<Val(int, const Val&)> label, std::vector<Val> xs, std::string name)
      : Family(std::move(base)), label_(std::move(label)), xs_(std::move(xs)), name_(std::move(name)) {}
  Val act(const Mor& s, const Val& g, const Val& x) const override {
    return Val::pair(label_(s.src, base()->act(s, g)), x[1]);
  }
  std::string name() const override { return name_; }

 protected:
  std::vector<Val> compute(int c, const Val& g) const override {
    std::vector<Val> out;
    Val l = label_(c, g);
    for (const Val& x : xs_) out.push_back(Val::pair(l, x));
    return out;
  }

 private:
  std::function<Val(int, const Val&)> label_;
  std::vector<Val> xs_;
  std::string name_;
};

}  // namespace

Fam labelled_family(Psh base, std::function<Val(int, const Val&)> label, std::vector<Val> xs, std::string name) {
  return std::make_shared<Labelled>(std::move(base), std::move(label), std::move(xs), std::move(name));
}

Fib labelled_fib(Fam a, std::function<Val(int, const Val&)> label) {
  Fam fam = a;
  Solver solve = [fam, label](const CompProblem& P) {
    return Val::pair(label(P.c, face_point(fam->base(), P.p, P.c, 1 - P.e)), P.a[1]);
  };
  std::string name = "labelled " + a->name();
  return Fib{std::move(a), std::move(solve), std::move(name)};
}

Val fill(const Fib& alpha, const CompProblem& P) {
  const Fam& A = alpha.fam;
  const Psh& G = A->base();
  const Variant var = A->variant();
  const int c = P.c, e = P.e;
  Mor mu = cube::connection(e, var);
  Mor m = cube::pair(compose(pi(c, var), pi(c + 1, var)),
                     compose(mu, cube::pair(cube::coordinate(c + 2, c, var), cube::coordinate(c + 2, c + 1, var))));
  Val q = G->act(m, P.p);
  Val pe = face_point(G, P.p, c, e);
  Val base = A->act(pi(c, var), pe, P.a);
  Sieve phi = Sieve::disj(P.f.sieve().pull(pi(c, var)), Sieve::eq(last(c + 1, var), e));
  Partial f(phi, [A, G, P, pe, mu, c, var](const Mor& s) -> Val {
    const int d = s.src;
    Mor sigma = compose(pi(c, var), s);
    Mor t = compose(last(c + 1, var), s);
    if (P.f.defined(sigma)) {
      Mor k = cube::pair(pi(d, var), compose(mu, cube::pair(compose(t, pi(d, var)), last(d + 1, var))));
      return A->act(k, G->act(cube::extend(sigma), P.p), P.f(sigma));
    }
    Val as = A->act(sigma, pe, P.a);
    return A->act(pi(d, var), G->act(sigma, pe), as);
  });
  return alpha.solve(CompProblem{c + 1, q, e, f, base});
}

Val tp(const Fib& alpha, int c, const Val& p, int e, const Val& a) {
  return alpha.solve(CompProblem{c, p, e, empty_partial(c, alpha.fam->variant()), a});
}

Fib fib_sigma(const Fib& a, const Fib& b) {
  Fam fam = psh::sigma_family(a.fam, b.fam);
  Solver solve = [a, b](const CompProblem& P) {
    const Variant var = a.fam->variant();
    const Sieve& phi = P.f.sieve();
    Partial fa(phi, [P](const Mor& s) { return P.f(s)[0]; });
    Val x = fill(a, CompProblem{P.c, P.p, P.e, fa, P.a[0]});
    Partial fb(phi, [P](const Mor& s) { return P.f(s)[1]; });
    Val rb = b.solve(CompProblem{P.c, Val::pair(P.p, x), P.e, fb, P.a[1]});
    return Val::pair(a.fam->act(iota(P.c, 1 - P.e, var), P.p, x), rb);
  };
  return Fib{fam, solve, "Sigma(" + a.name + "," + b.name + ")"};
}

Fib fib_path(const Fib& a) {
  Fam fam = psh::path_family(a.fam);
  Solver solve = [a, fam](const CompProblem& P) {
    const Fam& A = a.fam;
    const Psh& G = A->base();
    const Variant var = A->variant();
    const int c = P.c;
    Val g = P.p[0][0], x0 = P.p[0][1], x1 = P.p[1];
    Mor w = cube::pair(compose(pi(c, var), pi(c + 1, var)), last(c + 2, var));
    Val q = G->act(w, g);
    Sieve phi = Sieve::disj(Sieve::disj(P.f.sieve().pull(pi(c, var)), Sieve::eq(last(c + 1, var), 0)),
                            Sieve::eq(last(c + 1, var), 1));
    Partial f(phi, [A, G, P, g, x0, x1, c, var](const Mor& s) -> Val {
      const int d = s.src;
      Mor sigma = compose(pi(c, var), s);
      Mor t = compose(last(c + 1, var), s);
      if (P.f.defined(sigma)) {
        Mor wp = cube::pair(cube::identity(d + 1, var), compose(t, pi(d, var)));
        Val gs = G->act(pi(d + 1, var), G->act(cube::extend(sigma), g));
        return A->act(wp, gs, P.f(sigma));
      }
      return A->act(cube::extend(sigma), g, is_const(t, 0) ? x0 : x1);
    });
    return a.solve(CompProblem{c + 1, q, P.e, f, P.a});
  };
  return Fib{fam, solve, "Path(" + a.name + ")"};
}

Fib fib_pi(const Fib& a, const Fib& b, int level) {
  auto pf = psh::pi_family(a.fam, b.fam, level);
  Solver solve = [a, b, pf](const CompProblem& P) {
    const Fam& A = a.fam;
    const Psh& G = A->base();
    const Variant var = A->variant();
    const int eb = 1 - P.e;
    Val pe = face_point(G, P.p, P.c, P.e);
    Val pb = face_point(G, P.p, P.c, eb);
    const auto& lay = pf->layout(P.c, pb);
    std::vector<Val> vals;
    vals.reserve(lay.keys.size());
    for (const auto& [s, x] : lay.keys) {
      const int d = s.src;
      Val ps = G->act(cube::extend(s), P.p);
      Val xt = fill(a, CompProblem{d, ps, eb, empty_partial(d, var), x});
      Partial fb(P.f.sieve().pull(s), [A, G, P, pf, s = s, ps, xt, var](const Mor& tau) {
        const int d2 = tau.src;
        Mor st = compose(s, tau);
        Val pst = G->act(cube::extend(st), P.p);
        Val xtt = A->act(cube::extend(tau), ps, xt);
        return pf->value(d2 + 1, pst, P.f(st), cube::identity(d2 + 1, var), xtt);
      });
      Val base = pf->value(P.c, pe, P.a, s, A->act(iota(d, P.e, var), ps, xt));
      vals.push_back(b.solve(CompProblem{d, Val::pair(ps, xt), P.e, fb, base}));
    }
    return Val::tuple(std::move(vals));
  };
  return Fib{pf, solve, "Pi(" + a.name + "," + b.name + ")"};
}

Fib fib_id(const Fib& a, int level) {
  Fam fam = psh::id_family(a.fam, level);
  Fib path = fib_path(a);
  Solver solve = [path, level](const CompProblem& P) {
    const Variant var = path.fam->variant();
    const Sieve& phi = P.f.sieve();
    Partial fp(phi, [P](const Mor& s) { return P.f(s)[0]; });
    Val y = path.solve(CompProblem{P.c, P.p, P.e, fp, P.a[0]});
    std::vector<Mor> members;
    for (int d = 0; d <= level; ++d)
      for (const Mor& s : cube::homs(d, P.c, var)) {
        if (!phi.contains(s)) continue;
        Sieve psi = Sieve::from_val(d + 1, var, level, P.f(s)[1]);
        if (psi.contains(iota(d, 1 - P.e, var))) members.push_back(s);
      }
    return Val::pair(y, Sieve::table(P.c, var, level, members).to_val(level));
  };
  return Fib{fam, solve, "Id(" + a.name + ")"};
}

Fib reindex_fib(const Fib& a, Psh base, std::function<Val(int, const Val&)> f) {
  Fam fam = psh::reindex(a.fam, std::move(base), f, a.fam->name());
  Solver solve = [a, f](const CompProblem& P) {
    return a.solve(CompProblem{P.c, f(P.c + 1, P.p), P.e, P.f, P.a});
  };
  return Fib{fam, solve, a.name};
}

Val nabla_path(int c, const Val& a0, const Val& a1) {
  std::vector<Val> out;
  for (unsigned w = 0; w < (2u << c); ++w) out.push_back((w & 1u) ? a1[w >> 1] : a0[w >> 1]);
  return Val::tuple(std::move(out));
}

Val pres(const Fib& a, const Fib& b, const FamMap& h, const CompProblem& P) {
  const Fam& A = a.fam;
  const Psh& G = A->base();
  const Variant var = A->variant();
  const int c = P.c;
  Val fa = fill(a, P);
  Mor w = cube::pair(compose(pi(c, var), pi(c + 1, var)), last(c + 2, var));
  Sieve phi = Sieve::disj(P.f.sieve().pull(pi(c, var)), Sieve::eq(last(c + 1, var), 1));
  Partial f(phi, [A, G, P, h, fa, c, var](const Mor& s) {
    const int d = s.src;
    Mor sigma = compose(pi(c, var), s);
    Val ps = G->act(cube::extend(sigma), P.p);
    if (P.f.defined(sigma)) return h(d + 1, ps, P.f(sigma));
    return h(d + 1, ps, A->act(cube::extend(sigma), P.p, fa));
  });
  Val pe = face_point(G, P.p, c, P.e);
  Val pep = G->act(pi(c, var), pe);
  Val base = h(c + 1, pep, A->act(pi(c, var), pe, P.a));
  return b.solve(CompProblem{c + 1, G->act(w, P.p), P.e, f, base});
}

Equiv iso_equiv(const Fib& b, FamMap fwd, FamMap bwd) {
  return [b, fwd, bwd](const EquivProblem& E) {
    const Fam& B = b.fam;
    const Psh& G = B->base();
    const Variant var = B->variant();
    const int c = E.c;
    Val gp = G->act(pi(c, var), E.g);
    Val line = G->act(pi(c + 1, var), gp);
    Sieve phi = Sieve::disj(E.partial.sieve().pull(pi(c, var)), Sieve::eq(last(c + 1, var), 0));
    Partial f(phi, [B, G, E, c, var](const Mor& s) -> Val {
      const int d = s.src;
      Mor sigma = compose(pi(c, var), s);
      Mor t = compose(last(c + 1, var), s);
      Val gs = G->act(sigma, E.g);
      if (E.partial.defined(sigma)) {
        Mor k = cube::pair(pi(d, var), compose(cube::connection(0, var), cube::pair(compose(t, pi(d, var)), last(d + 1, var))));
        return B->act(k, G->act(pi(d, var), gs), E.partial(sigma)[1]);
      }
      return B->act(pi(d, var), gs, B->act(sigma, E.g, E.b));
    });
    Val base = B->act(pi(c, var), E.g, E.b);
    Val q = b.solve(CompProblem{c + 1, line, 0, f, base});
    Val a = bwd(c, E.g, B->act(iota(c, 1, var), gp, q));
    return Val::pair(a, q);
  };
}

Equiv nabla_equiv(Fam a, FamMap fwd, std::function<Val(const Val&, const Val&)> section) {
  return [a, fwd, section](const EquivProblem& E) {
    const Psh& G = a->base();
    const Variant var = a->variant();
    const unsigned n = 1u << E.c;
    std::vector<Val> av(n);
    std::vector<bool> given(n, false);
    std::vector<Val> qv(2 * n);
    for (unsigned v = 0; v < n; ++v) {
      Mor pt = cube::make(0, E.c, {v}, var);
      if (E.partial.defined(pt)) {
        Val aq = E.partial(pt);
        av[v] = aq[0][0];
        qv[2 * v] = aq[1][0];
        qv[2 * v + 1] = aq[1][1];
        given[v] = true;
      } else {
        av[v] = section(G->act(pt, E.g), E.b[v]);
      }
    }
    Val x = Val::tuple(av);
    Val fx = fwd(E.c, E.g, x);
    for (unsigned v = 0; v < n; ++v)
      if (!given[v]) {
        qv[2 * v] = E.b[v];
        qv[2 * v + 1] = fx[v];
      }
    return Val::pair(x, Val::tuple(std::move(qv)));
  };
}

Val id_refl(const ElimData& d, int c, const Val& g, const Val& x0) {
  const Variant var = d.a.fam->variant();
  return Val::pair(psh::refl_path(d.a.fam, c, g, x0), Sieve::top(c, var).to_val(d.level));
}

namespace {

Mor min_merge(int c, Variant var) {
  return cube::pair(compose(pi(c, var), pi(c + 1, var)),
                    compose(cube::connection(0, var),
                            cube::pair(cube::coordinate(c + 2, c, var), cube::coordinate(c + 2, c + 1, var))));
}

Val refl_point(const ElimData& d, int c, const Val& g, const Val& x0) {
  return Val::pair(Val::pair(Val::pair(g, x0), x0), id_refl(d, c, g, x0));
}

Val refl_point_path(const ElimData& d, int c, const Val& g, const Val& x0) {
  return Val::pair(Val::pair(Val::pair(g, x0), x0), psh::refl_path(d.a.fam, c, g, x0));
}

}  // namespace

Val id_elim(const ElimData& d, int c, const Val& g, const Val& x0, const Val&, const Val& w) {
  const Fam& A = d.a.fam;
  const Psh& G = A->base();
  const Fam& C = d.c.fam;
  const Variant var = A->variant();
  const Val& y = w[0];
  Sieve psi = Sieve::from_val(c, var, d.level, w[1]);
  Val gp = G->act(pi(c, var), g);
  Val x0p = A->act(pi(c, var), g, x0);
  Val ymin = A->act(min_merge(c, var), gp, y);
  Sieve psip = Sieve::disj(psi.pull(pi(c, var)), Sieve::eq(last(c + 1, var), 0));
  Val line = Val::pair(Val::pair(Val::pair(gp, x0p), y), Val::pair(ymin, psip.to_val(d.level)));
  Partial f(psi, [d, G, A, C, g, x0](const Mor& s) {
    const int k = s.src;
    Val gs = G->act(s, g);
    Val xs = A->act(s, g, x0);
    return C->act(pi(k, A->variant()), refl_point(d, k, gs, xs), d.term(k, gs, xs));
  });
  return d.c.solve(CompProblem{c, line, 0, f, d.term(c, g, x0)});
}

PathElim path_elim(const ElimData& d, int c, const Val& g, const Val& x0, const Val&, const Val& y) {
  const Fam& A = d.a.fam;
  const Psh& G = A->base();
  const Fam& C = d.c.fam;
  const Psh& CG = C->base();
  const Variant var = A->variant();
  Val gp = G->act(pi(c, var), g);
  Val x0p = A->act(pi(c, var), g, x0);
  auto line_of = [&](const Val& yy) {
    return Val::pair(Val::pair(Val::pair(gp, x0p), yy), A->act(min_merge(c, var), gp, yy));
  };
  Val base = d.term(c, g, x0);
  PathElim out;
  out.value = d.c.solve(CompProblem{c, line_of(y), 0, empty_partial(c, var), base});

  Val refl = psh::refl_path(A, c, g, x0);
  Val lr = line_of(refl);
  Val ind_refl = d.c.solve(CompProblem{c, lr, 0, empty_partial(c, var), base});
  Mor w = cube::pair(compose(pi(c, var), pi(c + 1, var)), last(c + 2, var));
  Partial f(Sieve::eq(last(c + 1, var), 1), [d, G, A, C, g, x0, c, var](const Mor& s) {
    const int k = s.src;
    Mor sigma = compose(pi(c, var), s);
    Val gs = G->act(sigma, g);
    Val xs = A->act(sigma, g, x0);
    return C->act(pi(k, var), refl_point_path(d, k, gs, xs), d.term(k, gs, xs));
  });
  Val pt = refl_point_path(d, c, g, x0);
  out.witness = d.c.solve(CompProblem{c + 1, CG->act(w, lr), 0, f, C->act(pi(c, var), pt, base)});
  if (C->act(iota(c, 0, var), CG->act(pi(c, var), pt), out.witness) != ind_refl)
    throw std::logic_error("path elimination witness does not start at ind(refl)");
  return out;
}

}  // namespace cas::kan
