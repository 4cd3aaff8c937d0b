#pragma once

#include <functional>
#include <string>

#include "cas/psh.hpp"

// Composition structures on families and the derived operations: filling,
// transport, pres, equivalence extension, gluing and universe composition.
namespace cas::kan {

using psh::Fam;
using psh::Mor;
using psh::Partial;
using psh::Psh;
using psh::Sieve;
using psh::Variant;

// Composition at stage c along p in Gamma(c + 1), from face e to face 1 - e.
// f(s) for s : c' -> c in the sieve lies in A(c' + 1, p (s x 1)); a lies in A(c, p d_e).
struct CompProblem {
  int c = 0;
  Val p;
  int e = 0;
  Partial f;
  Val a;
};

using Solver = std::function<Val(const CompProblem&)>;

struct Fib {
  Fam fam;
  Solver solve;
  std::string name;
};

// Small morphism vocabulary.
Mor pi(int c, Variant var);             // c + 1 -> c
Mor iota(int c, int e, Variant var);    // c -> c + 1 at face e
Mor last(int c, Variant var);           // c -> 1, the last coordinate (c >= 1)

Val face_point(const Psh& gamma, const Val& p, int c, int e);
CompProblem restrict(const Fam& a, const CompProblem& P, const Mor& s);
Partial empty_partial(int c, Variant var);

struct CheckResult {
  bool ok = true;
  std::string detail;
};
// Adherence of the input: f(s) d_e = a s for s in the sieve at stages <= level - 1.
CheckResult check_adherence(const Fam& a, const CompProblem& P, int level);
// Postcondition on s in the sieve at stages <= level - 1, membership of the
// result, and (when enumerate is set) membership in the brute-force admissible set.
CheckResult check_comp(const Fam& a, const CompProblem& P, const Val& result, int level, bool enumerate = true);
std::vector<Val> admissible(const Fam& a, const CompProblem& P, int level);

Fib discrete_fib(Fam a);
// For codiscrete families; relabel moves a vertex value at base point g0 to g1
// (identity when the base is constant along paths).
using Relabel = std::function<Val(const Val& g0, const Val& g1, const Val& x)>;
Fib nabla_fib(Fam a, Relabel relabel = nullptr);
// Relabelled constant family: elements (label(g), x) for x in xs.
Fam labelled_family(Psh base, std::function<Val(int, const Val&)> label, std::vector<Val> xs, std::string name);
Fib labelled_fib(Fam a, std::function<Val(int, const Val&)> label);

// Element of A(c + 1, p) agreeing with f on the sieve and with a at face e.
Val fill(const Fib& alpha, const CompProblem& P);
Val tp(const Fib& alpha, int c, const Val& p, int e, const Val& a);

Fib fib_sigma(const Fib& a, const Fib& b);                 // b over sigma(a)
Fib fib_path(const Fib& a);                                // on path_family(a.fam)
Fib fib_pi(const Fib& a, const Fib& b, int level);         // b over sigma(a)
Fib fib_id(const Fib& a, int level);                       // on id_family(a.fam, level)
Fib reindex_fib(const Fib& a, Psh base, std::function<Val(int, const Val&)> f);

// p(a0, a1) for a codiscrete family: vertexwise a0 at i = 0 and a1 at i = 1.
Val nabla_path(int c, const Val& a0, const Val& a1);

// Path in B(c, p d_{1-e}) from comp(B, h f, h a) to h(comp(A, f, a)), stage c + 1.
using FamMap = std::function<Val(int, const Val&, const Val&)>;  // (stage, base point, x)
Val pres(const Fib& a, const Fib& b, const FamMap& h, const CompProblem& P);

// Equivalence extension: given b in B(c, g) and a partial (a, q) with q a
// path from b to f a, returns a total (a, q) extending it.
struct EquivProblem {
  int c = 0;
  Val g;
  Partial partial;  // values pair(a, q), q in B(c' + 1, g s pi)
  Val b;
};
using Equiv = std::function<Val(const EquivProblem&)>;
Equiv iso_equiv(const Fib& b, FamMap fwd, FamMap bwd);
// Vertexwise maps between codiscrete families; section picks a preimage candidate.
Equiv nabla_equiv(Fam a, FamMap fwd, std::function<Val(const Val& g0, const Val& bx)> section);

struct GlueData {
  Psh gamma;
  std::function<bool(int, const Val&)> phi;  // closed under restriction
  Fib a;                                     // consulted on phi only
  Fib b;
  FamMap fwd, bwd;                           // A -> B on phi; bwd only for isos
  Equiv equiv;
  int level = 2;
};

class GlueFamily;
std::shared_ptr<const GlueFamily> glue_type(const GlueData& g);
// Glue(c, g) -> A(c, g) for g in phi, and its inverse.
Val glue_to_a(const GlueData& g, int c, const Val& gp, const Val& x);
Val glue_from_a(const GlueData& g, int c, const Val& gp, const Val& x);
Sieve phi_sieve(const GlueData& g, int c, const Val& gp);
Fib glue_fib(const GlueData& g);

struct SGlue {
  Fam fam;
  Fib fib;
  std::shared_ptr<const GlueFamily> glue;
};
SGlue sglue(const GlueData& g);
// SGlue(c, g) -> Glue(c, g) and back.
Val sglue_to_glue(const GlueData& g, int c, const Val& gp, const Val& x);
Val glue_to_sglue(const GlueData& g, int c, const Val& gp, const Val& x);

class GlueFamily : public psh::Family {
 public:
  explicit GlueFamily(GlueData g);
  Val act(const Mor& s, const Val& g, const Val& x) const override;
  std::string name() const override { return "Glue"; }
  const GlueData& data() const { return g_; }

 protected:
  std::vector<Val> compute(int c, const Val& g) const override;

 private:
  GlueData g_;
};

// Universe composition on codes over representables. The line is a family
// over y(c + 1) with its composition structure (consulted over phi only);
// the result is a code over y(c) equal to the line's face 1 - e on phi.
struct UniverseResult {
  SGlue code;
  GlueData data;
};
UniverseResult universe_comp(int c, int e, const Sieve& phi, const Fib& line, int level);

// Identity and path elimination. Gamma.A.A.Id and Gamma.A.A.Path contexts.
struct ElimData {
  Fib a;        // A over Gamma
  Fam over;     // Id or Path family over Gamma.A.A
  Fib c;        // C over sigma(over)
  std::function<Val(int, const Val&, const Val&)> term;  // (stage, g, x0) -> C(c, (((g,x0),x0),refl))
  int level = 2;
};
// w = (y, psi) in Id(c, ((g, x0), x1)).
Val id_elim(const ElimData& d, int c, const Val& g, const Val& x0, const Val& x1, const Val& w);
Val id_refl(const ElimData& d, int c, const Val& g, const Val& x0);
struct PathElim {
  Val value;    // ind(C, c, y)
  Val witness;  // on refl: a path from ind(C, c, refl) to c(x0), stage c + 1
};
PathElim path_elim(const ElimData& d, int c, const Val& g, const Val& x0, const Val& x1, const Val& y);

}  // namespace cas::kan
