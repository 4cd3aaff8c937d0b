#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cas/cube.hpp"
#include "cas/val.hpp"

// Presheaves on the cube category, families over their categories of
// elements, and decidable sieves. Everything is lazy: carriers are computed
// on demand and cached. Operations quantifying over stages use an explicit
// truncation level N; results are exact only relative to that bound.
namespace cas::psh {

using cube::Mor;
using cube::Variant;

constexpr int kDefaultLevel = 3;

struct LevelExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Presheaf {
 public:
  explicit Presheaf(Variant v) : var_(v) {}
  virtual ~Presheaf() = default;

  Variant variant() const { return var_; }
  const std::vector<Val>& at(int c) const;
  bool has(int c, const Val& x) const;
  // x in P(dst s) restricted to P(src s).
  virtual Val act(const Mor& s, const Val& x) const = 0;
  virtual std::string name() const = 0;

 protected:
  virtual std::vector<Val> compute(int c) const = 0;

 private:
  Variant var_;
  mutable std::map<int, std::vector<Val>> cache_;
  mutable std::map<int, std::unordered_set<Val, ValHash>> index_;
};
using Psh = std::shared_ptr<const Presheaf>;

Psh yoneda(int c, Variant var);
Psh interval(Variant var);
Psh terminal(Variant var);
Psh constant(std::vector<Val> elems, Variant var, std::string name = "Delta");
Psh coproduct(Psh p, Psh q);
Psh product(Psh p, Psh q);
// Elements x of p at stage c with keep(c, x); keep must be closed under restriction.
Psh sub(Psh p, std::function<bool(int, const Val&)> keep, std::string name);
// Explicit finite presheaf for stages <= top; action tables keyed by (mor, element).
Psh table_presheaf(Variant var, int top, std::map<int, std::vector<Val>> elems,
                   std::map<std::pair<Mor, Val>, Val> action, std::string name);

class Family {
 public:
  explicit Family(Psh base) : base_(std::move(base)) {}
  virtual ~Family() = default;

  const Psh& base() const { return base_; }
  Variant variant() const { return base_->variant(); }
  const std::vector<Val>& fiber(int c, const Val& g) const;
  bool in_fiber(int c, const Val& g, const Val& x) const;
  // x in A(dst s, g) restricted to A(src s, g s).
  virtual Val act(const Mor& s, const Val& g, const Val& x) const = 0;
  virtual std::string name() const = 0;

 protected:
  virtual std::vector<Val> compute(int c, const Val& g) const = 0;

 private:
  Psh base_;
  mutable std::map<std::pair<int, Val>, std::vector<Val>> cache_;
  mutable std::map<std::pair<int, Val>, std::unordered_set<Val, ValHash>> index_;
};
using Fam = std::shared_ptr<const Family>;

// Context extension: elements (g, a).
Psh sigma(Fam a);

Fam const_family(Psh base, Psh fiber);
// Base change along a natural map f : base -> a.base(), given on elements.
Fam reindex(Fam a, Psh base, std::function<Val(int, const Val&)> f, std::string name = "reindex");
// Codiscrete family: an element at (c, g) assigns to each vertex v of c an
// element of points(g v) where g v is the stage-0 restriction.
Fam nabla(Psh base, std::function<std::vector<Val>(const Val&)> points, std::string name = "Nabla");
Fam sigma_family(Fam a, Fam b);  // b over sigma(a)
// Natural families over stages <= level: an element at (c, g) assigns to
// every (sigma : c' -> c, a in A(c', g sigma)) a value in B(c', (g sigma, a)).
class PiFamily : public Family {
 public:
  struct Layout {
    std::vector<std::pair<Mor, Val>> keys;  // visiting order
    std::map<std::pair<Mor, Val>, std::size_t> index;
  };
  PiFamily(Fam a, Fam b, int level);
  const Layout& layout(int c, const Val& g) const;
  Val value(int c, const Val& g, const Val& f, const Mor& s, const Val& a) const;
  Val act(const Mor& s, const Val& g, const Val& x) const override;
  std::string name() const override;
  int level() const { return level_; }
  const Fam& dom() const { return a_; }
  const Fam& cod() const { return b_; }

 protected:
  std::vector<Val> compute(int c, const Val& g) const override;

 private:
  Fam a_, b_;
  int level_;
  mutable std::map<std::pair<int, Val>, Layout> layouts_;
};
std::shared_ptr<const PiFamily> pi_family(Fam a, Fam b, int level);
// Gamma.A.A, elements ((g, x0), x1).
Psh ctx_aa(Fam a);
// Over Gamma.A.A: y in A(c + 1, g pi) with end-points x0 and x1.
Fam path_family(Fam a);
// Pairs (path, sieve) with the sieve inside the constancy sieve of the path.
Fam id_family(Fam a, int level);
Val refl_path(const Fam& a, int c, const Val& g, const Val& x);

// Sieves on an object c.
class Sieve {
 public:
  struct Node;
  Sieve() = default;
  int stage() const;
  Variant variant() const;
  bool contains(const Mor& s) const;  // s : c' -> stage()
  Sieve pull(const Mor& rho) const;   // on src(rho)
  std::string describe() const;
  // Members at stages <= level, in canonical order.
  std::vector<Mor> members(int level) const;
  Val to_val(int level) const;

  static Sieve top(int c, Variant var);
  static Sieve bot(int c, Variant var);
  static Sieve eq(const Mor& i, int e);  // i : c -> 1
  static Sieve conj(const Sieve& a, const Sieve& b);
  static Sieve disj(const Sieve& a, const Sieve& b);
  static Sieve forall(const Sieve& phi);  // phi on c + 1, result on c
  static Sieve table(int c, Variant var, int level, const std::vector<Mor>& members);
  static Sieve from_val(int c, Variant var, int level, const Val& v);
  static Sieve fn(int c, Variant var, std::function<bool(const Mor&)> f, std::string name);

 private:
  explicit Sieve(std::shared_ptr<const Node> p) : p_(std::move(p)) {}
  std::shared_ptr<const Node> p_;
};

bool sieve_equal(const Sieve& a, const Sieve& b, int level);
bool is_top(const Sieve& a, int level);
bool is_bot(const Sieve& a, int level);

struct SieveCheck {
  bool ok = true;
  std::optional<std::pair<Mor, Mor>> witness;  // sigma in, sigma tau out
};
SieveCheck check_sieve(const Sieve& s, int level);
// Every sieve on c at stages <= level, optionally inside an enclosing sieve.
std::vector<Sieve> all_sieves(int c, Variant var, int level, const Sieve* within = nullptr);

// A partial element over a sieve: a memoized assignment on its members.
class Partial {
 public:
  Partial() = default;
  Partial(Sieve phi, std::function<Val(const Mor&)> f);
  const Sieve& sieve() const { return phi_; }
  bool defined(const Mor& s) const { return phi_.contains(s); }
  Val operator()(const Mor& s) const;
  Partial pull(const Mor& rho) const;

 private:
  Sieve phi_;
  std::shared_ptr<std::function<Val(const Mor&)>> f_;
  std::shared_ptr<std::unordered_map<Mor, Val, cube::MorHash>> memo_;
};

struct SystemResult {
  bool ok = true;
  Partial joined;
  std::optional<Mor> conflict;
};
SystemResult system(const std::vector<Partial>& parts, int level);

struct CheckResult {
  bool ok = true;
  std::string detail;
};

CheckResult check_functorial(const Presheaf& p, int level);
CheckResult check_functorial(const Family& a, int level);
bool is_discrete(const Presheaf& p, int level);
// Components of the restriction graph at stages <= level.
std::size_t component_count(const Presheaf& p, int level);
CheckResult check_connected(const Presheaf& p, int level);
// A(c' + c) against natural maps y c' x y c -> A, stages <= level.
CheckResult check_exponential_iso(const Psh& a, int c1, int c, int level);

// Backtracking search for compatible assignments. Keys are visited in the
// given order; assigning a value to key i forces values on other keys.
struct NatProblem {
  std::size_t keys = 0;
  std::function<const std::vector<Val>&(std::size_t)> candidates;
  std::function<void(std::size_t, const Val&, std::vector<std::pair<std::size_t, Val>>&)> consequences;
  std::function<bool(std::size_t, const Val&)> allowed;  // optional filter on forced values
};
// Returns false if the callback stopped the search.
bool enumerate_nat(const NatProblem& prob, const std::function<bool(const std::vector<Val>&)>& cb,
                   std::size_t cap = 2000000);

// Hofmann-Streicher lifting of a finite universe sample.
struct SmallType {
  std::string name;
  std::vector<Val> elems;
};
struct UniverseSample {
  std::vector<SmallType> types;
  // Chosen isomorphisms: from-type index, to-type index, element map.
  std::vector<std::tuple<std::size_t, std::size_t, std::map<Val, Val>>> isos;
};

// Stage-c elements are functors from (C/c)^op into the sample, listed by the
// type index at each object of the slice together with the transition maps.
class UniversePresheaf;
std::shared_ptr<const UniversePresheaf> hs_lift(UniverseSample u, Variant var, int level, std::size_t cap = 20000);

// A functor from (C/c)^op to finite sets, given lazily: carrier and action.
struct SliceFunctor {
  int c = 0;
  std::function<std::vector<Val>(const Mor&)> carrier;          // sigma : c' -> c
  std::function<Val(const Mor&, const Mor&, const Val&)> act;    // (sigma, tau, x) -> x tau
};

struct IsoOver {
  std::function<Val(const Mor&, const Val&)> fwd;  // A(sigma) -> B(sigma)
  std::function<Val(const Mor&, const Val&)> bwd;
};

struct Extension {
  SliceFunctor d;
  IsoOver g;  // D -> B
};

// D agrees with A on phi and is B elsewhere; g is f on phi and the identity elsewhere.
Extension lift_iea(const Sieve& phi, const SliceFunctor& a, const SliceFunctor& b, const IsoOver& f);
CheckResult check_slice_functor(const SliceFunctor& f, int level, Variant var = Variant::Ord);
CheckResult check_iso_natural(const SliceFunctor& d, const SliceFunctor& b, const IsoOver& g, int level,
                              Variant var = Variant::Ord);

class UniversePresheaf : public Presheaf {
 public:
  UniversePresheaf(UniverseSample u, Variant var, int level, std::size_t cap);
  Val act(const Mor& s, const Val& x) const override;
  std::string name() const override { return "U"; }
  const UniverseSample& sample() const { return u_; }
  // The slice functor encoded by an element.
  SliceFunctor decode(int c, const Val& x) const;

 protected:
  std::vector<Val> compute(int c) const override;

 private:
  UniverseSample u_;
  int level_;
  std::size_t cap_;
};

}  // namespace cas::psh
