#include <algorithm>
#include <sstream>

#include "cas/psh.hpp"

namespace cas::psh {

struct Sieve::Node {
  enum class Kind { Top, Bot, Eq, And, Or, Pull, Forall, Table, Fn };
  Kind kind = Kind::Top;
  int c = 0;
  Variant var = Variant::Ord;
  Mor mor{};  // Eq: the interval element; Pull: rho
  int e = 0;
  Sieve a, b;
  int level = 0;
  std::unordered_set<Mor, cube::MorHash> table;
  std::function<bool(const Mor&)> fn;
  std::string name;
  mutable std::unordered_map<Mor, bool, cube::MorHash> above;  // Table memo past the level
};

namespace {

using Kind = Sieve::Node::Kind;

std::shared_ptr<Sieve::Node> node(Kind k, int c, Variant var) {
  auto n = std::make_shared<Sieve::Node>();
  n->kind = k;
  n->c = c;
  n->var = var;
  return n;
}

}  // namespace

int Sieve::stage() const { return p_->c; }
Variant Sieve::variant() const { return p_->var; }

bool Sieve::contains(const Mor& s) const {
  if (s.dst != p_->c) throw cube::Mismatch("sieve queried at a morphism with the wrong codomain");
  const Node& n = *p_;
  switch (n.kind) {
    case Kind::Top:
      return true;
    case Kind::Bot:
      return false;
    case Kind::Eq:
      return cube::equal(cube::compose(n.mor, s), cube::const_point(s.src, n.e, n.var));
    case Kind::And:
      return n.a.contains(s) && n.b.contains(s);
    case Kind::Or:
      return n.a.contains(s) || n.b.contains(s);
    case Kind::Pull:
      return n.a.contains(cube::compose(n.mor, s));
    case Kind::Forall:
      return n.a.contains(cube::extend(s));
    case Kind::Table: {
      if (s.src <= n.level) return n.table.count(s) > 0;
      auto it = n.above.find(s);
      if (it != n.above.end()) return it->second;
      // Largest sieve agreeing with the table: every restriction to a tabulated stage is in.
      bool in = true;
      for (int d = 0; d <= n.level && in; ++d)
        for (const Mor& t : cube::homs(d, s.src, n.var))
          if (!n.table.count(cube::compose(s, t))) {
            in = false;
            break;
          }
      n.above.emplace(s, in);
      return in;
    }
    case Kind::Fn:
      return n.fn(s);
  }
  return false;
}

Sieve Sieve::pull(const Mor& rho) const {
  if (rho.dst != p_->c) throw cube::Mismatch("sieve pulled back along a morphism with the wrong codomain");
  Kind k = p_->kind;
  if (k == Kind::Top || k == Kind::Bot) return k == Kind::Top ? top(rho.src, rho.var) : bot(rho.src, rho.var);
  if (k == Kind::Eq) return eq(cube::compose(p_->mor, rho), p_->e);
  auto n = node(Kind::Pull, rho.src, rho.var);
  if (k == Kind::Pull) {
    n->a = p_->a;
    n->mor = cube::compose(p_->mor, rho);
  } else {
    n->a = *this;
    n->mor = rho;
  }
  return Sieve(n);
}

std::string Sieve::describe() const {
  const Node& n = *p_;
  switch (n.kind) {
    case Kind::Top:
      return "top";
    case Kind::Bot:
      return "bot";
    case Kind::Eq:
      return "(" + cube::table_string(n.mor) + "=" + std::to_string(n.e) + ")";
    case Kind::And:
      return "(" + n.a.describe() + " & " + n.b.describe() + ")";
    case Kind::Or:
      return "(" + n.a.describe() + " | " + n.b.describe() + ")";
    case Kind::Pull:
      return n.a.describe() + cube::table_string(n.mor);
    case Kind::Forall:
      return "forall(" + n.a.describe() + ")";
    case Kind::Table:
      return "table@" + std::to_string(n.c);
    case Kind::Fn:
      return n.name;
  }
  return "?";
}

std::vector<Mor> Sieve::members(int level) const {
  std::vector<Mor> out;
  for (int d = 0; d <= level; ++d)
    for (const Mor& s : cube::homs(d, p_->c, p_->var))
      if (contains(s)) out.push_back(s);
  return out;
}

Val Sieve::to_val(int level) const {
  std::vector<Val> xs;
  for (const Mor& m : members(level)) xs.push_back(Val::mor(m));
  return Val::tuple(std::move(xs));
}

Sieve Sieve::top(int c, Variant var) { return Sieve(node(Kind::Top, c, var)); }
Sieve Sieve::bot(int c, Variant var) { return Sieve(node(Kind::Bot, c, var)); }

Sieve Sieve::eq(const Mor& i, int e) {
  if (i.dst != 1) throw cube::Mismatch("interval element must land in 1");
  auto n = node(Kind::Eq, i.src, i.var);
  n->mor = i;
  n->e = e;
  return Sieve(n);
}

Sieve Sieve::conj(const Sieve& a, const Sieve& b) {
  if (a.stage() != b.stage()) throw cube::Mismatch("conjunction of sieves on different objects");
  if (a.p_->kind == Kind::Top || b.p_->kind == Kind::Bot) return b;
  if (b.p_->kind == Kind::Top || a.p_->kind == Kind::Bot) return a;
  auto n = node(Kind::And, a.stage(), a.variant());
  n->a = a;
  n->b = b;
  return Sieve(n);
}

Sieve Sieve::disj(const Sieve& a, const Sieve& b) {
  if (a.stage() != b.stage()) throw cube::Mismatch("disjunction of sieves on different objects");
  if (a.p_->kind == Kind::Bot || b.p_->kind == Kind::Top) return b;
  if (b.p_->kind == Kind::Bot || a.p_->kind == Kind::Top) return a;
  auto n = node(Kind::Or, a.stage(), a.variant());
  n->a = a;
  n->b = b;
  return Sieve(n);
}

Sieve Sieve::forall(const Sieve& phi) {
  if (phi.stage() < 1) throw cube::Mismatch("forall needs a sieve on c + 1");
  if (phi.p_->kind == Kind::Top || phi.p_->kind == Kind::Bot)
    return phi.p_->kind == Kind::Top ? top(phi.stage() - 1, phi.variant()) : bot(phi.stage() - 1, phi.variant());
  auto n = node(Kind::Forall, phi.stage() - 1, phi.variant());
  n->a = phi;
  return Sieve(n);
}

Sieve Sieve::table(int c, Variant var, int level, const std::vector<Mor>& members) {
  auto n = node(Kind::Table, c, var);
  n->level = level;
  for (const Mor& m : members) {
    if (m.dst != c || m.src > level) throw cube::Mismatch("table member outside the sieve's range");
    n->table.insert(m);
  }
  return Sieve(n);
}

Sieve Sieve::from_val(int c, Variant var, int level, const Val& v) {
  std::vector<Mor> ms;
  for (const Val& x : v.items()) ms.push_back(x.as_mor());
  return table(c, var, level, ms);
}

Sieve Sieve::fn(int c, Variant var, std::function<bool(const Mor&)> f, std::string name) {
  auto n = node(Kind::Fn, c, var);
  n->fn = std::move(f);
  n->name = std::move(name);
  return Sieve(n);
}

bool sieve_equal(const Sieve& a, const Sieve& b, int level) {
  if (a.stage() != b.stage()) return false;
  for (int d = 0; d <= level; ++d)
    for (const Mor& s : cube::homs(d, a.stage(), a.variant()))
      if (a.contains(s) != b.contains(s)) return false;
  return true;
}

bool is_top(const Sieve& a, int level) {
  (void)level;  // a sieve holding the identity holds everything
  return a.contains(cube::identity(a.stage(), a.variant()));
}

bool is_bot(const Sieve& a, int level) {
  for (int d = 0; d <= level; ++d)
    for (const Mor& s : cube::homs(d, a.stage(), a.variant()))
      if (a.contains(s)) return false;
  return true;
}

SieveCheck check_sieve(const Sieve& s, int level) {
  const int c = s.stage();
  const Variant var = s.variant();
  std::vector<std::vector<char>> in(level + 1);
  std::vector<bool> full(level + 1, true);
  for (int d = 0; d <= level; ++d) {
    const auto& hs = cube::homs(d, c, var);
    in[d].resize(hs.size());
    for (std::size_t k = 0; k < hs.size(); ++k) {
      in[d][k] = s.contains(hs[k]);
      if (!in[d][k]) full[d] = false;
    }
  }
  for (int d = 0; d <= level; ++d) {
    const auto& hs = cube::homs(d, c, var);
    for (std::size_t k = 0; k < hs.size(); ++k) {
      if (!in[d][k]) continue;
      for (int d2 = 0; d2 <= level; ++d2) {
        if (full[d2]) continue;
        for (const Mor& t : cube::homs(d2, d, var)) {
          Mor st = cube::compose(hs[k], t);
          if (!in[d2][cube::hom_index(st)]) return {false, std::make_pair(hs[k], st)};
        }
      }
    }
  }
  return {};
}

std::vector<Sieve> all_sieves(int c, Variant var, int level, const Sieve* within) {
  std::vector<Mor> keys;
  for (int d = level; d >= 0; --d)
    for (const Mor& s : cube::homs(d, c, var)) keys.push_back(s);
  std::unordered_map<Mor, std::size_t, cube::MorHash> index;
  for (std::size_t k = 0; k < keys.size(); ++k) index.emplace(keys[k], k);
  static const std::vector<Val> both{Val::integer(0), Val::integer(1)};
  static const std::vector<Val> zero{Val::integer(0)};
  std::vector<bool> allowed(keys.size(), true);
  if (within)
    for (std::size_t k = 0; k < keys.size(); ++k) allowed[k] = within->contains(keys[k]);
  NatProblem prob;
  prob.keys = keys.size();
  prob.candidates = [&](std::size_t k) -> const std::vector<Val>& { return allowed[k] ? both : zero; };
  prob.consequences = [&](std::size_t k, const Val& v, std::vector<std::pair<std::size_t, Val>>& out) {
    if (v.as_int() == 0) return;
    const Mor& s = keys[k];
    for (int d = 0; d <= level; ++d)
      for (const Mor& t : cube::homs(d, s.src, var)) out.emplace_back(index.at(cube::compose(s, t)), v);
  };
  std::vector<Sieve> out;
  enumerate_nat(prob, [&](const std::vector<Val>& vals) {
    std::vector<Mor> ms;
    for (std::size_t k = 0; k < keys.size(); ++k)
      if (vals[k].as_int()) ms.push_back(keys[k]);
    for (const Mor& m : ms)
      if (!allowed[index.at(m)]) return true;
    std::sort(ms.begin(), ms.end());
    out.push_back(Sieve::table(c, var, level, ms));
    return true;
  });
  return out;
}

Partial::Partial(Sieve phi, std::function<Val(const Mor&)> f)
    : phi_(std::move(phi)),
      f_(std::make_shared<std::function<Val(const Mor&)>>(std::move(f))),
      memo_(std::make_shared<std::unordered_map<Mor, Val, cube::MorHash>>()) {}

Val Partial::operator()(const Mor& s) const {
  auto it = memo_->find(s);
  if (it != memo_->end()) return it->second;
  if (!phi_.contains(s)) throw std::logic_error("partial element evaluated outside its sieve");
  Val v = (*f_)(s);
  memo_->emplace(s, v);
  return v;
}

Partial Partial::pull(const Mor& rho) const {
  Partial self = *this;
  return Partial(phi_.pull(rho), [self, rho](const Mor& s) { return self(cube::compose(rho, s)); });
}

SystemResult system(const std::vector<Partial>& parts, int level) {
  if (parts.empty()) throw std::invalid_argument("empty system");
  const int c = parts[0].sieve().stage();
  const Variant var = parts[0].sieve().variant();
  for (int d = 0; d <= level; ++d)
    for (const Mor& s : cube::homs(d, c, var)) {
      std::optional<Val> seen;
      for (const auto& p : parts) {
        if (!p.defined(s)) continue;
        Val v = p(s);
        if (seen && *seen != v) return {false, {}, s};
        seen = v;
      }
    }
  Sieve join = parts[0].sieve();
  for (std::size_t k = 1; k < parts.size(); ++k) join = Sieve::disj(join, parts[k].sieve());
  auto copy = parts;
  return {true, Partial(join, [copy](const Mor& s) {
            for (const auto& p : copy)
              if (p.defined(s)) return p(s);
            throw std::logic_error("system evaluated outside its join");
          }),
          std::nullopt};
}

}  // namespace cas::psh
