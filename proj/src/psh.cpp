#include <algorithm>
#include <numeric>
#include <sstream>

#include "cas/psh.hpp"

namespace cas::psh {

const std::vector<Val>& Presheaf::at(int c) const {
  auto it = cache_.find(c);
  if (it != cache_.end()) return it->second;
  if (c > cube::kMaxDim) throw LevelExceeded(name() + ": stage " + std::to_string(c) + " beyond the cube cap");
  return cache_.emplace(c, compute(c)).first->second;
}

bool Presheaf::has(int c, const Val& x) const {
  auto it = index_.find(c);
  if (it == index_.end()) {
    const auto& xs = at(c);
    it = index_.emplace(c, std::unordered_set<Val, ValHash>(xs.begin(), xs.end())).first;
  }
  return it->second.count(x) > 0;
}

const std::vector<Val>& Family::fiber(int c, const Val& g) const {
  auto key = std::make_pair(c, g);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  if (c > cube::kMaxDim) throw LevelExceeded(name() + ": stage " + std::to_string(c) + " beyond the cube cap");
  return cache_.emplace(key, compute(c, g)).first->second;
}

bool Family::in_fiber(int c, const Val& g, const Val& x) const {
  auto key = std::make_pair(c, g);
  auto it = index_.find(key);
  if (it == index_.end()) {
    const auto& xs = fiber(c, g);
    it = index_.emplace(key, std::unordered_set<Val, ValHash>(xs.begin(), xs.end())).first;
  }
  return it->second.count(x) > 0;
}

namespace {

class Yoneda : public Presheaf {
 public:
  Yoneda(int c, Variant var) : Presheaf(var), c_(c) {}
  Val act(const Mor& s, const Val& x) const override { return Val::mor(cube::compose(x.as_mor(), s)); }
  std::string name() const override { return "y" + std::to_string(c_); }

 protected:
  std::vector<Val> compute(int c) const override {
    std::vector<Val> out;
    for (const Mor& m : cube::homs(c, c_, variant())) out.push_back(Val::mor(m));
    return out;
  }

 private:
  int c_;
};

class Constant : public Presheaf {
 public:
  Constant(std::vector<Val> xs, Variant var, std::string name) : Presheaf(var), xs_(std::move(xs)), name_(name) {}
  Val act(const Mor&, const Val& x) const override { return x; }
  std::string name() const override { return name_; }

 protected:
  std::vector<Val> compute(int) const override { return xs_; }

 private:
  std::vector<Val> xs_;
  std::string name_;
};

class Coproduct : public Presheaf {
 public:
  Coproduct(Psh p, Psh q) : Presheaf(p->variant()), p_(std::move(p)), q_(std::move(q)) {}
  Val act(const Mor& s, const Val& x) const override {
    const Psh& side = x[0].as_int() == 0 ? p_ : q_;
    return Val::pair(x[0], side->act(s, x[1]));
  }
  std::string name() const override { return "(" + p_->name() + " + " + q_->name() + ")"; }

 protected:
  std::vector<Val> compute(int c) const override {
    std::vector<Val> out;
    for (const Val& x : p_->at(c)) out.push_back(Val::pair(Val::integer(0), x));
    for (const Val& x : q_->at(c)) out.push_back(Val::pair(Val::integer(1), x));
    return out;
  }

 private:
  Psh p_, q_;
};

class Product : public Presheaf {
 public:
  Product(Psh p, Psh q) : Presheaf(p->variant()), p_(std::move(p)), q_(std::move(q)) {}
  Val act(const Mor& s, const Val& x) const override { return Val::pair(p_->act(s, x[0]), q_->act(s, x[1])); }
  std::string name() const override { return "(" + p_->name() + " x " + q_->name() + ")"; }

 protected:
  std::vector<Val> compute(int c) const override {
    std::vector<Val> out;
    for (const Val& x : p_->at(c))
      for (const Val& y : q_->at(c)) out.push_back(Val::pair(x, y));
    return out;
  }

 private:
  Psh p_, q_;
};

class SigmaPsh : public Presheaf {
 public:
  explicit SigmaPsh(Fam a) : Presheaf(a->variant()), a_(std::move(a)) {}
  Val act(const Mor& s, const Val& x) const override {
    return Val::pair(a_->base()->act(s, x[0]), a_->act(s, x[0], x[1]));
  }
  std::string name() const override { return a_->base()->name() + "." + a_->name(); }

 protected:
  std::vector<Val> compute(int c) const override {
    std::vector<Val> out;
    for (const Val& g : a_->base()->at(c))
      for (const Val& x : a_->fiber(c, g)) out.push_back(Val::pair(g, x));
    return out;
  }

 private:
  Fam a_;
};

class Sub : public Presheaf {
 public:
  Sub(Psh p, std::function<bool(int, const Val&)> keep, std::string name)
      : Presheaf(p->variant()), p_(std::move(p)), keep_(std::move(keep)), name_(std::move(name)) {}
  Val act(const Mor& s, const Val& x) const override { return p_->act(s, x); }
  std::string name() const override { return name_; }

 protected:
  std::vector<Val> compute(int c) const override {
    std::vector<Val> out;
    for (const Val& x : p_->at(c))
      if (keep_(c, x)) out.push_back(x);
    return out;
  }

 private:
  Psh p_;
  std::function<bool(int, const Val&)> keep_;
  std::string name_;
};

class TablePsh : public Presheaf {
 public:
  TablePsh(Variant var, int top, std::map<int, std::vector<Val>> elems, std::map<std::pair<Mor, Val>, Val> action,
           std::string name)
      : Presheaf(var), top_(top), elems_(std::move(elems)), action_(std::move(action)), name_(std::move(name)) {}
  Val act(const Mor& s, const Val& x) const override {
    if (s.src > top_ || s.dst > top_) throw LevelExceeded(name_ + ": action beyond the tabulated stages");
    if (s == cube::identity(s.src, s.var)) return x;
    auto it = action_.find({s, x});
    if (it == action_.end()) throw std::out_of_range(name_ + ": no action entry for " + x.to_string());
    return it->second;
  }
  std::string name() const override { return name_; }

 protected:
  std::vector<Val> compute(int c) const override {
    if (c > top_) throw LevelExceeded(name_ + ": stage beyond the tabulated stages");
    auto it = elems_.find(c);
    return it == elems_.end() ? std::vector<Val>{} : it->second;
  }

 private:
  int top_;
  std::map<int, std::vector<Val>> elems_;
  std::map<std::pair<Mor, Val>, Val> action_;
  std::string name_;
};

}  // namespace

Psh yoneda(int c, Variant var) { return std::make_shared<Yoneda>(c, var); }
Psh interval(Variant var) { return yoneda(1, var); }
Psh terminal(Variant var) { return std::make_shared<Constant>(std::vector<Val>{Val()}, var, "1"); }
Psh constant(std::vector<Val> elems, Variant var, std::string name) {
  return std::make_shared<Constant>(std::move(elems), var, std::move(name));
}
Psh coproduct(Psh p, Psh q) { return std::make_shared<Coproduct>(std::move(p), std::move(q)); }
Psh product(Psh p, Psh q) { return std::make_shared<Product>(std::move(p), std::move(q)); }
Psh sub(Psh p, std::function<bool(int, const Val&)> keep, std::string name) {
  return std::make_shared<Sub>(std::move(p), std::move(keep), std::move(name));
}
Psh table_presheaf(Variant var, int top, std::map<int, std::vector<Val>> elems,
                   std::map<std::pair<Mor, Val>, Val> action, std::string name) {
  return std::make_shared<TablePsh>(var, top, std::move(elems), std::move(action), std::move(name));
}
Psh sigma(Fam a) { return std::make_shared<SigmaPsh>(std::move(a)); }

bool enumerate_nat(const NatProblem& prob, const std::function<bool(const std::vector<Val>&)>& cb,
                   std::size_t cap) {
  const std::size_t n = prob.keys;
  std::vector<std::optional<Val>> cur(n);
  std::vector<std::size_t> trail;
  std::vector<std::pair<std::size_t, Val>> buf;
  std::size_t visited = 0;
  bool stopped = false;

  auto assign = [&](std::size_t i, const Val& v) {
    cur[i] = v;
    trail.push_back(i);
    buf.clear();
    prob.consequences(i, v, buf);
    for (auto& [j, w] : buf) {
      if (cur[j]) {
        if (*cur[j] != w) return false;
        continue;
      }
      if (prob.allowed && !prob.allowed(j, w)) return false;
      cur[j] = w;
      trail.push_back(j);
    }
    return true;
  };
  auto undo = [&](std::size_t mark) {
    while (trail.size() > mark) {
      cur[trail.back()].reset();
      trail.pop_back();
    }
  };

  std::function<void(std::size_t)> dfs = [&](std::size_t i) {
    while (i < n && cur[i]) ++i;
    if (i == n) {
      std::vector<Val> vals;
      vals.reserve(n);
      for (auto& v : cur) vals.push_back(*v);
      if (!cb(vals)) stopped = true;
      return;
    }
    for (const Val& v : prob.candidates(i)) {
      if (stopped) return;
      if (++visited > cap) throw cube::CapExceeded("natural-family search exceeded its cap");
      std::size_t mark = trail.size();
      // assign reuses buf, so copy the candidate first
      Val chosen = v;
      if (assign(i, chosen)) dfs(i + 1);
      undo(mark);
    }
  };
  dfs(0);
  return !stopped;
}

CheckResult check_functorial(const Presheaf& p, int level) {
  for (int c = 0; c <= level; ++c)
    for (const Val& x : p.at(c)) {
      if (p.act(cube::identity(c, p.variant()), x) != x) return {false, "identity fails at " + x.to_string()};
      for (int d = 0; d <= level; ++d)
        for (const Mor& s : cube::homs(d, c, p.variant())) {
          Val xs = p.act(s, x);
          if (!p.has(d, xs)) return {false, "restriction leaves the carrier at " + x.to_string()};
          for (int d2 = 0; d2 <= level; ++d2)
            for (const Mor& t : cube::homs(d2, d, p.variant()))
              if (p.act(t, xs) != p.act(cube::compose(s, t), x))
                return {false, "composition fails at " + x.to_string() + " along " + cube::to_string(s)};
        }
    }
  return {};
}

CheckResult check_functorial(const Family& a, int level) {
  const Presheaf& base = *a.base();
  for (int c = 0; c <= level; ++c)
    for (const Val& g : base.at(c))
      for (const Val& x : a.fiber(c, g)) {
        if (a.act(cube::identity(c, a.variant()), g, x) != x) return {false, "identity fails at " + x.to_string()};
        for (int d = 0; d <= level; ++d)
          for (const Mor& s : cube::homs(d, c, a.variant())) {
            Val gs = base.act(s, g);
            Val xs = a.act(s, g, x);
            if (!a.in_fiber(d, gs, xs)) return {false, "restriction leaves the fiber at " + x.to_string()};
            for (int d2 = 0; d2 <= level; ++d2)
              for (const Mor& t : cube::homs(d2, d, a.variant()))
                if (a.act(t, gs, xs) != a.act(cube::compose(s, t), g, x))
                  return {false, "composition fails at " + x.to_string()};
          }
      }
  return {};
}

bool is_discrete(const Presheaf& p, int level) {
  for (int c = 0; c + 1 <= level; ++c) {
    Mor i0 = cube::face(c, 0, p.variant());
    Mor pi = cube::drop_last(c, p.variant());
    for (const Val& x : p.at(c + 1))
      if (p.act(pi, p.act(i0, x)) != x) return false;
  }
  return true;
}

std::size_t component_count(const Presheaf& p, int level) {
  std::map<std::pair<int, Val>, std::size_t> id;
  std::vector<std::size_t> parent;
  for (int c = 0; c <= level; ++c)
    for (const Val& x : p.at(c)) {
      id.emplace(std::make_pair(c, x), parent.size());
      parent.push_back(parent.size());
    }
  std::function<std::size_t(std::size_t)> find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (int c = 0; c <= level; ++c)
    for (const Val& x : p.at(c))
      for (int d = 0; d <= c; ++d)
        for (const Mor& s : cube::homs(d, c, p.variant())) {
          std::size_t a = find(id.at({c, x})), b = find(id.at({d, p.act(s, x)}));
          if (a != b) parent[a] = b;
        }
  std::size_t roots = 0;
  for (std::size_t i = 0; i < parent.size(); ++i)
    if (find(i) == i) ++roots;
  return roots;
}

CheckResult check_connected(const Presheaf& p, int level) {
  std::size_t k = component_count(p, level);
  // Natural maps into the constant two-element presheaf are 2^k; constant ones are 2.
  std::ostringstream os;
  os << "components=" << k << " maps_to_2=" << (k < 63 ? (std::uint64_t{1} << k) : 0);
  return {k == 1, os.str()};
}

CheckResult check_exponential_iso(const Psh& a, int c1, int c, int level) {
  const Variant var = a->variant();
  if (c1 + c > cube::kMaxDim) throw LevelExceeded("exponential check beyond the cube cap");
  struct Key {
    int d;
    Mor s, t;
  };
  std::vector<Key> keys;
  std::map<std::pair<Mor, Mor>, std::size_t> index;
  for (int d = level; d >= 0; --d)
    for (const Mor& s : cube::homs(d, c1, var))
      for (const Mor& t : cube::homs(d, c, var)) {
        index.emplace(std::make_pair(s, t), keys.size());
        keys.push_back({d, s, t});
      }
  // Within a stage, visit keys with larger orbits first so they force the rest.
  std::vector<std::size_t> orbit(keys.size(), 0);
  for (std::size_t k = 0; k < keys.size(); ++k) {
    std::set<std::size_t> seen;
    for (const Mor& u : cube::homs(keys[k].d, keys[k].d, var))
      seen.insert(index.at({cube::compose(keys[k].s, u), cube::compose(keys[k].t, u)}));
    orbit[k] = seen.size();
  }
  std::vector<std::size_t> order(keys.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    if (keys[x].d != keys[y].d) return keys[x].d > keys[y].d;
    return orbit[x] > orbit[y];
  });
  std::vector<std::size_t> pos(keys.size());
  for (std::size_t k = 0; k < order.size(); ++k) pos[order[k]] = k;

  NatProblem prob;
  prob.keys = keys.size();
  prob.candidates = [&](std::size_t i) -> const std::vector<Val>& { return a->at(keys[order[i]].d); };
  prob.consequences = [&](std::size_t i, const Val& v, std::vector<std::pair<std::size_t, Val>>& out) {
    const Key& k = keys[order[i]];
    for (int d2 = 0; d2 <= level; ++d2)
      for (const Mor& u : cube::homs(d2, k.d, var))
        out.emplace_back(pos[index.at({cube::compose(k.s, u), cube::compose(k.t, u)})], a->act(u, v));
  };
  std::set<std::vector<Val>> found;
  enumerate_nat(prob, [&](const std::vector<Val>& vals) {
    found.insert(vals);
    return true;
  });

  std::set<std::vector<Val>> expected;
  for (const Val& x : a->at(c1 + c)) {
    std::vector<Val> vals(keys.size());
    for (std::size_t k = 0; k < keys.size(); ++k)
      vals[pos[k]] = a->act(cube::pair(keys[k].s, keys[k].t), x);
    expected.insert(vals);
  }
  std::ostringstream os;
  os << "natural=" << found.size() << " elements=" << a->at(c1 + c).size();
  bool ok = found == expected && expected.size() == a->at(c1 + c).size();
  return {ok, os.str()};
}

Extension lift_iea(const Sieve& phi, const SliceFunctor& a, const SliceFunctor& b, const IsoOver& f) {
  Extension out;
  out.d.c = b.c;
  out.d.carrier = [phi, a, b](const Mor& s) { return phi.contains(s) ? a.carrier(s) : b.carrier(s); };
  IsoOver g;
  g.fwd = [phi, f](const Mor& s, const Val& x) { return phi.contains(s) ? f.fwd(s, x) : x; };
  g.bwd = [phi, f](const Mor& s, const Val& x) { return phi.contains(s) ? f.bwd(s, x) : x; };
  // Conjugate the action of B by g.
  out.d.act = [phi, a, b, g](const Mor& s, const Mor& t, const Val& x) {
    if (phi.contains(s)) return a.act(s, t, x);
    return g.bwd(cube::compose(s, t), b.act(s, t, g.fwd(s, x)));
  };
  out.g = g;
  return out;
}

namespace {

bool in_list(const std::vector<Val>& xs, const Val& x) { return std::find(xs.begin(), xs.end(), x) != xs.end(); }

}  // namespace

CheckResult check_slice_functor(const SliceFunctor& f, int level, Variant var) {
  for (int d = 0; d <= level; ++d)
    for (const Mor& s : cube::homs(d, f.c, var)) {
      auto xs = f.carrier(s);
      for (const Val& x : xs) {
        if (f.act(s, cube::identity(d, var), x) != x) return {false, "identity fails at " + cube::to_string(s)};
        for (int d2 = 0; d2 <= level; ++d2)
          for (const Mor& t : cube::homs(d2, d, var)) {
            Mor st = cube::compose(s, t);
            Val xt = f.act(s, t, x);
            if (!in_list(f.carrier(st), xt)) return {false, "action leaves the carrier"};
            for (int d3 = 0; d3 <= level; ++d3)
              for (const Mor& u : cube::homs(d3, d2, var))
                if (f.act(st, u, xt) != f.act(s, cube::compose(t, u), x))
                  return {false, "composition fails at " + cube::to_string(s)};
          }
      }
    }
  return {};
}

CheckResult check_iso_natural(const SliceFunctor& d, const SliceFunctor& b, const IsoOver& g, int level, Variant var) {
  for (int k = 0; k <= level; ++k)
    for (const Mor& s : cube::homs(k, d.c, var)) {
      auto ds = d.carrier(s);
      auto bs = b.carrier(s);
      if (ds.size() != bs.size()) return {false, "carrier sizes differ at " + cube::to_string(s)};
      for (const Val& x : ds) {
        Val y = g.fwd(s, x);
        if (!in_list(bs, y) || g.bwd(s, y) != x) return {false, "not invertible at " + cube::to_string(s)};
        for (int k2 = 0; k2 <= level; ++k2)
          for (const Mor& t : cube::homs(k2, k, var))
            if (g.fwd(cube::compose(s, t), d.act(s, t, x)) != b.act(s, t, y))
              return {false, "not natural at " + cube::to_string(s)};
      }
      for (const Val& y : bs)
        if (g.fwd(s, g.bwd(s, y)) != y) return {false, "not invertible at " + cube::to_string(s)};
    }
  return {};
}

UniversePresheaf::UniversePresheaf(UniverseSample u, Variant var, int level, std::size_t cap)
    : Presheaf(var), u_(std::move(u)), level_(level), cap_(cap) {}

namespace {

struct SliceShape {
  std::vector<Mor> objects;  // sigma : c' -> c, c' <= level
  std::map<Mor, std::size_t> object_index;
  struct Arrow {
    std::size_t from, to;  // sigma, sigma tau
    Mor tau;
  };
  std::vector<Arrow> arrows;  // tau non-identity
  std::map<std::pair<std::size_t, Mor>, std::size_t> arrow_index;
};

SliceShape slice_shape(int c, int level, Variant var) {
  SliceShape sh;
  for (int d = 0; d <= level; ++d)
    for (const Mor& s : cube::homs(d, c, var)) {
      sh.object_index.emplace(s, sh.objects.size());
      sh.objects.push_back(s);
    }
  for (std::size_t i = 0; i < sh.objects.size(); ++i) {
    const Mor& s = sh.objects[i];
    for (int d = 0; d <= level; ++d)
      for (const Mor& t : cube::homs(d, s.src, var)) {
        if (t == cube::identity(s.src, var)) continue;
        sh.arrow_index.emplace(std::make_pair(i, t), sh.arrows.size());
        sh.arrows.push_back({i, sh.object_index.at(cube::compose(s, t)), t});
      }
  }
  return sh;
}

}  // namespace

std::vector<Val> UniversePresheaf::compute(int c) const {
  const Variant var = variant();
  SliceShape sh = slice_shape(c, level_, var);
  const std::size_t no = sh.objects.size(), na = sh.arrows.size();
  std::vector<Val> out;
  std::vector<std::size_t> types(no, 0);
  std::vector<std::vector<std::size_t>> maps(na);
  std::vector<bool> set(na, false);
  std::size_t visited = 0;

  auto map_of = [&](std::size_t obj, const Mor& t) -> const std::vector<std::size_t>* {
    if (t == cube::identity(t.src, var)) return nullptr;  // identity
    return &maps[sh.arrow_index.at({obj, t})];
  };
  auto apply = [&](std::size_t obj, const Mor& t, std::size_t x) {
    const auto* m = map_of(obj, t);
    return m ? (*m)[x] : x;
  };
  // maps(s, t u) = maps(s t, u) . maps(s, t), checked once all three are known.
  auto consistent = [&](std::size_t a) {
    const auto& ar = sh.arrows[a];
    const Mor& s = sh.objects[ar.from];
    for (std::size_t b = 0; b < na; ++b) {
      if (!set[b]) continue;
      const auto& br = sh.arrows[b];
      for (int pass = 0; pass < 2; ++pass) {
        const auto& first = pass == 0 ? ar : br;
        const auto& second = pass == 0 ? br : ar;
        if (second.from != first.to) continue;
        Mor tu = cube::compose(first.tau, second.tau);
        bool tu_id = tu == cube::identity(tu.src, var);
        if (!tu_id && !set[sh.arrow_index.at({first.from, tu})]) continue;
        for (std::size_t x = 0; x < u_.types[types[first.from]].elems.size(); ++x)
          if (apply(first.from, tu, x) != apply(second.from, second.tau, apply(first.from, first.tau, x))) return false;
      }
    }
    // a as the composite of two arrows set earlier.
    for (std::size_t b = 0; b < na; ++b) {
      const auto& br = sh.arrows[b];
      if (!set[b] || b == a || br.from != ar.from) continue;
      for (std::size_t b2 = 0; b2 < na; ++b2) {
        const auto& cr = sh.arrows[b2];
        if (!set[b2] || b2 == a || cr.from != br.to || cube::compose(br.tau, cr.tau) != ar.tau) continue;
        for (std::size_t x = 0; x < u_.types[types[ar.from]].elems.size(); ++x)
          if (apply(ar.from, ar.tau, x) != apply(cr.from, cr.tau, apply(br.from, br.tau, x))) return false;
      }
    }
    (void)s;
    return true;
  };

  std::function<void(std::size_t)> arrows_dfs = [&](std::size_t a) {
    if (a == na) {
      std::vector<Val> ts, ms;
      for (auto t : types) ts.push_back(Val::integer(static_cast<long long>(t)));
      for (auto& m : maps) {
        std::vector<Val> row;
        for (auto x : m) row.push_back(Val::integer(static_cast<long long>(x)));
        ms.push_back(Val::tuple(std::move(row)));
      }
      out.push_back(Val::pair(Val::tuple(std::move(ts)), Val::tuple(std::move(ms))));
      return;
    }
    const auto& ar = sh.arrows[a];
    std::size_t from_n = u_.types[types[ar.from]].elems.size();
    std::size_t to_n = u_.types[types[ar.to]].elems.size();
    std::vector<std::size_t> m(from_n, 0);
    for (;;) {
      if (++visited > cap_) throw cube::CapExceeded("universe lifting exceeded its cap");
      maps[a] = m;
      set[a] = true;
      if (consistent(a)) arrows_dfs(a + 1);
      set[a] = false;
      std::size_t k = 0;
      while (k < from_n && ++m[k] == to_n) m[k++] = 0;
      if (k == from_n || to_n == 0) break;
    }
  };
  std::function<void(std::size_t)> types_dfs = [&](std::size_t o) {
    if (o == no) {
      arrows_dfs(0);
      return;
    }
    for (std::size_t t = 0; t < u_.types.size(); ++t) {
      types[o] = t;
      types_dfs(o + 1);
    }
  };
  types_dfs(0);
  return out;
}

Val UniversePresheaf::act(const Mor& r, const Val& x) const {
  const Variant var = variant();
  SliceShape big = slice_shape(r.dst, level_, var);
  SliceShape small = slice_shape(r.src, level_, var);
  std::vector<Val> ts, ms;
  for (const Mor& s : small.objects) ts.push_back(x[0][big.object_index.at(cube::compose(r, s))]);
  for (const auto& ar : small.arrows) {
    std::size_t from = big.object_index.at(cube::compose(r, small.objects[ar.from]));
    ms.push_back(x[1][big.arrow_index.at({from, ar.tau})]);
  }
  return Val::pair(Val::tuple(std::move(ts)), Val::tuple(std::move(ms)));
}

SliceFunctor UniversePresheaf::decode(int c, const Val& x) const {
  auto sh = std::make_shared<SliceShape>(slice_shape(c, level_, variant()));
  SliceFunctor f;
  f.c = c;
  auto u = u_;
  Variant var = variant();
  f.carrier = [sh, x, u](const Mor& s) { return u.types[x[0][sh->object_index.at(s)].as_int()].elems; };
  f.act = [sh, x, u, var](const Mor& s, const Mor& t, const Val& v) {
    if (t == cube::identity(t.src, var)) return v;
    std::size_t from = sh->object_index.at(s);
    const auto& src = u.types[x[0][from].as_int()].elems;
    std::size_t k = std::find(src.begin(), src.end(), v) - src.begin();
    std::size_t to = sh->object_index.at(cube::compose(s, t));
    const auto& dst = u.types[x[0][to].as_int()].elems;
    return dst[x[1][sh->arrow_index.at({from, t})][k].as_int()];
  };
  return f;
}

std::shared_ptr<const UniversePresheaf> hs_lift(UniverseSample u, Variant var, int level, std::size_t cap) {
  return std::make_shared<UniversePresheaf>(std::move(u), var, level, cap);
}

}  // namespace cas::psh
