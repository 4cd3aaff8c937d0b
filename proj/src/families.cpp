#include <algorithm>
#include <numeric>

#include "cas/psh.hpp"

namespace cas::psh {

namespace {

class ConstFamily : public Family {
 public:
  ConstFamily(Psh base, Psh fib) : Family(std::move(base)), fib_(std::move(fib)) {}
  Val act(const Mor& s, const Val&, const Val& x) const override { return fib_->act(s, x); }
  std::string name() const override { return fib_->name(); }

 protected:
  std::vector<Val> compute(int c, const Val&) const override { return fib_->at(c); }

 private:
  Psh fib_;
};

class Reindex : public Family {
 public:
  Reindex(Fam a, Psh base, std::function<Val(int, const Val&)> f, std::string name)
      : Family(std::move(base)), a_(std::move(a)), f_(std::move(f)), name_(std::move(name)) {}
  Val act(const Mor& s, const Val& g, const Val& x) const override { return a_->act(s, f_(s.dst, g), x); }
  std::string name() const override { return name_; }

 protected:
  std::vector<Val> compute(int c, const Val& g) const override { return a_->fiber(c, f_(c, g)); }

 private:
  Fam a_;
  std::function<Val(int, const Val&)> f_;
  std::string name_;
};

Mor vertex(int c, unsigned v, Variant var) { return cube::make(0, c, {v}, var); }

class Nabla : public Family {
 public:
  Nabla(Psh base, std::function<std::vector<Val>(const Val&)> points, std::string name)
      : Family(std::move(base)), points_(std::move(points)), name_(std::move(name)) {}
  Val act(const Mor& s, const Val&, const Val& x) const override {
    std::vector<Val> out;
    for (unsigned v = 0; v < s.rows(); ++v) out.push_back(x[s.at(v)]);
    return Val::tuple(std::move(out));
  }
  std::string name() const override { return name_; }

 protected:
  std::vector<Val> compute(int c, const Val& g) const override {
    const unsigned n = 1u << c;
    std::vector<std::vector<Val>> opts(n);
    for (unsigned v = 0; v < n; ++v) opts[v] = points_(base()->act(vertex(c, v, variant()), g));
    std::vector<Val> out;
    std::vector<std::size_t> idx(n, 0);
    for (auto& o : opts)
      if (o.empty()) return out;
    for (;;) {
      std::vector<Val> x;
      for (unsigned v = 0; v < n; ++v) x.push_back(opts[v][idx[v]]);
      out.push_back(Val::tuple(std::move(x)));
      unsigned k = 0;
      while (k < n && ++idx[k] == opts[k].size()) idx[k++] = 0;
      if (k == n) break;
    }
    return out;
  }

 private:
  std::function<std::vector<Val>(const Val&)> points_;
  std::string name_;
};

class SigmaFamily : public Family {
 public:
  SigmaFamily(Fam a, Fam b) : Family(a->base()), a_(std::move(a)), b_(std::move(b)) {}
  Val act(const Mor& s, const Val& g, const Val& x) const override {
    return Val::pair(a_->act(s, g, x[0]), b_->act(s, Val::pair(g, x[0]), x[1]));
  }
  std::string name() const override { return "Sigma(" + a_->name() + "," + b_->name() + ")"; }

 protected:
  std::vector<Val> compute(int c, const Val& g) const override {
    std::vector<Val> out;
    for (const Val& a : a_->fiber(c, g))
      for (const Val& b : b_->fiber(c, Val::pair(g, a))) out.push_back(Val::pair(a, b));
    return out;
  }

 private:
  Fam a_, b_;
};

class PathFamily : public Family {
 public:
  explicit PathFamily(Fam a) : Family(ctx_aa(a)), a_(std::move(a)) {}
  Val act(const Mor& s, const Val& g, const Val& y) const override {
    Val gp = a_->base()->act(cube::drop_last(s.dst, variant()), g[0][0]);
    return a_->act(cube::extend(s), gp, y);
  }
  std::string name() const override { return "Path(" + a_->name() + ")"; }

 protected:
  std::vector<Val> compute(int c, const Val& g) const override {
    const Val& g0 = g[0][0];
    Val gp = a_->base()->act(cube::drop_last(c, variant()), g0);
    Mor i0 = cube::face(c, 0, variant()), i1 = cube::face(c, 1, variant());
    std::vector<Val> out;
    for (const Val& y : a_->fiber(c + 1, gp))
      if (a_->act(i0, gp, y) == g[0][1] && a_->act(i1, gp, y) == g[1]) out.push_back(y);
    return out;
  }

 private:
  Fam a_;
};

class IdFamily : public Family {
 public:
  IdFamily(Fam a, int level) : Family(ctx_aa(a)), a_(std::move(a)), path_(path_family(a_)), level_(level) {}
  Val act(const Mor& s, const Val& g, const Val& x) const override {
    Sieve phi = Sieve::from_val(s.dst, variant(), level_, x[1]);
    return Val::pair(path_->act(s, g, x[0]), phi.pull(s).to_val(level_));
  }
  std::string name() const override { return "Id(" + a_->name() + ")"; }

 protected:
  std::vector<Val> compute(int c, const Val& g) const override {
    std::vector<Val> out;
    for (const Val& y : path_->fiber(c, g)) {
      Sieve k = constancy(c, g, y);
      for (const Sieve& phi : all_sieves(c, variant(), level_, &k)) out.push_back(Val::pair(y, phi.to_val(level_)));
    }
    return out;
  }

 private:
  Sieve constancy(int c, const Val& g, const Val& y) const {
    Fam a = a_;
    Fam path = path_;
    Val g0 = g[0][0], x0 = g[0][1];
    Variant var = variant();
    return Sieve::fn(
        c, var,
        [a, path, g, g0, x0, y, c, var](const Mor& s) {
          Val ys = path->act(s, g, y);
          Val gs = a->base()->act(s, g0);
          return ys == refl_path(a, s.src, gs, a->act(s, g0, x0));
        },
        "const");
  }

  Fam a_, path_;
  int level_;
};

}  // namespace

Fam const_family(Psh base, Psh fiber) { return std::make_shared<ConstFamily>(std::move(base), std::move(fiber)); }

Fam reindex(Fam a, Psh base, std::function<Val(int, const Val&)> f, std::string name) {
  return std::make_shared<Reindex>(std::move(a), std::move(base), std::move(f), std::move(name));
}

Fam nabla(Psh base, std::function<std::vector<Val>(const Val&)> points, std::string name) {
  return std::make_shared<Nabla>(std::move(base), std::move(points), std::move(name));
}

Fam sigma_family(Fam a, Fam b) { return std::make_shared<SigmaFamily>(std::move(a), std::move(b)); }

Psh ctx_aa(Fam a) {
  Psh ga = sigma(a);
  Fam weak = reindex(a, ga, [](int, const Val& x) { return x[0]; }, a->name());
  return sigma(weak);
}

Fam path_family(Fam a) { return std::make_shared<PathFamily>(std::move(a)); }
Fam id_family(Fam a, int level) { return std::make_shared<IdFamily>(std::move(a), level); }

Val refl_path(const Fam& a, int c, const Val& g, const Val& x) { return a->act(cube::drop_last(c, a->variant()), g, x); }

PiFamily::PiFamily(Fam a, Fam b, int level) : Family(a->base()), a_(std::move(a)), b_(std::move(b)), level_(level) {}

std::string PiFamily::name() const { return "Pi(" + a_->name() + "," + b_->name() + ")"; }

const PiFamily::Layout& PiFamily::layout(int c, const Val& g) const {
  auto key = std::make_pair(c, g);
  auto it = layouts_.find(key);
  if (it != layouts_.end()) return it->second;
  const Variant var = variant();
  std::vector<std::pair<Mor, Val>> keys;
  for (int d = level_; d >= 0; --d)
    for (const Mor& s : cube::homs(d, c, var))
      for (const Val& a : a_->fiber(d, base()->act(s, g))) keys.emplace_back(s, a);
  std::map<std::pair<Mor, Val>, std::size_t> raw;
  for (std::size_t k = 0; k < keys.size(); ++k) raw.emplace(keys[k], k);
  // Within a stage, keys with larger orbits first so they force the others.
  std::vector<std::size_t> orbit(keys.size());
  for (std::size_t k = 0; k < keys.size(); ++k) {
    const auto& [s, a] = keys[k];
    Val gs = base()->act(s, g);
    std::set<std::size_t> seen;
    for (const Mor& u : cube::homs(s.src, s.src, var)) seen.insert(raw.at({cube::compose(s, u), a_->act(u, gs, a)}));
    orbit[k] = seen.size();
  }
  std::vector<std::size_t> order(keys.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    if (keys[x].first.src != keys[y].first.src) return keys[x].first.src > keys[y].first.src;
    return orbit[x] > orbit[y];
  });
  Layout lay;
  for (std::size_t k : order) {
    lay.index.emplace(keys[k], lay.keys.size());
    lay.keys.push_back(keys[k]);
  }
  return layouts_.emplace(key, std::move(lay)).first->second;
}

Val PiFamily::value(int c, const Val& g, const Val& f, const Mor& s, const Val& a) const {
  const Layout& lay = layout(c, g);
  auto it = lay.index.find({s, a});
  if (it == lay.index.end())
    throw LevelExceeded("Pi value at stage " + std::to_string(s.src) + " beyond level " + std::to_string(level_));
  return f[it->second];
}

std::vector<Val> PiFamily::compute(int c, const Val& g) const {
  const Layout& lay = layout(c, g);
  const Variant var = variant();
  std::vector<std::vector<Val>> cands(lay.keys.size());
  for (std::size_t k = 0; k < lay.keys.size(); ++k) {
    const auto& [s, a] = lay.keys[k];
    cands[k] = b_->fiber(s.src, Val::pair(base()->act(s, g), a));
  }
  NatProblem prob;
  prob.keys = lay.keys.size();
  prob.candidates = [&](std::size_t k) -> const std::vector<Val>& { return cands[k]; };
  prob.consequences = [&](std::size_t k, const Val& v, std::vector<std::pair<std::size_t, Val>>& out) {
    const auto& [s, a] = lay.keys[k];
    Val gs = base()->act(s, g);
    Val ga = Val::pair(gs, a);
    for (int d = 0; d <= level_; ++d)
      for (const Mor& t : cube::homs(d, s.src, var))
        out.emplace_back(lay.index.at({cube::compose(s, t), a_->act(t, gs, a)}), b_->act(t, ga, v));
  };
  std::vector<Val> out;
  enumerate_nat(prob, [&](const std::vector<Val>& vals) {
    out.push_back(Val::tuple(vals));
    return true;
  });
  std::sort(out.begin(), out.end());
  return out;
}

Val PiFamily::act(const Mor& r, const Val& g, const Val& f) const {
  const Layout& small = layout(r.src, base()->act(r, g));
  std::vector<Val> out;
  out.reserve(small.keys.size());
  for (const auto& [s, a] : small.keys) out.push_back(value(r.dst, g, f, cube::compose(r, s), a));
  return Val::tuple(std::move(out));
}

std::shared_ptr<const PiFamily> pi_family(Fam a, Fam b, int level) {
  return std::make_shared<PiFamily>(std::move(a), std::move(b), level);
}

}  // namespace cas::psh
