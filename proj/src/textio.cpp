#include "cas/textio.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace cas::textio {

namespace {

struct Tok {
  std::string text;
  int line = 0, col = 0;
};

std::vector<Tok> tokenize(std::string_view s, std::vector<std::string>& comments) {
  std::vector<Tok> out;
  int line = 1, col = 1;
  bool line_start = true, header = true;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
        line_start = true;
      } else {
        ++col;
      }
    }
  };
  while (i < s.size()) {
    char ch = s[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      advance(1);
      continue;
    }
    if (ch == '#' && line_start) {
      std::size_t e = s.find('\n', i);
      if (e == std::string_view::npos) e = s.size();
      if (header) comments.emplace_back(s.substr(i, e - i));
      advance(e - i);
      continue;
    }
    line_start = false;
    header = false;
    if (ch == '{' || ch == '}') {
      out.push_back({std::string(1, ch), line, col});
      advance(1);
      continue;
    }
    Tok t{"", line, col};
    int depth = 0;
    std::size_t j = i;
    while (j < s.size()) {
      char c = s[j];
      if (depth == 0 && (std::isspace(static_cast<unsigned char>(c)) || c == '{' || c == '}')) break;
      if (c == '(' || c == '[') ++depth;
      if ((c == ')' || c == ']') && depth > 0) --depth;
      ++j;
    }
    if (depth != 0) throw ParseError(line, col, "unbalanced brackets");
    t.text = std::string(s.substr(i, j - i));
    out.push_back(t);
    advance(j - i);
  }
  return out;
}

struct Parser {
  std::vector<Tok> toks;
  std::size_t i = 0;
  Variant var = Variant::Ord;
  int last_line = 1;

  bool done() const { return i >= toks.size(); }
  const Tok& peek() const {
    if (done()) throw ParseError(last_line, 0, "unexpected end of input");
    return toks[i];
  }
  Tok next() {
    const Tok& t = peek();
    last_line = t.line;
    ++i;
    return t;
  }
  [[noreturn]] void fail(const Tok& t, const std::string& msg) const { throw ParseError(t.line, t.col, msg); }
  void expect(const std::string& w) {
    Tok t = next();
    if (t.text != w) fail(t, "expected '" + w + "', found '" + t.text + "'");
  }
  bool accept(const std::string& w) {
    if (!done() && toks[i].text == w) {
      ++i;
      return true;
    }
    return false;
  }
  std::string word() {
    Tok t = next();
    if (t.text == "{" || t.text == "}") fail(t, "expected a name");
    return t.text;
  }
  int integer(int lo, int hi) {
    Tok t = next();
    try {
      std::size_t used = 0;
      int v = std::stoi(t.text, &used);
      if (used != t.text.size() || v < lo || v > hi) throw std::invalid_argument("range");
      return v;
    } catch (const std::exception&) {
      fail(t, "expected an integer in " + std::to_string(lo) + ".." + std::to_string(hi));
    }
  }
  Val value_of(const Tok& t, const std::string& text) const {
    try {
      return parse_val(text, var);
    } catch (const std::exception& e) {
      fail(t, std::string("bad value: ") + e.what());
    }
  }
  Val value() {
    Tok t = next();
    if (t.text == "{" || t.text == "}") fail(t, "expected a value");
    return value_of(t, t.text);
  }
  Mor mor_of(const Tok& t, const std::string& text) const {
    try {
      return cube::parse_table(text, var);
    } catch (const std::exception& e) {
      fail(t, std::string("bad morphism: ") + e.what());
    }
  }
  std::vector<Val> value_block() {
    expect("{");
    std::vector<Val> out;
    while (peek().text != "}") out.push_back(value());
    next();
    return out;
  }
  // "a↦b" or "a|->b" at bracket depth 0.
  std::pair<Val, Val> arrow_entry() {
    Tok t = next();
    int depth = 0;
    for (std::size_t k = 0; k < t.text.size(); ++k) {
      char c = t.text[k];
      if (c == '(' || c == '[') ++depth;
      if (c == ')' || c == ']') --depth;
      if (depth != 0) continue;
      std::size_t len = t.text.compare(k, 3, "↦") == 0 ? 3 : t.text.compare(k, 3, "|->") == 0 ? 3 : 0;
      if (len) return {value_of(t, t.text.substr(0, k)), value_of(t, t.text.substr(k + len))};
    }
    fail(t, "expected an entry x↦y");
  }
  std::vector<std::pair<Val, Val>> arrow_block() {
    expect("{");
    std::vector<std::pair<Val, Val>> out;
    while (peek().text != "}") out.push_back(arrow_entry());
    next();
    return out;
  }
  Ref ref() {
    Tok t = next();
    if (!t.text.empty() && t.text[0] == '#') {
      try {
        std::size_t used = 0;
        unsigned long k = std::stoul(t.text.substr(1), &used);
        if (used + 1 != t.text.size()) throw std::invalid_argument("index");
        return Ref{k, Val()};
      } catch (const std::exception&) {
        fail(t, "expected #<index>");
      }
    }
    return Ref{std::nullopt, value_of(t, t.text)};
  }

  BaseDecl base() {
    BaseDecl b;
    b.line = last_line;
    Tok t = next();
    if (t.text == "constant") {
      b.kind = BaseDecl::Kind::Constant;
      b.elems = value_block();
    } else if (t.text == "yoneda") {
      b.kind = BaseDecl::Kind::Yoneda;
      b.dim = integer(0, 6);
    } else if (t.text == "table") {
      b.kind = BaseDecl::Kind::Table;
      b.dim = integer(0, 4);
      expect("{");
      while (peek().text != "}") {
        Tok k = next();
        if (k.text == "object") {
          int c = integer(0, b.dim);
          if (b.objects.count(c)) fail(k, "object " + std::to_string(c) + " declared twice");
          b.objects[c] = value_block();
        } else if (k.text == "action") {
          Tok m = next();
          b.actions.emplace_back(mor_of(m, m.text), arrow_block());
        } else {
          fail(k, "expected 'object' or 'action'");
        }
      }
      next();
    } else {
      fail(t, "expected constant, yoneda or table");
    }
    return b;
  }

  SieveDecl sieve() {
    SieveDecl s;
    s.line = last_line;
    s.name = word();
    expect("at");
    s.at = integer(0, 6);
    if (accept("top")) {
      s.kind = SieveDecl::Kind::Top;
    } else if (accept("bot")) {
      s.kind = SieveDecl::Kind::Bot;
    } else {
      s.kind = SieveDecl::Kind::Table;
      expect("{");
      while (peek().text != "}") {
        Tok t = next();
        auto p = t.text.rfind(':');
        if (p == std::string::npos || p + 2 != t.text.size() || (t.text[p + 1] != '0' && t.text[p + 1] != '1'))
          fail(t, "expected <mor>:0 or <mor>:1");
        Mor m = mor_of(t, t.text.substr(0, p));
        if (m.dst != s.at) fail(t, "row does not land in object " + std::to_string(s.at));
        s.rows.emplace_back(m, t.text[p + 1] == '1');
      }
      next();
    }
    return s;
  }

  FamilyDecl family() {
    FamilyDecl f;
    f.line = last_line;
    f.name = word();
    Tok k = next();
    f.kind = k.text;
    if (f.kind == "discrete") {
      f.elems = value_block();
    } else if (f.kind == "nabla") {
      expect("{");
      while (peek().text != "}") {
        expect("over");
        Val g = value();
        f.points.emplace_back(g, value_block());
      }
      next();
    } else if (f.kind == "path" || f.kind == "id") {
      f.args.push_back(word());
    } else if (f.kind == "sigma" || f.kind == "pi") {
      f.args.push_back(word());
      f.args.push_back(word());
    } else if (f.kind == "glue") {
      f.args.push_back(word());
      f.args.push_back(word());
      expect("{");
      while (peek().text != "}") {
        Tok t = next();
        if (t.text == "cof") {
          int c = accept("*") ? -1 : integer(0, 6);
          f.cof[c] = value_block();
        } else if (t.text == "map") {
          f.map = arrow_block();
        } else {
          fail(t, "expected 'cof' or 'map'");
        }
      }
      next();
    } else {
      fail(k, "unknown family kind '" + k.text + "'");
    }
    return f;
  }

  ProblemDecl problem(bool universe) {
    ProblemDecl p;
    p.line = last_line;
    p.universe = universe;
    p.name = word();
    expect("{");
    std::set<std::string> seen;
    while (peek().text != "}") {
      Tok t = next();
      if (!seen.insert(t.text).second) fail(t, "duplicate field '" + t.text + "'");
      if (t.text == "family")
        p.family = word();
      else if (t.text == "stage")
        p.stage = integer(0, 5);
      else if (t.text == "face")
        p.face = integer(0, 1);
      else if (t.text == "sieve")
        p.sieve = word();
      else if (!universe && t.text == "point")
        p.point = value();
      else if (!universe && t.text == "tube")
        p.tube = ref();
      else if (!universe && t.text == "base")
        p.base = ref();
      else
        fail(t, "unknown field '" + t.text + "'");
    }
    Tok close = next();
    for (const char* need : {"family", "stage", "face", "sieve"})
      if (!seen.count(need)) fail(close, std::string("missing field '") + need + "'");
    if (!universe)
      for (const char* need : {"point", "tube"})
        if (!seen.count(need)) fail(close, std::string("missing field '") + need + "'");
    return p;
  }
};

std::string vals(const std::vector<Val>& xs) {
  std::string s = "{";
  for (const Val& x : xs) s += " " + x.to_string();
  return s + " }";
}

std::string arrows(const std::vector<std::pair<Val, Val>>& xs) {
  std::string s = "{";
  for (const auto& [a, b] : xs) s += " " + a.to_string() + "↦" + b.to_string();
  return s + " }";
}

std::string ref_string(const Ref& r) { return r.index ? "#" + std::to_string(*r.index) : r.value.to_string(); }

}  // namespace

ProbFile parse_prob(std::string_view text) {
  ProbFile f;
  Parser p;
  p.toks = tokenize(text, f.comments);
  p.expect("variant");
  {
    Tok t = p.next();
    if (t.text != "B" && t.text != "B_ord") p.fail(t, "variant must be B or B_ord");
    f.var = cube::parse_variant(t.text);
    p.var = f.var;
  }
  p.expect("level");
  f.level = p.integer(1, 3);
  p.expect("base");
  f.base = p.base();
  std::set<std::string> names;
  while (!p.done()) {
    Tok t = p.next();
    auto fresh = [&](const std::string& n) {
      if (!names.insert(n).second) p.fail(t, "name '" + n + "' declared twice");
    };
    if (t.text == "sieve") {
      f.sieves.push_back(p.sieve());
      fresh(f.sieves.back().name);
    } else if (t.text == "family") {
      f.families.push_back(p.family());
      fresh(f.families.back().name);
    } else if (t.text == "problem" || t.text == "universe") {
      f.problems.push_back(p.problem(t.text == "universe"));
      fresh(f.problems.back().name);
    } else {
      p.fail(t, "expected sieve, family, problem or universe");
    }
  }
  return f;
}

std::string print_prob(const ProbFile& f) {
  std::ostringstream os;
  for (const auto& c : f.comments) os << c << "\n";
  os << "variant " << cube::variant_name(f.var) << "\n";
  os << "level " << f.level << "\n";
  const BaseDecl& b = f.base;
  switch (b.kind) {
    case BaseDecl::Kind::Constant:
      os << "base constant " << vals(b.elems) << "\n";
      break;
    case BaseDecl::Kind::Yoneda:
      os << "base yoneda " << b.dim << "\n";
      break;
    case BaseDecl::Kind::Table:
      os << "base table " << b.dim << " {\n";
      for (const auto& [c, xs] : b.objects) os << "  object " << c << " " << vals(xs) << "\n";
      for (const auto& [m, xs] : b.actions) os << "  action " << cube::table_string(m) << " " << arrows(xs) << "\n";
      os << "}\n";
      break;
  }
  for (const SieveDecl& s : f.sieves) {
    os << "sieve " << s.name << " at " << s.at;
    if (s.kind == SieveDecl::Kind::Top) {
      os << " top\n";
    } else if (s.kind == SieveDecl::Kind::Bot) {
      os << " bot\n";
    } else {
      os << " {";
      for (const auto& [m, in] : s.rows) os << " " << cube::table_string(m) << ":" << (in ? 1 : 0);
      os << " }\n";
    }
  }
  for (const FamilyDecl& d : f.families) {
    os << "family " << d.name << " " << d.kind;
    if (d.kind == "discrete") {
      os << " " << vals(d.elems) << "\n";
    } else if (d.kind == "nabla") {
      os << " {\n";
      for (const auto& [g, xs] : d.points) os << "  over " << g.to_string() << " " << vals(xs) << "\n";
      os << "}\n";
    } else if (d.kind == "glue") {
      os << " " << d.args.at(0) << " " << d.args.at(1) << " {\n";
      for (const auto& [c, xs] : d.cof) os << "  cof " << (c < 0 ? std::string("*") : std::to_string(c)) << " " << vals(xs) << "\n";
      os << "  map " << arrows(d.map) << "\n}\n";
    } else {
      for (const auto& a : d.args) os << " " << a;
      os << "\n";
    }
  }
  for (const ProblemDecl& p : f.problems) {
    os << (p.universe ? "universe " : "problem ") << p.name << " {\n";
    os << "  family " << p.family << "\n  stage " << p.stage << "\n";
    if (!p.universe) os << "  point " << p.point.to_string() << "\n";
    os << "  face " << p.face << "\n  sieve " << p.sieve << "\n";
    if (!p.universe) {
      os << "  tube " << ref_string(p.tube) << "\n";
      if (p.base) os << "  base " << ref_string(*p.base) << "\n";
    }
    os << "}\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------

namespace {

struct Builder {
  const ProbFile& f;
  Built out;
  std::map<std::string, const FamilyDecl*> decls;
  std::set<std::string> over_base;  // families whose base is the file base

  [[noreturn]] void fail(int line, const std::string& msg) const { throw ParseError(line, 0, msg); }

  void base() {
    const BaseDecl& b = f.base;
    switch (b.kind) {
      case BaseDecl::Kind::Constant:
        if (b.elems.empty()) fail(b.line, "constant base is empty");
        out.base = psh::constant(b.elems, f.var, "Gamma");
        return;
      case BaseDecl::Kind::Yoneda:
        out.base = psh::yoneda(b.dim, f.var);
        return;
      case BaseDecl::Kind::Table:
        break;
    }
    if (b.dim < f.level) fail(b.line, "table base must cover the level (top " + std::to_string(b.dim) + ")");
    std::map<std::pair<Mor, Val>, Val> action;
    for (const auto& [m, entries] : b.actions) {
      if (m.src > b.dim || m.dst > b.dim) fail(b.line, "action " + cube::table_string(m) + " beyond the top");
      for (const auto& [x, y] : entries) action[{m, x}] = y;
    }
    auto has = [&](int c, const Val& x) {
      auto it = b.objects.find(c);
      return it != b.objects.end() && std::find(it->second.begin(), it->second.end(), x) != it->second.end();
    };
    for (int c = 0; c <= b.dim; ++c)
      for (int d = 0; d <= b.dim; ++d)
        for (const Mor& s : cube::homs(d, c, f.var)) {
          if (s == cube::identity(d, f.var)) continue;
          auto it = b.objects.find(c);
          if (it == b.objects.end()) continue;
          for (const Val& x : it->second) {
            auto a = action.find({s, x});
            if (a == action.end())
              fail(b.line, "no action of " + cube::table_string(s) + " on " + x.to_string());
            if (!has(d, a->second))
              fail(b.line, "action of " + cube::table_string(s) + " sends " + x.to_string() + " outside object " +
                               std::to_string(d));
          }
        }
    out.base = psh::table_presheaf(f.var, b.dim, b.objects, action, "Gamma");
    auto fc = psh::check_functorial(*out.base, b.dim);
    if (!fc.ok) fail(b.line, "base is not functorial: " + fc.detail);
  }

  void sieves() {
    for (const SieveDecl& s : f.sieves) {
      Sieve v;
      if (s.kind == SieveDecl::Kind::Top) {
        v = Sieve::top(s.at, f.var);
      } else if (s.kind == SieveDecl::Kind::Bot) {
        v = Sieve::bot(s.at, f.var);
      } else {
        std::vector<Mor> members;
        for (const auto& [m, in] : s.rows) {
          if (m.src > f.level) fail(s.line, "sieve row " + cube::table_string(m) + " beyond the level");
          if (in) members.push_back(m);
        }
        v = Sieve::table(s.at, f.var, f.level, members);
        auto chk = psh::check_sieve(v, f.level);
        if (!chk.ok)
          fail(s.line, "'" + s.name + "' is not a sieve: " + cube::table_string(chk.witness->first) + " is in but " +
                           cube::table_string(chk.witness->second) + " is not");
      }
      out.sieves.emplace(s.name, v);
    }
  }

  const kan::Fib& fib(const FamilyDecl& d, const std::string& n) const {
    auto it = out.fibs.find(n);
    if (it == out.fibs.end()) fail(d.line, "unknown family '" + n + "' (families must be declared before use)");
    return it->second;
  }

  const std::vector<Val>* points(const FamilyDecl& d, const Val& g0) const {
    const std::vector<Val>* any = nullptr;
    for (const auto& [g, xs] : d.points) {
      if (g == g0) return &xs;
      if (g == Val::sym("*")) any = &xs;
    }
    return any;
  }

  kan::Fib nabla(const FamilyDecl& d) {
    bool uniform = d.points.size() == 1 && d.points[0].first == Val::sym("*");
    if (f.base.kind != BaseDecl::Kind::Constant && !uniform)
      fail(d.line, "nabla over a non-constant base takes a single 'over *' block");
    std::map<Val, std::vector<Val>> pts;
    for (const Val& g : out.base->at(0)) {
      auto p = points(d, g);
      pts[g] = p ? *p : std::vector<Val>{};
    }
    return kan::nabla_fib(psh::nabla(
        out.base, [pts](const Val& g) { return pts.at(g); }, d.name));
  }

  kan::Fib glue(const FamilyDecl& d) {
    for (const auto& a : d.args) {
      auto it = decls.find(a);
      if (it == decls.end()) fail(d.line, "unknown family '" + a + "'");
      if (it->second->kind != "nabla") fail(d.line, "glue takes codiscrete families, '" + a + "' is " + it->second->kind);
    }
    const FamilyDecl& da = *decls.at(d.args[0]);
    const FamilyDecl& db = *decls.at(d.args[1]);
    kan::Fib a = fib(d, d.args[0]), b = fib(d, d.args[1]);
    std::map<Val, Val> m(d.map.begin(), d.map.end());
    bool iso = true;
    for (const Val& g : out.base->at(0)) {
      const std::vector<Val>* pa = points(da, g);
      const std::vector<Val>* pb = points(db, g);
      std::set<Val> image;
      for (const Val& x : pa ? *pa : std::vector<Val>{}) {
        auto it = m.find(x);
        if (it == m.end()) fail(d.line, "map is undefined on " + x.to_string());
        if (!pb || std::find(pb->begin(), pb->end(), it->second) == pb->end())
          fail(d.line, "map sends " + x.to_string() + " outside the points of " + db.name + " over " + g.to_string());
        image.insert(it->second);
      }
      std::size_t nb = pb ? pb->size() : 0, na = pa ? pa->size() : 0;
      if (image.size() != nb) fail(d.line, "map is not surjective over " + g.to_string());
      if (na != nb) iso = false;
    }
    std::map<int, std::set<Val>> cof;
    for (const auto& [c, xs] : d.cof) cof[c].insert(xs.begin(), xs.end());
    auto phi = [cof](int c, const Val& g) {
      for (int k : {-1, c}) {
        auto it = cof.find(k);
        if (it != cof.end() && it->second.count(g)) return true;
      }
      return false;
    };
    for (int c = 0; c <= f.level; ++c)
      for (const Val& g : out.base->at(c)) {
        if (!phi(c, g)) continue;
        for (int e = 0; e <= f.level; ++e)
          for (const Mor& s : cube::homs(e, c, f.var))
            if (!phi(e, out.base->act(s, g)))
              fail(d.line, "cofibration is not closed under restriction at " + g.to_string());
      }
    kan::FamMap fwd = [m](int, const Val&, const Val& x) {
      std::vector<Val> ys;
      for (const Val& v : x.items()) ys.push_back(m.at(v));
      return Val::tuple(std::move(ys));
    };
    kan::GlueData G;
    G.gamma = out.base;
    G.phi = phi;
    G.a = a;
    G.b = b;
    G.fwd = fwd;
    G.level = f.level;
    if (iso) {
      std::map<Val, Val> inv;
      for (const auto& [x, y] : m) inv[y] = x;
      G.bwd = [inv](int, const Val&, const Val& y) {
        std::vector<Val> xs;
        for (const Val& v : y.items()) xs.push_back(inv.at(v));
        return Val::tuple(std::move(xs));
      };
      G.equiv = kan::iso_equiv(b, G.fwd, G.bwd);
    } else {
      std::map<Val, std::vector<Val>> pa;
      for (const Val& g : out.base->at(0))
        if (auto p = points(da, g)) pa[g] = *p;
      G.equiv = kan::nabla_equiv(a.fam, fwd, [m, pa](const Val& g0, const Val& bx) {
        for (const Val& x : pa.at(g0))
          if (m.at(x) == bx) return x;
        throw std::logic_error("no preimage");
      });
    }
    return kan::glue_fib(G);
  }

  void families() {
    for (const FamilyDecl& d : f.families) {
      decls[d.name] = &d;
      kan::Fib r;
      if (d.kind == "discrete") {
        if (d.elems.empty()) fail(d.line, "discrete family is empty");
        r = kan::discrete_fib(psh::const_family(out.base, psh::constant(d.elems, f.var, d.name)));
        over_base.insert(d.name);
      } else if (d.kind == "nabla") {
        r = nabla(d);
        over_base.insert(d.name);
      } else if (d.kind == "glue") {
        r = glue(d);
        over_base.insert(d.name);
      } else if (d.kind == "path") {
        r = kan::fib_path(fib(d, d.args[0]));
      } else if (d.kind == "id") {
        r = kan::fib_id(fib(d, d.args[0]), f.level);
      } else {
        const kan::Fib& a = fib(d, d.args[0]);
        const kan::Fib& b = fib(d, d.args[1]);
        if (!over_base.count(d.args[0]) || !over_base.count(d.args[1]))
          fail(d.line, d.kind + " takes families over the base");
        kan::Fib weak = kan::reindex_fib(b, psh::sigma(a.fam), [](int, const Val& g) { return g[0]; });
        r = d.kind == "sigma" ? kan::fib_sigma(a, weak) : kan::fib_pi(a, weak, f.level);
      }
      out.fibs.emplace(d.name, r);
    }
  }
};

Val resolve(const Ref& r, const std::vector<Val>& fiber, const std::string& what) {
  if (r.index) {
    if (*r.index >= fiber.size())
      throw std::invalid_argument(what + " index #" + std::to_string(*r.index) + " out of range (fiber has " +
                                  std::to_string(fiber.size()) + ")");
    return fiber[*r.index];
  }
  if (std::find(fiber.begin(), fiber.end(), r.value) == fiber.end())
    throw std::invalid_argument(what + " " + r.value.to_string() + " is not in the fiber");
  return r.value;
}

CompOutcome run_comp(const ProbFile& file, const Built& b, const ProblemDecl& p) {
  CompOutcome o{p.name, "", false, std::nullopt, ""};
  const kan::Fib& A = b.fibs.at(p.family);
  for (const auto& d : file.families)
    if (d.name == p.family) o.solver = d.kind;
  const Variant var = file.var;
  const int c = p.stage;
  const kan::Fam& fam = A.fam;
  if (!fam->base()->has(c + 1, p.point)) throw std::invalid_argument("point is not in the base at stage " + std::to_string(c + 1));
  Val x = resolve(p.tube, fam->fiber(c + 1, p.point), "tube");
  const Sieve& phi = b.sieves.at(p.sieve);
  Partial f(phi, [fam, pt = p.point, x](const Mor& s) { return fam->act(cube::extend(s), pt, x); });
  Val pe = kan::face_point(fam->base(), p.point, c, p.face);
  Val a = p.base ? resolve(*p.base, fam->fiber(c, pe), "base") : fam->act(kan::iota(c, p.face, var), p.point, x);
  kan::CompProblem P{c, p.point, p.face, f, a};
  auto adh = kan::check_adherence(fam, P, file.level);
  if (!adh.ok) {
    o.detail = "input does not adhere: " + adh.detail;
    return o;
  }
  Val r = A.solve(P);
  o.result = r;
  auto chk = kan::check_comp(fam, P, r, file.level);
  o.ok = chk.ok;
  o.detail = chk.ok ? (r == a ? "postcondition holds; result equals base" : "postcondition holds") : chk.detail;
  return o;
}

CompOutcome run_universe(const ProbFile& file, const Built& b, const ProblemDecl& p) {
  CompOutcome o{p.name, "universe", false, std::nullopt, ""};
  const Variant var = file.var;
  const int c = p.stage;
  if (file.base.kind != BaseDecl::Kind::Yoneda || file.base.dim != c + 1)
    throw std::invalid_argument("universe problems need base yoneda " + std::to_string(c + 1));
  const kan::Fib& line = b.fibs.at(p.family);
  const Sieve& phi = b.sieves.at(p.sieve);
  auto res = kan::universe_comp(c, p.face, phi, line, file.level);
  const kan::Fam& code = res.code.fam;
  std::size_t checked = 0;
  for (int d = 0; d <= file.level; ++d)
    for (const Mor& s : cube::homs(d, c, var)) {
      if (!phi.contains(s)) continue;
      ++checked;
      Val at = Val::mor(cube::compose(kan::iota(c, 1 - p.face, var), s));
      if (code->fiber(d, Val::mor(s)) != line.fam->fiber(d, at)) {
        o.detail = "carrier differs from the line's end on " + cube::table_string(s);
        return o;
      }
    }
  o.result = Val::tuple(code->fiber(c, Val::mor(cube::identity(c, var))));
  o.ok = true;
  o.detail = "carrier equals the line's end on " + std::to_string(checked) + " sieve members";
  return o;
}

}  // namespace

Built build(const ProbFile& f) {
  Builder bl{f, {}, {}, {}};
  bl.base();
  bl.sieves();
  bl.families();
  for (const ProblemDecl& p : f.problems) {
    if (!bl.out.fibs.count(p.family)) bl.fail(p.line, "unknown family '" + p.family + "'");
    auto it = bl.out.sieves.find(p.sieve);
    if (it == bl.out.sieves.end()) bl.fail(p.line, "unknown sieve '" + p.sieve + "'");
    if (it->second.stage() != p.stage) bl.fail(p.line, "sieve '" + p.sieve + "' is not on the problem's stage");
    if (p.stage + 1 > f.level) bl.fail(p.line, "stage " + std::to_string(p.stage) + " exceeds the level budget");
  }
  return bl.out;
}

std::vector<CompOutcome> run_problems(const ProbFile& f, const Built& b) {
  std::vector<CompOutcome> out;
  for (const ProblemDecl& p : f.problems) {
    std::string solver = "universe";
    if (!p.universe)
      for (const auto& d : f.families)
        if (d.name == p.family) solver = d.kind;
    try {
      out.push_back(p.universe ? run_universe(f, b, p) : run_comp(f, b, p));
    } catch (const psh::LevelExceeded& e) {
      out.push_back({p.name, solver, false, std::nullopt, std::string("level budget exceeded: ") + e.what()});
    } catch (const std::exception& e) {
      out.push_back({p.name, solver, false, std::nullopt, e.what()});
    }
  }
  return out;
}

}  // namespace cas::textio
