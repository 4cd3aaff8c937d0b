#include "cas/cube.hpp"

#include <map>
#include <memory>
#include <sstream>
#include <tuple>
#include <unordered_map>

namespace cas::cube {

const char* variant_name(Variant v) { return v == Variant::B ? "B" : "B_ord"; }

Variant parse_variant(std::string_view s) {
  if (s == "B") return Variant::B;
  if (s == "B_ord" || s == "Bord" || s == "ord") return Variant::Ord;
  throw std::invalid_argument("unknown cube variant: " + std::string(s));
}

std::strong_ordering operator<=>(const Mor& a, const Mor& b) {
  if (auto c = a.src <=> b.src; c != 0) return c;
  if (auto c = a.dst <=> b.dst; c != 0) return c;
  if (auto c = a.var <=> b.var; c != 0) return c;
  for (unsigned v = 0; v < a.rows(); ++v) {
    if (auto c = a.at(v) <=> b.at(v); c != 0) return c;
  }
  return std::strong_ordering::equal;
}

static void check_dim(int d) {
  if (d < 0 || d > kMaxDim) throw CapExceeded("cube dimension " + std::to_string(d) + " exceeds cap");
}

bool is_monotone(const Mor& f) {
  for (unsigned v = 0; v < f.rows(); ++v) {
    for (unsigned bit = 1; bit < f.rows(); bit <<= 1) {
      if (!(v & bit)) continue;
      unsigned lo = f.at(v ^ bit), hi = f.at(v);
      if ((lo & hi) != lo) return false;
    }
  }
  return true;
}

Mor make(int src, int dst, const std::vector<unsigned>& rows, Variant var) {
  check_dim(src);
  check_dim(dst);
  if (rows.size() != (1u << src)) throw Mismatch("table needs 2^src rows");
  Mor f;
  f.src = static_cast<std::uint8_t>(src);
  f.dst = static_cast<std::uint8_t>(dst);
  f.var = var;
  for (unsigned v = 0; v < rows.size(); ++v) {
    if (rows[v] >= (1u << dst)) throw Mismatch("row value out of range");
    f.set(v, rows[v]);
  }
  if (var == Variant::Ord && !is_monotone(f)) throw Mismatch("table is not monotone");
  return f;
}

Mor identity(int c, Variant var) {
  check_dim(c);
  Mor f;
  f.src = f.dst = static_cast<std::uint8_t>(c);
  f.var = var;
  for (unsigned v = 0; v < (1u << c); ++v) f.set(v, v);
  return f;
}

Mor compose(const Mor& g, const Mor& f) {
  if (f.dst != g.src) throw Mismatch("compose: dimension mismatch");
  if (f.var != g.var) throw Mismatch("compose: variant mismatch");
  Mor r;
  r.src = f.src;
  r.dst = g.dst;
  r.var = f.var;
  for (unsigned v = 0; v < f.rows(); ++v) r.set(v, g.at(f.at(v)));
  return r;
}

bool equal(const Mor& f, const Mor& g) { return f.src == g.src && f.dst == g.dst && f.tab == g.tab; }

Mor bang(int c, Variant var) {
  check_dim(c);
  Mor f;
  f.src = static_cast<std::uint8_t>(c);
  f.dst = 0;
  f.var = var;
  return f;
}

Mor endpoint(int e, Variant var) {
  Mor f;
  f.src = 0;
  f.dst = 1;
  f.var = var;
  f.set(0, e ? 1 : 0);
  return f;
}

Mor connection(int e, Variant var) {
  Mor f;
  f.src = 2;
  f.dst = 1;
  f.var = var;
  for (unsigned v = 0; v < 4; ++v) f.set(v, e ? (v != 0) : (v == 3));
  return f;
}

Mor proj1(int m, int n, Variant var) {
  check_dim(m + n);
  Mor f;
  f.src = static_cast<std::uint8_t>(m + n);
  f.dst = static_cast<std::uint8_t>(m);
  f.var = var;
  for (unsigned v = 0; v < f.rows(); ++v) f.set(v, v >> n);
  return f;
}

Mor proj2(int m, int n, Variant var) {
  check_dim(m + n);
  Mor f;
  f.src = static_cast<std::uint8_t>(m + n);
  f.dst = static_cast<std::uint8_t>(n);
  f.var = var;
  for (unsigned v = 0; v < f.rows(); ++v) f.set(v, v & ((1u << n) - 1));
  return f;
}

Mor pair(const Mor& f, const Mor& g) {
  if (f.src != g.src) throw Mismatch("pair: sources differ");
  if (f.var != g.var) throw Mismatch("pair: variant mismatch");
  check_dim(f.dst + g.dst);
  Mor r;
  r.src = f.src;
  r.dst = static_cast<std::uint8_t>(f.dst + g.dst);
  r.var = f.var;
  for (unsigned v = 0; v < f.rows(); ++v) r.set(v, (f.at(v) << g.dst) | g.at(v));
  return r;
}

Mor product(const Mor& f, const Mor& g) {
  if (f.var != g.var) throw Mismatch("product: variant mismatch");
  check_dim(f.src + g.src);
  check_dim(f.dst + g.dst);
  Mor r;
  r.src = static_cast<std::uint8_t>(f.src + g.src);
  r.dst = static_cast<std::uint8_t>(f.dst + g.dst);
  r.var = f.var;
  unsigned mask = (1u << g.src) - 1;
  for (unsigned v = 0; v < r.rows(); ++v) r.set(v, (f.at(v >> g.src) << g.dst) | g.at(v & mask));
  return r;
}

Mor const_point(int c, int e, Variant var) { return compose(endpoint(e, var), bang(c, var)); }

Mor face(int c, int e, Variant var) {
  check_dim(c + 1);
  Mor f;
  f.src = static_cast<std::uint8_t>(c);
  f.dst = static_cast<std::uint8_t>(c + 1);
  f.var = var;
  for (unsigned v = 0; v < f.rows(); ++v) f.set(v, (v << 1) | (e ? 1u : 0u));
  return f;
}

Mor drop_last(int c, Variant var) { return proj1(c, 1, var); }

Mor extend(const Mor& s) { return product(s, identity(1, s.var)); }

Mor coordinate(int c, int k, Variant var) {
  check_dim(c);
  if (k < 0 || k >= c) throw Mismatch("coordinate out of range");
  Mor f;
  f.src = static_cast<std::uint8_t>(c);
  f.dst = 1;
  f.var = var;
  for (unsigned v = 0; v < f.rows(); ++v) f.set(v, (v >> (c - 1 - k)) & 1u);
  return f;
}

namespace {

struct HomEntry {
  std::vector<Mor> list;
  std::unordered_map<std::uint64_t, std::size_t> index;
};

std::map<std::tuple<int, int, int>, std::unique_ptr<HomEntry>>& hom_cache() {
  static std::map<std::tuple<int, int, int>, std::unique_ptr<HomEntry>> cache;
  return cache;
}

void enumerate_rec(Mor& cur, unsigned v, Variant var, std::vector<Mor>& out) {
  if (v == cur.rows()) {
    if (out.size() >= kMaxHom) throw CapExceeded("hom-set size exceeds cap");
    out.push_back(cur);
    return;
  }
  unsigned need = 0;
  if (var == Variant::Ord) {
    for (unsigned bit = 1; bit < cur.rows(); bit <<= 1)
      if (v & bit) need |= cur.at(v ^ bit);
  }
  for (unsigned w = 0; w < (1u << cur.dst); ++w) {
    if ((w & need) != need) continue;
    cur.set(v, w);
    enumerate_rec(cur, v + 1, var, out);
  }
  cur.set(v, 0);
}

HomEntry& hom_entry(int m, int n, Variant var) {
  check_dim(m);
  check_dim(n);
  auto key = std::make_tuple(m, n, static_cast<int>(var));
  auto& cache = hom_cache();
  auto it = cache.find(key);
  if (it != cache.end()) return *it->second;
  if (var == Variant::B) {
    // (2^n)^(2^m) checked before enumerating
    double count = 1;
    for (unsigned i = 0; i < (1u << m); ++i) count *= double(1u << n);
    if (count > double(kMaxHom)) throw CapExceeded("hom-set size exceeds cap");
  }
  auto e = std::make_unique<HomEntry>();
  Mor cur;
  cur.src = static_cast<std::uint8_t>(m);
  cur.dst = static_cast<std::uint8_t>(n);
  cur.var = var;
  enumerate_rec(cur, 0, var, e->list);
  e->index.reserve(e->list.size());
  for (std::size_t i = 0; i < e->list.size(); ++i) e->index.emplace(e->list[i].tab, i);
  auto& ref = *e;
  cache.emplace(key, std::move(e));
  return ref;
}

}  // namespace

std::size_t hom_count(int m, int n, Variant var) { return homs(m, n, var).size(); }

const std::vector<Mor>& homs(int m, int n, Variant var) { return hom_entry(m, n, var).list; }

std::size_t hom_index(const Mor& f) {
  auto& e = hom_entry(f.src, f.dst, f.var);
  auto it = e.index.find(f.tab);
  if (it == e.index.end()) throw Mismatch("morphism not in hom-set");
  return it->second;
}

std::string vertex_string(unsigned v, int dim) {
  std::string s;
  for (int k = dim - 1; k >= 0; --k) s.push_back(((v >> k) & 1u) ? '1' : '0');
  return s;
}

std::string table_string(const Mor& f) {
  std::string s = "[";
  for (unsigned v = 0; v < f.rows(); ++v) {
    if (v) s += ' ';
    s += vertex_string(v, f.src);
    s += "↦";
    s += vertex_string(f.at(v), f.dst);
  }
  s += ']';
  return s;
}

std::string to_string(const Mor& f) {
  std::ostringstream os;
  os << "mor " << variant_name(f.var) << ' ' << int(f.src) << "->" << int(f.dst) << ' ' << table_string(f);
  return os.str();
}

namespace {

std::string normalize_arrows(std::string_view text) {
  std::string s(text);
  const std::string arrow = "↦";
  std::string out;
  for (std::size_t i = 0; i < s.size();) {
    if (s.compare(i, arrow.size(), arrow) == 0) {
      out += '>';
      i += arrow.size();
    } else if (s.compare(i, 3, "|->") == 0) {
      out += '>';
      i += 3;
    } else {
      out += s[i++];
    }
  }
  return out;
}

Mor parse_rows(const std::string& body, int src, int dst, Variant var) {
  std::istringstream is(body);
  std::string tok;
  std::vector<int> rows(1u << src, -1);
  while (is >> tok) {
    auto p = tok.find('>');
    if (p == std::string::npos) throw std::invalid_argument("bad row: " + tok);
    std::string a = tok.substr(0, p), b = tok.substr(p + 1);
    if (int(a.size()) != src || int(b.size()) != dst) throw std::invalid_argument("row width mismatch: " + tok);
    unsigned va = 0, vb = 0;
    for (char ch : a) {
      if (ch != '0' && ch != '1') throw std::invalid_argument("bad bit in row: " + tok);
      va = (va << 1) | unsigned(ch - '0');
    }
    for (char ch : b) {
      if (ch != '0' && ch != '1') throw std::invalid_argument("bad bit in row: " + tok);
      vb = (vb << 1) | unsigned(ch - '0');
    }
    if (rows[va] != -1) throw std::invalid_argument("duplicate row: " + tok);
    rows[va] = int(vb);
  }
  std::vector<unsigned> r;
  for (int x : rows) {
    if (x < 0) throw std::invalid_argument("missing row in table");
    r.push_back(unsigned(x));
  }
  return make(src, dst, r, var);
}

}  // namespace

Mor parse_table(std::string_view text, Variant var) {
  std::string s = normalize_arrows(text);
  auto l = s.find('['), r = s.rfind(']');
  if (l == std::string::npos || r == std::string::npos || r < l) throw std::invalid_argument("expected [rows]");
  std::string body = s.substr(l + 1, r - l - 1);
  std::istringstream is(body);
  std::string tok;
  if (!(is >> tok)) throw std::invalid_argument("empty table");
  auto p = tok.find('>');
  if (p == std::string::npos) throw std::invalid_argument("bad row: " + tok);
  int src = int(p), dst = int(tok.size() - p - 1);
  return parse_rows(body, src, dst, var);
}

Mor parse_mor(std::string_view text) {
  std::string s = normalize_arrows(text);
  std::istringstream is(s);
  std::string kw, var, dims;
  if (!(is >> kw) || kw != "mor") throw std::invalid_argument("expected 'mor'");
  if (!(is >> var >> dims)) throw std::invalid_argument("truncated morphism");
  auto p = dims.find("->");
  if (p == std::string::npos) throw std::invalid_argument("expected m->n");
  int src = std::stoi(dims.substr(0, p)), dst = std::stoi(dims.substr(p + 2));
  std::string rest;
  std::getline(is, rest, '\0');
  auto l = rest.find('['), r = rest.rfind(']');
  if (l == std::string::npos || r == std::string::npos) throw std::invalid_argument("expected [rows]");
  check_dim(src);
  check_dim(dst);
  return parse_rows(rest.substr(l + 1, r - l - 1), src, dst, parse_variant(var));
}

Verdict check_path_connection_algebra(Variant var) {
  return check_path_connection_algebra(var, connection(0, var), connection(1, var));
}

Verdict check_path_connection_algebra(Variant var, const Mor& mu0, const Mor& mu1) {
  Verdict v;
  auto fail = [&](std::string what) {
    v.pass = false;
    v.failures.push_back(std::move(what));
  };
  Mor d0 = endpoint(0, var), d1 = endpoint(1, var), id = identity(1, var);
  if (equal(d0, d1)) fail("delta0 != delta1");
  const Mor* mus[2] = {&mu0, &mu1};
  for (int e = 0; e < 2; ++e) {
    const Mor& mu = *mus[e];
    std::string m = "mu" + std::to_string(e);
    if (mu.src != 2 || mu.dst != 1) {
      fail(m + " has the wrong shape");
      continue;
    }
    if (var == Variant::Ord && !is_monotone(mu)) fail(m + " is not monotone");
    Mor de = endpoint(e, var), dn = endpoint(1 - e, var);
    Mor absorb = compose(de, bang(1, var));
    std::string se = "delta" + std::to_string(e), sn = "delta" + std::to_string(1 - e);
    if (!equal(compose(mu, product(de, id)), absorb)) fail(m + "(" + se + " x I) = " + se);
    if (!equal(compose(mu, product(id, de)), absorb)) fail(m + "(I x " + se + ") = " + se);
    if (!equal(compose(mu, product(dn, id)), id)) fail(m + "(" + sn + " x I) = id");
    if (!equal(compose(mu, product(id, dn)), id)) fail(m + "(I x " + sn + ") = id");
  }
  return v;
}

std::vector<Mor> global_points_of_interval(Variant var) { return homs(0, 1, var); }

}  // namespace cas::cube
