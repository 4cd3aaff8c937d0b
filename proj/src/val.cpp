#include "cas/val.hpp"

#include <cctype>
#include <stdexcept>

namespace cas {

struct Val::Node {
  Kind kind = Kind::Tuple;
  long long num = 0;
  cube::Mor mor{};
  std::string sym;
  std::vector<Val> kids;
  std::size_t h = 0;
};

namespace {

std::size_t mix(std::size_t h, std::size_t x) { return h ^ (x + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2)); }

}  // namespace

Val::Val(std::shared_ptr<const Node> p) : p_(std::move(p)) {}

Val::Val() {
  static const std::shared_ptr<const Node> empty = [] {
    auto n = std::make_shared<Node>();
    n->h = mix(3, 0);
    return n;
  }();
  p_ = empty;
}

Val Val::integer(long long n) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Int;
  node->num = n;
  node->h = mix(1, std::hash<long long>()(n));
  return Val(std::move(node));
}

Val Val::sym(std::string s) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Sym;
  node->h = mix(2, std::hash<std::string>()(s));
  node->sym = std::move(s);
  return Val(std::move(node));
}

Val Val::tuple(std::vector<Val> xs) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Tuple;
  std::size_t h = mix(3, xs.size());
  for (auto& x : xs) h = mix(h, x.hash());
  node->h = h;
  node->kids = std::move(xs);
  return Val(std::move(node));
}

Val Val::mor(const cube::Mor& m) {
  auto node = std::make_shared<Node>();
  node->kind = Kind::Mor;
  node->mor = m;
  node->h = mix(4, cube::MorHash()(m));
  return Val(std::move(node));
}

Val::Kind Val::kind() const { return p_->kind; }

long long Val::as_int() const {
  if (p_->kind != Kind::Int) throw std::logic_error("value is not an integer: " + to_string());
  return p_->num;
}

const std::string& Val::as_sym() const {
  if (p_->kind != Kind::Sym) throw std::logic_error("value is not a symbol: " + to_string());
  return p_->sym;
}

const cube::Mor& Val::as_mor() const {
  if (p_->kind != Kind::Mor) throw std::logic_error("value is not a morphism: " + to_string());
  return p_->mor;
}

std::size_t Val::size() const { return p_->kids.size(); }

const Val& Val::operator[](std::size_t i) const {
  if (p_->kind != Kind::Tuple || i >= p_->kids.size())
    throw std::logic_error("tuple index out of range in " + to_string());
  return p_->kids[i];
}

const std::vector<Val>& Val::items() const { return p_->kids; }

std::size_t Val::hash() const { return p_->h; }

std::string Val::to_string() const {
  switch (p_->kind) {
    case Kind::Int:
      return std::to_string(p_->num);
    case Kind::Sym:
      return p_->sym;
    case Kind::Mor:
      return cube::table_string(p_->mor);
    case Kind::Tuple: {
      std::string s = "(";
      for (std::size_t i = 0; i < p_->kids.size(); ++i) {
        if (i) s += ' ';
        s += p_->kids[i].to_string();
      }
      return s + ")";
    }
  }
  return "?";
}

bool operator==(const Val& a, const Val& b) {
  if (a.p_ == b.p_) return true;
  if (a.p_->h != b.p_->h || a.p_->kind != b.p_->kind) return false;
  switch (a.p_->kind) {
    case Val::Kind::Int:
      return a.p_->num == b.p_->num;
    case Val::Kind::Sym:
      return a.p_->sym == b.p_->sym;
    case Val::Kind::Mor:
      return a.p_->mor == b.p_->mor;
    case Val::Kind::Tuple:
      return a.p_->kids == b.p_->kids;
  }
  return false;
}

bool operator<(const Val& a, const Val& b) {
  if (a.p_ == b.p_) return false;
  if (a.p_->kind != b.p_->kind) return a.p_->kind < b.p_->kind;
  switch (a.p_->kind) {
    case Val::Kind::Int:
      return a.p_->num < b.p_->num;
    case Val::Kind::Sym:
      return a.p_->sym < b.p_->sym;
    case Val::Kind::Mor:
      return a.p_->mor < b.p_->mor;
    case Val::Kind::Tuple:
      return a.p_->kids < b.p_->kids;
  }
  return false;
}

namespace {

struct ValParser {
  std::string_view s;
  std::size_t i = 0;
  cube::Variant var;

  void skip() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }

  Val parse() {
    skip();
    if (i >= s.size()) throw std::invalid_argument("unexpected end of value");
    char c = s[i];
    if (c == '(') {
      ++i;
      std::vector<Val> xs;
      for (;;) {
        skip();
        if (i >= s.size()) throw std::invalid_argument("unterminated tuple");
        if (s[i] == ')') {
          ++i;
          break;
        }
        xs.push_back(parse());
      }
      return Val::tuple(std::move(xs));
    }
    if (c == '[') {
      auto r = s.find(']', i);
      if (r == std::string_view::npos) throw std::invalid_argument("unterminated morphism");
      auto m = cube::parse_table(s.substr(i, r - i + 1), var);
      i = r + 1;
      return Val::mor(m);
    }
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j])) && s[j] != '(' && s[j] != ')' &&
           s[j] != '[' && s[j] != ']')
      ++j;
    std::string tok(s.substr(i, j - i));
    i = j;
    if (tok.empty()) throw std::invalid_argument("empty token in value");
    bool numeric = true;
    for (std::size_t k = 0; k < tok.size(); ++k)
      if (!std::isdigit(static_cast<unsigned char>(tok[k])) && !(k == 0 && tok[k] == '-' && tok.size() > 1))
        numeric = false;
    if (numeric) return Val::integer(std::stoll(tok));
    return Val::sym(tok);
  }
};

}  // namespace

Val parse_val(std::string_view text, cube::Variant var) {
  ValParser p{text, 0, var};
  Val v = p.parse();
  p.skip();
  if (p.i != text.size()) throw std::invalid_argument("trailing characters after value");
  return v;
}

}  // namespace cas
