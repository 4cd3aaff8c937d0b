#include "cas/pca.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <map>
#include <stdexcept>
#include <unordered_map>

namespace cas::pca {

struct Code::Node {
  Op op = Op::K;
  std::uint64_t n = 0;
  Code f{std::shared_ptr<const Node>()}, a{std::shared_ptr<const Node>()};
  std::size_t leaves = 1;
};

Code::Code(std::shared_ptr<const Node> p) : p_(std::move(p)) {}

Code::Code() : Code(atom(Op::K)) {}

Code Code::atom(Op op) {
  if (op == Op::Num || op == Op::App) throw std::invalid_argument("atom: not a constant");
  static std::map<Op, std::shared_ptr<const Node>> table;
  auto it = table.find(op);
  if (it == table.end()) {
    auto node = std::make_shared<Node>();
    node->op = op;
    it = table.emplace(op, node).first;
  }
  return Code(it->second);
}

Code Code::num(std::uint64_t n) {
  auto node = std::make_shared<Node>();
  node->op = Op::Num;
  node->n = n;
  return Code(std::move(node));
}

Code Code::app(const Code& f, const Code& a) {
  auto node = std::make_shared<Node>();
  node->op = Op::App;
  node->f = f;
  node->a = a;
  std::size_t l = f.size(), r = a.size();
  node->leaves = (l > std::numeric_limits<std::size_t>::max() - r) ? std::numeric_limits<std::size_t>::max() : l + r;
  return Code(std::move(node));
}

Op Code::op() const { return p_->op; }
std::uint64_t Code::value() const { return p_->n; }
const Code& Code::fun() const { return p_->f; }
const Code& Code::arg() const { return p_->a; }
std::size_t Code::size() const { return p_->leaves; }

bool operator==(const Code& a, const Code& b) {
  if (a.p_ == b.p_) return true;
  if (a.p_->op != b.p_->op || a.p_->leaves != b.p_->leaves) return false;
  switch (a.p_->op) {
    case Op::Num:
      return a.p_->n == b.p_->n;
    case Op::App:
      return a.p_->f == b.p_->f && a.p_->a == b.p_->a;
    default:
      return true;
  }
}

Code ap(const Code& f, const Code& a) { return Code::app(f, a); }
Code ap(const Code& f, const Code& a, const Code& b) { return ap(ap(f, a), b); }
Code ap(const Code& f, const Code& a, const Code& b, const Code& c) { return ap(ap(f, a, b), c); }
Code identity_code() { return ap(S(), K(), K()); }

Code numeral(std::uint64_t n) { return Code::num(n); }

std::optional<std::uint64_t> decode(const Code& c) {
  if (c.op() == Op::Num) return c.value();
  return std::nullopt;
}

namespace {

struct Machine {
  std::uint64_t budget = 0;
  std::uint64_t steps = 0;
  bool diverged = false;
  std::string stuck;

  bool failed() const { return diverged || !stuck.empty(); }
};

int arity(Op op) {
  switch (op) {
    case Op::S:
    case Op::IFZ:
      return 3;
    case Op::K:
      return 2;
    case Op::FST:
    case Op::SND:
    case Op::SUCC:
    case Op::PRED:
      return 1;
    default:
      return -1;
  }
}

const char* op_name(Op op) {
  switch (op) {
    case Op::S:
      return "S";
    case Op::K:
      return "K";
    case Op::PAIR:
      return "PAIR";
    case Op::FST:
      return "FST";
    case Op::SND:
      return "SND";
    case Op::SUCC:
      return "SUCC";
    case Op::PRED:
      return "PRED";
    case Op::IFZ:
      return "IFZ";
    default:
      return "?";
  }
}

Code rebuild(Code head, const std::vector<Code>& args, std::size_t from) {
  for (std::size_t i = from; i < args.size(); ++i) head = Code::app(head, args[i]);
  return head;
}

std::optional<Code> whnf(Code t, Machine& m);

std::optional<std::uint64_t> force_num(const Code& c, Machine& m, const char* who) {
  auto w = whnf(c, m);
  if (!w) return std::nullopt;
  if (w->op() != Op::Num) {
    m.stuck = std::string(who) + " applied to a non-numeral";
    return std::nullopt;
  }
  return w->value();
}

std::optional<Code> whnf(Code t, Machine& m) {
  std::vector<Code> args;
  for (;;) {
    args.clear();
    Code h = t;
    while (h.op() == Op::App) {
      args.push_back(h.arg());
      h = h.fun();
    }
    std::reverse(args.begin(), args.end());
    Op op = h.op();
    if (op == Op::Num) {
      if (!args.empty()) {
        m.stuck = "numeral applied to an argument";
        return std::nullopt;
      }
      return t;
    }
    if (op == Op::PAIR) {
      if (args.size() > 2) {
        m.stuck = "PAIR applied to more than two arguments";
        return std::nullopt;
      }
      return t;
    }
    int need = arity(op);
    if (int(args.size()) < need) return t;
    if (m.steps >= m.budget) {
      m.diverged = true;
      return std::nullopt;
    }
    Code r;
    switch (op) {
      case Op::K:
        r = args[0];
        break;
      case Op::S:
        r = Code::app(Code::app(args[0], args[2]), Code::app(args[1], args[2]));
        break;
      case Op::FST:
      case Op::SND: {
        auto p = whnf(args[0], m);
        if (!p) return std::nullopt;
        if (p->op() != Op::App || p->fun().op() != Op::App || p->fun().fun().op() != Op::PAIR) {
          m.stuck = std::string(op_name(op)) + " applied to a non-pair";
          return std::nullopt;
        }
        r = op == Op::FST ? p->fun().arg() : p->arg();
        break;
      }
      case Op::SUCC: {
        auto n = force_num(args[0], m, "SUCC");
        if (!n) return std::nullopt;
        r = Code::num(*n + 1);
        break;
      }
      case Op::PRED: {
        auto n = force_num(args[0], m, "PRED");
        if (!n) return std::nullopt;
        r = Code::num(*n == 0 ? 0 : *n - 1);
        break;
      }
      case Op::IFZ: {
        auto n = force_num(args[0], m, "IFZ");
        if (!n) return std::nullopt;
        r = *n == 0 ? args[1] : args[2];
        break;
      }
      default:
        m.stuck = "unexpected head";
        return std::nullopt;
    }
    ++m.steps;
    t = rebuild(r, args, std::size_t(need));
  }
}

std::optional<Code> normalize(const Code& t, Machine& m, std::unordered_map<const void*, std::pair<Code, Code>>& memo) {
  if (t.op() != Op::App) return whnf(t, m);
  auto it = memo.find(t.id());
  if (it != memo.end()) return it->second.second;
  auto w = whnf(t, m);
  if (!w) return std::nullopt;
  std::vector<Code> args;
  Code h = *w;
  while (h.op() == Op::App) {
    args.push_back(h.arg());
    h = h.fun();
  }
  std::reverse(args.begin(), args.end());
  Code out = h;
  for (auto& a : args) {
    auto na = normalize(a, m, memo);
    if (!na) return std::nullopt;
    out = Code::app(out, *na);
  }
  memo.emplace(t.id(), std::make_pair(t, out));  // key kept alive
  return out;
}

}  // namespace

EvalResult eval(const Code& c, std::uint64_t budget) {
  Machine m;
  m.budget = budget;
  std::unordered_map<const void*, std::pair<Code, Code>> memo;
  auto r = normalize(c, m, memo);
  EvalResult res;
  res.steps = m.steps;
  if (r) {
    res.kind = EvalResult::Kind::Value;
    res.value = *r;
  } else if (m.diverged) {
    res.kind = EvalResult::Kind::Diverged;
  } else {
    res.kind = EvalResult::Kind::Stuck;
    res.reason = m.stuck;
  }
  return res;
}

EvalResult apply(const Code& f, const Code& a, std::uint64_t budget) {
  if (budget < 1) throw std::invalid_argument("budget must be at least 1");
  return eval(Code::app(f, a), budget);
}

std::optional<std::uint64_t> apply_nat(const Code& f, std::uint64_t n, std::uint64_t budget, EvalResult* detail) {
  EvalResult r = apply(f, numeral(n), budget);
  std::optional<std::uint64_t> out;
  if (r.ok()) out = decode(r.value);
  if (detail) *detail = std::move(r);
  return out;
}

namespace {

void print(const Code& c, std::string& out) {
  switch (c.op()) {
    case Op::Num:
      out += std::to_string(c.value());
      return;
    case Op::App: {
      std::vector<const Code*> spine;
      const Code* h = &c;
      while (h->op() == Op::App) {
        spine.push_back(&h->arg());
        h = &h->fun();
      }
      out += '(';
      print(*h, out);
      for (auto it = spine.rbegin(); it != spine.rend(); ++it) {
        out += ' ';
        print(**it, out);
      }
      out += ')';
      return;
    }
    default:
      out += op_name(c.op());
  }
}

struct Parser {
  std::string_view s;
  std::size_t i = 0;

  void skip() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }

  Code term() {
    skip();
    if (i >= s.size()) throw std::invalid_argument("unexpected end of code");
    if (s[i] == '(') {
      ++i;
      skip();
      if (i < s.size() && s[i] == ')') throw std::invalid_argument("empty application");
      Code acc = term();
      for (;;) {
        skip();
        if (i >= s.size()) throw std::invalid_argument("unbalanced parenthesis");
        if (s[i] == ')') {
          ++i;
          return acc;
        }
        acc = Code::app(acc, term());
      }
    }
    if (s[i] == ')') throw std::invalid_argument("unexpected ')'");
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j])) && s[j] != '(' && s[j] != ')') ++j;
    std::string tok(s.substr(i, j - i));
    i = j;
    if (std::all_of(tok.begin(), tok.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); }))
      return Code::num(std::stoull(tok));
    static const std::pair<const char*, Op> names[] = {{"S", Op::S},       {"K", Op::K},       {"PAIR", Op::PAIR},
                                                       {"FST", Op::FST},   {"SND", Op::SND},   {"SUCC", Op::SUCC},
                                                       {"PRED", Op::PRED}, {"IFZ", Op::IFZ}};
    for (auto& [n, op] : names)
      if (tok == n) return Code::atom(op);
    throw std::invalid_argument("unknown constant: " + tok);
  }
};

}  // namespace

std::string to_string(const Code& c) {
  std::string out;
  print(c, out);
  return out;
}

Code parse(std::string_view text) {
  Parser p{text};
  Code c = p.term();
  p.skip();
  if (p.i != text.size()) throw std::invalid_argument("trailing characters after code");
  return c;
}

std::vector<Code> leaves(std::uint64_t literal_bound) {
  std::vector<Code> out;
  for (Op op : {Op::S, Op::K, Op::PAIR, Op::FST, Op::SND, Op::SUCC, Op::PRED, Op::IFZ}) out.push_back(Code::atom(op));
  for (std::uint64_t n = 0; n < literal_bound; ++n) out.push_back(Code::num(n));
  return out;
}

namespace {

constexpr std::size_t kMaterialize = 4;

const std::vector<Code>& cached_size(std::size_t n, std::uint64_t literal_bound) {
  static std::map<std::pair<std::size_t, std::uint64_t>, std::vector<Code>> cache;
  auto key = std::make_pair(n, literal_bound);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<Code> out;
  if (n == 1) {
    out = leaves(literal_bound);
  } else {
    for (std::size_t l = 1; l < n; ++l) {
      const auto& left = cached_size(l, literal_bound);
      const auto& right = cached_size(n - l, literal_bound);
      for (const auto& a : left)
        for (const auto& b : right) out.push_back(Code::app(a, b));
    }
  }
  return cache.emplace(key, std::move(out)).first->second;
}

bool stream_size(std::size_t n, std::uint64_t lb, const std::function<bool(const Code&)>& f) {
  if (n <= kMaterialize) {
    for (const auto& c : cached_size(n, lb))
      if (!f(c)) return false;
    return true;
  }
  for (std::size_t l = 1; l < n; ++l) {
    bool go = stream_size(l, lb, [&](const Code& a) {
      return stream_size(n - l, lb, [&](const Code& b) { return f(Code::app(a, b)); });
    });
    if (!go) return false;
  }
  return true;
}

}  // namespace

std::vector<Code> codes_of_size(std::size_t n, std::uint64_t literal_bound) {
  if (n == 0) return {};
  if (n <= kMaterialize) return cached_size(n, literal_bound);
  std::vector<Code> out;
  stream_size(n, literal_bound, [&](const Code& c) {
    out.push_back(c);
    return true;
  });
  return out;
}

std::vector<Code> enumerate_codes(std::size_t max_size, std::uint64_t literal_bound) {
  if (max_size < 1) throw std::invalid_argument("max_size must be at least 1");
  std::vector<Code> out;
  for (std::size_t n = 1; n <= max_size; ++n) {
    auto part = codes_of_size(n, literal_bound);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

bool for_each_code(std::size_t max_size, const std::function<bool(const Code&)>& f, std::uint64_t literal_bound) {
  for (std::size_t n = 1; n <= max_size; ++n)
    if (!stream_size(n, literal_bound, f)) return false;
  return true;
}

std::uint64_t count_codes(std::size_t max_size, std::uint64_t literal_bound) {
  std::vector<std::uint64_t> c(max_size + 1, 0);
  if (max_size >= 1) c[1] = 8 + literal_bound;
  for (std::size_t n = 2; n <= max_size; ++n)
    for (std::size_t l = 1; l < n; ++l) c[n] += c[l] * c[n - l];
  std::uint64_t total = 0;
  for (std::size_t n = 1; n <= max_size; ++n) total += c[n];
  return total;
}

}  // namespace cas::pca
