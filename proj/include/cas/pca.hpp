#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Combinatory term algebra with arithmetic primitives, evaluated by
// normal-order reduction under a step budget.
namespace cas::pca {

enum class Op : std::uint8_t { S, K, PAIR, FST, SND, SUCC, PRED, IFZ, Num, App };

class Code {
 public:
  Code();  // K
  static Code atom(Op op);
  static Code num(std::uint64_t n);
  static Code app(const Code& f, const Code& a);

  Op op() const;
  std::uint64_t value() const;  // Num only
  const Code& fun() const;      // App only
  const Code& arg() const;      // App only
  std::size_t size() const;     // number of leaves
  const void* id() const { return p_.get(); }

  friend bool operator==(const Code& a, const Code& b);
  friend bool operator!=(const Code& a, const Code& b) { return !(a == b); }

 private:
  struct Node;
  explicit Code(std::shared_ptr<const Node> p);
  std::shared_ptr<const Node> p_;
};

// Application chains: ap(f, a, b) = ((f a) b).
Code ap(const Code& f, const Code& a);
Code ap(const Code& f, const Code& a, const Code& b);
Code ap(const Code& f, const Code& a, const Code& b, const Code& c);
inline Code S() { return Code::atom(Op::S); }
inline Code K() { return Code::atom(Op::K); }
Code identity_code();  // S K K

struct EvalResult {
  enum class Kind : std::uint8_t { Value, Diverged, Stuck };
  Kind kind = Kind::Stuck;
  Code value;          // Value only
  std::string reason;  // Stuck only
  std::uint64_t steps = 0;

  bool ok() const { return kind == Kind::Value; }
};

constexpr std::uint64_t kDefaultBudget = 10000;

EvalResult eval(const Code& c, std::uint64_t budget);
EvalResult apply(const Code& f, const Code& a, std::uint64_t budget);

Code numeral(std::uint64_t n);
std::optional<std::uint64_t> decode(const Code& c);
// Applies f to numeral(n) and decodes a numeral result.
std::optional<std::uint64_t> apply_nat(const Code& f, std::uint64_t n, std::uint64_t budget,
                                       EvalResult* detail = nullptr);

std::string to_string(const Code& c);
Code parse(std::string_view text);

constexpr std::uint64_t kDefaultLiteralBound = 8;

// Leaves: S K PAIR FST SND SUCC PRED IFZ, then numerals 0..literal_bound-1.
std::vector<Code> leaves(std::uint64_t literal_bound = kDefaultLiteralBound);
// Every term of size exactly n, in canonical order.
std::vector<Code> codes_of_size(std::size_t n, std::uint64_t literal_bound = kDefaultLiteralBound);
// Every term of size <= max_size, ascending size; canonical order within a size.
std::vector<Code> enumerate_codes(std::size_t max_size, std::uint64_t literal_bound = kDefaultLiteralBound);
// Streaming form; the callback returns false to stop. Returns false if stopped.
bool for_each_code(std::size_t max_size, const std::function<bool(const Code&)>& f,
                   std::uint64_t literal_bound = kDefaultLiteralBound);
std::uint64_t count_codes(std::size_t max_size, std::uint64_t literal_bound = kDefaultLiteralBound);

}  // namespace cas::pca
