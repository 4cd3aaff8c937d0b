#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "cas/cube.hpp"

namespace cas {

// Immutable structural value used for presheaf and family elements.
class Val {
 public:
  enum class Kind : std::uint8_t { Int, Sym, Tuple, Mor };

  Val();  // the empty tuple
  static Val integer(long long n);
  static Val sym(std::string s);
  static Val tuple(std::vector<Val> xs);
  static Val mor(const cube::Mor& m);
  static Val pair(Val a, Val b) { return tuple({std::move(a), std::move(b)}); }

  Kind kind() const;
  long long as_int() const;
  const std::string& as_sym() const;
  const cube::Mor& as_mor() const;
  std::size_t size() const;  // tuple arity
  const Val& operator[](std::size_t i) const;
  const std::vector<Val>& items() const;

  std::size_t hash() const;
  std::string to_string() const;

  friend bool operator==(const Val& a, const Val& b);
  friend bool operator!=(const Val& a, const Val& b) { return !(a == b); }
  friend bool operator<(const Val& a, const Val& b);

 private:
  struct Node;
  explicit Val(std::shared_ptr<const Node> p);
  std::shared_ptr<const Node> p_;
};

struct ValHash {
  std::size_t operator()(const Val& v) const { return v.hash(); }
};

// Text form: integers, symbols, tuples "(a b c)", morphism tables "[0↦1 ...]"
// (variant supplied by the caller).
Val parse_val(std::string_view text, cube::Variant var);

}  // namespace cas
