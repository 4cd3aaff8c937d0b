#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cas/kan.hpp"

// Cubeset and problem files. A file declares a variant and level, a base
// presheaf, named sieves and families, and composition problems:
//
//   variant B_ord
//   level 2
//   base table 1 {
//     object 0 { a b }
//     object 1 { p }
//     action [0↦0] { p↦a }
//     action [0↦1] { p↦b }
//   }
//   sieve phi at 0 { [↦0]:1 }
//   family A discrete { x y }
//   problem p1 { family A stage 0 point p face 0 sieve phi tube #0 }
//
// Bases are "constant { ... }", "yoneda <n>" or "table <top> { ... }".
// Families: discrete, nabla (over <point> { ... } blocks), path, id, sigma,
// pi, and glue (A B over a cof block, vertexwise map). "universe" blocks ask
// for a universe composition along a line over the representable base.
// Comment lines start with '#'; leading comments are kept by the printer.
namespace cas::textio {

using kan::Mor;
using kan::Partial;
using kan::Psh;
using kan::Sieve;
using kan::Variant;

struct ParseError : std::runtime_error {
  int line, col;
  ParseError(int l, int c, const std::string& msg)
      : std::runtime_error(std::to_string(l) + ":" + std::to_string(c) + ": " + msg), line(l), col(c) {}
};

struct BaseDecl {
  enum class Kind { Constant, Yoneda, Table };
  Kind kind = Kind::Constant;
  int line = 0;
  int dim = 0;  // yoneda object or table top
  std::vector<Val> elems;                                         // constant
  std::map<int, std::vector<Val>> objects;                        // table
  std::vector<std::pair<Mor, std::vector<std::pair<Val, Val>>>> actions;  // table
};

struct SieveDecl {
  enum class Kind { Top, Bot, Table };
  std::string name;
  int line = 0;
  int at = 0;
  Kind kind = Kind::Table;
  std::vector<std::pair<Mor, bool>> rows;
};

struct FamilyDecl {
  std::string name;
  int line = 0;
  std::string kind;               // discrete nabla path id sigma pi glue
  std::vector<std::string> args;  // family names
  std::vector<Val> elems;         // discrete
  // nabla: stage-0 base point -> allowed values; "*" covers every point
  std::vector<std::pair<Val, std::vector<Val>>> points;
  std::map<int, std::vector<Val>> cof;  // glue: base elements on the cofibration by stage, -1 for all stages
  std::vector<std::pair<Val, Val>> map;  // glue: vertexwise A -> B
};

struct Ref {
  std::optional<std::size_t> index;  // #k: k-th element in canonical order
  Val value;
};

struct ProblemDecl {
  std::string name;
  int line = 0;
  bool universe = false;
  std::string family;
  int stage = 0;
  Val point;  // problems only
  int face = 0;
  std::string sieve;
  Ref tube;                 // element of A(stage + 1, point); f is its restriction
  std::optional<Ref> base;  // defaults to the tube at the face
};

struct ProbFile {
  std::vector<std::string> comments;
  Variant var = Variant::Ord;
  int level = 2;
  BaseDecl base;
  std::vector<SieveDecl> sieves;
  std::vector<FamilyDecl> families;
  std::vector<ProblemDecl> problems;
};

ProbFile parse_prob(std::string_view text);
std::string print_prob(const ProbFile& f);

// Semantic objects built from a file; validation failures throw ParseError at
// the declaration's position (line 0 when unknown).
struct Built {
  Psh base;
  std::map<std::string, Sieve> sieves;
  std::map<std::string, kan::Fib> fibs;
};
Built build(const ProbFile& f);

struct CompOutcome {
  std::string name;
  std::string solver;
  bool ok = false;
  std::optional<Val> result;
  std::string detail;
};
std::vector<CompOutcome> run_problems(const ProbFile& f, const Built& b);

}  // namespace cas::textio
