#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

// The cube categories B and B_ord. Objects are naturals; a morphism m -> n is a
// function between the vertex sets 2^m -> 2^n, stored as a packed vertex table.
namespace cas::cube {

enum class Variant : std::uint8_t { B, Ord };

const char* variant_name(Variant v);
Variant parse_variant(std::string_view s);

constexpr int kMaxDim = 4;
constexpr std::size_t kMaxHom = 1000000;

struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct Mismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Vertex encoding: coordinate k (counted from the left of the printed bit
// string) of a d-dimensional vertex is bit (d - 1 - k) of its index, so rows
// listed by index appear in lexicographic order.
struct Mor {
  std::uint8_t src = 0;
  std::uint8_t dst = 0;
  Variant var = Variant::Ord;
  std::uint64_t tab = 0;  // 4 bits per source vertex

  unsigned at(unsigned v) const { return static_cast<unsigned>((tab >> (4 * v)) & 0xFu); }
  void set(unsigned v, unsigned w) {
    tab &= ~(std::uint64_t{0xF} << (4 * v));
    tab |= std::uint64_t{w & 0xFu} << (4 * v);
  }
  unsigned rows() const { return 1u << src; }

  friend bool operator==(const Mor& a, const Mor& b) {
    return a.src == b.src && a.dst == b.dst && a.var == b.var && a.tab == b.tab;
  }
  // Canonical order: dimensions, then lexicographic on the flattened table.
  friend std::strong_ordering operator<=>(const Mor& a, const Mor& b);
};

struct MorHash {
  std::size_t operator()(const Mor& m) const {
    std::uint64_t h = m.tab * 0x9E3779B97F4A7C15ull;
    h ^= (std::uint64_t{m.src} << 56) ^ (std::uint64_t{m.dst} << 48) ^ (std::uint64_t(m.var) << 40);
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

// Construction from rows: rows[v] is the image of vertex v.
Mor make(int src, int dst, const std::vector<unsigned>& rows, Variant var);
bool is_monotone(const Mor& f);

Mor identity(int c, Variant var);
Mor compose(const Mor& g, const Mor& f);  // g after f
bool equal(const Mor& f, const Mor& g);

Mor bang(int c, Variant var);               // !_c : c -> 0
Mor endpoint(int e, Variant var);           // delta_e : 0 -> 1
Mor connection(int e, Variant var);         // mu_0 = min, mu_1 = max : 2 -> 1
Mor proj1(int m, int n, Variant var);       // m + n -> m
Mor proj2(int m, int n, Variant var);       // m + n -> n
Mor pair(const Mor& f, const Mor& g);       // <f, g> : k -> m + n
Mor product(const Mor& f, const Mor& g);    // f x g
Mor const_point(int c, int e, Variant var); // delta_e . !_c : c -> 1
Mor face(int c, int e, Variant var);        // <id_c, delta_e . !_c> : c -> c + 1
Mor drop_last(int c, Variant var);          // c + 1 -> c
Mor extend(const Mor& s);                   // s x id_1
Mor coordinate(int c, int k, Variant var);  // k-th projection c -> 1

std::size_t hom_count(int m, int n, Variant var);
// Duplicate-free, complete, canonical order; cached.
const std::vector<Mor>& homs(int m, int n, Variant var);
std::size_t hom_index(const Mor& f);

std::string vertex_string(unsigned v, int dim);
std::string to_string(const Mor& f);  // mor B_ord 2->1 [00↦0 01↦0 10↦0 11↦1]
std::string table_string(const Mor& f);  // [00↦0 01↦0 10↦0 11↦1]
Mor parse_mor(std::string_view text);
// Parses "[..]" row lists with known variant.
Mor parse_table(std::string_view text, Variant var);

struct Verdict {
  bool pass = true;
  std::vector<std::string> failures;
};

// Checks the eight connection equations and delta_0 != delta_1 using the given
// connection tables (defaults: min and max).
Verdict check_path_connection_algebra(Variant var);
Verdict check_path_connection_algebra(Variant var, const Mor& mu0, const Mor& mu1);

std::vector<Mor> global_points_of_interval(Variant var);

}  // namespace cas::cube
