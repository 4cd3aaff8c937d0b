#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cas/pca.hpp"

// Assemblies over the code algebra, tracked maps, PERs, and the section
// refuter for the counterexample family.
namespace cas::assembly {

using Realizers = std::set<std::uint64_t>;

struct Assembly {
  std::vector<std::string> ids;
  std::vector<Realizers> realizers;

  static Assembly make(std::vector<std::pair<std::string, Realizers>> elems);
  std::size_t size() const { return ids.size(); }
  std::optional<std::size_t> index_of(const std::string& id) const;
};

// Carrier is a decidable set of naturals.
struct EnumAssembly {
  std::string name;
  std::function<bool(std::uint64_t)> member;
  std::function<bool(std::uint64_t elem, std::uint64_t n)> realizes;
  std::function<std::uint64_t(std::uint64_t elem)> sample;
};

struct TrackedMap {
  const Assembly* source = nullptr;
  const Assembly* target = nullptr;
  std::vector<std::size_t> function;
  pca::Code tracker;
  std::uint64_t budget = pca::kDefaultBudget;
};

struct TrackVerdict {
  bool ok = true;
  std::size_t element = 0;
  std::uint64_t realizer = 0;
  std::string cause;
};

TrackVerdict check_tracks(const TrackedMap& f);
bool tracks(const pca::Code& e, const Assembly& src, const Assembly& dst, const std::vector<std::size_t>& f,
            std::uint64_t budget);
std::optional<pca::Code> find_tracker(const Assembly& src, const Assembly& dst, const std::vector<std::size_t>& f,
                                      std::size_t size_bound, std::uint64_t budget);

// Some realizer is shared by two elements whose images have disjoint realizer
// sets, so no code can track f.
struct Obstruction {
  std::size_t a = 0, b = 0;
  std::uint64_t realizer = 0;
};
std::optional<Obstruction> tracking_obstruction(const Assembly& src, const Assembly& dst,
                                                const std::vector<std::size_t>& f);

bool is_modest(const Assembly& a);

struct PER {
  std::set<std::pair<std::uint64_t, std::uint64_t>> pairs;
  // Throws std::invalid_argument unless symmetric and transitive.
  static PER make(std::set<std::pair<std::uint64_t, std::uint64_t>> pairs);
  bool related(std::uint64_t a, std::uint64_t b) const { return pairs.count({a, b}) > 0; }
};

Assembly modest_of_per(const PER& r);
PER per_of_modest(const Assembly& a);

struct UniformVerdict {
  bool uniform = false;
  std::optional<std::uint64_t> common;
  std::optional<std::pair<std::size_t, std::size_t>> refuting_pair;
};
UniformVerdict is_uniform(const Assembly& a);
// Checks that candidate realizes every element of the fiber up to elem_bound.
bool is_uniform_with(const EnumAssembly& a, std::uint64_t candidate, std::uint64_t elem_bound);

struct FamilyOfAssemblies {
  Assembly base;
  std::vector<Assembly> fibers;  // indexed like base
};

struct SupportVerdict {
  bool ok = false;
  std::string reason;
};
SupportVerdict is_well_supported(const FamilyOfAssemblies& f, const pca::Code& e, std::uint64_t budget);
FamilyOfAssemblies trunc(const FamilyOfAssemblies& f);

struct CounterexampleData {
  EnumAssembly gamma;
  std::function<EnumAssembly(std::uint64_t)> fiber;
};
CounterexampleData counterexample_data();

// Base elements gamma <= base_bound, realizers n in (gamma, realizer_bound].
SupportVerdict is_well_supported(const CounterexampleData& d, const pca::Code& e, std::uint64_t base_bound,
                                 std::uint64_t realizer_bound, std::uint64_t budget);

struct Witness {
  enum class Kind { Conflict, ValueTooSmall, EvalFailure, Chain };
  Kind kind = Kind::Conflict;
  std::uint64_t n = 0, m = 0;
  std::uint64_t value = 0, other = 0;  // Conflict: the two forced values of f(n)
  std::string detail;

  std::string describe() const;
};

struct SectionRefutation {
  bool refuted = false;
  std::optional<Witness> witness;
  std::optional<Witness> chain;  // the m <= e(m+1) <= f(0) argument, when it applies in range
};

SectionRefutation refute_section(const pca::Code& candidate, std::uint64_t n_bound, std::uint64_t budget);

struct OrthogonalityVerdict {
  bool pass = false;
  bool inconclusive = false;
  std::size_t functions = 0, tracked = 0, refuted = 0, unresolved = 0;
  bool lambda_bijective = false;
  bool istar_bijective = false;
  std::string detail;
};

OrthogonalityVerdict orthogonality_check(const Assembly& a, const Assembly& x, std::size_t size_bound,
                                         std::uint64_t budget);

std::string to_text(const Assembly& a);
std::string to_text(const FamilyOfAssemblies& f);
Assembly parse_assembly(const std::string& text);

}  // namespace cas::assembly
