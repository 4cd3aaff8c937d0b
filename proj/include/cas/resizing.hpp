#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cas/asm.hpp"
#include "cas/checkline.hpp"
#include "cas/kan.hpp"

// The codiscrete counterexample family over the discrete base: certificates
// for fibrancy, uniformity, well-supportedness and the path witness, the
// refutation of every candidate section tracker, and per-sample orthogonality.
namespace cas::resizing {

struct Config {
  int level = 2;                     // stages materialized
  std::uint64_t window = 16;         // base elements gamma <= window
  std::uint64_t fiber_width = 2;     // A(gamma) restricted to gamma < m <= gamma + width
  std::uint64_t realizer_width = 8;  // base realizers gamma < n <= gamma + width checked
  std::size_t tracker_size = 3;      // candidate section codes of size <= this
  std::uint64_t n_bound = 16;
  std::uint64_t budget = pca::kDefaultBudget;
  std::size_t ortho_size = 7;  // tracker bound in the orthogonality suite
  std::uint64_t seed = 1;
  std::size_t fib_problems = 200;
  bool refute = true;
  std::optional<std::uint64_t> corrupt_fiber;  // drop realizer gamma from element gamma + 1
  std::optional<std::string> fake_section;     // injected candidate that is taken as a section
};

struct NablaA {
  Config cfg;
  kan::Psh base;  // the discrete base on 0..window
  kan::Fib fib;   // codiscrete family with its composition structure
};

NablaA build_nabla_A(const Config& cfg);
// Does code r realize the element x of the codiscrete fiber over gamma?
bool realizes(const Config& cfg, std::uint64_t gamma, const Val& x, const pca::Code& r);
// Realizers of m in A(gamma), honouring the corruption knob.
bool fiber_realizes(const Config& cfg, std::uint64_t gamma, std::uint64_t m, std::uint64_t n);

struct Fibrancy {
  bool ok = false;
  std::size_t problems = 0;
  std::string detail;
};
Fibrancy certify_fibrancy(const NablaA& na);

struct Uniformity {
  bool ok = false;
  std::size_t fibers = 0;
  std::vector<std::pair<std::uint64_t, pca::Code>> common;  // gamma, constant code
  std::string detail;
};
Uniformity certify_uniform(const NablaA& na);

struct Support {
  bool ok = false;
  pca::Code tracker;
  std::size_t checked = 0;
  std::string detail;
};
pca::Code support_tracker();
Support certify_well_supported(const NablaA& na);

struct HProp {
  bool ok = false;
  std::size_t pairs = 0;
  std::string detail;
};
HProp certify_hprop(const NablaA& na);

struct Candidate {
  std::string code;
  assembly::SectionRefutation result;
};
struct Sections {
  bool ran = false;
  std::size_t candidates = 0, refuted = 0;
  std::vector<Candidate> entries;
  std::vector<std::string> inconclusive;
  std::vector<std::string> survivors;
};
Sections refute_all_sections(const Config& cfg);

struct OrthoEntry {
  std::uint64_t gamma = 0;
  std::string sample;
  assembly::OrthogonalityVerdict verdict;
};
struct Orthogonality {
  bool ok = false;
  std::vector<OrthoEntry> entries;
  bool control_fails = false;  // the non-modest control breaks the bijection
  std::string control_detail;
};
// Finite fiber A(gamma) within the width, as an assembly.
assembly::Assembly window_fiber(const Config& cfg, std::uint64_t gamma);
std::vector<std::pair<std::string, assembly::Assembly>> modest_samples();
Orthogonality orthogonality_suite(const Config& cfg);

struct Report {
  Config cfg;
  Fibrancy fibrancy;
  Uniformity uniformity;
  Support support;
  HProp hprop;
  Sections sections;
  Orthogonality orthogonality;
  std::string verdict;
  Status status = Status::Inconclusive;
};

Report run(const Config& cfg);
std::string final_verdict(const Report& r, Status* status = nullptr);
std::vector<CheckLine> check_lines(const Report& r);
// Human-readable sections followed by the CHECK lines; the refuted list is cut
// at list_limit entries (0 prints all).
std::string render(const Report& r, std::size_t list_limit = 0);

}  // namespace cas::resizing
