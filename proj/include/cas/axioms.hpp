#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cas/cube.hpp"

// The ten interval and cofibration axioms, checked in the presheaf model with
// decidable cofibrations at a truncation level.
namespace cas::axioms {

struct Options {
  int level = 3;
  cube::Variant var = cube::Variant::Ord;
  std::optional<cube::Mor> mu0, mu1;  // connection overrides for negative controls
};

struct AxiomResult {
  int number = 0;
  std::string name;
  bool pass = true;
  std::string detail;
};

std::vector<AxiomResult> run_axioms(const Options& opt);

}  // namespace cas::axioms
