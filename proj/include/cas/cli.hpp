#pragma once

#include <ostream>
#include <string>
#include <vector>

// Batch driver: subcommands axioms, homs, comp, glue-demo, counterexample and
// report. Returns the process exit status (0 clean, 2 inconclusive only, 1 on failure).
namespace cas::cli {

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cas::cli
