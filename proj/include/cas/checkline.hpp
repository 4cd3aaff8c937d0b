#pragma once

#include <string>
#include <utility>
#include <vector>

namespace cas {

enum class Status { Pass, Fail, Inconclusive };

struct CheckLine {
  std::string name;
  Status status = Status::Pass;
  std::vector<std::pair<std::string, std::string>> kv;

  CheckLine& add(std::string k, std::string v) {
    kv.emplace_back(std::move(k), std::move(v));
    return *this;
  }
  // CHECK <name> PASS|FAIL|INCONCLUSIVE key=value ...; values with spaces are quoted.
  std::string render() const;
};

const char* status_name(Status s);
// 0 when nothing failed, 2 when only inconclusive lines degrade the run, 1 on any failure.
int exit_code(const std::vector<CheckLine>& lines);

}  // namespace cas
