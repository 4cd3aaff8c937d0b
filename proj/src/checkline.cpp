#include "cas/checkline.hpp"

#include <algorithm>

namespace cas {

namespace {

std::string quote(const std::string& v) {
  bool plain = !v.empty() && std::none_of(v.begin(), v.end(), [](char ch) { return ch == ' ' || ch == '"' || ch == '\t'; });
  if (plain) return v;
  std::string out = "\"";
  for (char ch : v) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

const char* status_name(Status s) {
  switch (s) {
    case Status::Pass:
      return "PASS";
    case Status::Fail:
      return "FAIL";
    case Status::Inconclusive:
      return "INCONCLUSIVE";
  }
  return "?";
}

std::string CheckLine::render() const {
  std::string out = "CHECK " + name + " " + status_name(status);
  for (const auto& [k, v] : kv) out += " " + k + "=" + quote(v);
  return out;
}

int exit_code(const std::vector<CheckLine>& lines) {
  bool inconclusive = false;
  for (const CheckLine& l : lines) {
    if (l.status == Status::Fail) return 1;
    if (l.status == Status::Inconclusive) inconclusive = true;
  }
  return inconclusive ? 2 : 0;
}

}  // namespace cas
