#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "cas/cli.hpp"
#include "cas/textio.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = cas::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path examples_dir() {
  const char* src = std::getenv("CAS_SOURCE_DIR");
  return fs::path(src ? src : ".") / "tools" / "examples";
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

bool contains(const std::string& s, const std::string& p) { return s.find(p) != std::string::npos; }

fs::path temp_file(const std::string& name, const std::string& text) {
  fs::path p = fs::temp_directory_path() / name;
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_CASE("homs counts") {
  auto r = cli({"homs", "1", "1"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "count B_ord(1,1)=3"));
  CHECK(lines_of(r.out).size() == 4);
  CHECK(contains(cli({"homs", "0", "1", "--variant", "B"}).out, "count B(0,1)=2"));
  for (const char* v : {"B", "B_ord"}) CHECK(contains(cli({"homs", "0", "0", "--variant", v}).out, "(0,0)=1"));
  auto j = nlohmann::json::parse(cli({"homs", "1", "1", "--json"}).out);
  CHECK(j["count"] == 3);
  CHECK(cli({"homs", "5", "1"}).code == 1);
}

TEST_CASE("axioms") {
  auto r = cli({"axioms", "--level", "2"});
  CHECK(r.code == 0);
  int pass = 0;
  for (const auto& l : lines_of(r.out))
    if (l.rfind("CHECK ax", 0) == 0) pass += contains(l, " PASS");
  CHECK(pass == 10);

  auto bad = cli({"axioms", "--level", "2", "--corrupt-connection"});
  CHECK(bad.code == 1);
  CHECK(contains(bad.out, "CHECK ax2 FAIL"));

  auto one = cli({"axioms", "--level", "1", "--json"});
  CHECK(one.code == 0);
  auto ls = lines_of(one.out);
  REQUIRE(ls.size() == 10);
  for (const auto& l : ls) {
    auto j = nlohmann::json::parse(l);
    CHECK(j["status"] == "PASS");
    CHECK(j["level"] == "1");
  }
}

TEST_CASE("shipped examples run and round-trip") {
  fs::path dir = examples_dir();
  REQUIRE(fs::exists(dir / "discrete.prob"));
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() != ".prob") continue;
    ++files;
    auto f = cas::textio::parse_prob(slurp(e.path()));
    std::string printed = cas::textio::print_prob(f);
    CHECK(cas::textio::print_prob(cas::textio::parse_prob(printed)) == printed);
    CHECK(printed == slurp(e.path()));
    auto r = cli({"comp", e.path().string()});
    CHECK_MESSAGE(r.code == 0, r.out, r.err);
    CHECK_FALSE(contains(r.out, " FAIL"));
  }
  CHECK(files == 3);

  auto d = cli({"comp", (dir / "discrete.prob").string()});
  // A discrete family keeps the base.
  CHECK(contains(d.out, "CHECK comp.empty PASS solver=discrete result=z"));
  auto g = cli({"comp", (dir / "glue_total.prob").string(), "--json"});
  for (const auto& l : lines_of(g.out)) {
    auto j = nlohmann::json::parse(l);
    CHECK(j["status"] == "PASS");
    CHECK(j.contains("result"));
  }
}

TEST_CASE("malformed input is rejected at parse time") {
  std::string src = slurp(examples_dir() / "discrete.prob");
  // Row 0 keeps the total map [↦0] while dropping an arrow that factors through it.
  std::string bad = src;
  auto pos = bad.find("[↦0]:0");
  REQUIRE(pos != std::string::npos);
  bad.replace(pos, std::string("[↦0]:0").size(), "[↦0]:1");
  auto p = temp_file("cas_bad_sieve.prob", bad);
  auto r = cli({"comp", p.string()});
  CHECK(r.code == 1);
  CHECK(contains(r.out, "CHECK parse FAIL"));
  CHECK(contains(r.out, "sieve"));

  CHECK_THROWS_AS(cas::textio::parse_prob("variant B_ord\nlevel 2\nbase nonsense\n"), cas::textio::ParseError);
  try {
    cas::textio::parse_prob("variant B_ord\nlevel 2\nbase constant { a }\nfamily A frob { x }\n");
    FAIL("expected a parse error");
  } catch (const cas::textio::ParseError& e) {
    CHECK(e.line == 4);
    CHECK(e.col >= 1);
  }
  CHECK(cli({"comp", "/nonexistent.prob"}).code == 1);
  CHECK(cli({"frobnicate"}).code == 1);
  CHECK(cli({"homs", "1", "1", "--level", "9"}).code == 1);
}

TEST_CASE("glue demo") {
  auto r = cli({"glue-demo"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "CHECK glue_demo.iso_on PASS"));
  CHECK(contains(r.out, "CHECK glue_demo.u PASS"));
  CHECK(contains(r.out, "|Glue|="));
}

TEST_CASE("counterexample exit codes and output forms") {
  auto r = cli({"counterexample"});
  CHECK(r.code == 0);
  CHECK(contains(r.out, "propositional resizing fails at bounds (S=3, N=2, budget=10000, window=16)"));

  auto s0 = cli({"counterexample", "--tracker-size", "0"});
  CHECK(s0.code == 2);
  CHECK(contains(s0.out, "CHECK verdict INCONCLUSIVE"));

  auto nr = cli({"counterexample", "--no-refute"});
  CHECK(nr.code == 2);
  CHECK(contains(nr.out, "refutation disabled"));

  auto fake = cli({"counterexample", "--tracker-size", "1", "--inject-section", "(K 1)"});
  CHECK(fake.code == 1);
  CHECK(contains(fake.out, "(K 1)"));

  auto bad = cli({"counterexample", "--tracker-size", "1", "--corrupt-fiber", "2"});
  CHECK(bad.code == 1);
  CHECK(contains(bad.out, "CHECK uniformity FAIL"));

  auto js = cli({"counterexample", "--json"});
  CHECK(js.code == 0);
  for (const auto& l : lines_of(js.out)) {
    auto j = nlohmann::json::parse(l);
    CHECK(j.contains("check"));
    CHECK(j.contains("status"));
  }
  CHECK(lines_of(js.out).size() == 8);
}

TEST_CASE("report is deterministic and written to --out") {
  fs::path a = fs::temp_directory_path() / "cas_report_a.txt";
  fs::path b = fs::temp_directory_path() / "cas_report_b.txt";
  auto ra = cli({"report", "--out", a.string()});
  auto rb = cli({"report", "--out", b.string()});
  CHECK(ra.code == 0);
  CHECK(rb.code == 0);
  CHECK(ra.out == rb.out);
  std::string ta = slurp(a);
  CHECK_FALSE(ta.empty());
  CHECK(ta == slurp(b));
  CHECK(contains(ta, "== axioms"));
  CHECK(contains(ta, "propositional resizing fails at bounds"));
}
