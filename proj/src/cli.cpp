#include "cas/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "cas/axioms.hpp"
#include "cas/resizing.hpp"
#include "cas/textio.hpp"

namespace cas::cli {

namespace {

struct RunConfig {
  std::optional<int> level;
  std::string variant = "B_ord";
  std::size_t tracker_size = 3;
  std::uint64_t budget = pca::kDefaultBudget;
  std::uint64_t n_bound = 16;
  std::uint64_t window = 16;
  std::uint64_t seed = 1;
  bool json = false;
  std::string out;
};

std::string json_lines(const std::vector<CheckLine>& lines) {
  std::string s;
  for (const CheckLine& l : lines) {
    nlohmann::ordered_json j;
    j["check"] = l.name;
    j["status"] = status_name(l.status);
    for (const auto& [k, v] : l.kv) j[k] = v;
    s += j.dump() + "\n";
  }
  return s;
}

std::string check_text(const std::vector<CheckLine>& lines) {
  std::string s;
  for (const CheckLine& l : lines) s += l.render() + "\n";
  return s;
}

std::vector<CheckLine> axiom_lines(const RunConfig& cfg, bool corrupt, std::string& text) {
  axioms::Options o;
  o.level = cfg.level.value_or(3);
  o.var = cube::parse_variant(cfg.variant);
  // max in place of min breaks the meet laws.
  if (corrupt) o.mu0 = cube::connection(1, o.var);
  std::ostringstream os;
  std::vector<CheckLine> lines;
  for (const auto& r : axioms::run_axioms(o)) {
    os << "Ax " << r.number << " " << r.name << ": " << (r.pass ? "holds" : "FAILS") << ", " << r.detail << "\n";
    lines.push_back(CheckLine{"ax" + std::to_string(r.number), r.pass ? Status::Pass : Status::Fail, {}}
                        .add("level", std::to_string(o.level))
                        .add("variant", cfg.variant)
                        .add("detail", r.detail));
  }
  text = os.str();
  return lines;
}

std::string homs_text(int m, int n, cube::Variant var) {
  std::ostringstream os;
  for (const cube::Mor& f : cube::homs(m, n, var)) os << cube::to_string(f) << "\n";
  os << "count " << cube::variant_name(var) << "(" << m << "," << n << ")=" << cube::hom_count(m, n, var) << "\n";
  return os.str();
}

std::vector<CheckLine> comp_lines(const std::string& path, std::string& text) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  std::ostringstream os;
  std::vector<CheckLine> lines;
  textio::ProbFile f;
  try {
    f = textio::parse_prob(ss.str());
    auto built = textio::build(f);
    for (const auto& o : textio::run_problems(f, built)) {
      os << "problem " << o.name << " (" << o.solver << "): " << o.detail << "\n";
      if (o.result) os << "  result " << o.result->to_string() << "\n";
      CheckLine l{"comp." + o.name, o.ok ? Status::Pass : Status::Fail, {}};
      l.add("solver", o.solver);
      if (o.result) l.add("result", o.result->to_string());
      if (!o.ok) l.add("detail", o.detail);
      lines.push_back(l);
    }
  } catch (const textio::ParseError& e) {
    os << path << ":" << e.what() << "\n";
    lines.push_back(CheckLine{"parse", Status::Fail, {}}.add("file", path).add("error", e.what()));
  }
  text = os.str();
  return lines;
}

constexpr const char* kGlueDemo = R"(variant B_ord
level 2
base constant { a b }
sieve top0 at 0 top
sieve bot0 at 0 bot
family A nabla {
  over * { 0 1 }
}
family B nabla {
  over * { p q }
}
family G glue A B {
  cof * { a }
  map { 0↦p 1↦q }
}
family C nabla {
  over * { q }
}
family H glue A C {
  cof * { a }
  map { 0↦q 1↦q }
}
problem iso_on {
  family G
  stage 0
  point a
  face 0
  sieve top0
  tube #1
}
problem iso_off {
  family G
  stage 0
  point b
  face 0
  sieve bot0
  tube #3
}
problem collapse_on {
  family H
  stage 0
  point a
  face 1
  sieve bot0
  tube #2
}
)";

constexpr const char* kUniverseDemo = R"(variant B_ord
level 2
base yoneda 1
sieve end0 at 0 top
family L nabla {
  over * { x y z }
}
universe u {
  family L
  stage 0
  face 1
  sieve end0
}
)";

std::vector<CheckLine> glue_demo_lines(std::string& text) {
  std::ostringstream os;
  std::vector<CheckLine> lines;
  for (const char* src : {kGlueDemo, kUniverseDemo}) {
    auto f = textio::parse_prob(src);
    auto b = textio::build(f);
    for (const auto& o : textio::run_problems(f, b)) {
      os << o.name << " (" << o.solver << "): " << o.detail << "\n";
      if (o.result) os << "  result " << o.result->to_string() << "\n";
      lines.push_back(CheckLine{"glue_demo." + o.name, o.ok ? Status::Pass : Status::Fail, {}}.add("solver", o.solver));
    }
  }
  // Fibers of the glued family on and off the cofibration.
  auto f = textio::parse_prob(kGlueDemo);
  auto b = textio::build(f);
  const auto& G = b.fibs.at("G");
  const auto& A = b.fibs.at("A");
  const auto& B = b.fibs.at("B");
  for (int c = 0; c <= 1; ++c)
    for (const char* g : {"a", "b"}) {
      Val gv = Val::sym(g);
      os << "stage " << c << " over " << g << ": |Glue|=" << G.fam->fiber(c, gv).size()
         << " |A|=" << A.fam->fiber(c, gv).size() << " |B|=" << B.fam->fiber(c, gv).size() << "\n";
    }
  text = os.str();
  return lines;
}

resizing::Config resizing_config(const RunConfig& cfg) {
  resizing::Config c;
  c.level = cfg.level.value_or(2);
  c.tracker_size = cfg.tracker_size;
  c.budget = cfg.budget;
  c.n_bound = cfg.n_bound;
  c.window = cfg.window;
  c.seed = cfg.seed;
  return c;
}

void emit(const RunConfig& cfg, const std::string& text, const std::vector<CheckLine>& lines, std::ostream& out,
          const std::string& file_text) {
  if (cfg.json)
    out << json_lines(lines);
  else
    out << text << check_text(lines);
  if (!cfg.out.empty()) {
    std::ofstream f(cfg.out);
    if (!f) throw std::runtime_error("cannot write " + cfg.out);
    f << file_text;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cubical assembly workbench"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;
  app.add_option("--level", cfg.level, "Truncation level N")->check(CLI::Range(1, 3));
  app.add_option("--variant", cfg.variant, "Cube category")->check(CLI::IsMember({"B", "B_ord"}));
  app.add_option("--tracker-size", cfg.tracker_size, "Size bound S for candidate section trackers");
  app.add_option("--budget", cfg.budget, "Evaluation step budget")->check(CLI::PositiveNumber);
  app.add_option("--n-bound", cfg.n_bound, "Range checked by the section refuter")->check(CLI::PositiveNumber);
  app.add_option("--window", cfg.window, "Base elements gamma <= window");
  app.add_option("--seed", cfg.seed, "Seed for generated problems");
  app.add_flag("--json", cfg.json, "Machine lines only, as JSON objects");
  app.add_option("--out", cfg.out, "Write the full output to a file");

  auto* ax = app.add_subcommand("axioms", "Check the interval and cofibration axioms");
  bool corrupt = false;
  ax->add_flag("--corrupt-connection", corrupt, "Replace the min connection by max (negative control)")
      ->group("");

  auto* homs = app.add_subcommand("homs", "List a hom-set of the cube category");
  int hm = 0, hn = 0;
  homs->add_option("m", hm)->required()->check(CLI::Range(0, 3));
  homs->add_option("n", hn)->required()->check(CLI::Range(0, 3));

  auto* comp = app.add_subcommand("comp", "Run the composition problems of a problem file");
  std::string file;
  comp->add_option("file", file)->required();

  auto* demo = app.add_subcommand("glue-demo", "Glue, SGlue and universe composition on small instances");

  auto* cx = app.add_subcommand("counterexample", "The counterexample to propositional resizing");
  bool no_refute = false;
  std::optional<std::string> inject;
  std::optional<std::uint64_t> corrupt_fiber;
  cx->add_flag("--no-refute", no_refute, "Skip the refutation of candidate sections");
  cx->add_option("--inject-section", inject, "Accept this code as a section (negative control)")->group("");
  cx->add_option("--corrupt-fiber", corrupt_fiber, "Drop realizer gamma from element gamma + 1 (negative control)")
      ->group("");

  auto* rep = app.add_subcommand("report", "Axioms, hom counts and the counterexample in one report");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }

  try {
    std::string text;
    std::vector<CheckLine> lines;
    if (ax->parsed()) {
      lines = axiom_lines(cfg, corrupt, text);
      emit(cfg, text, lines, out, text + check_text(lines));
    } else if (homs->parsed()) {
      text = homs_text(hm, hn, cube::parse_variant(cfg.variant));
      if (cfg.json) {
        nlohmann::ordered_json j;
        j["variant"] = cfg.variant;
        j["m"] = hm;
        j["n"] = hn;
        j["count"] = cube::hom_count(hm, hn, cube::parse_variant(cfg.variant));
        out << j.dump() << "\n";
      } else {
        out << text;
      }
      if (!cfg.out.empty()) std::ofstream(cfg.out) << text;
    } else if (comp->parsed()) {
      lines = comp_lines(file, text);
      emit(cfg, text, lines, out, text + check_text(lines));
    } else if (demo->parsed()) {
      lines = glue_demo_lines(text);
      emit(cfg, text, lines, out, text + check_text(lines));
    } else if (cx->parsed()) {
      resizing::Config c = resizing_config(cfg);
      c.refute = !no_refute;
      c.fake_section = inject;
      c.corrupt_fiber = corrupt_fiber;
      auto r = resizing::run(c);
      lines = resizing::check_lines(r);
      std::string full = resizing::render(r, 0);
      if (cfg.json)
        out << json_lines(lines);
      else
        out << resizing::render(r, 10);
      if (!cfg.out.empty()) {
        std::ofstream f(cfg.out);
        if (!f) throw std::runtime_error("cannot write " + cfg.out);
        f << full;
      }
    } else if (rep->parsed()) {
      std::ostringstream os;
      std::string ax_text;
      RunConfig axc = cfg;
      axc.level = 3;
      auto al = axiom_lines(axc, false, ax_text);
      os << "== axioms (level 3, " << cfg.variant << ")\n" << ax_text << check_text(al);
      os << "\n== hom-sets\n";
      for (auto [m, n, v] : {std::tuple{0, 1, cube::Variant::B}, std::tuple{1, 1, cube::Variant::B},
                             std::tuple{0, 1, cube::Variant::Ord}, std::tuple{1, 1, cube::Variant::Ord}})
        os << "count " << cube::variant_name(v) << "(" << m << "," << n << ")=" << cube::hom_count(m, n, v) << "\n";
      std::string demo_text;
      auto gl = glue_demo_lines(demo_text);
      os << "\n== glue\n" << demo_text << check_text(gl);
      auto r = resizing::run(resizing_config(cfg));
      auto rl = resizing::check_lines(r);
      os << "\n== counterexample\n" << resizing::render(r, 0);
      lines = al;
      lines.insert(lines.end(), gl.begin(), gl.end());
      lines.insert(lines.end(), rl.begin(), rl.end());
      if (cfg.json)
        out << json_lines(lines);
      else if (cfg.out.empty())
        out << os.str();
      else
        out << check_text(lines);
      if (!cfg.out.empty()) {
        std::ofstream f(cfg.out);
        if (!f) throw std::runtime_error("cannot write " + cfg.out);
        f << os.str();
      }
    }
    return exit_code(lines);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace cas::cli
