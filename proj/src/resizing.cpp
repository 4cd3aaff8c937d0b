#include "cas/resizing.hpp"

#include <random>
#include <sstream>
#include <stdexcept>

namespace cas::resizing {

using assembly::Assembly;
using pca::Code;
using psh::Mor;
using psh::Partial;
using psh::Psh;
using psh::Sieve;
using psh::Variant;

namespace {

constexpr int kLevelCap = 3;
constexpr Variant kVar = Variant::Ord;

std::string num(std::uint64_t n) { return std::to_string(n); }

}  // namespace

NablaA build_nabla_A(const Config& cfg) {
  if (cfg.level < 1 || cfg.level > kLevelCap)
    throw std::invalid_argument("level must lie in 1.." + std::to_string(kLevelCap));
  if (cfg.fiber_width == 0) throw std::invalid_argument("fiber width must be positive");
  std::vector<Val> pts;
  for (std::uint64_t g = 0; g <= cfg.window; ++g) pts.push_back(Val::integer(static_cast<long long>(g)));
  Psh base = psh::constant(std::move(pts), kVar, "DeltaGamma");
  const std::uint64_t w = cfg.fiber_width;
  kan::Fam a = psh::nabla(
      base,
      [w](const Val& g) {
        std::vector<Val> out;
        for (std::uint64_t k = 1; k <= w; ++k) out.push_back(Val::integer(g.as_int() + static_cast<long long>(k)));
        return out;
      },
      "NablaA");
  return NablaA{cfg, base, kan::nabla_fib(a)};
}

bool fiber_realizes(const Config& cfg, std::uint64_t gamma, std::uint64_t m, std::uint64_t n) {
  if (m <= gamma) return false;
  if (cfg.corrupt_fiber && *cfg.corrupt_fiber == gamma && m == gamma + 1 && n == gamma) return false;
  return n == gamma || n == m;
}

// A realizer of x in NablaA(c, gamma) sends the index of each vertex v to a realizer of x(v).
bool realizes(const Config& cfg, std::uint64_t gamma, const Val& x, const Code& r) {
  for (std::size_t v = 0; v < x.size(); ++v) {
    auto k = pca::apply_nat(r, v, cfg.budget);
    if (!k || !fiber_realizes(cfg, gamma, static_cast<std::uint64_t>(x[v].as_int()), *k)) return false;
  }
  return true;
}

Fibrancy certify_fibrancy(const NablaA& na) {
  const Config& cfg = na.cfg;
  const kan::Fam& fam = na.fib.fam;
  Fibrancy out;
  std::mt19937_64 rng(cfg.seed);
  std::vector<std::vector<Sieve>> sieves;
  for (int c = 0; c < cfg.level; ++c) sieves.push_back(psh::all_sieves(c, kVar, cfg.level));
  auto pick = [&rng](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  for (std::size_t k = 0; k < cfg.fib_problems; ++k) {
    const int c = static_cast<int>(pick(static_cast<std::size_t>(cfg.level)));
    const Val p = Val::integer(static_cast<long long>(pick(cfg.window + 1)));
    const auto& xs = fam->fiber(c + 1, p);
    const Val x = xs[pick(xs.size())];
    const int e = static_cast<int>(pick(2));
    const Sieve& phi = sieves[c][pick(sieves[c].size())];
    Partial f(phi, [fam, p, x](const Mor& s) { return fam->act(cube::extend(s), p, x); });
    Val a = fam->act(kan::iota(c, e, kVar), p, x);
    kan::CompProblem P{c, p, e, f, a};
    auto adh = kan::check_adherence(fam, P, cfg.level);
    auto res = kan::check_comp(fam, P, na.fib.solve(P), cfg.level);
    kan::CompProblem empty{c, p, e, kan::empty_partial(c, kVar), a};
    bool base_kept = na.fib.solve(empty) == a;
    ++out.problems;
    if (!adh.ok || !res.ok || !base_kept) {
      out.detail = "problem " + num(k) + " at stage " + std::to_string(c) + " over " + p.to_string() + " sieve " +
                   phi.describe() + ": " +
                   (!adh.ok ? adh.detail : !res.ok ? res.detail : std::string("empty system changed the base"));
      return out;
    }
  }
  out.ok = true;
  out.detail = "problems=" + num(out.problems) + " stages<" + std::to_string(cfg.level);
  return out;
}

Uniformity certify_uniform(const NablaA& na) {
  const Config& cfg = na.cfg;
  Uniformity out;
  for (std::uint64_t g = 0; g <= cfg.window; ++g) {
    Code k = pca::ap(pca::K(), pca::numeral(g));
    const Val gv = Val::integer(static_cast<long long>(g));
    for (int c = 0; c <= cfg.level; ++c) {
      ++out.fibers;
      for (const Val& x : na.fib.fam->fiber(c, gv))
        if (!realizes(cfg, g, x, k)) {
          out.detail = pca::to_string(k) + " does not realize " + x.to_string() + " in stage " + std::to_string(c) +
                       " over " + num(g);
          return out;
        }
    }
    out.common.emplace_back(g, k);
  }
  out.ok = true;
  out.detail = "fibers=" + num(out.fibers);
  return out;
}

// f n x = K x: the code of the constant function at the identity's output on x.
Code support_tracker() {
  using pca::ap;
  using pca::K;
  using pca::S;
  return ap(K(), ap(S(), ap(K(), K()), pca::identity_code()));
}

Support certify_well_supported(const NablaA& na) {
  const Config& cfg = na.cfg;
  Support out;
  out.tracker = support_tracker();
  auto base = assembly::is_well_supported(assembly::counterexample_data(), pca::identity_code(), cfg.window,
                                          cfg.window + cfg.realizer_width, cfg.budget);
  if (!base.ok) {
    out.detail = "identity does not support A: " + base.reason;
    return out;
  }
  for (std::uint64_t g = 0; g <= cfg.window; ++g)
    for (int c = 0; c <= cfg.level; ++c)
      for (std::uint64_t n = g + 1; n <= g + cfg.realizer_width; ++n) {
        ++out.checked;
        auto r1 = pca::apply(out.tracker, pca::numeral(static_cast<std::uint64_t>(c)), cfg.budget);
        pca::EvalResult r2;
        if (r1.ok()) r2 = pca::apply(r1.value, pca::numeral(n), cfg.budget);
        // The realized element is constant at the identity's output.
        Val x = Val::tuple(std::vector<Val>(std::size_t{1} << c, Val::integer(static_cast<long long>(n))));
        if (!r1.ok() || !r2.ok() || !realizes(cfg, g, x, r2.value)) {
          out.detail = "tracker fails on realizer " + num(n) + " of " + num(g) + " at stage " + std::to_string(c);
          return out;
        }
      }
  out.ok = true;
  out.detail = "checked=" + num(out.checked);
  return out;
}

HProp certify_hprop(const NablaA& na) {
  const Config& cfg = na.cfg;
  const kan::Fam& fam = na.fib.fam;
  HProp out;
  for (std::uint64_t g = 0; g <= cfg.window; ++g) {
    const Val gv = Val::integer(static_cast<long long>(g));
    for (int c = 0; c < cfg.level; ++c)
      for (const Val& a0 : fam->fiber(c, gv))
        for (const Val& a1 : fam->fiber(c, gv)) {
          ++out.pairs;
          Val p = kan::nabla_path(c, a0, a1);
          bool ok = fam->in_fiber(c + 1, gv, p) && fam->act(kan::iota(c, 0, kVar), gv, p) == a0 &&
                    fam->act(kan::iota(c, 1, kVar), gv, p) == a1;
          if (!ok) {
            out.detail = "path " + p.to_string() + " over " + num(g) + " has wrong end-points";
            return out;
          }
        }
  }
  out.ok = true;
  out.detail = "pairs=" + num(out.pairs);
  return out;
}

Sections refute_all_sections(const Config& cfg) {
  Sections s;
  if (cfg.refute && cfg.tracker_size > 0) {
    s.ran = true;
    pca::for_each_code(cfg.tracker_size, [&](const Code& c) {
      ++s.candidates;
      Candidate cand{pca::to_string(c), assembly::refute_section(c, cfg.n_bound, cfg.budget)};
      if (cand.result.refuted)
        ++s.refuted;
      else
        s.inconclusive.push_back(cand.code);
      s.entries.push_back(std::move(cand));
      return true;
    });
  }
  if (cfg.fake_section) {
    s.candidates += 1;
    s.survivors.push_back(pca::to_string(pca::parse(*cfg.fake_section)));
  }
  return s;
}

Assembly window_fiber(const Config& cfg, std::uint64_t gamma) {
  std::vector<std::pair<std::string, assembly::Realizers>> elems;
  for (std::uint64_t m = gamma + 1; m <= gamma + cfg.fiber_width; ++m) {
    assembly::Realizers rs;
    for (std::uint64_t n : {gamma, m})
      if (fiber_realizes(cfg, gamma, m, n)) rs.insert(n);
    elems.emplace_back(num(m), rs);
  }
  return Assembly::make(std::move(elems));
}

std::vector<std::pair<std::string, Assembly>> modest_samples() {
  std::vector<std::pair<std::string, Assembly>> out;
  out.emplace_back("point", Assembly::make({{"*", {0}}}));
  out.emplace_back("two", Assembly::make({{"p", {0}}, {"q", {1}}}));
  out.emplace_back("three", Assembly::make({{"a", {0, 3}}, {"b", {1}}, {"c", {2, 5}}}));
  out.emplace_back("per", assembly::modest_of_per(assembly::PER::make({{0, 0}, {0, 4}, {4, 0}, {4, 4}, {2, 2}})));
  return out;
}

Orthogonality orthogonality_suite(const Config& cfg) {
  Orthogonality out;
  out.ok = true;
  auto samples = modest_samples();
  for (std::uint64_t g : {std::uint64_t{0}, std::uint64_t{3}, cfg.window}) {
    Assembly a = window_fiber(cfg, g);
    const bool uniform = assembly::is_uniform(a).uniform;
    for (const auto& [name, x] : samples) {
      OrthoEntry e{g, name, {}};
      if (uniform)
        e.verdict = assembly::orthogonality_check(a, x, cfg.ortho_size, cfg.budget);
      else
        e.verdict.detail = "source fiber is not uniform; not checked";
      out.ok = out.ok && e.verdict.pass;
      out.entries.push_back(std::move(e));
    }
  }
  // Shared realizer 0 lets the identity be tracked, so maps out of A(0) need not be constant.
  Assembly x = Assembly::make({{"p", {0, 1}}, {"q", {0, 2}}});
  Config clean = cfg;
  clean.corrupt_fiber.reset();
  auto v = assembly::orthogonality_check(window_fiber(clean, 0), x, cfg.ortho_size, cfg.budget);
  out.control_fails = !assembly::is_modest(x) && !v.pass;
  out.control_detail = v.detail + (v.lambda_bijective ? " lambda=bijective" : " lambda=not-bijective");
  return out;
}

namespace {

std::string bounds(const Config& c) {
  std::ostringstream os;
  os << "S=" << c.tracker_size << ", N=" << c.level << ", budget=" << c.budget << ", window=" << c.window;
  return os.str();
}

Status sections_status(const Sections& s) {
  if (!s.survivors.empty()) return Status::Fail;
  if (!s.ran || !s.inconclusive.empty()) return Status::Inconclusive;
  return Status::Pass;
}

Status ortho_status(const Orthogonality& o) {
  bool inconclusive = false;
  for (const auto& e : o.entries) {
    if (e.verdict.inconclusive) inconclusive = true;
    else if (!e.verdict.pass) return Status::Fail;
  }
  return inconclusive ? Status::Inconclusive : Status::Pass;
}

Status of(bool ok) { return ok ? Status::Pass : Status::Fail; }

}  // namespace

std::string final_verdict(const Report& r, Status* status) {
  auto set = [status](Status s) {
    if (status) *status = s;
  };
  std::vector<std::string> failed;
  if (!r.fibrancy.ok) failed.push_back("fibrancy");
  if (!r.uniformity.ok) failed.push_back("uniformity");
  if (!r.support.ok) failed.push_back("well-supportedness");
  if (!r.hprop.ok) failed.push_back("hprop");
  if (ortho_status(r.orthogonality) == Status::Fail) failed.push_back("orthogonality");
  if (!r.sections.survivors.empty()) {
    set(Status::Fail);
    return "not refuted: candidate section " + r.sections.survivors.front() + " survives";
  }
  if (!failed.empty()) {
    std::string s = "not confirmed: failed";
    for (const auto& f : failed) s += " " + f;
    set(Status::Fail);
    return s;
  }
  set(Status::Inconclusive);
  if (!r.cfg.refute) return "inconclusive: sections unchecked (refutation disabled)";
  if (!r.sections.ran) return "inconclusive: sections unchecked (raise tracker size S)";
  if (!r.sections.inconclusive.empty())
    return "inconclusive: " + num(r.sections.inconclusive.size()) + " candidates unrefuted (raise n_bound or budget)";
  if (ortho_status(r.orthogonality) == Status::Inconclusive)
    return "inconclusive: orthogonality tracker search exhausted (raise the orthogonality size bound)";
  set(Status::Pass);
  return "propositional resizing fails at bounds (" + bounds(r.cfg) + ")";
}

Report run(const Config& cfg) {
  Report r;
  r.cfg = cfg;
  NablaA na = build_nabla_A(cfg);
  r.fibrancy = certify_fibrancy(na);
  r.uniformity = certify_uniform(na);
  r.support = certify_well_supported(na);
  r.hprop = certify_hprop(na);
  r.sections = refute_all_sections(cfg);
  r.orthogonality = orthogonality_suite(cfg);
  r.verdict = final_verdict(r, &r.status);
  return r;
}

std::vector<CheckLine> check_lines(const Report& r) {
  std::vector<CheckLine> out;
  out.push_back(CheckLine{"nabla_fibrancy", of(r.fibrancy.ok), {}}
                    .add("problems", num(r.fibrancy.problems))
                    .add("level", std::to_string(r.cfg.level)));
  out.push_back(CheckLine{"uniformity", of(r.uniformity.ok), {}}
                    .add("fibers", num(r.uniformity.fibers))
                    .add("common", "K n over n"));
  out.push_back(CheckLine{"well_supported", of(r.support.ok), {}}
                    .add("tracker", pca::to_string(r.support.tracker))
                    .add("checked", num(r.support.checked)));
  out.push_back(CheckLine{"hprop", of(r.hprop.ok), {}}.add("pairs", num(r.hprop.pairs)));
  CheckLine sec{"sections", sections_status(r.sections), {}};
  sec.add("candidates", num(r.sections.candidates))
      .add("refuted", num(r.sections.refuted))
      .add("inconclusive", num(r.sections.inconclusive.size()));
  if (!r.sections.survivors.empty()) sec.add("survivor", r.sections.survivors.front());
  out.push_back(sec);
  out.push_back(CheckLine{"orthogonality", ortho_status(r.orthogonality), {}}.add(
      "samples", num(r.orthogonality.entries.size())));
  out.push_back(CheckLine{"orthogonality_control", of(r.orthogonality.control_fails), {}}.add(
      "detail", r.orthogonality.control_detail));
  out.push_back(CheckLine{"verdict", r.status, {}}.add("text", r.verdict));
  return out;
}

std::string render(const Report& r, std::size_t list_limit) {
  const Config& c = r.cfg;
  std::ostringstream os;
  os << "counterexample report\n"
     << "bounds: level=" << c.level << " window=" << c.window << " fiber_width=" << c.fiber_width
     << " realizer_width=" << c.realizer_width << " tracker_size=" << c.tracker_size << " n_bound=" << c.n_bound
     << " budget=" << c.budget << " ortho_size=" << c.ortho_size << " seed=" << c.seed << "\n"
     << "scope: A* quantifies over all propositions in the impredicative universe and is not materialized;\n"
     << "  checked instead: orthogonality per sample modest assembly, and that no candidate section exists.\n"
     << "  Pi types quantify over stages <= level only.\n\n";

  os << "[fibrancy] " << (r.fibrancy.ok ? "certified" : "FAILED") << ": " << r.fibrancy.detail << "\n";
  os << "[uniformity] " << (r.uniformity.ok ? "certified" : "FAILED") << ": " << r.uniformity.detail << "\n";
  for (const auto& [g, k] : r.uniformity.common) os << "  gamma=" << g << " common realizer " << pca::to_string(k) << "\n";
  os << "[well-supported] " << (r.support.ok ? "certified" : "FAILED") << ": tracker "
     << pca::to_string(r.support.tracker) << ", " << r.support.detail << "\n";
  os << "[hprop] " << (r.hprop.ok ? "certified" : "FAILED") << ": nabla_path end-points, " << r.hprop.detail << "\n";

  const Sections& s = r.sections;
  os << "[sections] ";
  if (!s.ran)
    os << "not checked\n";
  else
    os << "candidates=" << s.candidates << " refuted=" << s.refuted << " inconclusive=" << s.inconclusive.size()
       << "\n";
  std::size_t shown = 0;
  for (const Candidate& cand : s.entries) {
    if (list_limit && shown == list_limit) {
      os << "  ... " << (s.entries.size() - shown) << " more\n";
      break;
    }
    ++shown;
    os << "  " << cand.code << ": ";
    if (cand.result.refuted)
      os << cand.result.witness->describe();
    else
      os << "inconclusive";
    if (cand.result.chain) os << "; chain " << cand.result.chain->describe();
    os << "\n";
  }
  for (const auto& f : s.survivors) os << "  SURVIVOR " << f << " (injected, accepted as a section)\n";

  os << "[orthogonality]\n";
  for (const OrthoEntry& e : r.orthogonality.entries)
    os << "  A(" << e.gamma << ") -> " << e.sample << ": "
       << (e.verdict.pass ? "collapses" : e.verdict.inconclusive ? "inconclusive" : "FAILED") << " " << e.verdict.detail
       << "\n";
  os << "  non-modest control: " << (r.orthogonality.control_fails ? "bijection fails" : "bijection holds") << " "
     << r.orthogonality.control_detail << "\n\n";

  os << "verdict: " << r.verdict << "\n";
  for (const CheckLine& l : check_lines(r)) os << l.render() << "\n";
  return os.str();
}

}  // namespace cas::resizing
