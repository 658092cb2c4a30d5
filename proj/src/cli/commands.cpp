#include "jetflat/cli.hpp"

#include <fstream>
#include <sstream>

#include "jetflat/duality.hpp"
#include "jetflat/fibration.hpp"
#include "jetflat/jetframe.hpp"

namespace jetflat::cli {

namespace {

using jet::PDESystem;
using sym::RatFunc;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

RatFunc parse_key(const Document& doc, const std::string& key, const sym::Chart& chart) {
  const std::string& text = doc.require(key);
  try {
    return sym::parse(text, chart);
  } catch (const ParseError& e) {
    throw InputError(key + ": " + e.what() + " (offset " + std::to_string(e.position()) + " in \"" + text + "\")");
  }
}

PDESystem parse_system(const Document& doc) {
  doc.restrict_keys({"f11", "f12", "f22"});
  const sym::Chart& ch = jet::base_chart();
  return PDESystem(parse_key(doc, "f11", ch), parse_key(doc, "f12", ch), parse_key(doc, "f22", ch));
}

Json system_json(const PDESystem& sys) {
  return {{"f11", sym::to_string(sys.f11)}, {"f12", sym::to_string(sys.f12)}, {"f22", sym::to_string(sys.f22)}};
}

int verdict_code(curv::Verdict v) {
  switch (v) {
    case curv::Verdict::Flat: return kFlat;
    case curv::Verdict::NotFlat: return kNotFlat;
    case curv::Verdict::NotIntegrable: return kNotIntegrable;
  }
  return kUsage;
}

bool z_free(const PDESystem& sys) {
  for (const RatFunc* f : {&sys.f11, &sys.f12, &sys.f22}) {
    if (f->depends_on("z1") || f->depends_on("z2")) return false;
  }
  return true;
}

std::string curvature_line(const std::string& name, const curv::FiberedScalar& s) {
  std::string line = name + std::string(name.size() < 3 ? 4 - name.size() : 1, ' ') + "= ";
  if (s.is_zero()) return line + "0";
  return line + curv::to_string(s.fiber) + " * (" + sym::to_string(s.base) + ")";
}

// Check report shared by check and dual.
Outcome check_system(const PDESystem& sys) {
  const curv::CurvatureReport report = curv::flatness(sys);
  Json json = {{"system", system_json(sys)}};
  json.update(to_json(report));

  std::ostringstream text;
  text << "f11 = " << sys.f11 << "\nf12 = " << sys.f12 << "\nf22 = " << sys.f22 << "\n";
  text << "A = " << report.A << "\nB = " << report.B << "\n";
  text << "verdict: " << curv::to_string(report.verdict) << "\n";
  if (!report.witnesses.empty()) {
    text << "witnesses:";
    for (const auto& w : report.witnesses) text << " " << w;
    text << "\n";
  }
  const auto& recipes = curv::curvature_recipes();
  for (std::size_t i = 0; i < report.M.size() + report.S.size(); ++i) {
    const auto& s = i < report.M.size() ? report.M[i] : report.S[i - report.M.size()];
    text << curvature_line(recipes[i].name, s) << "\n";
  }
  for (const auto& d : report.diagnostics) {
    text << "diagnostic " << d.name << ": " << d.detail << "\n";
  }

  if (z_free(sys)) {
    const curv::Verdict fast = curv::corollary37(sys.f11, sys.f12, sys.f22);
    const bool agrees = fast == report.verdict;
    json["corollary37"] = {{"verdict", curv::to_string(fast)}, {"agrees", agrees}};
    text << "z-free fast path: " << curv::to_string(fast) << (agrees ? " (agrees)" : " (DISAGREES)") << "\n";
  } else {
    json["corollary37"] = nullptr;
  }
  const curv::ZDegree z = curv::quadratic_obstruction(sys);
  json["z_degree"] = curv::to_string(z);
  return {verdict_code(report.verdict), std::move(json), text.str()};
}

Json rows_json(const std::vector<fib::ProbeResult>& probes) {
  Json out = Json::array();
  for (const auto& p : probes) {
    out.push_back({{"name", p.name},
                   {"samples", p.samples},
                   {"failures", p.failures},
                   {"max_defect", p.max_defect},
                   {"witness", p.witness.empty() ? Json(nullptr) : Json(p.witness)}});
  }
  return out;
}

std::string probe_line(const fib::ProbeResult& p) {
  std::ostringstream os;
  os << (p.failures == 0 ? "pass " : "FAIL ") << p.name << ": " << p.samples << " samples, max defect "
     << p.max_defect;
  if (!p.witness.empty()) os << ", witness: " << p.witness;
  return os.str();
}

// Factorization statistics for one spec; intersection specs also check the factor memberships.
fib::ProbeResult decomposition_stats(const fib::SubgroupSpec& spec, fib::Rng& rng, int samples, bool factor_checks) {
  fib::ProbeResult out{"decomposition in " + spec.name(), samples, 0, 0, ""};
  for (int s = 0; s < samples; ++s) {
    const fib::GroupElement g = fib::random_element(spec, rng);
    std::vector<fib::FactorCheck> checks;
    double residual;
    if (factor_checks) {
      const auto d = fib::decompose_in_intersection(g, spec);
      checks = d.checks;
      residual = d.factors.residual;
    } else {
      const auto d = fib::iwasawa_lower(g);
      const double bound = fib::kResidualTol * (1 + g.matrix().norm());
      checks = {{"reconstruction", d.residual, d.residual <= bound},
                {"k orthogonal", (d.k.transpose() * d.k - fib::Mat4::Identity()).norm(),
                 (d.k.transpose() * d.k - fib::Mat4::Identity()).norm() <= fib::kMembershipTol},
                {"a positive", d.a.diagonal().minCoeff(), d.a.diagonal().minCoeff() > 0}};
      residual = d.residual;
    }
    out.max_defect = std::max(out.max_defect, residual);
    for (const auto& c : checks) {
      if (c.passed) continue;
      ++out.failures;
      if (out.witness.empty()) {
        std::ostringstream os;
        os << "sample " << s << ": " << c.name << " defect " << c.defect;
        out.witness = os.str();
      }
      break;
    }
  }
  return out;
}

}  // namespace

Document Document::parse(std::string_view text) {
  Document doc;
  int line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw InputError("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(std::string_view(t).substr(0, eq));
    const std::string value = trim(std::string_view(t).substr(eq + 1));
    if (key.empty()) throw InputError("line " + std::to_string(line_no) + ": empty key");
    if (value.empty()) throw InputError("line " + std::to_string(line_no) + ": empty value for " + key);
    if (doc.entries_.count(key)) {
      throw InputError("line " + std::to_string(line_no) + ": duplicate key " + key + " (first on line " +
                       std::to_string(doc.lines_[key]) + ")");
    }
    doc.entries_[key] = value;
    doc.lines_[key] = line_no;
  }
  return doc;
}

Document Document::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::optional<std::string> Document::get(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

const std::string& Document::require(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw InputError("missing key " + key);
  return it->second;
}

void Document::restrict_keys(const std::vector<std::string>& allowed) const {
  for (const auto& [key, value] : entries_) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw InputError("line " + std::to_string(lines_.at(key)) + ": unexpected key " + key);
    }
  }
}

Json to_json(const curv::CurvatureReport& report) {
  Json curvatures = Json::array();
  const auto& recipes = curv::curvature_recipes();
  for (std::size_t i = 0; i < report.M.size() + report.S.size(); ++i) {
    const auto& s = i < report.M.size() ? report.M[i] : report.S[i - report.M.size()];
    curvatures.push_back({{"name", recipes[i].name},
                          {"index", i},
                          {"fiber_factor", curv::to_string(s.fiber)},
                          {"base", sym::to_string(s.base)},
                          {"is_zero", s.is_zero()}});
  }
  Json diagnostics = Json::array();
  for (const auto& d : report.diagnostics) {
    diagnostics.push_back({{"name", d.name}, {"agrees", d.agrees}, {"detail", d.detail}});
  }
  return {{"verdict", curv::to_string(report.verdict)},
          {"A", sym::to_string(report.A)},
          {"B", sym::to_string(report.B)},
          {"curvatures", std::move(curvatures)},
          {"witnesses", report.witnesses},
          {"diagnostics", std::move(diagnostics)}};
}

Json to_json(const curv::StructureCheck& check) {
  Json rows = Json::array();
  for (const auto& r : check.rows) {
    rows.push_back({{"name", r.name}, {"holds", r.residual.is_zero()}, {"residual", ext::to_string(r.residual)}});
  }
  return {{"level", curv::to_string(check.level)}, {"holds", check.holds()}, {"rows", std::move(rows)}};
}

Outcome run_check(const Document& doc) { return check_system(parse_system(doc)); }

Outcome run_dual(const Document& doc) {
  doc.restrict_keys({"h", "inverse.x1", "inverse.x2"});
  const auto i1 = doc.get("inverse.x1"), i2 = doc.get("inverse.x2");
  if (i1.has_value() != i2.has_value()) throw InputError("inverse.x1 and inverse.x2 must be given together");
  std::optional<dual::Inverse> inverse;
  if (i1) inverse = dual::Inverse{parse_key(doc, "inverse.x1", dual::solution_chart()),
                                  parse_key(doc, "inverse.x2", dual::solution_chart())};
  const dual::SolutionFamily family(parse_key(doc, "h", dual::family_chart()), std::move(inverse));
  const dual::DualPDE d = dual::dual_pde(family);

  Json json = {{"h", sym::to_string(family.h())},
               {"open", d.open},
               {"F11", sym::to_string(d.F11)},
               {"F12", sym::to_string(d.F12)},
               {"F22", sym::to_string(d.F22)}};
  std::ostringstream text;
  text << "h = " << family.h() << "\nF11 = " << d.F11 << "\nF12 = " << d.F12 << "\nF22 = " << d.F22 << "\n";
  if (d.open) {
    text << "the dual system still depends on x1, x2; supply inverse.x1 and inverse.x2 to check it\n";
    json["dual_check"] = nullptr;
    return {kInputError, std::move(json), text.str()};
  }
  // Rename (X1, X2, Y, Z1, Z2) to (x1, x2, y, z1, z2).
  sym::Bindings rename;
  const sym::Chart& base = jet::base_chart();
  for (const auto& [from, to] : {std::pair{"X1", "x1"}, {"X2", "x2"}, {"Y", "y"}, {"Z1", "z1"}, {"Z2", "z2"}}) {
    rename.emplace(from, RatFunc::variable(base, to));
  }
  const PDESystem sys(sym::substitute(d.F11, rename), sym::substitute(d.F12, rename),
                      sym::substitute(d.F22, rename));
  Outcome check = check_system(sys);
  json["dual_check"] = std::move(check.report);
  text << "dual system, renamed to (x1, x2, y, z1, z2):\n" << check.text;
  return {check.exit_code, std::move(json), text.str()};
}

Outcome run_verify_structure(const Document& doc, curv::Level level) {
  const PDESystem sys = parse_system(doc);
  const auto ab = jet::integrability(sys);
  Json json = {{"system", system_json(sys)},
               {"level", curv::to_string(level)},
               {"A", sym::to_string(ab.A)},
               {"B", sym::to_string(ab.B)}};
  std::ostringstream text;
  text << "level " << curv::to_string(level) << "\nA = " << ab.A << "\nB = " << ab.B << "\n";
  try {
    const curv::StructureCheck check = curv::verify_structure_eq(sys, level);
    json.update(to_json(check));
    for (const auto& r : check.rows) {
      text << (r.residual.is_zero() ? "holds  " : "FAILS  ") << r.name;
      if (!r.residual.is_zero()) text << ": residual " << ext::to_string(r.residual);
      text << "\n";
    }
    text << (check.holds() ? "all rows hold" : "some rows fail") << "\n";
    return {check.holds() ? kFlat : kNotFlat, std::move(json), text.str()};
  } catch (const curv::PreconditionError& e) {
    json["holds"] = nullptr;
    json["error"] = e.what();
    text << e.what() << "\n";
    return {kNotIntegrable, std::move(json), text.str()};
  }
}

Outcome run_fibration(const std::string& group, std::uint64_t seed) {
  const fib::FibrationTable table = fib::fibration_table(group);
  const fib::SubgroupSpec G = fib::group_spec(group);
  fib::Rng rng(seed);
  constexpr int kSamples = 100;

  std::vector<fib::ProbeResult> decompositions;
  if (group == "compact") {
    for (const auto& spec : fib::lemma_specs()) decompositions.push_back(decomposition_stats(spec, rng, kSamples, true));
  } else {
    decompositions.push_back(decomposition_stats(G, rng, kSamples, false));
  }
  std::vector<fib::ProbeResult> probes;
  if (group != "sl4") probes = fib::orbit_probe(G, rng, kSamples).probes;

  bool passed = true;
  for (const auto* list : {&decompositions, &probes}) {
    for (const auto& p : *list) passed = passed && p.failures == 0;
  }

  Json dims = Json::array(), quotients = Json::array();
  std::ostringstream text;
  text << "group " << group << " (seed " << seed << ")\n";
  for (const auto& d : table.dims) {
    dims.push_back({{"name", d.name}, {"dim", d.dim}});
    text << "dim " << d.name << " = " << d.dim << "\n";
  }
  for (const auto& q : table.quotients) {
    quotients.push_back({{"name", q.name}, {"dim", q.dim}, {"model", q.model}});
    text << "dim " << q.name << " = " << q.dim << "  (" << q.model << ")\n";
  }
  for (const auto& p : decompositions) text << probe_line(p) << "\n";
  for (const auto& p : probes) text << probe_line(p) << "\n";
  text << (passed ? "all probes pass" : "some probes FAIL") << "\n";

  Json json = {{"group", group},
               {"seed", seed},
               {"dimensions", std::move(dims)},
               {"quotients", std::move(quotients)},
               {"decompositions", rows_json(decompositions)},
               {"orbit_probes", rows_json(probes)},
               {"passed", passed}};
  return {passed ? 0 : 1, std::move(json), text.str()};
}

Outcome run_selftest(std::uint64_t seed) {
  const std::vector<Criterion> criteria = run_acceptance(seed);
  Json rows = Json::array();
  std::ostringstream text;
  bool passed = true;
  for (const auto& c : criteria) {
    passed = passed && c.passed;
    rows.push_back({{"id", c.id}, {"title", c.title}, {"passed", c.passed}, {"detail", c.detail}});
    char secs[32];
    std::snprintf(secs, sizeof secs, "%.2fs", c.seconds);
    text << (c.passed ? "PASS" : "FAIL") << " [" << c.id << "] " << c.title << ": " << c.detail << " (" << secs
         << ")\n";
  }
  return {passed ? 0 : 1, {{"seed", seed}, {"criteria", std::move(rows)}, {"passed", passed}}, text.str()};
}

}  // namespace jetflat::cli
