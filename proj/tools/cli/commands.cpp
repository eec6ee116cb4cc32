#include "commands.hpp"

#include <filesystem>
#include <iostream>
#include <memory>

#include <CLI11.hpp>

#include "expr.hpp"
#include "selftest.hpp"
#include "tdisp/error.hpp"
#include "tdisp/io.hpp"
#include "tdisp/moduli.hpp"

namespace tdisp::cli {

namespace {

RingPtr classify_field(const ClassifyConfig& cfg) {
  return FiniteRing::parse(cfg.ring.empty() ? "GF(" + std::to_string(cfg.p) + ")" : cfg.ring);
}

std::string file_tag(const std::string& ring) {
  std::string t;
  for (char c : ring) {
    if (std::isalnum(static_cast<unsigned char>(c)))
      t.push_back(c);
    else if (c == '^' || c == '|' || c == ',')
      t.push_back('_');
  }
  return t;
}

std::vector<int> types(const ClassifyConfig& cfg) {
  if (cfg.d) return {*cfg.d};
  std::vector<int> ds;
  for (int d = 0; d <= cfg.h; ++d) ds.push_back(d);
  return ds;
}

std::string output_name(const ClassifyConfig& cfg, const std::string& field, int d) {
  return "classtable_" + file_tag(field) + "_n" + std::to_string(cfg.n) + "_h" + std::to_string(cfg.h) + "_d" +
         std::to_string(d) + "." + cfg.format;
}

// Reloads a serialized table and recomputes every stored invariant.
CheckResult reverify(const ModuliInstance& inst, const ClassTable& original, const std::string& json) {
  ClassTable t = classtable_from_json(json);
  if (t.classes.size() != original.classes.size()) return CheckResult::fail("class count changed on reload");
  if (t.x_count != original.x_count || t.g_count != original.g_count) return CheckResult::fail("counts changed on reload");
  std::optional<ModuliInstance> dual_inst;
  if (inst.h() - inst.d() != inst.d())
    dual_inst.emplace(inst.field(), inst.level(), inst.h(), inst.h() - inst.d(), inst.budget());
  const ModuliInstance& di = dual_inst ? *dual_inst : inst;
  for (std::size_t i = 0; i < t.classes.size(); ++i) {
    const ClassEntry& e = t.classes[i];
    if (!is_invertible(inst.W(), e.rep)) return CheckResult::fail("stored representative is not invertible");
    if (e.rep != original.classes[i].rep) return CheckResult::fail("representative changed on reload");
    Display D = inst.display(e.rep);
    if (is_nilpotent(D) != e.nilpotent) return CheckResult::fail("stored nilpotence flag is wrong");
    auto Mod = from_display(D);
    if (Mod.d() != e.d) return CheckResult::fail("stored d is wrong");
    std::optional<NewtonPolygon> np;
    try {
      np = newton_polygon(Mod);
    } catch (const InsufficientLevel&) {
    }
    if (np != e.slopes) return CheckResult::fail("stored slopes are wrong");
    if (orbit_minimum(di, dual_structure_matrix(D)) != e.dual_rep) return CheckResult::fail("stored dual class is wrong");
    if (e.orbit_size != original.classes[i].orbit_size || e.aut_order != original.classes[i].aut_order)
      return CheckResult::fail("orbit data changed on reload");
  }
  return {};
}

}  // namespace

std::vector<std::string> classify_outputs(const ClassifyConfig& cfg) {
  const std::string field = classify_field(cfg)->name();
  std::vector<std::string> out;
  for (int d : types(cfg)) out.push_back((std::filesystem::path(cfg.out) / output_name(cfg, field, d)).string());
  return out;
}

int cmd_classify(const ClassifyConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.format != "json" && cfg.format != "csv") {
    err << "error: format must be json or csv\n";
    return kUsage;
  }
  if (cfg.budget == 0 || cfg.workers == 0) {
    err << "error: budget and workers must be positive\n";
    return kUsage;
  }
  auto k = classify_field(cfg);
  if (cfg.d && (*cfg.d < 0 || *cfg.d > cfg.h)) {
    err << "error: d must lie in [0, h]\n";
    return kUsage;
  }

  struct Done {
    std::unique_ptr<ModuliInstance> inst;
    ClassTable table;
  };
  std::vector<Done> done;
  for (int d : types(cfg)) {
    auto inst = std::make_unique<ModuliInstance>(k, cfg.n, cfg.h, d, cfg.budget);
    EnumerationOptions opt;
    opt.workers = cfg.workers;
    opt.seed = cfg.seed;
    ClassTable t = enumerate_orbits(*inst, opt);
    done.push_back(Done{std::move(inst), std::move(t)});
  }

  bool ok = true;
  std::vector<std::pair<std::string, std::string>> files;
  for (const auto& [inst, t] : done) {
    const MassCheck m = mass_check(t);
    const NilpotentLocus nl = count_nilpotent_locus(t);
    out << t.field << " n=" << t.n << " h=" << t.h << " d=" << t.d << ": " << t.classes.size() << " classes, |X|=" << t.x_count
        << ", |G|=" << t.g_count << "\n";
    out << "  mass: sum 1/|Aut| = " << m.lhs << ", |X|/|G| = " << m.rhs << (m.equal ? " (equal)" : " (MISMATCH)") << "\n";
    out << "  nilpotent locus: " << nl.classes << " classes, " << nl.points << " points\n";
    ok = ok && m.equal;

    const mpz_class sweep = mpz_class(std::to_string(inst->X().size())) * t.g_count;
    if (sweep <= mpz_class(std::to_string(cfg.budget))) {
      auto c = check_orbit_invariants(*inst, t);
      out << "  orbit invariants: " << (c ? "constant" : "VARY (" + c.reason + ")") << "\n";
      ok = ok && c.ok;
    } else {
      out << "  orbit invariants: sweep skipped (|X| |G| exceeds the budget)\n";
    }

    const std::string json = classtable_to_json(t);
    auto c = reverify(*inst, t, json);
    out << "  reload check: " << (c ? "ok" : "FAILED (" + c.reason + ")") << "\n";
    ok = ok && c.ok;
    files.emplace_back((std::filesystem::path(cfg.out) / output_name(cfg, t.field, t.d)).string(),
                       cfg.format == "json" ? json : classtable_to_csv(t));
  }
  if (!ok) {
    err << "error: internal checks failed; no tables written\n";
    return kCheckFailed;
  }
  std::filesystem::create_directories(cfg.out);
  for (const auto& [path, content] : files) {
    write_file_atomic(path, content);
    if (cfg.format == "json" && read_file(path) != content) {
      err << "error: " << path << " does not read back identically\n";
      return kCheckFailed;
    }
    out << "wrote " << path << "\n";
  }
  return kOk;
}

int cmd_witt(const std::string& expr, const std::string& ring, int level, std::ostream& out, std::ostream&) {
  out << evaluate_witt_expression(expr, FiniteRing::parse(ring), level) << "\n";
  return kOk;
}

int cmd_analyze(const AnalyzeConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.format != "text" && cfg.format != "json") {
    err << "error: format must be text or json\n";
    return kUsage;
  }
  Display D = display_from_json(read_file(cfg.file));
  const FiniteRing& R = *D.ring();
  const bool perfect = R.is_field() && R.is_perfect();

  const bool nilpotent = is_nilpotent(D);
  const mpz_class aut = aut_order(D);
  std::optional<NewtonPolygon> np;
  std::string newton_note, dual_note;
  std::optional<Display> dual_display;
  std::optional<WMatrix> dual_class;
  if (perfect) {
    auto Mod = from_display(D);
    try {
      np = newton_polygon(Mod);
    } catch (const InsufficientLevel& e) {
      newton_note = e.what();
    }
    dual_display = to_display(dual(Mod));
    try {
      ModuliInstance di(D.ring(), D.level(), D.h(), D.h() - D.d(), cfg.budget);
      dual_class = orbit_minimum(di, dual_display->matrix());
    } catch (const GuardExceeded&) {
      dual_note = "class representative skipped (budget)";
    }
  } else {
    newton_note = "omitted: base ring is not a perfect field";
    dual_note = "omitted: base ring is not a perfect field";
  }

  auto slopes_text = [&] {
    std::string s = "[";
    for (std::size_t i = 0; i < np->slopes.size(); ++i) s += (i ? "," : "") + format_slope(np->slopes[i]);
    return s + "]";
  };

  if (cfg.format == "json") {
    std::string j = "{\"schema\":\"analysis/v1\",\"ring\":\"" + R.name() + "\",\"n\":" + std::to_string(D.level()) +
                    ",\"h\":" + std::to_string(D.h()) + ",\"d\":" + std::to_string(D.d()) +
                    ",\"nilpotent\":" + (nilpotent ? "true" : "false") + ",\"slopes\":" + (np ? newton_to_json(*np) : "null") +
                    ",\"dual_class\":" + (dual_class ? "\"" + format_matrix(D.W(), *dual_class) + "\"" : "null") +
                    ",\"aut_order\":\"" + aut.get_str() + "\"}";
    out << j << "\n";
    return kOk;
  }
  out << "ring=" << R.name() << " n=" << D.level() << " h=" << D.h() << "\n";
  out << "d=" << D.d() << "\n";
  out << "nilpotent=" << (nilpotent ? "true" : "false") << "\n";
  if (np)
    out << "slopes=" << slopes_text() << "\n";
  else
    out << "slopes: " << newton_note << "\n";
  if (dual_class)
    out << "dual_class=" << format_matrix(D.W(), *dual_class) << " (d=" << D.h() - D.d() << ")\n";
  else if (dual_display)
    out << "dual_display=" << format_matrix(D.W(), dual_display->matrix()) << " (" << dual_note << ")\n";
  else
    out << "dual_class: " << dual_note << "\n";
  out << "aut_order=" << aut << "\n";
  return kOk;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Truncated displays, Witt vectors and Dieudonne modules over finite rings", "tdisp"};
  // -h is taken by the rank option of classify.
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);

  std::string expr, witt_ring = "GF(2)";
  int witt_level = 3;
  auto* witt = app.add_subcommand("witt", "evaluate a Witt vector expression");
  witt->add_option("expr", expr, "expression, e.g. \"w[1,0] + w[1,0]\"")->required();
  witt->add_option("--ring", witt_ring, "base ring")->capture_default_str();
  witt->add_option("--n", witt_level, "level for expressions without a literal")->capture_default_str()->check(CLI::PositiveNumber);

  ClassifyConfig cc;
  int d_opt = -1;
  auto* classify = app.add_subcommand("classify", "enumerate isomorphism classes of truncated displays over F_q");
  classify->add_option("--ring", cc.ring, "finite field, e.g. GF(2^2); default GF(p)");
  classify->add_option("--p", cc.p, "prime when --ring is absent")->capture_default_str();
  classify->add_option("--n", cc.n, "level")->required()->check(CLI::PositiveNumber);
  classify->add_option("--h", cc.h, "rank")->required()->check(CLI::PositiveNumber);
  classify->add_option("--d", d_opt, "type (all types when absent)");
  classify->add_option("--format", cc.format, "json or csv")->capture_default_str()->check(CLI::IsMember({"json", "csv"}));
  classify->add_option("--out", cc.out, "output directory")->capture_default_str();
  classify->add_option("--seed", cc.seed, "seed of the action verification sample")->capture_default_str();
  classify->add_option("--workers", cc.workers, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  classify->add_option("--budget", cc.budget, "group-action evaluation budget")->capture_default_str()->check(CLI::PositiveNumber);

  AnalyzeConfig ac;
  auto* analyze = app.add_subcommand("analyze", "report invariants of a display file");
  analyze->add_option("file", ac.file, "display JSON")->required();
  analyze->add_option("--format", ac.format, "text or json")->capture_default_str()->check(CLI::IsMember({"text", "json"}));
  analyze->add_option("--budget", ac.budget, "budget for the dual class search")->capture_default_str()->check(CLI::PositiveNumber);

  std::string profile = "quick";
  std::uint64_t st_seed = 20240601;
  std::string st_scratch;
  auto* selftest = app.add_subcommand("selftest", "run the acceptance grid");
  selftest->add_option("--profile", profile, "quick (p = 2) or full")->capture_default_str()->check(CLI::IsMember({"quick", "full"}));
  selftest->add_option("--seed", st_seed, "seed of the randomized suites")->capture_default_str();
  selftest->add_option("--out", st_scratch, "scratch directory for the determinism check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*witt) return cmd_witt(expr, witt_ring, witt_level, out, err);
    if (*classify) {
      if (d_opt >= 0) cc.d = d_opt;
      return cmd_classify(cc, out, err);
    }
    if (*analyze) return cmd_analyze(ac, out, err);
    if (*selftest) return cmd_selftest(profile == "full" ? Profile::full : Profile::quick, st_seed, st_scratch, out);
  } catch (const GuardExceeded& e) {
    err << "guard exceeded: " << e.what() << "\n";
    return kGuard;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const VerificationFailure& e) {
    err << "verification failure: " << e.what() << "\n";
    return kCheckFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kCheckFailed;
  }
  return kUsage;
}

}  // namespace tdisp::cli
