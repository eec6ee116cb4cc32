#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "commands.hpp"
#include "expr.hpp"
#include "tdisp/error.hpp"
#include "tdisp/io.hpp"

using namespace tdisp;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "tdisp");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() / ("tdisp_cli_" + tag + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("witt expressions") {
  auto F2 = FiniteRing::parse("GF(2)");
  CHECK(cli::evaluate_witt_expression("w[1,0] + w[1,0]", F2, 3) == "w[0,1]");
  CHECK(cli::evaluate_witt_expression("f1(v(w[1,1]))", F2, 3) == "w[1,1]");
  CHECK(cli::evaluate_witt_expression("teich(1) * teich(1)", F2, 3) == "w[1,0,0]");
  CHECK(cli::evaluate_witt_expression("2 * w[1,0,0] - 2", F2, 3) == "w[0,0,0]");
  CHECK(cli::evaluate_witt_expression("-(1)", F2, 2) == "w[1,1]");
  CHECK_THROWS_AS(cli::evaluate_witt_expression("w[1,0] + w[1]", F2, 3), PreconditionError);
  CHECK_THROWS_AS(cli::evaluate_witt_expression("w[1,0", F2, 3), ParseError);
  CHECK_THROWS_AS(cli::evaluate_witt_expression("f1(w[1,0])", F2, 3), PreconditionError);
}

TEST_CASE("witt subcommand exit codes") {
  auto ok = run({"witt", "w[1,0] + w[1,0]", "--ring", "GF(2)"});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("w[0,1]") != std::string::npos);
  CHECK(run({"witt", "w[1,0] + w[1]"}).code == 2);
  CHECK(run({"witt", "w[1,0"}).code == 2);
  CHECK(run({"nonsense"}).code == 2);
}

TEST_CASE("classify writes tables and reports the mass") {
  const auto dir = scratch("classify");
  auto r = run({"classify", "--p", "2", "--n", "1", "--h", "2", "--d", "1", "--out", dir.string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("3/2") != std::string::npos);
  cli::ClassifyConfig cfg;
  cfg.p = 2;
  cfg.n = 1;
  cfg.h = 2;
  cfg.d = 1;
  cfg.out = dir.string();
  for (const auto& f : cli::classify_outputs(cfg)) {
    CHECK(std::filesystem::exists(f));
    CHECK(classtable_from_json(read_file(f)).classes.size() == 2);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("classify beyond the budget exits with the guard code and writes nothing") {
  const auto dir = scratch("guard");
  auto r = run({"classify", "--p", "2", "--n", "3", "--h", "6", "--out", dir.string()});
  CHECK(r.code == 3);
  CHECK(std::filesystem::is_empty(dir));
  std::filesystem::remove_all(dir);
}

TEST_CASE("analyze reports the unit invariants") {
  const auto dir = scratch("analyze");
  auto F2 = FiniteRing::parse("GF(2)");
  const std::string mult = (dir / "mult.json").string(), etale = (dir / "etale.json").string();
  write_file_atomic(mult, display_to_json(Display::mult_unit(2, F2)));
  write_file_atomic(etale, display_to_json(Display::etale_unit(2, F2)));
  auto m = run({"analyze", mult});
  CHECK(m.code == 0);
  CHECK(m.out.find("nilpotent=true") != std::string::npos);
  CHECK(m.out.find("slopes=[1]") != std::string::npos);
  auto e = run({"analyze", etale});
  CHECK(e.code == 0);
  CHECK(e.out.find("nilpotent=false") != std::string::npos);
  CHECK(e.out.find("slopes=[0]") != std::string::npos);
  CHECK(run({"analyze", (dir / "missing.json").string()}).code == 2);
  std::filesystem::remove_all(dir);
}
