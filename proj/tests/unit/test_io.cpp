#include <doctest.h>

#include <filesystem>
#include <random>

#include "selftest.hpp"
#include "tdisp/dieudonne.hpp"
#include "tdisp/error.hpp"
#include "tdisp/io.hpp"

using namespace tdisp;

TEST_CASE("display documents round trip") {
  std::mt19937_64 rng(73);
  for (const char* name : {"GF(2)", "GF(3^2)", "GF(2)[x]/x^2"}) {
    const Display D = cli::random_display(rng, FiniteRing::parse(name), 2, 2, 1);
    CHECK(display_from_json(display_to_json(D)) == D);
  }
}

TEST_CASE("module documents round trip") {
  std::mt19937_64 rng(79);
  const DieudonneModule Mod = from_display(cli::random_display(rng, FiniteRing::parse("GF(2^2)"), 2, 3, 1));
  CHECK(module_from_json(module_to_json(Mod)) == Mod);
}

TEST_CASE("malformed documents raise ParseError") {
  const std::string head = "{\"schema\":\"display/v1\",\"ring\":\"GF(2)\",\"n\":1,\"h\":1,\"d\":0";
  CHECK_THROWS_AS(display_from_json("{"), ParseError);
  CHECK_THROWS_AS(display_from_json("{\"schema\":\"display/v2\"}"), ParseError);
  CHECK_THROWS_AS(display_from_json(head + "}"), ParseError);
  CHECK_THROWS_AS(display_from_json(head + ",\"matrix\":[[1]]}"), ParseError);
  // Well-formed but singular.
  CHECK_THROWS_AS(display_from_json(head + ",\"matrix\":[[\"w[0]\"]]}"), PreconditionError);
}

TEST_CASE("class tables round trip through JSON") {
  const ModuliInstance inst(FiniteRing::parse("GF(2)"), 2, 2, 1);
  const ClassTable t = enumerate_orbits(inst);
  const std::string json = classtable_to_json(t);
  const ClassTable back = classtable_from_json(json);
  CHECK(classtable_to_json(back) == json);
  CHECK(back.classes.size() == t.classes.size());
  CHECK(back.x_count == t.x_count);
  const std::string csv = classtable_to_csv(t);
  CHECK(csv.rfind("rep_matrix,orbit_size,aut_order,d,nilpotent,slopes,dual_rep\n", 0) == 0);
  CHECK(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) == t.classes.size() + 1);
}

TEST_CASE("atomic writes leave no temporary file behind") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("tdisp_io_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string path = (dir / "out.json").string();
  write_file_atomic(path, "abc");
  write_file_atomic(path, "defg");
  CHECK(read_file(path) == "defg");
  CHECK_FALSE(fs::exists(path + ".tmp"));
  fs::remove_all(dir);
  CHECK_THROWS_AS(read_file(path), ParseError);
}
