#include "tdisp/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tdisp/error.hpp"

namespace tdisp {

using Json = nlohmann::ordered_json;

namespace {

Json matrix_json(const WittRing& W, const WMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows; ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols; ++j) row.push_back(W.format(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

WMatrix matrix_from_json(const WittRing& W, const Json& j, std::size_t rows, std::size_t cols, const char* what) {
  if (!j.is_array() || j.size() != rows) throw ParseError(std::string(what) + ": expected " + std::to_string(rows) + " rows");
  WMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols)
      throw ParseError(std::string(what) + ": row " + std::to_string(i) + " needs " + std::to_string(cols) + " entries");
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[i][c].is_string()) throw ParseError(std::string(what) + ": entries are Witt literal strings");
      m(i, c) = W.parse(j[i][c].get<std::string>());
    }
  }
  return m;
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

const Json& member(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  return j[key];
}

template <class T>
T field_of(const Json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ParseError(std::string("field '") + key + "' has the wrong type");
  }
}

void expect_schema(const Json& j, const std::string& schema) {
  if (!j.is_object()) throw ParseError("expected a JSON object");
  auto s = field_of<std::string>(j, "schema");
  if (s != schema) throw ParseError("schema '" + s + "', expected '" + schema + "'");
}

Json newton_json(const NewtonPolygon& np) {
  Json a = Json::array();
  for (const auto& [slope, mult] : np.segments()) a.push_back(Json::array({format_slope(slope), mult}));
  return a;
}

std::string slopes_cell(const std::optional<NewtonPolygon>& np) {
  if (!np) return "";
  std::string s;
  for (const auto& x : np->slopes) s += (s.empty() ? "" : " ") + format_slope(x);
  return s;
}

}  // namespace

std::string format_matrix(const WittRing& W, const WMatrix& m) {
  std::string s = "[";
  for (std::size_t i = 0; i < m.rows; ++i) {
    s += i ? ",[" : "[";
    for (std::size_t j = 0; j < m.cols; ++j) s += (j ? "," : "") + W.format(m(i, j));
    s += "]";
  }
  return s + "]";
}

std::string display_to_json(const Display& D) {
  Json j;
  j["schema"] = "display/v1";
  j["ring"] = D.ring()->name();
  j["n"] = D.level();
  j["h"] = D.h();
  j["d"] = D.d();
  j["matrix"] = matrix_json(D.W(), D.matrix());
  return j.dump(2) + "\n";
}

Display display_from_json(const std::string& text) {
  Json j = parse_json(text);
  expect_schema(j, "display/v1");
  auto R = FiniteRing::parse(field_of<std::string>(j, "ring"));
  const int n = field_of<int>(j, "n"), h = field_of<int>(j, "h"), d = field_of<int>(j, "d");
  if (n < 1 || h < 0) throw ParseError("level must be positive and rank nonnegative");
  auto W = WittRing::get(R, n);
  return Display::from_matrix(R, n, d, matrix_from_json(*W, member(j, "matrix"), h, h, "matrix"));
}

std::string module_to_json(const DieudonneModule& Mod) {
  Json j;
  j["schema"] = "dieudonne/v1";
  j["field"] = Mod.field()->name();
  j["n"] = Mod.level();
  j["h"] = Mod.h();
  j["F_matrix"] = matrix_json(Mod.W(), Mod.F_matrix());
  j["V_matrix"] = matrix_json(Mod.W(), Mod.V_matrix());
  return j.dump(2) + "\n";
}

DieudonneModule module_from_json(const std::string& text) {
  Json j = parse_json(text);
  expect_schema(j, "dieudonne/v1");
  auto k = FiniteRing::parse(field_of<std::string>(j, "field"));
  const int n = field_of<int>(j, "n"), h = field_of<int>(j, "h");
  if (n < 1 || h < 0) throw ParseError("level must be positive and rank nonnegative");
  auto W = WittRing::get(k, n);
  return DieudonneModule::make(k, n, matrix_from_json(*W, member(j, "F_matrix"), h, h, "F_matrix"),
                               matrix_from_json(*W, member(j, "V_matrix"), h, h, "V_matrix"));
}

std::string newton_to_json(const NewtonPolygon& np) { return newton_json(np).dump(); }

std::string classtable_to_json(const ClassTable& t) {
  auto W = WittRing::get(FiniteRing::parse(t.field), t.n);
  const MassCheck m = mass_check(t);
  Json j;
  j["schema"] = "classtable/v1";
  j["field"] = t.field;
  j["p"] = t.p;
  j["q"] = t.q;
  j["n"] = t.n;
  j["h"] = t.h;
  j["d"] = t.d;
  j["x_count"] = t.x_count.get_str();
  j["g_count"] = t.g_count.get_str();
  j["mass_lhs"] = m.lhs.get_str();
  j["mass_rhs"] = m.rhs.get_str();
  Json cls = Json::array();
  for (const auto& e : t.classes) {
    Json c;
    c["rep_matrix"] = matrix_json(*W, e.rep);
    c["orbit_size"] = e.orbit_size;
    c["aut_order"] = e.aut_order;
    c["d"] = e.d;
    c["nilpotent"] = e.nilpotent;
    c["slopes"] = e.slopes ? newton_json(*e.slopes) : Json(nullptr);
    c["dual_rep"] = matrix_json(*W, e.dual_rep);
    cls.push_back(std::move(c));
  }
  j["classes"] = std::move(cls);
  return j.dump(2) + "\n";
}

std::string classtable_to_csv(const ClassTable& t) {
  auto W = WittRing::get(FiniteRing::parse(t.field), t.n);
  // Matrices contain commas, so those cells are quoted.
  std::string s = "rep_matrix,orbit_size,aut_order,d,nilpotent,slopes,dual_rep\n";
  for (const auto& e : t.classes) {
    s += "\"" + format_matrix(*W, e.rep) + "\"," + std::to_string(e.orbit_size) + "," + std::to_string(e.aut_order) +
         "," + std::to_string(e.d) + "," + (e.nilpotent ? "true" : "false") + "," + slopes_cell(e.slopes) + ",\"" +
         format_matrix(*W, e.dual_rep) + "\"\n";
  }
  return s;
}

ClassTable classtable_from_json(const std::string& text) {
  Json j = parse_json(text);
  expect_schema(j, "classtable/v1");
  ClassTable t;
  t.field = field_of<std::string>(j, "field");
  t.p = field_of<int>(j, "p");
  t.q = field_of<std::uint64_t>(j, "q");
  t.n = field_of<int>(j, "n");
  t.h = field_of<int>(j, "h");
  t.d = field_of<int>(j, "d");
  try {
    t.x_count = mpz_class(field_of<std::string>(j, "x_count"));
    t.g_count = mpz_class(field_of<std::string>(j, "g_count"));
  } catch (const std::invalid_argument&) {
    throw ParseError("x_count and g_count must be decimal strings");
  }
  auto W = WittRing::get(FiniteRing::parse(t.field), t.n);
  if (!j.contains("classes") || !j["classes"].is_array()) throw ParseError("missing class list");
  for (const auto& c : j["classes"]) {
    ClassEntry e;
    e.rep = matrix_from_json(*W, member(c, "rep_matrix"), t.h, t.h, "rep_matrix");
    e.dual_rep = matrix_from_json(*W, member(c, "dual_rep"), t.h, t.h, "dual_rep");
    e.orbit_size = field_of<std::uint64_t>(c, "orbit_size");
    e.aut_order = field_of<std::uint64_t>(c, "aut_order");
    e.d = field_of<int>(c, "d");
    e.nilpotent = field_of<bool>(c, "nilpotent");
    if (!member(c, "slopes").is_null()) {
      NewtonPolygon np;
      for (const auto& seg : member(c, "slopes")) {
        if (!seg.is_array() || seg.size() != 2) throw ParseError("slopes are [slope, multiplicity] pairs");
        mpq_class s;
        int mult = 0;
        try {
          s = mpq_class(seg[0].get<std::string>());
          mult = seg[1].get<int>();
        } catch (const std::exception&) {
          throw ParseError("bad slope entry");
        }
        s.canonicalize();
        for (int k = 0; k < mult; ++k) np.slopes.push_back(s);
      }
      e.slopes = std::move(np);
    }
    t.classes.push_back(std::move(e));
  }
  return t;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw Error("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error("cannot rename onto '" + path + "': " + ec.message());
  }
}

}  // namespace tdisp
