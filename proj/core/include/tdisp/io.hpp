#pragma once

#include <string>

#include "tdisp/dieudonne.hpp"
#include "tdisp/moduli.hpp"
#include "tdisp/newton.hpp"

namespace tdisp {

// JSON documents carry a versioned "schema" field. Matrices are row lists
// of Witt literals "w[a0,...,a(n-1)]"; field elements of GF(p^r) are
// written "(c0,...,c(r-1))".

/// {"schema":"display/v1","ring","n","h","d","matrix"}
std::string display_to_json(const Display& D);
/// Throws ParseError on malformed input, PreconditionError on invalid data.
Display display_from_json(const std::string& text);

/// {"schema":"dieudonne/v1","field","n","h","F_matrix","V_matrix"}
std::string module_to_json(const DieudonneModule& Mod);
DieudonneModule module_from_json(const std::string& text);

/// [["slope", multiplicity], ...]
std::string newton_to_json(const NewtonPolygon& np);
/// "[[w[..],..],..]"
std::string format_matrix(const WittRing& W, const WMatrix& m);

/// {"schema":"classtable/v1", field, p, q, n, h, d, x_count, g_count,
/// mass_lhs, mass_rhs, classes:[{rep_matrix, orbit_size, aut_order, d,
/// nilpotent, slopes (null when the level is insufficient), dual_rep}]}
std::string classtable_to_json(const ClassTable& t);
/// Columns: rep_matrix, orbit_size, aut_order, d, nilpotent, slopes, dual_rep.
std::string classtable_to_csv(const ClassTable& t);
/// Reads back the JSON form; orbit_of is left empty.
ClassTable classtable_from_json(const std::string& text);

std::string read_file(const std::string& path);
/// Writes to a temporary file next to path and renames it over path.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace tdisp
