#pragma once

#include "qjacobi/hseries.hpp"

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace qjacobi {

/// Source alphabet {A, B} of the associator coefficients.
AlphabetPtr ab_alphabet();
/// Target alphabet {C, D, Z, Zinv} of the alpha map, with Z * Zinv = 1.
AlphabetPtr cdz_alphabet();

/// alpha: A^{n1} B^{m1} ... A^{nj} B^{mj} -> C^{n1} Z^-1 D^{m1} Z ... C^{nj} Z^-1 D^{mj} Z,
/// extended linearly.  Runs are maximal; a leading B-run has n1 = 0 and a
/// trailing A-run has mj = 0 (whose Z^-1 Z then cancels).
NCPoly alpha(const NCPoly &p);
/// alpha on a single word, before linear extension.
Word alpha_word(const Word &w);

/// Degree-k coefficients E_k of the associator series, homogeneous in A, B.
struct EkTable {
  std::string id;                            // "builtin" or the source path
  std::vector<std::string> constants;        // declared formal constants
  std::map<int, NCPoly> entries;             // k -> E_k over {A, B}
  std::map<int, std::string> notes;          // optional per-entry notes from the file

  /// E_k, or the zero polynomial when k has no entry.
  NCPoly entry_or_zero(int k) const;
  /// Explicit note for entry k, falling back to the table id.
  std::string provenance(int k) const;
  int max_degree() const { return entries.empty() ? 1 : entries.rbegin()->first; }
};

/// The table holding only E_2 = (1/24)(AB - BA).
EkTable builtin_table();

class TableError : public Error {
public:
  using Error::Error;
};

struct TableDiagnostics {
  bool ok = true;
  std::vector<std::string> errors;
  std::vector<int> covered;  // degrees with an entry
  std::vector<int> missing;  // degrees in [2, max] without an entry (treated as zero)

  std::string to_text() const;
};

/// Checks degrees (k >= 2), alphabet and homogeneity of every entry.
TableDiagnostics validate_table(const EkTable &t);

/// Parses the JSON table format; throws TableError on parse or validation failure.
EkTable table_from_json_text(std::string_view text, std::string id);
EkTable load_table(const std::filesystem::path &path);
/// Canonical JSON text (2-space indent, trailing newline).
std::string table_to_json_text(const EkTable &t);

/// alpha(E_k) with Z, Zinv, C, D replaced by the given images.  Z and Zinv
/// must be mutually inverse modulo their common order.
PolySeries make_Gk(const EkTable &table, int k, const PolySeries &z_image, const PolySeries &zinv_image,
                   const NCPoly &c_image, const NCPoly &d_image);

/// F_k = -(psi * G_k).
PolySeries make_Fk(const PolySeries &psi_approx, const PolySeries &gk);

} // namespace qjacobi
