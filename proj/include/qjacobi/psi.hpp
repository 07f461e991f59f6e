#pragma once

#include "qjacobi/deformation.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qjacobi {

/// Alphabet {O12, O23} of the transported two-site Casimirs.
AlphabetPtr omega_alphabet();

/// Psi and Psi^-1 modulo h^order as series in O12, O23.
struct PsiPair {
  PolySeries psi;
  PolySeries psi_inv;
  int order = 0;
  std::string table_id;
  std::vector<std::string> notices; // e.g. degrees with no table entry
};

/// Runs the induction n = 2..N: Psi mod h^n is assembled from
///   Psi     = 1 + sum_{k=2}^{n-1} F_k h^k,   F_k = -Psi * G_k,
///   Psi^-1  = 1 + sum_{k=2}^{n-1} G_k h^k,
/// where G_k = alpha(E_k) with Z -> Psi mod h^{n-2}, Zinv -> Psi^-1 mod h^{n-2},
/// C -> O12, D -> O23.  Missing E_k count as zero and are reported in notices.
PsiPair compute_psi(const EkTable &table, int order);

struct InverseCheck {
  bool consistent = true;
  std::optional<int> first_bad_degree;
  std::string detail;
};

/// Compares psi_inv against ring inversion of psi, and checks that both
/// products with psi are 1, coefficient by coefficient.
InverseCheck check_inverse_consistency(const PsiPair &pair);

/// Canonical text: "Psi:" block then "Psi^-1:" block, each in series text form.
std::string psi_to_text(const PsiPair &pair);
nlohmann::json psi_to_json(const PsiPair &pair);

} // namespace qjacobi
