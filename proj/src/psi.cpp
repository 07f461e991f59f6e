#include "qjacobi/psi.hpp"

#include <sstream>

namespace qjacobi {

AlphabetPtr omega_alphabet() {
  static const AlphabetPtr a = make_alphabet({"O12", "O23"});
  return a;
}

PsiPair compute_psi(const EkTable &table, int order) {
  if (order < 2)
    throw DomainError("compute_psi: order must be at least 2, got " + std::to_string(order));
  auto diag = validate_table(table);
  if (!diag.ok)
    throw TableError("malformed table '" + table.id + "': " + diag.errors.front());

  PsiPair out{PolySeries::one(NCPoly(omega_alphabet()), order), PolySeries::one(NCPoly(omega_alphabet()), order),
              order, table.id, {}};
  for (int k = 2; k < order; ++k)
    if (!table.entries.count(k))
      out.notices.push_back("no E_" + std::to_string(k) + " in table '" + table.id + "'; using E_" +
                            std::to_string(k) + " = 0");

  const NCPoly one = NCPoly::one(omega_alphabet());
  const NCPoly o12 = NCPoly::letter(omega_alphabet(), "O12");
  const NCPoly o23 = NCPoly::letter(omega_alphabet(), "O23");

  // by_order[m] holds (Psi mod h^m, Psi^-1 mod h^m); both are 1 mod h^2.
  std::vector<std::pair<PolySeries, PolySeries>> by_order;
  by_order.reserve(static_cast<std::size_t>(order) + 1);
  by_order.emplace_back(PolySeries::one(one, 1), PolySeries::one(one, 1)); // unused slot 0
  by_order.emplace_back(PolySeries::one(one, 1), PolySeries::one(one, 1));
  by_order.emplace_back(PolySeries::one(one, 2), PolySeries::one(one, 2));

  for (int n = 3; n <= order; ++n) {
    const auto [z, zinv] = by_order[static_cast<std::size_t>(n - 2)];
    PolySeries psi = PolySeries::one(one, n);
    PolySeries psi_inv = PolySeries::one(one, n);
    for (int k = 2; k < n; ++k) {
      if (!table.entries.count(k))
        continue;
      // G_k and F_k are needed modulo h^{n-k}; the Z images carry h^{n-2} >= h^{n-k}.
      PolySeries gk = make_Gk(table, k, z, zinv, o12, o23).truncate(n - k);
      PolySeries fk = make_Fk(z.truncate(n - k), gk);
      psi += fk.shift(k);
      psi_inv += gk.shift(k);
    }
    by_order.emplace_back(std::move(psi), std::move(psi_inv));
  }
  out.psi = by_order[static_cast<std::size_t>(order)].first;
  out.psi_inv = by_order[static_cast<std::size_t>(order)].second;
  return out;
}

InverseCheck check_inverse_consistency(const PsiPair &pair) {
  InverseCheck r;
  PolySeries inverted = series_invert(pair.psi);
  PolySeries left = pair.psi * pair.psi_inv;
  PolySeries right = pair.psi_inv * pair.psi;
  const int n = std::min(pair.psi.order(), pair.psi_inv.order());
  for (int k = 0; k < n; ++k) {
    const NCPoly expected = k == 0 ? pair.psi[0].identity_like() : pair.psi[0].zero_like();
    std::string what;
    if (!(inverted[k] == pair.psi_inv[k]))
      what = "psi_inv differs from the ring inverse of psi";
    else if (!(left[k] == expected))
      what = "psi * psi_inv is not 1";
    else if (!(right[k] == expected))
      what = "psi_inv * psi is not 1";
    if (!what.empty()) {
      r.consistent = false;
      r.first_bad_degree = k;
      r.detail = what + " at h^" + std::to_string(k) + ": expected " + inverted[k].to_string() + ", got " +
                 pair.psi_inv[k].to_string();
      return r;
    }
  }
  r.detail = "consistent modulo h^" + std::to_string(n);
  return r;
}

std::string psi_to_text(const PsiPair &pair) {
  std::ostringstream os;
  os << "Psi:\n" << pair.psi.to_text() << "Psi^-1:\n" << pair.psi_inv.to_text();
  return os.str();
}

nlohmann::json psi_to_json(const PsiPair &pair) {
  return {{"order", pair.order},
          {"table", pair.table_id},
          {"psi", series_to_json(pair.psi)},
          {"psi_inv", series_to_json(pair.psi_inv)},
          {"notices", pair.notices}};
}

} // namespace qjacobi
