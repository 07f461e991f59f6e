#include "qjacobi/deformation.hpp"

#include <fstream>
#include <sstream>

namespace qjacobi {

AlphabetPtr ab_alphabet() {
  static const AlphabetPtr a = make_alphabet({"A", "B"});
  return a;
}

AlphabetPtr cdz_alphabet() {
  static const AlphabetPtr a = make_alphabet({"C", "D", "Z", "Zinv"}, {{"Z", "Zinv"}});
  return a;
}

namespace {
constexpr Letter kA = 0, kB = 1;
constexpr Letter kC = 0, kD = 1, kZ = 2, kZinv = 3;
} // namespace

Word alpha_word(const Word &w) {
  std::vector<Letter> raw;
  std::size_t i = 0;
  const std::size_t n = w.size();
  while (i < n) {
    std::size_t a_run = 0, b_run = 0;
    while (i < n && w[i] == kA) {
      ++a_run;
      ++i;
    }
    while (i < n && w[i] == kB) {
      ++b_run;
      ++i;
    }
    raw.insert(raw.end(), a_run, kC);
    raw.push_back(kZinv);
    raw.insert(raw.end(), b_run, kD);
    raw.push_back(kZ);
  }
  return Word::reduce(raw, *cdz_alphabet());
}

NCPoly alpha(const NCPoly &p) {
  if (!(p.alphabet() == *ab_alphabet()))
    throw MismatchError("alpha: input must be a polynomial over exactly {A, B}, got " + p.describe_kind());
  NCPoly out(cdz_alphabet());
  for (const auto &[w, c] : p.terms())
    out.add_term(alpha_word(w), c);
  return out;
}

// ---------------------------------------------------------------------------

NCPoly EkTable::entry_or_zero(int k) const {
  auto it = entries.find(k);
  return it == entries.end() ? NCPoly(ab_alphabet()) : it->second;
}

std::string EkTable::provenance(int k) const {
  auto it = notes.find(k);
  return it == notes.end() ? id : it->second;
}

EkTable builtin_table() {
  EkTable t;
  t.id = "builtin";
  auto a = NCPoly::letter(ab_alphabet(), "A");
  auto b = NCPoly::letter(ab_alphabet(), "B");
  t.entries.emplace(2, commutator(a, b) * Scalar(Rational(1, 24)));
  return t;
}

std::string TableDiagnostics::to_text() const {
  std::ostringstream os;
  os << (ok ? "ok" : "invalid") << '\n';
  for (const auto &e : errors)
    os << "error: " << e << '\n';
  auto list = [&os](const std::vector<int> &ks) {
    if (ks.empty())
      os << " none";
    for (int k : ks)
      os << ' ' << k;
    os << '\n';
  };
  os << "covered degrees:";
  list(covered);
  os << "missing degrees (treated as zero):";
  list(missing);
  return os.str();
}

TableDiagnostics validate_table(const EkTable &t) {
  TableDiagnostics d;
  std::set<std::string> declared(t.constants.begin(), t.constants.end());
  for (const auto &[k, e] : t.entries) {
    d.covered.push_back(k);
    if (k < 2)
      d.errors.push_back("degree " + std::to_string(k) + " is below 2");
    if (!(e.alphabet() == *ab_alphabet()))
      d.errors.push_back("entry " + std::to_string(k) + " is not over {A, B}");
    for (const auto &[w, c] : e.terms()) {
      if (static_cast<int>(w.size()) != k) {
        d.errors.push_back("entry " + std::to_string(k) + " is not homogeneous: word " + w.to_string(e.alphabet()) +
                           " has length " + std::to_string(w.size()));
        break;
      }
    }
    for (const auto &[w, c] : e.terms())
      for (const auto &name : c.constants())
        if (!declared.count(name))
          d.errors.push_back("entry " + std::to_string(k) + " uses undeclared constant '" + name + "'");
  }
  for (int k = 2; k <= t.max_degree(); ++k)
    if (!t.entries.count(k))
      d.missing.push_back(k);
  d.ok = d.errors.empty();
  return d;
}

EkTable table_from_json_text(std::string_view text, std::string id) {
  EkTable t;
  t.id = std::move(id);
  try {
    auto j = nlohmann::json::parse(text);
    if (j.contains("constants"))
      t.constants = j.at("constants").get<std::vector<std::string>>();
    for (const auto &name : t.constants)
      if (!is_identifier(name))
        throw TableError("invalid constant name '" + name + "'");
    std::set<std::string> declared(t.constants.begin(), t.constants.end());
    for (const auto &[key, value] : j.at("entries").items()) {
      int k = 0;
      std::size_t used = 0;
      try {
        k = std::stoi(key, &used);
      } catch (const std::exception &) {
        used = 0;
      }
      if (used != key.size() || used == 0)
        throw TableError("entry key '" + key + "' is not an integer degree");
      t.entries.emplace(k, NCPoly::parse(value.get<std::string>(), ab_alphabet(), &declared));
    }
    if (j.contains("notes"))
      for (const auto &[key, value] : j.at("notes").items())
        t.notes.emplace(std::stoi(key), value.get<std::string>());
  } catch (const nlohmann::json::exception &e) {
    throw TableError(std::string("table JSON: ") + e.what());
  } catch (const ParseError &e) {
    throw TableError(std::string("table entry: ") + e.what());
  }
  auto diag = validate_table(t);
  if (!diag.ok)
    throw TableError(diag.errors.front());
  return t;
}

EkTable load_table(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw TableError("cannot open table file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return table_from_json_text(ss.str(), path.string());
}

std::string table_to_json_text(const EkTable &t) {
  nlohmann::ordered_json j;
  j["constants"] = t.constants;
  nlohmann::ordered_json entries = nlohmann::ordered_json::object();
  for (const auto &[k, e] : t.entries)
    entries[std::to_string(k)] = e.to_string();
  j["entries"] = std::move(entries);
  if (!t.notes.empty()) {
    nlohmann::ordered_json notes = nlohmann::ordered_json::object();
    for (const auto &[k, n] : t.notes)
      notes[std::to_string(k)] = n;
    j["notes"] = std::move(notes);
  }
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------

PolySeries make_Gk(const EkTable &table, int k, const PolySeries &z_image, const PolySeries &zinv_image,
                   const NCPoly &c_image, const NCPoly &d_image) {
  auto it = table.entries.find(k);
  if (it == table.entries.end())
    throw TableError("table '" + table.id + "' has no entry for degree " + std::to_string(k));
  if (!(z_image * zinv_image).is_one() || !(zinv_image * z_image).is_one())
    throw DomainError("make_Gk: Z and Zinv images are not mutually inverse modulo h^" +
                      std::to_string(std::min(z_image.order(), zinv_image.order())));
  std::map<std::string, SubstImage> images{
      {"C", c_image}, {"D", d_image}, {"Z", z_image}, {"Zinv", zinv_image}};
  return substitute_series(alpha(it->second), images);
}

PolySeries make_Fk(const PolySeries &psi_approx, const PolySeries &gk) { return -(psi_approx * gk); }

} // namespace qjacobi
