#include "qjacobi/hseries.hpp"

#include <cctype>

namespace qjacobi {

PolySeries parse_series_text(std::string_view text, AlphabetPtr alphabet) {
  std::vector<NCPoly> coeffs;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    if (line.rfind("h^", 0) != 0)
      throw ParseError("series line must start with 'h^': '" + line + "'");
    auto colon = line.find(':');
    if (colon == std::string::npos)
      throw ParseError("series line missing ':': '" + line + "'");
    int k = 0;
    try {
      k = std::stoi(line.substr(2, colon - 2));
    } catch (const std::exception &) {
      throw ParseError("bad power in series line '" + line + "'");
    }
    if (k != static_cast<int>(coeffs.size()))
      throw ParseError("series powers must be consecutive from 0");
    coeffs.push_back(NCPoly::parse(line.substr(colon + 1), alphabet));
  }
  if (coeffs.empty())
    throw ParseError("empty series text");
  return PolySeries(std::move(coeffs));
}

nlohmann::json alphabet_to_json(const Alphabet &a) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto &[z, zinv] : a.inverse_pairs())
    pairs.push_back({z, zinv});
  return {{"letters", a.letters()}, {"inverse_pairs", pairs}};
}

AlphabetPtr alphabet_from_json(const nlohmann::json &j) {
  try {
    std::vector<std::pair<std::string, std::string>> pairs;
    for (const auto &p : j.at("inverse_pairs"))
      pairs.emplace_back(p.at(0).get<std::string>(), p.at(1).get<std::string>());
    return make_alphabet(j.at("letters").get<std::vector<std::string>>(), std::move(pairs));
  } catch (const nlohmann::json::exception &e) {
    throw ParseError(std::string("alphabet JSON: ") + e.what());
  }
}

nlohmann::json series_to_json(const PolySeries &s) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto &c : s.coeffs())
    coeffs.push_back(c.to_string());
  return {{"order", s.order()}, {"alphabet", alphabet_to_json(s[0].alphabet())}, {"coeffs", coeffs}};
}

PolySeries series_from_json(const nlohmann::json &j) {
  try {
    auto alphabet = alphabet_from_json(j.at("alphabet"));
    std::vector<NCPoly> coeffs;
    for (const auto &c : j.at("coeffs"))
      coeffs.push_back(NCPoly::parse(c.get<std::string>(), alphabet));
    if (static_cast<int>(coeffs.size()) != j.at("order").get<int>())
      throw ParseError("series JSON: order does not match coefficient count");
    return PolySeries(std::move(coeffs));
  } catch (const nlohmann::json::exception &e) {
    throw ParseError(std::string("series JSON: ") + e.what());
  }
}

nlohmann::json series_to_json(const MatrixSeries &s) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto &c : s.coeffs())
    coeffs.push_back(c.to_json());
  return {{"order", s.order()}, {"rows", s[0].rows()}, {"cols", s[0].cols()}, {"coeffs", coeffs}};
}

std::string matrix_series_to_text(const MatrixSeries &s) {
  std::ostringstream os;
  for (int k = 0; k < s.order(); ++k)
    os << "h^" << k << ":\n" << s[k].to_text();
  return os.str();
}

std::variant<NCPoly, PolySeries> substitute(const NCPoly &p, const std::map<std::string, SubstImage> &images) {
  if (images.empty())
    throw DomainError("substitute: missing images");
  int order = -1;
  const NCPoly *ref = nullptr;
  for (const auto &[name, img] : images) {
    const NCPoly &lead = std::holds_alternative<NCPoly>(img) ? std::get<NCPoly>(img) : std::get<PolySeries>(img)[0];
    if (!ref)
      ref = &lead;
    else if (!lead.compatible_with(*ref))
      throw MismatchError("substitute: images live in different algebras (letter '" + name + "')");
    if (const auto *s = std::get_if<PolySeries>(&img))
      order = order < 0 ? s->order() : std::min(order, s->order());
  }
  if (order < 0) {
    std::map<std::string, NCPoly> polys;
    for (const auto &[name, img] : images)
      polys.emplace(name, std::get<NCPoly>(img));
    return substitute_generic<NCPoly>(p, polys, ref->identity_like());
  }
  std::map<std::string, PolySeries> lifted;
  for (const auto &[name, img] : images) {
    if (const auto *poly = std::get_if<NCPoly>(&img))
      lifted.emplace(name, PolySeries::constant(*poly, order));
    else
      lifted.emplace(name, std::get<PolySeries>(img).truncate(order));
  }
  return substitute_generic<PolySeries>(p, lifted, PolySeries::one(*ref, order));
}

PolySeries substitute_series(const NCPoly &p, const std::map<std::string, SubstImage> &images) {
  auto r = substitute(p, images);
  if (auto *s = std::get_if<PolySeries>(&r))
    return std::move(*s);
  throw DomainError("substitute_series: no series image supplied");
}

} // namespace qjacobi
