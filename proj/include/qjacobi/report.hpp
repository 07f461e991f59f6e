#pragma once

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace qjacobi {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Pass/fail list produced by the verification operations.
struct Report {
  std::string title;
  std::vector<CheckResult> checks;

  void add(std::string name, bool pass, std::string detail = {}) {
    checks.push_back({std::move(name), pass, std::move(detail)});
  }
  bool all_pass() const {
    for (const auto &c : checks)
      if (!c.pass)
        return false;
    return true;
  }
  const CheckResult *find(const std::string &name) const {
    for (const auto &c : checks)
      if (c.name == name)
        return &c;
    return nullptr;
  }
  std::string to_text() const {
    std::string s = title + "\n";
    for (const auto &c : checks)
      s += std::string(c.pass ? "  PASS " : "  FAIL ") + c.name + (c.detail.empty() ? "" : ": " + c.detail) + "\n";
    return s;
  }
  nlohmann::json to_json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto &c : checks)
      arr.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    return {{"title", title}, {"pass", all_pass()}, {"checks", arr}};
  }
};

} // namespace qjacobi
