#pragma once

// Shared tokenizer for the canonical `coeff*factor*word` sum grammar.

#include <string>
#include <string_view>
#include <vector>

namespace qjacobi::detail {

struct SignedTerm {
  bool negative = false;
  std::vector<std::string> factors; // split on '*', whitespace removed
};

/// Splits `a*b - c + d*e` into signed terms.  Throws ParseError on empty
/// terms or dangling operators.
std::vector<SignedTerm> split_terms(std::string_view text);

/// Splits `name^e` into name and exponent (1 when absent).
std::pair<std::string, int> split_power(const std::string &factor);

bool is_number(const std::string &factor);

} // namespace qjacobi::detail
