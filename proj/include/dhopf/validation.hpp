#pragma once

#include <string>
#include <vector>

namespace dhopf {

struct Violation {
  std::string code;     // machine-readable, e.g. "boundary-edge"
  std::string simplex;  // e.g. "edge (3,7)", "face 12", "triple (0,1,2)"
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool passed() const { return violations.empty(); }
  void add(std::string code, std::string simplex, std::string message) {
    violations.push_back({std::move(code), std::move(simplex), std::move(message)});
  }
  bool has(const std::string& code) const {
    for (const auto& v : violations)
      if (v.code == code) return true;
    return false;
  }
};

}  // namespace dhopf
