#pragma once

#include <map>
#include <string>

namespace mf {

struct EstimateReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  std::map<std::string, double> constants;
  bool pass = false;
  std::map<std::string, std::string> context;

  static bool holds(double lhs, double rhs) { return lhs <= rhs * (1.0 + 1e-8); }
  EstimateReport& settle() {
    pass = holds(lhs, rhs);
    return *this;
  }
};

}  // namespace mf
