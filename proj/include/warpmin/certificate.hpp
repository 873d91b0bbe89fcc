#pragma once

#include <string>
#include <vector>

namespace warpmin {

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct Certificate {
  std::string name;
  bool pass = true;
  std::vector<Check> checks;

  void add(std::string check, bool ok, std::string detail = {}) {
    pass = pass && ok;
    checks.push_back({std::move(check), ok, std::move(detail)});
  }
};

}  // namespace warpmin
