#pragma once

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

namespace stbc {

struct CheckResult {
  std::string name;
  bool passed = true;
  std::string witness;  // empty when passed
};

// Pass/fail certification log shared by the verification routines.
class Report {
 public:
  void add(std::string name, bool passed, std::string witness = {}) {
    checks_.push_back({std::move(name), passed, std::move(witness)});
  }

  void merge(const Report& other, const std::string& prefix = {}) {
    for (const auto& c : other.checks_) {
      checks_.push_back({prefix + c.name, c.passed, c.witness});
    }
  }

  bool passed() const {
    return std::all_of(checks_.begin(), checks_.end(),
                       [](const CheckResult& c) { return c.passed; });
  }

  const std::vector<CheckResult>& checks() const { return checks_; }

  const CheckResult* find(const std::string& name) const {
    for (const auto& c : checks_) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }

  std::string to_text() const {
    std::ostringstream os;
    for (const auto& c : checks_) {
      os << (c.passed ? "PASS " : "FAIL ") << c.name;
      if (!c.witness.empty()) os << "  [" << c.witness << "]";
      os << '\n';
    }
    os << (passed() ? "OVERALL PASS" : "OVERALL FAIL") << '\n';
    return os.str();
  }

 private:
  std::vector<CheckResult> checks_;
};

}  // namespace stbc
