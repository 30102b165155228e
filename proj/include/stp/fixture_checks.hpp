#pragma once

#include <string>
#include <vector>

namespace stp {

// Outcome of one named fixture check: every compared quantity as a line
// "ok|MISMATCH <what> expected <x> got <y>".
struct CheckResult {
  std::string name;
  bool passed = true;
  std::vector<std::string> lines;
};

// superbowl, superbowl-replan, superbowl-static, example1, example3,
// example3-naive-replan, rider-vcg, optimal-replan, dynamic-vcg, myopic-superbowl.
std::vector<std::string> fixture_check_names();

// Throws ModelError for an unknown name.
CheckResult run_fixture_check(const std::string& name);

}  // namespace stp
