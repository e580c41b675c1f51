// SPDX-License-Identifier: Apache-2.0
// Prints one PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <cstdlib>
#include <iostream>
#include <string>

#include "uno/harness.hpp"

int main(int argc, char** argv) {
  int first = 1, last = 12;
  if (argc == 2) first = last = std::atoi(argv[1]);
  int failed = 0;
  for (int id = first; id <= last; ++id) {
    const auto r = uno::harness::run_criterion(id);
    std::cout << uno::harness::format_line(r) << std::endl;
    failed += r.passed ? 0 : 1;
  }
  std::cout << (failed ? "FAILED " + std::to_string(failed) + " criteria" : std::string("ALL CRITERIA PASSED"))
            << std::endl;
  return failed ? 1 : 0;
}
