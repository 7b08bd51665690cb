// Acceptance criteria at their stated tolerances. Prints one line per
// criterion and the individual checks; the exit code is the number of failed
// criteria. Pass --quick for the square-only subset.

#include <cstring>
#include <iostream>

#include "steklov/acceptance.hpp"

int main(int argc, char** argv) {
  steklov::AcceptanceOptions options;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--quick") == 0) options.quick = true;
  }
  options.log = &std::cerr;
  steklov::AcceptanceSuite suite(options);
  int failed = 0;
  for (int c : suite.criteria()) {
    std::vector<steklov::CheckResult> results;
    try {
      results = suite.run_criterion(c);
    } catch (const std::exception& e) {
      std::cout << "FAIL criterion " << c << " (" << steklov::criterion_title(c) << "): " << e.what() << '\n';
      ++failed;
      continue;
    }
    const bool pass = steklov::criterion_passed(results, c);
    failed += pass ? 0 : 1;
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << c << " (" << steklov::criterion_title(c)
              << ")\n";
    for (const auto& r : results) {
      std::cout << "    " << (r.pass ? "ok  " : "FAIL") << ' ' << r.name << ": " << r.observed
                << " (expected " << r.expected << ")";
      if (!r.note.empty()) std::cout << "; " << r.note;
      std::cout << '\n';
    }
    std::cout.flush();
  }
  return failed;
}
