// Acceptance runner: executes the verification battery and prints one
// PASS/FAIL line per check.  Exit 0 only if every check passes.
//
// Flags (test harness use):
//   --quadrature-weight-scale=X   fault injection; X != 1 must fail check 1
//   --only=N                      run just check number N

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <iostream>
#include <string>

#include "ritzpen/acceptance.hpp"

int main(int argc, char** argv) {
  ritzpen::AcceptanceOptions opts;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    const std::string scale_prefix = "--quadrature-weight-scale=";
    const std::string only_prefix = "--only=";
    if (arg.rfind(scale_prefix, 0) == 0) {
      opts.quadrature_weight_scale = std::atof(arg.c_str() + scale_prefix.size());
    } else if (arg.rfind(only_prefix, 0) == 0) {
      opts.only = std::atoi(arg.c_str() + only_prefix.size());
    } else {
      std::fprintf(stderr, "unknown argument: %s\n", arg.c_str());
      return 2;
    }
  }

  const auto results = ritzpen::run_acceptance_checks(opts);
  if (results.empty()) {
    std::fprintf(stderr, "no matching checks\n");
    return 2;
  }
  ritzpen::print_acceptance_report(results, std::cout);
  return ritzpen::acceptance_exit_code(results);
}
