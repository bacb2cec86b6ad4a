// Acceptance binary for ctest: `capcurv_acceptance [fast|full]`, default full.

#include "capcurv/harness/acceptance.hpp"

#include <iostream>

int main(int argc, char** argv) {
  const std::string suite = argc > 1 ? argv[1] : "full";
  return capcurv::harness::verify_command(suite, 1, std::cout, std::cerr);
}
