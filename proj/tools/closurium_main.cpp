#include <iostream>
#include <vector>

#include "closurium/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return closurium::cli::run(std::move(args), std::cout, std::cerr);
}
