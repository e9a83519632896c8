#include <iostream>
#include <string>
#include <vector>

#include "intgc/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return intgc::cli::run(args, std::cin, std::cout, std::cerr);
}
