#include <iostream>
#include <string>
#include <vector>

#include "hexatm/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return hexatm::cli::run(args, std::cout, std::cerr);
}
