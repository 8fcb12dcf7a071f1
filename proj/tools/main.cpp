#include <iostream>
#include <string>
#include <vector>

#include "xrsim/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  return xrsim::cli::run(args, std::cout, std::cerr);
}
