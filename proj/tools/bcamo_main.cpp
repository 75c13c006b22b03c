#include <iostream>

#include "bcamo/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return bcamo::cli::run(args, std::cout, std::cerr);
}
