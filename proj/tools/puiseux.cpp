#include <iostream>
#include <string>
#include <vector>

#include "puiseux/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  auto inv = puiseux::cli::invoke(args);
  std::cout << inv.out;
  std::cerr << inv.err;
  return inv.exit_code;
}
