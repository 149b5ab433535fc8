#include <iostream>
#include <string>
#include <vector>

#include "qags/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return qags::cli::run(args, std::cout, std::cerr);
}
