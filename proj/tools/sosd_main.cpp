#include <iostream>
#include <string>
#include <vector>

#include "sosd/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return sosd::cli::run_command(args, std::cout, std::cerr);
}
