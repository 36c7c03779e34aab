#include <iostream>
#include <string>
#include <vector>

#include "oscn/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return oscn::cli::run(args, std::cout, std::cerr);
}
