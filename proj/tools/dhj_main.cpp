#include <iostream>
#include <string>
#include <vector>

#include "dhj/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return dhj::run_cli(args, std::cout, std::cerr);
}
