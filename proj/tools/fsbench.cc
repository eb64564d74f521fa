#include <iostream>
#include <string>
#include <vector>

#include "fsbench/cli.h"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return fsbench::run_cli(args, std::cout, std::cerr);
}
