#include <iostream>

#include "ntnsim/app.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ntnsim::run_cli(args, std::cout, std::cerr);
}
