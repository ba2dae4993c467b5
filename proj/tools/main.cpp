#include <iostream>
#include <string>
#include <vector>

#include "panelscope/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return panelscope::cli::run(args, std::cout, std::cerr);
}
