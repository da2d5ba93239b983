#include <iostream>
#include <string>
#include <vector>

#include "ftlab/cli/commands.hpp"

int main(int argc, char** argv) {
  return ftlab::cli::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
