#include <iostream>

#include "noether/cli/cli.hpp"

int main(int argc, char** argv) {
  return noether::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
